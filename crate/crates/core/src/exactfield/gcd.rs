//! Multivariate gcd over GF(p^m).
//!
//! Recursive content / primitive-part decomposition with respect to the
//! highest-indexed variable present, and a subresultant polynomial remainder
//! sequence for the primitive parts. When no other variable is present the
//! base case is the monic Euclidean algorithm.

use super::poly::MultiPoly;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn multipoly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_rec(a, b).monic()
}

/// Least common multiple, monic.
pub fn multipoly_lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(a.ring());
    }
    let g = gcd_rec(a, b);
    (a * &b.exact_div(&g).expect("gcd divides")).monic()
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.ring());
    }
    if a.is_monomial() || b.is_monomial() {
        let (mono, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let m = mono.leading_term().unwrap().0.gcd(&other.monomial_content());
        return MultiPoly::term(a.ring(), m, mono.field().one());
    }
    if a == b {
        return a.clone();
    }
    let v = (0..a.ring().nvars())
        .rev()
        .find(|&v| a.involves(v) || b.involves(v))
        .expect("non-constant polynomial involves a variable");
    if !a.involves(v) {
        return gcd_rec(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let c = gcd_rec(&ca, &cb);
    let g = primitive_gcd(&pa, &pb, v);
    &c * &g
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &MultiPoly, v: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // Cheapest first: small coefficients shrink the running gcd quickly.
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = MultiPoly::zero(f.ring());
    for c in coeffs {
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return MultiPoly::one(f.ring());
        }
    }
    g
}

/// Primitive part with respect to `v`.
pub fn primitive_part_in(f: &MultiPoly, v: usize) -> MultiPoly {
    if f.is_zero() {
        return f.clone();
    }
    f.exact_div(&content_in(f, v)).expect("content divides")
}

fn lead_in(f: &MultiPoly, v: usize) -> MultiPoly {
    f.coefficients_in(v).pop().expect("nonzero")
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`, in variable `v`.
pub fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v).expect("nonzero divisor");
    let lb = lead_in(b, v);
    let mut r = a.clone();
    let mut steps = a.degree_in(v).map_or(0, |da| (da + 1).saturating_sub(db));
    let ring = a.ring().clone();
    while let Some(dr) = r.degree_in(v).filter(|&d| d >= db && !r.is_zero()) {
        let lr = lead_in(&r, v);
        let shift = MultiPoly::term(
            &ring,
            super::poly::Monomial::var(ring.nvars(), v, dr - db),
            ring.field().one(),
        );
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
        steps = steps.saturating_sub(1);
    }
    if steps > 0 {
        r = &r * &lb.pow(steps as u64);
    }
    r
}

fn primitive_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let others_present = (0..a.ring().nvars()).any(|w| w != v && (a.involves(w) || b.involves(w)));
    if !others_present {
        return univariate_euclid(a, b);
    }
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = MultiPoly::one(a.ring());
    let mut h = MultiPoly::one(a.ring());
    loop {
        let delta = a.degree_in(v).unwrap() - b.degree_in(v).unwrap();
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        if r.degree_in(v) == Some(0) {
            return MultiPoly::one(a.ring());
        }
        a = b;
        let divisor = &g * &h.pow(delta as u64);
        b = r.exact_div(&divisor).expect("subresultant division is exact");
        g = lead_in(&a, v);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u64)
                .exact_div(&h.pow(delta as u64 - 1))
                .expect("subresultant h update is exact")
        };
    }
}

fn univariate_euclid(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (mut a, mut b) = (a.monic(), b.monic());
    while !b.is_zero() {
        let (_, r) = a.div_rem_list(std::slice::from_ref(&b));
        a = b;
        b = r.monic();
    }
    a
}
