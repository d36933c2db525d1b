use std::fmt;

use rayon::prelude::*;

use super::{HypersurfaceSpec, KollarError};
use crate::exactfield::{FieldElement, GfElem, Monomial, MultiPoly, Substitution};

/// Default cap on enumerated candidate tuples.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A point of projective space over F, scaled so that its first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Vec<FieldElement>);

impl ProjPoint {
    /// Returns `None` for the zero tuple.
    pub fn new(coords: Vec<FieldElement>) -> Option<ProjPoint> {
        let lead = coords.iter().find(|c| !c.is_zero())?.clone();
        let coords = coords.iter().map(|c| c.checked_div(&lead).expect("nonzero lead")).collect();
        Some(ProjPoint(coords))
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

/// The points (0 : ... : 0 : c : 1) for c in GF(p).
pub fn obvious_points(h: &HypersurfaceSpec) -> Vec<ProjPoint> {
    let r = h.scalar_ring();
    let field = r.field();
    let mut pts: Vec<ProjPoint> = field
        .elements()
        .filter(|c| field.as_prime_field(*c).is_some())
        .map(|c| {
            let mut coords = vec![FieldElement::zero(r); h.n()];
            coords.push(FieldElement::constant(r, c));
            coords.push(FieldElement::one(r));
            ProjPoint::new(coords).unwrap()
        })
        .collect();
    pts.sort();
    pts
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// q^(coords · #monomials of degree <= d), the size of the raw search space.
pub fn candidate_count(h: &HypersurfaceSpec, d: u32) -> u128 {
    let k = h.scalar_ring().nvars() as u64;
    let monos = binomial(k + u64::from(d), u64::from(d));
    let q = u128::from(h.scalar_ring().field().order());
    let exp = monos * (h.n() as u128 + 2);
    let mut total: u128 = 1;
    for _ in 0..exp {
        total = total.saturating_mul(q);
    }
    total
}

fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_exponents(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, d, &mut out);
    out.sort();
    out
}

/// All points of X whose homogeneous coordinates are polynomials in the
/// generators of F of degree <= `d` with constant coefficients.
///
/// Tuples are enumerated with the first nonzero coordinate's leading
/// coefficient equal to 1; shards run in parallel and the merged result is
/// sorted and deduplicated.
pub fn bounded_point_search(h: &HypersurfaceSpec, d: u32, budget: u64) -> Result<Vec<ProjPoint>, KollarError> {
    let needed = candidate_count(h, d);
    if needed > u128::from(budget) {
        return Err(KollarError::BudgetExceeded { needed, budget });
    }
    let fr = h.scalar_ring().clone();
    let field = fr.field().clone();
    let elems: Vec<GfElem> = field.elements().collect();
    let q = elems.len();
    let monos = monomials_up_to(fr.nvars(), d);
    let c = monos.len();
    let ncoords = h.n() + 2;
    let polys: Vec<MultiPoly> = (0..q.pow(c as u32))
        .map(|mut code| {
            MultiPoly::from_terms(
                &fr,
                monos.iter().map(|m| {
                    let e = elems[code % q];
                    code /= q;
                    (m.exponents().to_vec(), e)
                }),
            )
        })
        .collect();
    let normalized: Vec<usize> = (0..polys.len())
        .filter(|&i| !polys[i].is_zero() && polys[i].leading_coeff() == field.one())
        .collect();
    let joint = h.ring().clone();
    let lifted: Vec<FieldElement> = polys.iter().map(|f| super::lift(&f.clone().into(), &joint)).collect();
    let equation = h.defining().clone();
    let coord_vars = h.coordinates();

    let shards: Vec<(usize, usize)> =
        (0..ncoords).flat_map(|lead| normalized.iter().map(move |&poly| (lead, poly))).collect();
    let mut found: Vec<ProjPoint> = shards
        .par_iter()
        .flat_map_iter(|&(lead, poly)| {
            let rest = ncoords - lead - 1;
            let mut hits = Vec::new();
            let mut counter = vec![0usize; rest];
            let base: Vec<FieldElement> = (0..joint.nvars()).map(|v| FieldElement::var(&joint, v)).collect();
            loop {
                let mut images = base.clone();
                let zero = FieldElement::zero(&joint);
                for (k, &v) in coord_vars.iter().enumerate() {
                    images[v] = match k.cmp(&lead) {
                        std::cmp::Ordering::Less => zero.clone(),
                        std::cmp::Ordering::Equal => lifted[poly].clone(),
                        std::cmp::Ordering::Greater => lifted[counter[k - lead - 1]].clone(),
                    };
                }
                if on_hypersurface(&equation, &images) {
                    let coords: Vec<FieldElement> = (0..ncoords)
                        .map(|k| match k.cmp(&lead) {
                            std::cmp::Ordering::Less => FieldElement::zero(&fr),
                            std::cmp::Ordering::Equal => polys[poly].clone().into(),
                            std::cmp::Ordering::Greater => polys[counter[k - lead - 1]].clone().into(),
                        })
                        .collect();
                    hits.push(ProjPoint::new(coords).expect("lead coordinate is nonzero"));
                }
                if !advance(&mut counter, polys.len()) {
                    break;
                }
            }
            hits
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

fn on_hypersurface(equation: &MultiPoly, images: &[FieldElement]) -> bool {
    Substitution::new(images)
        .and_then(|s| s.apply_poly_exact(equation))
        .is_ok_and(|v| v.is_zero())
}

fn advance(counter: &mut [usize], radix: usize) -> bool {
    for digit in counter.iter_mut() {
        *digit += 1;
        if *digit < radix {
            return true;
        }
        *digit = 0;
    }
    false
}

/// Dense univariate polynomial over GF(p), lowest degree first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl UniPoly {
    pub fn new(p: u32, coeffs: &[i64]) -> UniPoly {
        let m = i64::from(p);
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x.rem_euclid(m) as u32).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly { p, coeffs: c }
    }

    pub fn zero(p: u32) -> UniPoly {
        UniPoly { p, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    fn trimmed(p: u32, mut coeffs: Vec<u32>) -> UniPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { p, coeffs }
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        UniPoly::trimmed(self.p, c)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::trimmed(self.p, self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] += u64::from(a) * u64::from(b);
            }
        }
        UniPoly::trimmed(self.p, c.into_iter().map(|x| (x % u64::from(self.p)) as u32).collect())
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::new(self.p, &[1]), |acc, _| acc.mul(self))
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        UniPoly { p: self.p, coeffs: c }
    }
}

/// f^p - f g^(p-1) + sum_i t^(u_i) h_i^p in GF(p)[t]: the equation of X after
/// sending t_i to t^(u_i).
pub fn laurent_substitution_check(u: &[usize], f: &UniPoly, g: &UniPoly, h: &[UniPoly]) -> UniPoly {
    assert_eq!(u.len(), h.len(), "one exponent per x-coordinate");
    let p = f.p;
    let mut r = f.pow(p).add(&f.mul(&g.pow(p - 1)).neg());
    for (&ui, hi) in u.iter().zip(h) {
        r = r.add(&hi.pow(p).shift(ui));
    }
    r
}

/// Exhaustive search over f, g, h of degree <= `degree_bound` for
/// f^p - f g^(p-1) + t h^p = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSearch {
    pub triples_checked: u64,
    pub solutions: u64,
    /// Solutions with h != 0; expected to be empty.
    pub solutions_with_h: Vec<(UniPoly, UniPoly, UniPoly)>,
}

pub fn laurent_exhaustive(p: u32, degree_bound: usize) -> LaurentSearch {
    let len = degree_bound + 1;
    let count = (p as usize).pow(len as u32);
    let all: Vec<UniPoly> = (0..count)
        .map(|mut code| {
            let c: Vec<i64> = (0..len)
                .map(|_| {
                    let d = code % p as usize;
                    code /= p as usize;
                    d as i64
                })
                .collect();
            UniPoly::new(p, &c)
        })
        .collect();
    let results: Vec<(u64, Vec<(UniPoly, UniPoly, UniPoly)>)> = all
        .par_iter()
        .map(|f| {
            let mut sols = 0;
            let mut bad = Vec::new();
            for g in &all {
                for h in &all {
                    if laurent_substitution_check(&[1], f, g, std::slice::from_ref(h)).is_zero() {
                        sols += 1;
                        if !h.is_zero() {
                            bad.push((f.clone(), g.clone(), h.clone()));
                        }
                    }
                }
            }
            (sols, bad)
        })
        .collect();
    let total = (count as u64).pow(3);
    let solutions = results.iter().map(|r| r.0).sum();
    let solutions_with_h = results.into_iter().flat_map(|r| r.1).collect();
    LaurentSearch { triples_checked: total, solutions, solutions_with_h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Gf, Ring};
    use std::sync::Arc;
    use crate::hyperkollar::kollar_hypersurface;

    fn spec(p: u32, n: usize) -> HypersurfaceSpec {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let r: Arc<Ring> = Ring::from_names(Gf::prime(p).unwrap(), names).unwrap();
        let t: Vec<FieldElement> = (0..n).map(|i| FieldElement::var(&r, i)).collect();
        kollar_hypersurface(p, n, &t).unwrap()
    }

    #[test]
    fn obvious_points_lie_on_x() {
        for p in [3, 5, 7] {
            let h = spec(p, 2);
            let pts = obvious_points(&h);
            assert_eq!(pts.len(), p as usize);
            for pt in &pts {
                let mut subs: Vec<(usize, FieldElement)> = Vec::new();
                for (k, v) in h.coordinates().into_iter().enumerate() {
                    subs.push((v, super::super::lift(&pt.coords()[k], h.ring())));
                }
                assert!(h.equation().substitute_some(&subs).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn constant_coordinates_p3() {
        let h = spec(3, 1);
        let pts = bounded_point_search(&h, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(pts, obvious_points(&h));
    }

    #[test]
    fn budget_is_enforced() {
        let h = spec(3, 1);
        assert!(matches!(bounded_point_search(&h, 2, 100), Err(KollarError::BudgetExceeded { needed: 19683, .. })));
    }

    #[test]
    fn canonical_points() {
        let r = Ring::new(Gf::prime(3).unwrap(), &["t"]).unwrap();
        let t = FieldElement::var(&r, 0);
        let a = ProjPoint::new(vec![FieldElement::zero(&r), t.clone(), t.clone()]).unwrap();
        let b = ProjPoint::new(vec![FieldElement::zero(&r), FieldElement::one(&r), FieldElement::one(&r)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(0 : 1 : 1)");
        assert!(ProjPoint::new(vec![FieldElement::zero(&r)]).is_none());
    }

    #[test]
    fn laurent_residuals() {
        let f0 = UniPoly::zero(3);
        let one = UniPoly::new(3, &[1]);
        assert!(laurent_substitution_check(&[1], &f0, &one, &[UniPoly::zero(3)]).is_zero());
        assert!(laurent_substitution_check(&[1], &one, &one, &[UniPoly::zero(3)]).is_zero());
        let t = UniPoly::new(3, &[0, 1]);
        // f = 0, g = 1, h = 1: residual t.
        assert_eq!(laurent_substitution_check(&[1], &f0, &one, &[one.clone()]), t);
    }

    #[test]
    fn laurent_small_exhaustive() {
        let s = laurent_exhaustive(3, 1);
        assert_eq!(s.triples_checked, 729);
        assert!(s.solutions_with_h.is_empty());
        assert!(s.solutions >= 3);
    }
}
