//! Finite fields GF(p^m).
//!
//! Elements are packed as integers `0..p^m`: the base-`p` digits of the code
//! are the coefficients (lowest degree first) of the residue class of a
//! polynomial modulo the field's defining polynomial. Multiplication goes
//! through discrete log / antilog tables built once per field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::FieldError;

/// Largest field order we build tables for.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of some [`Gf`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GfElem(pub(crate) u32);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer code of this element.
    pub fn code(self) -> u32 {
        self.0
    }
}

/// The field GF(p^m) with a fixed irreducible defining polynomial.
pub struct Gf {
    p: u32,
    m: u32,
    order: u32,
    /// Monic defining polynomial, coefficients lowest degree first (length m+1).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Gf {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^m` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Gf>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Gf>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// Dense polynomials over GF(p), lowest degree first, used only while
// searching for and validating defining polynomials.
mod dense {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = inv(*b.last().expect("nonzero divisor"), p);
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (c as u64 * bi as u64 % p as u64) as u32;
                r[i + shift] = (r[i + shift] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        rem(&out.into_iter().map(|v| v as u32).collect::<Vec<_>>(), modulus, p)
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Digits of `code` in base p, padded to `len`.
    pub fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(code % p);
            code /= p;
        }
        out
    }
}

/// True iff the monic polynomial `f` (lowest degree first) has no monic
/// factor of degree `1..=deg/2` over GF(p).
pub fn is_irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
    let f = dense::trim(f.to_vec());
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = dense::digits(code, p, d);
            g.push(1);
            if dense::rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lowest irreducible monic polynomial of degree `m` over GF(p), where
/// candidates are ordered by the integer whose base-p digits are the
/// non-leading coefficients.
pub fn lowest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = p.pow(m);
    for code in 0..count {
        let mut f = dense::digits(code, p, m as usize);
        f.push(1);
        if is_irreducible_by_trial_division(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Gf {
    /// Returns the (cached) field GF(p^m).
    pub fn new(p: u32, m: u32) -> Result<Arc<Gf>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::BadExtensionDegree(m));
        }
        let order = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER as u64);
        let Some(order) = order else {
            return Err(FieldError::FieldTooLarge { p, m });
        };
        if let Some(f) = field_cache().lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        let modulus = lowest_irreducible(p, m);
        let field = Arc::new(Self::with_modulus(p, m, order as u32, modulus));
        let mut cache = field_cache().lock().unwrap();
        Ok(cache.entry((p, m)).or_insert(field).clone())
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Arc<Gf>, FieldError> {
        Self::new(p, 1)
    }

    fn with_modulus(p: u32, m: u32, order: u32, modulus: Vec<u32>) -> Gf {
        let len = m as usize;
        let encode = |v: &[u32]| -> u32 {
            v.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        // Find a primitive element by brute force and tabulate its powers.
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; order as usize];
        'candidates: for cand in 2..order {
            let g = dense::trim(dense::digits(cand, p, len));
            let mut cur = vec![1u32];
            let mut seen = vec![false; order as usize];
            for k in 0..order - 1 {
                let mut padded = cur.clone();
                padded.resize(len, 0);
                let c = encode(&padded);
                if seen[c as usize] {
                    continue 'candidates;
                }
                seen[c as usize] = true;
                exp[k as usize] = c;
                log[c as usize] = k;
                cur = dense::mul_mod(&cur, &g, &modulus, p);
            }
            break;
        }
        if order == 2 {
            exp[0] = 1;
            log[1] = 0;
        }
        Gf { p, m, order, modulus, exp, log }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> GfElem {
        GfElem::ZERO
    }

    pub fn one(&self) -> GfElem {
        GfElem::ONE
    }

    /// The residue class of `X`, i.e. a root of the defining polynomial.
    /// For m = 1 this is the root of `X + c`, an element of GF(p).
    pub fn generator(&self) -> GfElem {
        if self.m == 1 {
            GfElem((self.p - self.modulus[0]) % self.p)
        } else {
            GfElem(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients of the element against `1, X, ..., X^(m-1)`.
    pub fn residues(&self, a: GfElem) -> Vec<u32> {
        dense::digits(a.0, self.p, self.m as usize)
    }

    pub fn from_residues(&self, digits: &[u32]) -> GfElem {
        debug_assert!(digits.len() <= self.m as usize);
        GfElem(digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p))
    }

    /// Integer value if the element lies in the prime field.
    pub fn as_prime_field(&self, a: GfElem) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        if self.m == 1 {
            let s = a.0 + b.0;
            return GfElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        GfElem(out)
    }

    pub fn neg(&self, a: GfElem) -> GfElem {
        if self.m == 1 {
            return GfElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        GfElem(out)
    }

    pub fn sub(&self, a: GfElem, b: GfElem) -> GfElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem::ZERO;
        }
        if self.m == 1 {
            return GfElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.order - 1;
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        GfElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.order - 1;
        let k = (n - self.log[a.0 as usize]) % n;
        Some(GfElem(self.exp[k as usize]))
    }

    pub fn pow(&self, a: GfElem, e: u64) -> GfElem {
        if e == 0 {
            return GfElem::ONE;
        }
        if a.0 == 0 {
            return GfElem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        GfElem(self.exp[k as usize])
    }

    /// x ↦ x^p.
    pub fn frobenius(&self, a: GfElem) -> GfElem {
        self.pow(a, self.p as u64)
    }

    /// The unique p-th root, i.e. x^(p^(m-1)).
    pub fn pth_root(&self, a: GfElem) -> GfElem {
        self.pow(a, (self.p as u64).pow(self.m - 1))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: GfElem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(n / num_integer::gcd(n, self.log[a.0 as usize]))
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        (0..self.order).map(GfElem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_irreducibles() {
        assert_eq!(lowest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(lowest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(lowest_irreducible(3, 2), vec![1, 0, 1]);
        assert!(!is_irreducible_by_trial_division(&[1, 0, 1], 2));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Gf::new(4, 1), Err(FieldError::NotPrime(4))));
        assert!(matches!(Gf::new(3, 0), Err(FieldError::BadExtensionDegree(0))));
        assert!(matches!(Gf::new(2, 40), Err(FieldError::FieldTooLarge { .. })));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (2, 3)] {
            let f = Gf::new(p, m).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.frobenius(f.pth_root(a)), a);
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn gf4_generator_is_cube_root_of_unity() {
        let f = Gf::new(2, 2).unwrap();
        let w = f.generator();
        assert_ne!(w, f.one());
        assert_eq!(f.pow(w, 3), f.one());
        // w^2 + w + 1 = 0
        assert_eq!(f.add(f.add(f.mul(w, w), w), f.one()), f.zero());
    }

    #[test]
    fn cached_fields_are_shared() {
        let a = Gf::new(3, 2).unwrap();
        let b = Gf::new(3, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
