//! Sparse multivariate polynomials over GF(p^m).
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with respect to the ring's declared variable order
//! (the first declared variable is the largest). The leading term is the
//! last entry of the map. No stored coefficient is ever zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gf::{Gf, GfElem};
use super::FieldError;

/// A polynomial ring GF(p^m)[v_1, ..., v_k] with named variables.
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    field: Arc<Gf>,
    vars: Vec<String>,
}

impl Ring {
    pub fn new(field: Arc<Gf>, vars: &[&str]) -> Result<Arc<Ring>, FieldError> {
        Self::from_names(field, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(field: Arc<Gf>, vars: Vec<String>) -> Result<Arc<Ring>, FieldError> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(FieldError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    pub fn field(&self) -> &Arc<Gf> {
        &self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Result<usize, FieldError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| FieldError::UnknownVariable(name.to_string()))
    }

    /// Same field, extra variables appended after the existing ones.
    pub fn extended(&self, extra: &[&str]) -> Result<Arc<Ring>, FieldError> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.to_string()));
        Ring::from_names(self.field.clone(), vars)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Monomial {
        Monomial(exps.into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = vec![0; nvars];
        m[i] = e;
        Monomial(m.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in some [`Ring`].
#[derive(Clone)]
pub struct MultiPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, GfElem>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    /// Compares term lists from the leading term down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::print_poly(self))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::print_poly(self))
    }
}

impl MultiPoly {
    pub fn zero(ring: &Arc<Ring>) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> MultiPoly {
        Self::constant(ring, GfElem::ONE)
    }

    pub fn constant(ring: &Arc<Ring>, c: GfElem) -> MultiPoly {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> MultiPoly {
        Self::constant(ring, ring.field.from_int(n))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: GfElem) -> MultiPoly {
        debug_assert_eq!(m.0.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> MultiPoly {
        Self::term(ring, Monomial::var(ring.nvars(), i, 1), GfElem::ONE)
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<MultiPoly, FieldError> {
        Ok(Self::var(ring, ring.var_index(name)?))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Vec<u32>, GfElem)>,
    {
        let mut out = MultiPoly::zero(ring);
        for (e, c) in terms {
            out.add_term(Monomial::from_exponents(e), c);
        }
        out
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Gf> {
        &self.ring.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GfElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_coeff() == GfElem::ONE
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_coeff(&self) -> GfElem {
        self.terms.get(&Monomial::one(self.ring.nvars())).copied().unwrap_or(GfElem::ZERO)
    }

    pub fn coeff(&self, m: &Monomial) -> GfElem {
        self.terms.get(m).copied().unwrap_or(GfElem::ZERO)
    }

    /// Total degree; `None` stands for the degree −∞ of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Indices of variables actually occurring.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.involves(v)).collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, GfElem)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn leading_coeff(&self) -> GfElem {
        self.leading_term().map(|(_, c)| c).unwrap_or(GfElem::ZERO)
    }

    fn add_term(&mut self, m: Monomial, c: GfElem) {
        if c.is_zero() {
            return;
        }
        let f = self.ring.field.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials from different rings combined"
        );
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, FieldError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(FieldError::MixedRings);
        }
        Ok(self + other)
    }

    pub fn scale(&self, c: GfElem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let f = &self.ring.field;
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: GfElem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let f = &self.ring.field;
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), f.mul(*a, c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> MultiPoly {
        let mut result = MultiPoly::one(&self.ring);
        if e == 0 {
            return result;
        }
        if self.is_monomial() {
            let (m, c) = self.leading_term().unwrap();
            let exps = m.0.iter().map(|&x| x * e as u32).collect();
            return MultiPoly::term(&self.ring, Monomial(exps), self.ring.field.pow(c, e));
        }
        // Frobenius on the p-part of the exponent: (Σ c m)^p = Σ c^p m^p.
        let p = self.ring.characteristic() as u64;
        let mut base = self.clone();
        while e % p == 0 {
            base = base.frobenius();
            e /= p;
        }
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Termwise p-th power, which equals `self^p` in characteristic p.
    pub fn frobenius(&self) -> MultiPoly {
        let p = self.ring.characteristic();
        let f = &self.ring.field;
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0.iter().map(|&x| x * p).collect()), f.frobenius(*c)))
                .collect(),
        }
    }

    /// Inverse of [`MultiPoly::frobenius`]; `None` if some exponent is not divisible by p.
    pub fn pth_root(&self) -> Option<MultiPoly> {
        let p = self.ring.characteristic();
        let f = &self.ring.field;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0.iter().any(|&x| x % p != 0) {
                return None;
            }
            terms.insert(Monomial(m.0.iter().map(|&x| x / p).collect()), f.pth_root(*c));
        }
        Some(MultiPoly { ring: self.ring.clone(), terms })
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let f = &self.ring.field;
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let coef = f.mul(*c, f.from_int(e as i64));
            if coef.is_zero() {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.terms.insert(Monomial(exps), coef);
        }
        out
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c == GfElem::ONE => self.clone(),
            Some((_, c)) => self.scale(self.ring.field.inv(c).unwrap()),
        }
    }

    /// Homogeneous of degree `d` in the given variables (zero counts as homogeneous).
    pub fn is_homogeneous_in(&self, vars: &[usize], d: u32) -> bool {
        self.terms.keys().all(|m| vars.iter().map(|&v| m.0[v]).sum::<u32>() == d)
    }

    /// Coefficients with respect to `var`: `self = Σ_k out[k] · var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(&self.ring); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            out[k].terms.insert(Monomial(exps), *c);
        }
        out
    }

    pub fn from_coefficients_in(ring: &Arc<Ring>, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut exps = m.0.clone();
                exps[var] += k as u32;
                out.add_term(Monomial(exps), *a);
            }
        }
        out
    }

    /// Sets variable `var` to the constant `value`.
    pub fn specialize(&self, var: usize, value: GfElem) -> MultiPoly {
        let f = &self.ring.field;
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps[var];
            exps[var] = 0;
            out.add_term(Monomial(exps), f.mul(*c, f.pow(value, e as u64)));
        }
        out
    }

    /// Evaluates at a point of GF(p^m)^k.
    pub fn eval(&self, point: &[GfElem]) -> GfElem {
        let f = &self.ring.field;
        self.terms.iter().fold(GfElem::ZERO, |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(*c, |acc, (&e, &x)| f.mul(acc, f.pow(x, e as u64)));
            f.add(acc, v)
        })
    }

    /// Moves the polynomial into `target` sending variable `i` to `var_map[i]`.
    pub fn relabel(&self, target: &Arc<Ring>, var_map: &[usize]) -> MultiPoly {
        assert_eq!(var_map.len(), self.ring.nvars());
        assert!(Arc::ptr_eq(&self.ring.field, &target.field) || *self.ring.field == *target.field);
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[var_map[i]] += e;
            }
            out.add_term(Monomial(exps.into_boxed_slice()), *c);
        }
        out
    }

    /// Moves into `target`, matching variables by name.
    pub fn relabel_by_name(&self, target: &Arc<Ring>) -> Result<MultiPoly, FieldError> {
        let map = self
            .ring
            .vars
            .iter()
            .map(|n| target.var_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.relabel(target, &map))
    }

    /// Monomial gcd of all terms (the largest monomial dividing the polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it.next().cloned().unwrap_or_else(|| Monomial::one(self.ring.nvars()));
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Division with remainder by an ordered list of divisors (grlex).
    /// Returns the quotients and the remainder.
    pub fn div_rem_list(&self, divisors: &[MultiPoly]) -> (Vec<MultiPoly>, MultiPoly) {
        let f = self.ring.field.clone();
        let mut quotients = vec![MultiPoly::zero(&self.ring); divisors.len()];
        let mut rem = MultiPoly::zero(&self.ring);
        let mut current = self.clone();
        let leads: Vec<_> = divisors
            .iter()
            .map(|d| {
                self.check_ring(d);
                d.leading_term().map(|(m, c)| (m.clone(), f.inv(c).unwrap()))
            })
            .collect();
        while let Some((m, c)) = current.terms.iter().next_back().map(|(m, c)| (m.clone(), *c)) {
            let hit = leads.iter().enumerate().find_map(|(i, l)| match l {
                Some((lm, inv)) if lm.divides(&m) => Some((i, lm.quotient_of(&m), f.mul(c, *inv))),
                _ => None,
            });
            match hit {
                Some((i, qm, qc)) => {
                    quotients[i].add_term(qm.clone(), qc);
                    current = &current - &divisors[i].mul_monomial(&qm, qc);
                }
                None => {
                    current.terms.remove(&m);
                    rem.terms.insert(m, c);
                }
            }
        }
        (quotients, rem)
    }

    /// `self / divisor` when the division is exact.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() {
            return None;
        }
        if divisor.is_constant() {
            let inv = self.ring.field.inv(divisor.constant_coeff()).unwrap();
            return Some(self.scale(inv));
        }
        let (mut q, r) = self.div_rem_list(std::slice::from_ref(divisor));
        r.is_zero().then(|| q.pop().unwrap())
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), *c);
        }
        big
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        let f = self.ring.field.clone();
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), f.neg(*c));
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let f = &self.ring.field;
        let mut out = MultiPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), f.mul(*c1, *c2));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let f = &self.ring.field;
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, other: MultiPoly) -> MultiPoly {
                (&self).$method(&other)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, other: &MultiPoly) -> MultiPoly {
                (&self).$method(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, vars: &[&str]) -> Arc<Ring> {
        Ring::new(Gf::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(vec![0, 2]);
        let b = Monomial::from_exponents(vec![1, 1]);
        let c = Monomial::from_exponents(vec![2, 0]);
        let d = Monomial::from_exponents(vec![0, 3]);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn frobenius_matches_repeated_multiplication() {
        let r = ring(3, &["t1", "t2"]);
        let s = MultiPoly::var(&r, 0) + MultiPoly::var(&r, 1);
        let cube = &(&s * &s) * &s;
        assert_eq!(cube, s.pow(3));
        assert_eq!(cube.num_terms(), 2);
    }

    #[test]
    fn derivative_in_char_p_kills_pth_powers() {
        let r = ring(5, &["t"]);
        let t = MultiPoly::var(&r, 0);
        assert!(t.pow(5).derivative(0).is_zero());
        assert_eq!(t.pow(3).derivative(0), t.pow(2).scale(r.field().from_int(3)));
    }

    #[test]
    fn division_by_list() {
        let r = ring(3, &["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let f = &(&x * &x) * &y + &y * &y;
        let g = &x * &y - MultiPoly::one(&r);
        let (q, rem) = f.div_rem_list(&[g.clone()]);
        assert_eq!(&q[0] * &g + rem, f);
        let h = &f * &g;
        assert_eq!(h.exact_div(&g), Some(f.clone()));
        assert!(!g.divides(&f));
    }

    #[test]
    fn coefficient_views_round_trip() {
        let r = ring(2, &["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let f = &(&x * &x) * &y + &y + x.clone();
        let cs = f.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(MultiPoly::from_coefficients_in(&r, 0, &cs), f);
    }
}
