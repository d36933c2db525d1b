//! Elements of the fraction field of a [`Ring`].
//!
//! Every value is stored reduced: numerator and denominator are coprime and
//! the denominator is monic in the graded lexicographic order. Zero is `0/1`.
//! Equality is therefore structural.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gcd::{multipoly_gcd, multipoly_lcm};
use super::gf::GfElem;
use super::poly::{same_ring, MultiPoly, Ring};
use super::FieldError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: MultiPoly,
    den: MultiPoly,
}

/// Binary operations accepted by [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(FieldError::MixedRings);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num.cmp(&other.num).then_with(|| self.den.cmp(&other.den))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::print_canonical(self))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::print_canonical(self))
    }
}

impl From<MultiPoly> for FieldElement {
    fn from(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.ring());
        FieldElement { num: p, den }
    }
}

impl FieldElement {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<FieldElement, FieldError> {
        if !same_ring(num.ring(), den.ring()) {
            return Err(FieldError::MixedRings);
        }
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> FieldElement {
        if num.is_zero() {
            return FieldElement { den: MultiPoly::one(num.ring()), num };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = multipoly_gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let lc = den.leading_coeff();
        if lc == GfElem::ONE {
            FieldElement { num, den }
        } else {
            let inv = num.field().inv(lc).unwrap();
            FieldElement { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> FieldElement {
        MultiPoly::zero(ring).into()
    }

    pub fn one(ring: &Arc<Ring>) -> FieldElement {
        MultiPoly::one(ring).into()
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> FieldElement {
        MultiPoly::from_int(ring, n).into()
    }

    pub fn constant(ring: &Arc<Ring>, c: GfElem) -> FieldElement {
        MultiPoly::constant(ring, c).into()
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> FieldElement {
        MultiPoly::var(ring, i).into()
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<FieldElement, FieldError> {
        Ok(MultiPoly::var_named(ring, name)?.into())
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn characteristic(&self) -> u32 {
        self.ring().characteristic()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator, when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Constant value, if this is an element of GF(p^m).
    pub fn as_constant(&self) -> Option<GfElem> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.constant_coeff())
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let lc = self.num.leading_coeff();
        let inv = self.num.field().inv(lc).unwrap();
        Ok(FieldElement { num: self.den.scale(inv), den: self.num.scale(inv) })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        if !same_ring(self.ring(), other.ring()) {
            return Err(FieldError::MixedRings);
        }
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Integer powers; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn scale(&self, c: GfElem) -> FieldElement {
        if c.is_zero() {
            return FieldElement::zero(self.ring());
        }
        FieldElement { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Exact partial derivative by the quotient rule.
    pub fn partial_derivative(&self, var: usize) -> FieldElement {
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return FieldElement::reduce(dn, self.den.clone());
        }
        let dd = self.den.derivative(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        FieldElement::reduce(num, self.den.pow(2))
    }

    pub fn partial_derivative_named(&self, name: &str) -> Result<FieldElement, FieldError> {
        Ok(self.partial_derivative(self.ring().var_index(name)?))
    }

    /// True iff every partial derivative vanishes, which over a perfect
    /// constant field means the element is a p-th power.
    pub fn is_pth_power(&self) -> bool {
        (0..self.ring().nvars()).all(|v| self.partial_derivative(v).is_zero())
    }

    /// The p-th root: root of `num · den^(p-1)`, divided by `den`.
    pub fn pth_root(&self) -> Result<FieldElement, FieldError> {
        let p = self.characteristic() as u64;
        let shifted = &self.num * &self.den.pow(p - 1);
        let root = shifted.pth_root().ok_or(FieldError::NotAPthPower)?;
        Ok(FieldElement::reduce(root, self.den.clone()))
    }

    /// Termwise p-th power (equal to `self.pow(p)`).
    pub fn frobenius(&self) -> FieldElement {
        FieldElement { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    /// Moves into `target`, matching variable names.
    pub fn relabel_by_name(&self, target: &Arc<Ring>) -> Result<FieldElement, FieldError> {
        Ok(FieldElement::reduce(self.num.relabel_by_name(target)?, self.den.relabel_by_name(target)?))
    }

    pub fn relabel(&self, target: &Arc<Ring>, var_map: &[usize]) -> FieldElement {
        FieldElement::reduce(self.num.relabel(target, var_map), self.den.relabel(target, var_map))
    }

    /// Substitutes `images[i]` for variable `i` of this element's ring. All
    /// images must live in one common ring, which becomes the result's ring.
    pub fn substitute(&self, images: &[FieldElement]) -> Result<FieldElement, FieldError> {
        let sub = Substitution::new(images)?;
        sub.apply(self)
    }

    /// Substitutes only the listed variables, keeping the others.
    pub fn substitute_some(&self, subs: &[(usize, FieldElement)]) -> Result<FieldElement, FieldError> {
        let ring = self.ring();
        let mut images: Vec<FieldElement> = (0..ring.nvars()).map(|i| FieldElement::var(ring, i)).collect();
        for (v, img) in subs {
            images[*v] = img.clone();
        }
        self.substitute(&images)
    }
}

/// A ring map given by images of the variables, applied with a common denominator
/// so that only one gcd reduction happens per evaluated element.
pub struct Substitution {
    images: Vec<FieldElement>,
    target: Arc<Ring>,
}

impl Substitution {
    pub fn new(images: &[FieldElement]) -> Result<Substitution, FieldError> {
        let target = images.first().ok_or(FieldError::MixedRings)?.ring().clone();
        if images.iter().any(|i| !same_ring(i.ring(), &target)) {
            return Err(FieldError::MixedRings);
        }
        Ok(Substitution { images: images.to_vec(), target })
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }

    /// Image of a polynomial, as numerator over `Π den_i^(deg_i)`.
    fn apply_poly(&self, f: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let nv = f.ring().nvars();
        assert_eq!(nv, self.images.len(), "substitution arity mismatch");
        let maxdeg: Vec<u32> = (0..nv).map(|v| f.degree_in(v).unwrap_or(0)).collect();
        let mut den = MultiPoly::one(&self.target);
        for v in 0..nv {
            if maxdeg[v] > 0 && !self.images[v].den.is_one() {
                den = &den * &self.images[v].den.pow(maxdeg[v] as u64);
            }
        }
        let mut cache: HashMap<(usize, u32, bool), MultiPoly> = HashMap::new();
        let mut power = |v: usize, e: u32, of_den: bool| -> MultiPoly {
            cache
                .entry((v, e, of_den))
                .or_insert_with(|| {
                    let base = if of_den { &self.images[v].den } else { &self.images[v].num };
                    base.pow(e as u64)
                })
                .clone()
        };
        let mut num = MultiPoly::zero(&self.target);
        for (m, c) in f.terms() {
            let mut t = MultiPoly::constant(&self.target, *c);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &power(v, e, false);
                }
                if maxdeg[v] > e && !self.images[v].den.is_one() {
                    t = &t * &power(v, maxdeg[v] - e, true);
                }
            }
            num = &num + &t;
        }
        (num, den)
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let (nn, nd) = self.apply_poly(&x.num);
        if x.den.is_one() {
            return FieldElement::new(nn, nd);
        }
        let (dn, dd) = self.apply_poly(&x.den);
        if dn.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        FieldElement::new(&nn * &dd, &nd * &dn)
    }

    pub fn apply_poly_exact(&self, f: &MultiPoly) -> Result<FieldElement, FieldError> {
        let (n, d) = self.apply_poly(f);
        FieldElement::new(n, d)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, other: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return FieldElement::reduce(&self.num + &other.num, self.den.clone());
        }
        let g = multipoly_gcd(&self.den, &other.den);
        let b1 = self.den.exact_div(&g).unwrap();
        let d1 = other.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        let den = &(&b1 * &other.den);
        FieldElement::reduce(num, den.clone())
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, other: &FieldElement) -> FieldElement {
        self + &(-other)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, other: &FieldElement) -> FieldElement {
        if self.is_zero() || other.is_zero() {
            return FieldElement::zero(self.ring());
        }
        if self.is_polynomial() && other.is_polynomial() {
            return FieldElement { num: &self.num * &other.num, den: self.den.clone() };
        }
        // Cross-cancel before multiplying so both gcds stay small.
        let g1 = multipoly_gcd(&self.num, &other.den);
        let g2 = multipoly_gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = other.den.exact_div(&g1).unwrap();
        let n2 = other.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        FieldElement::reduce(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, other: FieldElement) -> FieldElement {
                (&self).$method(&other)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, other: &FieldElement) -> FieldElement {
                (&self).$method(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// lcm of the denominators of a family, used to clear a row of fractions.
pub fn common_denominator(elems: &[FieldElement]) -> Option<MultiPoly> {
    let first = elems.first()?;
    Some(elems.iter().fold(MultiPoly::one(first.ring()), |acc, e| {
        if e.den.is_one() {
            acc
        } else {
            multipoly_lcm(&acc, &e.den)
        }
    }))
}

impl FieldElement {
    /// `self · d` as a polynomial, for `d` a multiple of the denominator.
    pub fn clear_with(&self, d: &MultiPoly) -> MultiPoly {
        &self.num * &d.exact_div(&self.den).expect("denominator divides the common multiple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Gf;

    fn field(p: u32) -> (Arc<Ring>, FieldElement, FieldElement) {
        let r = Ring::new(Gf::prime(p).unwrap(), &["t1", "t2"]).unwrap();
        let t1 = FieldElement::var(&r, 0);
        let t2 = FieldElement::var(&r, 1);
        (r, t1, t2)
    }

    #[test]
    fn inverse_pair() {
        let (_, t1, t2) = field(3);
        let a = t1.checked_div(&t2).unwrap();
        let b = t2.checked_div(&t1).unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn additive_cancellation() {
        let (_, t1, t2) = field(5);
        assert_eq!(&(&t1 + &t2) - &t2, t1);
    }

    #[test]
    fn freshmans_dream_char3() {
        // Expand (t1 + t2)^3 by repeated multiplication, compare termwise.
        let (_, t1, t2) = field(3);
        let s = &t1 + &t2;
        let cube = &(&s * &s) * &s;
        assert_eq!(cube, &t1.pow(3) + &t2.pow(3));
    }

    #[test]
    fn division_by_zero() {
        let (r, t1, _) = field(2);
        let z = FieldElement::zero(&r);
        assert_eq!(t1.checked_div(&z), Err(FieldError::DivisionByZero));
        assert_eq!(field_arith(&t1, &z, ArithOp::Div), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn denominators_are_monic_and_reduced() {
        let (r, t1, t2) = field(5);
        let two = FieldElement::from_int(&r, 2);
        let x = (&t1 * &two).checked_div(&(&(&t2 * &two) * &t1)).unwrap();
        assert_eq!(x, FieldElement::one(&r).checked_div(&t2).unwrap());
        assert_eq!(x.denominator().leading_coeff(), GfElem::ONE);
    }

    #[test]
    fn partial_derivatives_from_regular_hypersurface() {
        let r = Ring::new(Gf::prime(3).unwrap(), &["y", "z"]).unwrap();
        let y = FieldElement::var(&r, 0);
        let z = FieldElement::var(&r, 1);
        let f = &y.pow(3) - &(&y * &z.pow(2));
        assert_eq!(f.partial_derivative(0), -&z.pow(2));
        assert_eq!(f.partial_derivative(1), &y * &z);
        assert!(matches!(f.partial_derivative_named("w"), Err(FieldError::UnknownVariable(_))));
    }

    #[test]
    fn pth_powers_and_roots() {
        for p in [2u32, 3, 5] {
            let (r, t1, t2) = field(p);
            assert!(!t1.is_pth_power());
            let q = t1.pow(p as u64).checked_div(&t2.pow(p as u64)).unwrap();
            assert!(q.is_pth_power());
            assert_eq!(q.pth_root().unwrap(), t1.checked_div(&t2).unwrap());
            let s = &t1.pow(p as u64) + &t2.pow(p as u64);
            assert!(s.is_pth_power());
            assert_eq!(s.pth_root().unwrap(), &t1 + &t2);
            assert!(FieldElement::one(&r).pth_root().unwrap().is_one());
            assert_eq!(t1.pth_root(), Err(FieldError::NotAPthPower));
        }
    }

    #[test]
    fn pth_root_of_quotient_char3() {
        let (_, t1, t2) = field(3);
        let f = (&t1.pow(3) * &t2.pow(3)).checked_div(&(&t1 + &t2).pow(3)).unwrap();
        let expected = (&t1 * &t2).checked_div(&(&t1 + &t2)).unwrap();
        assert_eq!(f.pth_root().unwrap(), expected);
        assert_eq!(expected.pow(3), f);
    }

    #[test]
    fn substitution_with_denominators() {
        let (r, t1, t2) = field(3);
        let f = &(&t1 * &t1) + &t2; // t1^2 + t2
        let img = [t2.checked_div(&t1).unwrap(), t1.clone()];
        let got = f.substitute(&img).unwrap();
        let want = &(&t2 * &t2).checked_div(&(&t1 * &t1)).unwrap() + &t1;
        assert_eq!(got, want);
        let zero_den = FieldElement::one(&r).checked_div(&t1).unwrap();
        let at_zero = zero_den.substitute_some(&[(0, FieldElement::zero(&r))]);
        assert_eq!(at_zero, Err(FieldError::DivisionByZero));
    }
}
