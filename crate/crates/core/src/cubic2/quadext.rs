//! Degree-two extensions κ = F[θ]/(θ² - c) of a rational function field.

use std::sync::Arc;

use crate::exactfield::{FieldElement, FieldError, MultiPoly, Ring};

/// κ = F[θ]/(θ² - c) with `c` not a square in F, so κ is a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    c: FieldElement,
}

/// a + bθ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl QuadExt {
    /// Characteristic 2 only. Returns `None` when `c` is a square, since κ
    /// would then not be a field.
    pub fn new(c: FieldElement) -> Option<QuadExt> {
        (c.characteristic() == 2 && !c.is_pth_power()).then_some(QuadExt { c })
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.c.ring()
    }

    pub fn from_base(&self, a: FieldElement) -> QuadElem {
        QuadElem { b: FieldElement::zero(a.ring()), a }
    }

    pub fn theta(&self) -> QuadElem {
        QuadElem { a: FieldElement::zero(self.ring()), b: FieldElement::one(self.ring()) }
    }

    pub fn zero(&self) -> QuadElem {
        self.from_base(FieldElement::zero(self.ring()))
    }

    pub fn one(&self) -> QuadElem {
        self.from_base(FieldElement::one(self.ring()))
    }

    pub fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: &x.a + &y.a, b: &x.b + &y.b }
    }

    pub fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: &x.a - &y.a, b: &x.b - &y.b }
    }

    pub fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let a = &(&x.a * &y.a) + &(&(&x.b * &y.b) * &self.c);
        let b = &(&x.a * &y.b) + &(&x.b * &y.a);
        QuadElem { a, b }
    }

    pub fn scale(&self, s: &FieldElement, x: &QuadElem) -> QuadElem {
        QuadElem { a: s * &x.a, b: s * &x.b }
    }

    pub fn pow(&self, x: &QuadElem, e: u32) -> QuadElem {
        let mut acc = self.one();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// a² - b²c, nonzero for nonzero elements since c is not a square.
    pub fn norm(&self, x: &QuadElem) -> FieldElement {
        &x.a.pow(2) - &(&x.b.pow(2) * &self.c)
    }

    pub fn inv(&self, x: &QuadElem) -> Result<QuadElem, FieldError> {
        let n = self.norm(x).inverse()?;
        Ok(QuadElem { a: &x.a * &n, b: -&(&x.b * &n) })
    }

    /// Evaluates a polynomial of `f.ring()` at `values` (one per variable).
    pub fn eval_poly(&self, f: &MultiPoly, values: &[QuadElem]) -> QuadElem {
        let ring = self.ring();
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = self.from_base(FieldElement::constant(ring, *c));
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = self.mul(&t, &self.pow(&values[v], e));
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    pub fn eval(&self, f: &FieldElement, values: &[QuadElem]) -> Result<QuadElem, FieldError> {
        let num = self.eval_poly(f.numerator(), values);
        let den = self.eval_poly(f.denominator(), values);
        Ok(self.mul(&num, &self.inv(&den)?))
    }
}

impl QuadElem {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Gf;

    #[test]
    fn theta_squared_and_inverse() {
        let r = Ring::new(Gf::prime(2).unwrap(), &["t"]).unwrap();
        let t = FieldElement::var(&r, 0);
        let k = QuadExt::new(t.clone()).unwrap();
        let th = k.theta();
        assert_eq!(k.mul(&th, &th), k.from_base(t.clone()));
        let x = k.add(&k.one(), &th);
        assert!(k.mul(&x, &k.inv(&x).unwrap()) == k.one());
        assert!(QuadExt::new(t.pow(2)).is_none());
    }
}
