//! Seeded random elements for the property checks.

use std::sync::Arc;

use rand::Rng;

use imperfect::exactfield::{FieldElement, MultiPoly, Ring};

/// A polynomial with up to `max_terms` terms of partial degree at most
/// `max_exp` and coefficients drawn from the whole constant field.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_terms: usize, max_exp: u32) -> MultiPoly {
    let field = ring.field().clone();
    let (p, m) = (field.characteristic(), field.degree());
    let terms = rng.gen_range(0..=max_terms);
    MultiPoly::from_terms(
        ring,
        (0..terms).map(|_| {
            let exps: Vec<u32> = (0..ring.nvars()).map(|_| rng.gen_range(0..=max_exp)).collect();
            let digits: Vec<u32> = (0..m).map(|_| rng.gen_range(0..p)).collect();
            (exps, field.from_residues(&digits))
        }),
    )
}

pub fn random_nonzero_poly<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_terms: usize, max_exp: u32) -> MultiPoly {
    loop {
        let f = random_poly(rng, ring, max_terms.max(1), max_exp);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A quotient of random polynomials; the denominator is 1 about half the time.
pub fn random_element<R: Rng>(rng: &mut R, ring: &Arc<Ring>) -> FieldElement {
    let num = random_poly(rng, ring, 3, 3);
    let den = if rng.gen_bool(0.5) { MultiPoly::one(ring) } else { random_nonzero_poly(rng, ring, 2, 2) };
    FieldElement::new(num, den).expect("nonzero denominator")
}
