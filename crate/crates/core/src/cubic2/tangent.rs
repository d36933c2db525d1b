use super::{cubic_equation, extend_ring, lift, local_regularity_at_rational, CubicError, CubicSurfaceSpec, Y1, Y2};
use crate::exactfield::{same_ring, FieldElement, Substitution};

/// The plane section of X by its tangent plane at a regular rational point.
#[derive(Debug, Clone)]
pub struct TangentSection {
    /// (P1(a), P2(a)): the tangent plane is P1(a) y1 + P2(a) y2 = 0.
    pub plane: [FieldElement; 2],
    /// Index (in `S.ring()`) of the coordinate solved for on the plane.
    pub eliminated: usize,
    /// The cubic curve C_a in the remaining three coordinates.
    pub curve: FieldElement,
    /// A linear form dividing C_a, so C_a is not integral.
    pub linear_factor: FieldElement,
    pub divisible: bool,
    /// Projection from a is purely inseparable.
    pub purely_inseparable: bool,
}

pub fn tangent_section(s: &CubicSurfaceSpec, a: &[FieldElement; 4]) -> Result<TangentSection, CubicError> {
    if a.iter().any(|c| !same_ring(c.ring(), s.scalar_ring())) {
        return Err(CubicError::MixedFields);
    }
    if !local_regularity_at_rational(s, a)?.regular {
        return Err(CubicError::SingularPoint);
    }
    let mut images: Vec<FieldElement> = (0..s.scalar_ring().nvars()).map(|i| FieldElement::var(s.scalar_ring(), i)).collect();
    images.extend(a.iter().cloned());
    let at_a = Substitution::new(&images)?;
    let lower = |k: usize| at_a.apply(&s.equation().partial_derivative(s.coord(k)));
    let plane = [lower(Y1)?, lower(Y2)?];
    let (solve, keep, coeff_keep, coeff_solve) = if !plane[1].is_zero() { (Y2, Y1, &plane[0], &plane[1]) } else { (Y1, Y2, &plane[1], &plane[0]) };
    let image = -&(&s.lift(&coeff_keep.checked_div(coeff_solve)?) * &s.coord_var(keep));
    let curve = s.equation().substitute_some(&[(s.coord(solve), image)])?;
    let linear_factor = s.coord_var(keep);
    let divisible = linear_factor.numerator().divides(curve.numerator());

    let off = s.scalar_ring().nvars();
    let big = extend_ring(s.scalar_ring(), &["x1", "x2", "y1", "y2", "s", "w1", "w2", "w3", "w4"])?;
    let t1 = lift(s.t1(), &big);
    let t2 = lift(s.t2(), &big);
    let eq = cubic_equation(&big, off, &t1, &t2);
    let param = FieldElement::var(&big, off + 4);
    let line: Vec<(usize, FieldElement)> = (0..4)
        .map(|k| (off + k, &lift(&a[k], &big) + &(&param * &FieldElement::var(&big, off + 5 + k))))
        .collect();
    let along = eq.substitute_some(&line)?;
    let quadratic = along.numerator().coefficients_in(off + 4);
    let purely_inseparable = quadratic.get(2).is_none_or(|c| c.is_zero());
    Ok(TangentSection { plane, eliminated: s.coord(solve), curve, linear_factor, divisible, purely_inseparable })
}
