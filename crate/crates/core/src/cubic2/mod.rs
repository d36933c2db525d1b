//! The characteristic-2 cubic surface
//! y1^3 + t1 x1^2 y1 + y2^3 + t2 x2^2 y2 = 0 in P^3 with coordinates
//! (x1 : x2 : y1 : y2), its conic fibration over P^1 given by (y1 : y2),
//! and its Picard lattice.

mod lattice;
mod quadext;
mod regularity;
mod tangent;

use std::sync::Arc;

use thiserror::Error;

use crate::differentials::{is_p_independent, p_independence_rank, root_extension, DifferentialError};
use crate::exactfield::{same_ring, FieldElement, FieldError, MultiPoly, Ring};
use crate::hyperkollar::RationalMap;

pub use lattice::{smith_normal_form, IntLattice, Q};
pub use quadext::{QuadElem, QuadExt};
pub use regularity::{
    local_regularity_at, local_regularity_at_rational, regularity_stratification, tensor_field_test, InseparablePoint,
    LocalRegularity, StratCase, Stratification,
};
pub use tangent::{tangent_section, TangentSection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("characteristic must be 2, got {0}")]
    BadCharacteristic(u32),
    #[error("scalars t1 and t2 must be nonzero")]
    ZeroScalar,
    #[error("inputs belong to different fields")]
    MixedFields,
    #[error("point does not lie on the surface")]
    PointNotOnSurface,
    #[error("local ring at the point is not regular")]
    SingularPoint,
    #[error("residue relation θ² = c needs a non-square c")]
    NotInseparable,
    #[error("chart coordinate must be 1 at the point")]
    BadChart,
    #[error("all coefficients are zero")]
    AllZero,
    #[error("Frobenius exponent must be at least 1")]
    BadExponent,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Differential(#[from] DifferentialError),
}

/// Coordinate positions after the scalar generators.
pub const X1: usize = 0;
pub const X2: usize = 1;
pub const Y1: usize = 2;
pub const Y2: usize = 3;
pub const COORDINATE_NAMES: [&str; 4] = ["x1", "x2", "y1", "y2"];

#[derive(Debug, Clone)]
pub struct CubicSurfaceSpec {
    scalar_ring: Arc<Ring>,
    ring: Arc<Ring>,
    t1: FieldElement,
    t2: FieldElement,
    equation: FieldElement,
}

fn lift(x: &FieldElement, target: &Arc<Ring>) -> FieldElement {
    let map: Vec<usize> = (0..x.ring().nvars()).collect();
    x.relabel(target, &map)
}

fn extend_ring(scalar_ring: &Ring, extra: &[&str]) -> Result<Arc<Ring>, FieldError> {
    let mut names = scalar_ring.var_names().to_vec();
    for e in extra {
        let mut name = e.to_string();
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
    }
    Ring::from_names(scalar_ring.field().clone(), names)
}

fn cubic_equation(ring: &Arc<Ring>, off: usize, t1: &FieldElement, t2: &FieldElement) -> FieldElement {
    let v = |k: usize| FieldElement::var(ring, off + k);
    let (x1, x2, y1, y2) = (v(X1), v(X2), v(Y1), v(Y2));
    let first = &y1.pow(3) + &(&(&lift(t1, ring) * &x1.pow(2)) * &y1);
    let second = &y2.pow(3) + &(&(&lift(t2, ring) * &x2.pow(2)) * &y2);
    &first + &second
}

pub fn cubic_surface(t1: &FieldElement, t2: &FieldElement) -> Result<CubicSurfaceSpec, CubicError> {
    if !same_ring(t1.ring(), t2.ring()) {
        return Err(CubicError::MixedFields);
    }
    let p = t1.characteristic();
    if p != 2 {
        return Err(CubicError::BadCharacteristic(p));
    }
    if t1.is_zero() || t2.is_zero() {
        return Err(CubicError::ZeroScalar);
    }
    let scalar_ring = t1.ring().clone();
    let ring = extend_ring(&scalar_ring, &COORDINATE_NAMES)?;
    let equation = cubic_equation(&ring, scalar_ring.nvars(), t1, t2);
    Ok(CubicSurfaceSpec { scalar_ring, ring, t1: t1.clone(), t2: t2.clone(), equation })
}

impl CubicSurfaceSpec {
    pub fn t1(&self) -> &FieldElement {
        &self.t1
    }

    pub fn t2(&self) -> &FieldElement {
        &self.t2
    }

    pub fn scalar_ring(&self) -> &Arc<Ring> {
        &self.scalar_ring
    }

    /// Scalar generators followed by x1, x2, y1, y2.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Index of coordinate `k` (one of [`X1`], [`X2`], [`Y1`], [`Y2`]).
    pub fn coord(&self, k: usize) -> usize {
        self.scalar_ring.nvars() + k
    }

    pub fn coord_var(&self, k: usize) -> FieldElement {
        FieldElement::var(&self.ring, self.coord(k))
    }

    pub fn equation(&self) -> &FieldElement {
        &self.equation
    }

    pub fn defining(&self) -> &MultiPoly {
        self.equation.numerator()
    }

    pub fn is_homogeneous_cubic(&self) -> bool {
        let coords: Vec<usize> = (0..4).map(|k| self.coord(k)).collect();
        self.defining().is_homogeneous_in(&coords, 3)
    }

    pub(crate) fn lift(&self, x: &FieldElement) -> FieldElement {
        lift(x, &self.ring)
    }
}

/// The equations of the non-smooth locus and the identity P = y1 P1 + y2 P2.
#[derive(Debug, Clone)]
pub struct NonsmoothCertificate {
    /// dP/dy1 = y1^2 + t1 x1^2.
    pub p1: FieldElement,
    /// dP/dy2 = y2^2 + t2 x2^2.
    pub p2: FieldElement,
    pub x_partials_vanish: bool,
    pub partials_match: bool,
    /// P - (y1 P1 + y2 P2).
    pub residual: FieldElement,
}

impl NonsmoothCertificate {
    pub fn holds(&self) -> bool {
        self.x_partials_vanish && self.partials_match && self.residual.is_zero()
    }
}

pub fn cubic_nonsmooth_locus(s: &CubicSurfaceSpec) -> NonsmoothCertificate {
    let d = |k: usize| s.equation.partial_derivative(s.coord(k));
    let (p1, p2) = (d(Y1), d(Y2));
    let x_partials_vanish = d(X1).is_zero() && d(X2).is_zero();
    let v = |k| s.coord_var(k);
    let expected1 = &v(Y1).pow(2) + &(&s.lift(&s.t1) * &v(X1).pow(2));
    let expected2 = &v(Y2).pow(2) + &(&s.lift(&s.t2) * &v(X2).pow(2));
    let partials_match = p1 == expected1 && p2 == expected2;
    let residual = &s.equation - &(&(&v(Y1) * &p1) + &(&v(Y2) * &p2));
    NonsmoothCertificate { p1, p2, x_partials_vanish, partials_match, residual }
}

/// a u0^2 + b u1^2 + c u2^2, with the names of u0, u1, u2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSpec {
    pub coeffs: [FieldElement; 3],
    pub vars: [String; 3],
}

/// A point of P^1 = Proj F[y1, y2]: (λ : 1) or (1 : 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberParam {
    Affine(FieldElement),
    Infinity,
}

#[derive(Debug, Clone)]
pub struct Fiber {
    pub conic: ConicSpec,
    /// λ^3 = 1: the fiber over a point of P^1(F_4) other than 0 and ∞.
    pub excluded: bool,
    /// Some coefficient of the conic vanishes.
    pub degenerate: bool,
    /// The plane section through the fiber equals the line L plus the conic.
    pub section_decomposes: bool,
}

/// Fiber of (y1 : y2) over `param`.
pub fn fiber_at(s: &CubicSurfaceSpec, param: &FiberParam) -> Result<Fiber, CubicError> {
    let r = &s.ring;
    let v = |k| s.coord_var(k);
    let (coeffs, vars, plane, factor, excluded) = match param {
        FiberParam::Affine(lambda) => {
            if !same_ring(lambda.ring(), &s.scalar_ring) {
                return Err(CubicError::MixedFields);
            }
            let one = FieldElement::one(&s.scalar_ring);
            let coeffs = [&one + &lambda.pow(3), s.t1.clone(), lambda * &s.t2];
            let excluded = lambda.pow(3).is_one();
            // In characteristic 2 the plane λ y1 + y2 = 0 is y2 = λ y1.
            let plane = (s.coord(Y2), &s.lift(lambda) * &v(Y1));
            (coeffs, [Y1, X1, X2], plane, v(Y1), excluded)
        }
        FiberParam::Infinity => {
            let coeffs = [FieldElement::one(&s.scalar_ring), s.t2.clone(), FieldElement::zero(&s.scalar_ring)];
            (coeffs, [Y2, X2, X1], (s.coord(Y1), FieldElement::zero(r)), v(Y2), false)
        }
    };
    let restricted = s.equation.substitute_some(&[plane])?;
    let mut conic_poly = FieldElement::zero(r);
    for (c, &k) in coeffs.iter().zip(&vars) {
        conic_poly = &conic_poly + &(&s.lift(c) * &v(k).pow(2));
    }
    let section_decomposes = restricted == &factor * &conic_poly;
    let degenerate = coeffs.iter().any(FieldElement::is_zero);
    let conic = ConicSpec { coeffs, vars: vars.map(|k| COORDINATE_NAMES[k].to_string()) };
    Ok(Fiber { conic, excluded, degenerate, section_decomposes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConicClass {
    pub is_regular: bool,
    pub is_geometrically_reduced: bool,
}

/// Regularity by the Fermat criterion on the two ratios to the first nonzero
/// coefficient. A diagonal conic in characteristic 2 is the square of a
/// linear form over the perfect closure, so it is never geometrically reduced.
pub fn conic_classify(c: &ConicSpec) -> Result<ConicClass, CubicError> {
    let p = c.coeffs[0].characteristic();
    if p != 2 {
        return Err(CubicError::BadCharacteristic(p));
    }
    if c.coeffs.iter().any(|x| !same_ring(x.ring(), c.coeffs[0].ring())) {
        return Err(CubicError::MixedFields);
    }
    let pivot = c.coeffs.iter().position(|x| !x.is_zero()).ok_or(CubicError::AllZero)?;
    let ratios: Vec<FieldElement> = (0..3)
        .filter(|&i| i != pivot)
        .map(|i| c.coeffs[i].checked_div(&c.coeffs[pivot]))
        .collect::<Result<_, _>>()?;
    Ok(ConicClass { is_regular: is_p_independent(&ratios)?, is_geometrically_reduced: false })
}

/// The generic fiber after the Frobenius base change λ = μ^q, q = 2^ν, and
/// the linear change of variables that removes μ.
#[derive(Debug, Clone)]
pub struct BaseChange {
    /// Scalars, μ, u0, u1, u2.
    pub ring: Arc<Ring>,
    pub q: u64,
    /// (1 + μ^(3q), t1, μ^q t2).
    pub pulled_back: ConicSpec,
    /// v0 = scale0 u0, v1 = u1, v2 = scale2 u2.
    pub scale0: FieldElement,
    pub scale2: FieldElement,
    /// (1, t1, t2).
    pub modified: ConicSpec,
    /// pulled_back(u) - modified(v(u)); zero when the change is valid.
    pub residual: FieldElement,
    /// The modified coefficients do not involve μ.
    pub constant_in_mu: bool,
}

pub fn frobenius_base_change(s: &CubicSurfaceSpec, nu: u32) -> Result<BaseChange, CubicError> {
    if nu == 0 {
        return Err(CubicError::BadExponent);
    }
    let q = 1u64 << nu;
    let ring = extend_ring(&s.scalar_ring, &["mu", "u0", "u1", "u2"])?;
    let off = s.scalar_ring.nvars();
    let mu = FieldElement::var(&ring, off);
    let u: Vec<FieldElement> = (1..4).map(|k| FieldElement::var(&ring, off + k)).collect();
    let (t1, t2) = (lift(&s.t1, &ring), lift(&s.t2, &ring));
    let one = FieldElement::one(&ring);
    let lambda = mu.pow(q);
    let a = &one + &lambda.pow(3);
    let c = &lambda * &t2;
    let scale0 = a.pth_root()?;
    let scale2 = lambda.pth_root()?;
    let pulled_poly = &(&(&a * &u[0].pow(2)) + &(&t1 * &u[1].pow(2))) + &(&c * &u[2].pow(2));
    let v0 = &scale0 * &u[0];
    let v2 = &scale2 * &u[2];
    let modified_poly = &(&v0.pow(2) + &(&t1 * &u[1].pow(2))) + &(&t2 * &v2.pow(2));
    let residual = &pulled_poly - &modified_poly;
    let names = |k: usize| ring.var_name(off + k).to_string();
    let vars = [names(1), names(2), names(3)];
    let modified = ConicSpec { coeffs: [one.clone(), t1.clone(), t2.clone()], vars: vars.clone() };
    let constant_in_mu = modified.coeffs.iter().all(|x| !x.involves(off));
    Ok(BaseChange {
        ring: ring.clone(),
        q,
        pulled_back: ConicSpec { coeffs: [a, t1, c], vars },
        scale0,
        scale2,
        modified,
        residual,
        constant_in_mu,
    })
}

/// Rationality of X over E = F(√t1) via x1' = y1 + √t1 x1, in which the
/// equation becomes y1 x1'^2 + y2^3 + t2 x2^2 y2.
#[derive(Debug, Clone)]
pub struct CubicRationalityWitness {
    pub transformed: FieldElement,
    pub identity_holds: bool,
    /// (r1, r2) -> (x1 : x2 : y1 : y2) on the chart x1' = 1.
    pub forward: RationalMap,
    /// (x1 : x2 : y1 : y2) -> (x2 / x1', y2 / x1').
    pub inverse: RationalMap,
    pub pullback_vanishes: bool,
    pub left_inverse: bool,
    pub right_inverse_on_x: bool,
}

impl CubicRationalityWitness {
    pub fn certified(&self) -> bool {
        self.identity_holds && self.pullback_vanishes && self.left_inverse && self.right_inverse_on_x
    }
}

pub fn cubic_rationality_witness(s: &CubicSurfaceSpec) -> Result<CubicRationalityWitness, CubicError> {
    let roots: Vec<usize> = (0..s.scalar_ring.nvars()).filter(|&g| s.t1.involves(g)).collect();
    let (e_scalars, embed) = root_extension(&s.scalar_ring, &roots)?;
    let ring = extend_ring(&e_scalars, &["x1", "x2", "y1", "y2", "x1p", "r1", "r2"])?;
    let off = e_scalars.nvars();
    let var = |k: usize| FieldElement::var(&ring, off + k);
    let (x1, x2, y1, y2, x1p, r1, r2) = (var(0), var(1), var(2), var(3), var(4), var(5), var(6));
    let t1 = lift(&embed.apply(&s.t1)?, &ring);
    let t2 = lift(&embed.apply(&s.t2)?, &ring);
    let root = t1.pth_root()?;
    let equation = cubic_equation(&ring, off, &t1, &t2);

    let transformed = equation.substitute_some(&[(off, (&x1p + &y1).checked_div(&root)?)])?;
    let expected = &(&(&y1 * &x1p.pow(2)) + &y2.pow(3)) + &(&(&t2 * &x2.pow(2)) * &y2);
    let identity_holds = transformed == expected;

    let y1_of = &r2.pow(3) + &(&(&t2 * &r1.pow(2)) * &r2);
    let x1_of = (&FieldElement::one(&ring) + &y1_of).checked_div(&root)?;
    let coords: Vec<usize> = (0..4).map(|k| off + k).collect();
    let forward = RationalMap::new(&ring, vec![off + 5, off + 6], coords.clone(), vec![x1_of, r1.clone(), y1_of, r2.clone()]);
    let chart = &y1 + &(&root * &x1);
    let inverse = RationalMap::new(
        &ring,
        coords.clone(),
        vec![off + 5, off + 6],
        vec![x2.checked_div(&chart)?, y2.checked_div(&chart)?],
    );
    let pullback_vanishes = forward.pullback(&equation)?.is_zero();
    let left_inverse = forward.then(&inverse)?.is_identity();
    // forward ∘ inverse is the identity up to the factor x1' on X.
    let round = inverse.then(&forward)?;
    let right_inverse_on_x = round
        .components()
        .iter()
        .zip(&coords)
        .all(|(c, &v)| {
            let diff = &(&chart * c) - &FieldElement::var(&ring, v);
            equation.numerator().divides(diff.numerator())
        });
    Ok(CubicRationalityWitness { transformed, identity_holds, forward, inverse, pullback_vanishes, left_inverse, right_inverse_on_x })
}

/// Numerical data of the lattice spanned by C1 and L.
#[derive(Debug, Clone)]
pub struct PicardReport {
    pub lattice: IntLattice,
    pub determinant: i64,
    pub smith_invariants: Vec<i64>,
    pub discriminant_order: i64,
    /// Rows: e1*, e2* in coordinates of (C1, L).
    pub dual_basis: Vec<Vec<Q>>,
    pub dual_pairings_ok: bool,
    /// -K = C1 + L.
    pub anticanonical: Vec<i64>,
    pub k_squared: i64,
    pub l_squared: i64,
    pub c1_squared: i64,
    pub l_dot_c1: i64,
    /// D ~ C1 + 2L.
    pub d_class: Vec<i64>,
    pub d_primitive: bool,
    pub d_dot_c1: i64,
    /// e2* = C1 / 2.
    pub half_c1_is_e2_dual: bool,
    pub half_c1_order: i64,
    /// N.N - N.K for N = C1 / 2.
    pub half_c1_parity_value: Q,
    /// N.N - N.K is even on a basis of S, hence on all of S.
    pub riemann_roch_parity_on_s: bool,
}

pub fn picard_lattice() -> PicardReport {
    let lattice = IntLattice::new(&["C1", "L"], vec![vec![0, 2], vec![2, -1]]);
    let determinant = lattice.determinant();
    let smith_invariants = lattice.smith_invariants();
    let discriminant_order = lattice.discriminant_group_order();
    let dual_basis = lattice.dual_basis().expect("nondegenerate");
    let q = |x: i64| Q::from_integer(x);
    let basis = [vec![q(1), q(0)], vec![q(0), q(1)]];
    let dual_pairings_ok = (0..2).all(|i| (0..2).all(|j| lattice.pair_q(&dual_basis[i], &basis[j]) == q(i64::from(i == j))));
    let anticanonical = vec![1, 1];
    let canonical = vec![-1, -1];
    let k_squared = lattice.pair(&canonical, &canonical);
    let l_squared = lattice.pair(&[0, 1], &[0, 1]);
    let c1_squared = lattice.pair(&[1, 0], &[1, 0]);
    let l_dot_c1 = lattice.pair(&[0, 1], &[1, 0]);
    let d_class = vec![1, 2];
    let d_primitive = IntLattice::is_primitive(&d_class);
    let d_dot_c1 = lattice.pair(&d_class, &[1, 0]);
    let half_c1 = vec![Q::new(1, 2), q(0)];
    let half_c1_is_e2_dual = dual_basis[1] == half_c1;
    let half_c1_order = lattice.order_in_discriminant_group(&half_c1);
    let kq: Vec<Q> = canonical.iter().map(|&x| q(x)).collect();
    let rr = |n: &[Q]| lattice.pair_q(n, n) - lattice.pair_q(n, &kq);
    let half_c1_parity_value = rr(&half_c1);
    let riemann_roch_parity_on_s = basis.iter().all(|b| rr(b).to_integer() % 2 == 0 && rr(b).is_integer());
    PicardReport {
        lattice,
        determinant,
        smith_invariants,
        discriminant_order,
        dual_basis,
        dual_pairings_ok,
        anticanonical,
        k_squared,
        l_squared,
        c1_squared,
        l_dot_c1,
        d_class,
        d_primitive,
        d_dot_c1,
        half_c1_is_e2_dual,
        half_c1_order,
        half_c1_parity_value,
        riemann_roch_parity_on_s,
    }
}

/// Sylvester resultant of two binary forms of degrees `df` and `dg` in the
/// variables (`a`, `b`); it vanishes iff they share a projective zero over
/// an algebraic closure.
pub fn binary_resultant(f: &FieldElement, g: &FieldElement, a: usize, b: usize, df: u32, dg: u32) -> Result<FieldElement, CubicError> {
    let ring = f.ring().clone();
    let coeffs = |h: &FieldElement, d: u32| -> Result<Vec<FieldElement>, CubicError> {
        // Coefficient of a^(d-i) b^i, by setting b = 1 and reading powers of a.
        let at_b1 = h.substitute_some(&[(b, FieldElement::one(&ring))])?;
        let num = at_b1.numerator();
        let den = FieldElement::from(at_b1.denominator().clone());
        let by_a = num.coefficients_in(a);
        Ok((0..=d)
            .map(|i| {
                let e = (d - i) as usize;
                by_a.get(e).map_or(FieldElement::zero(&ring), |c| FieldElement::from(c.clone()).checked_div(&den).unwrap())
            })
            .collect())
    };
    let (cf, cg) = (coeffs(f, df)?, coeffs(g, dg)?);
    let size = (df + dg) as usize;
    let mut m = vec![vec![FieldElement::zero(&ring); size]; size];
    for i in 0..dg as usize {
        for (j, c) in cf.iter().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..df as usize {
        for (j, c) in cg.iter().enumerate() {
            m[dg as usize + i][i + j] = c.clone();
        }
    }
    Ok(determinant(m))
}

fn determinant(mut m: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    let mut det = FieldElement::one(&ring);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return FieldElement::zero(&ring);
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = &det * &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].checked_div(&p).expect("nonzero pivot");
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

/// C1 ∩ C2 = ∅: both curves meet only inside L = {y1 = y2 = 0}, where their
/// equations restrict to binary forms in (x1 : x2) with nonzero resultant.
pub fn conics_disjoint(s: &CubicSurfaceSpec) -> Result<bool, CubicError> {
    let v = |k| s.coord_var(k);
    let on_l = |f: FieldElement| {
        let z = FieldElement::zero(&s.ring);
        f.substitute_some(&[(s.coord(Y1), z.clone()), (s.coord(Y2), z)])
    };
    let c1 = on_l(&v(Y2).pow(2) + &(&s.lift(&s.t2) * &v(X2).pow(2)))?;
    let c2 = on_l(&v(Y1).pow(2) + &(&s.lift(&s.t1) * &v(X1).pow(2)))?;
    let res = binary_resultant(&c1, &c2, s.coord(X1), s.coord(X2), 2, 2)?;
    Ok(!res.is_zero())
}

/// Rank of {t1, t2}, the dimension of the span of dt1, dt2.
pub fn scalar_rank(s: &CubicSurfaceSpec) -> Result<usize, CubicError> {
    Ok(p_independence_rank(&[s.t1.clone(), s.t2.clone()])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Gf;

    fn generic() -> CubicSurfaceSpec {
        let r = Ring::new(Gf::prime(2).unwrap(), &["t1", "t2"]).unwrap();
        cubic_surface(&FieldElement::var(&r, 0), &FieldElement::var(&r, 1)).unwrap()
    }

    #[test]
    fn construction() {
        let s = generic();
        assert_eq!(s.equation().to_string(), "t1*x1^2*y1 + t2*x2^2*y2 + y1^3 + y2^3");
        assert!(s.is_homogeneous_cubic());
        let r = s.scalar_ring().clone();
        let zero = FieldElement::zero(&r);
        assert_eq!(cubic_surface(&zero, &FieldElement::var(&r, 0)).unwrap_err(), CubicError::ZeroScalar);
        let r3 = Ring::new(Gf::prime(3).unwrap(), &["t"]).unwrap();
        let t = FieldElement::var(&r3, 0);
        assert_eq!(cubic_surface(&t, &t).unwrap_err(), CubicError::BadCharacteristic(3));
    }

    #[test]
    fn jacobian_identity() {
        let s = generic();
        let cert = cubic_nonsmooth_locus(&s);
        assert!(cert.holds());
        assert_eq!(cert.p1.to_string(), "t1*x1^2 + y1^2");
        let r = Ring::new(Gf::prime(2).unwrap(), &[]).unwrap();
        let one = FieldElement::one(&r);
        assert!(cubic_nonsmooth_locus(&cubic_surface(&one, &one).unwrap()).holds());
    }

    #[test]
    fn fibers() {
        let s = generic();
        let r = s.scalar_ring().clone();
        let one = FieldElement::one(&r);
        let f = fiber_at(&s, &FiberParam::Affine(one.clone())).unwrap();
        assert!(f.conic.coeffs[0].is_zero() && f.excluded && f.section_decomposes);
        let f = fiber_at(&s, &FiberParam::Affine(FieldElement::zero(&r))).unwrap();
        assert_eq!(f.conic.coeffs, [one.clone(), s.t1().clone(), FieldElement::zero(&r)]);
        assert!(!f.excluded && f.degenerate && f.section_decomposes);
        let f = fiber_at(&s, &FiberParam::Infinity).unwrap();
        assert!(f.section_decomposes);
        assert_eq!(f.conic.vars, ["y2", "x2", "x1"]);
    }

    #[test]
    fn generic_fiber_over_function_field() {
        let r = Ring::new(Gf::prime(2).unwrap(), &["t1", "t2", "l"]).unwrap();
        let (t1, t2, l) = (FieldElement::var(&r, 0), FieldElement::var(&r, 1), FieldElement::var(&r, 2));
        let s = cubic_surface(&t1, &t2).unwrap();
        let f = fiber_at(&s, &FiberParam::Affine(l.clone())).unwrap();
        let one = FieldElement::one(&r);
        assert_eq!(f.conic.coeffs, [&one + &l.pow(3), t1, &l * &t2]);
        assert!(f.section_decomposes && !f.excluded && !f.degenerate);
    }

    #[test]
    fn conic_classes() {
        let r = Ring::new(Gf::prime(2).unwrap(), &["t1", "t2"]).unwrap();
        let (t1, t2) = (FieldElement::var(&r, 0), FieldElement::var(&r, 1));
        let one = FieldElement::one(&r);
        let names = || ["u0".to_string(), "u1".to_string(), "u2".to_string()];
        let c = |a: &FieldElement, b: &FieldElement, c: &FieldElement| ConicSpec { coeffs: [a.clone(), b.clone(), c.clone()], vars: names() };
        let k = conic_classify(&c(&one, &t1, &t2)).unwrap();
        assert!(k.is_regular && !k.is_geometrically_reduced);
        assert!(!conic_classify(&c(&one, &t1, &t1)).unwrap().is_regular);
        assert!(!conic_classify(&c(&one, &t1.pow(2), &t2.pow(2))).unwrap().is_regular);
        let zero = FieldElement::zero(&r);
        assert_eq!(conic_classify(&c(&zero, &zero, &zero)), Err(CubicError::AllZero));
        assert!(!conic_classify(&c(&zero, &one, &zero)).unwrap().is_geometrically_reduced);
    }

    #[test]
    fn base_change() {
        let s = generic();
        for nu in 1..=3 {
            let b = frobenius_base_change(&s, nu).unwrap();
            assert!(b.residual.is_zero() && b.constant_in_mu, "nu={nu}");
            let k = conic_classify(&b.modified).unwrap();
            assert!(k.is_regular && !k.is_geometrically_reduced);
        }
        let b = frobenius_base_change(&s, 1).unwrap();
        assert_eq!(b.scale0.to_string(), "mu^3 + 1");
        assert_eq!(b.scale2.to_string(), "mu");
        assert_eq!(frobenius_base_change(&s, 0).unwrap_err(), CubicError::BadExponent);
    }

    #[test]
    fn rationality_over_root_extension() {
        let w = cubic_rationality_witness(&generic()).unwrap();
        assert!(w.certified(), "{w:?}");
    }

    #[test]
    fn picard_numbers() {
        let pic = picard_lattice();
        assert_eq!(pic.determinant, -4);
        assert_eq!(pic.smith_invariants, [1, 4]);
        assert_eq!(pic.discriminant_order, 4);
        assert!(pic.dual_pairings_ok);
        assert_eq!((pic.k_squared, pic.l_squared, pic.c1_squared, pic.l_dot_c1, pic.d_dot_c1), (3, -1, 0, 2, 4));
        assert!(pic.d_primitive && pic.half_c1_is_e2_dual);
        assert_eq!(pic.half_c1_parity_value, Q::from_integer(1));
        assert!(pic.riemann_roch_parity_on_s);
        // C1/2 has order 2; the cyclic group of order 4 is generated by e1*.
        assert_eq!(pic.half_c1_order, 2);
        assert_eq!(pic.lattice.order_in_discriminant_group(&pic.dual_basis[0]), 4);
    }

    #[test]
    fn disjoint_conics() {
        assert!(conics_disjoint(&generic()).unwrap());
    }

    #[test]
    fn resultant_detects_common_root() {
        let r = Ring::new(Gf::prime(2).unwrap(), &["a", "b"]).unwrap();
        let (a, b) = (FieldElement::var(&r, 0), FieldElement::var(&r, 1));
        let f = &a * &(&a + &b);
        let g = &(&a + &b) * &b;
        assert!(binary_resultant(&f, &g, 0, 1, 2, 2).unwrap().is_zero());
        let h = &a.pow(2) + &(&a * &b) + &b.pow(2);
        assert!(!binary_resultant(&f, &h, 0, 1, 2, 2).unwrap().is_zero());
    }
}
