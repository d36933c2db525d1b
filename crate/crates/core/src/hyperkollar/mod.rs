//! The degree-p hypersurfaces y^p - y z^(p-1) + sum t_i x_i^p = 0 in P^(n+1)
//! over F = GF(p^m)(generators), p odd.
//!
//! A [`HypersurfaceSpec`] lives in a joint ring whose variables are the
//! generators of F followed by the coordinates x_1, ..., x_n, y, z, so the
//! scalars t_i and the coordinates can be mixed freely.

mod points;
mod rationality;

use std::sync::Arc;

use thiserror::Error;

use crate::differentials::{adjoin_root_rank, exchange_step, is_p_independent, root_extension, DifferentialError};
use crate::exactfield::{same_ring, FieldElement, FieldError, MultiPoly, Ring};

pub use points::{
    bounded_point_search, candidate_count, laurent_exhaustive, laurent_substitution_check, obvious_points, LaurentSearch,
    ProjPoint, UniPoly, DEFAULT_BUDGET,
};
pub use rationality::{geometric_rationality_witness, RationalMap, RationalityWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KollarError {
    #[error("characteristic {0} is not an odd prime matching the scalars")]
    BadCharacteristic(u32),
    #[error("the first scalar must be nonzero")]
    ZeroLeadingScalar,
    #[error("expected {expected} scalars, got {got}")]
    BadDimension { expected: usize, got: usize },
    #[error("scalars belong to different fields")]
    MixedFields,
    #[error("scalar ratio is not a p-th power")]
    NotAPthPower,
    #[error("index {0} out of range for this operation")]
    BadIndex(usize),
    #[error("division by a zero scalar")]
    ZeroDivisor,
    #[error("all coefficients are zero")]
    AllZero,
    #[error("search needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("scalars must be the declared generators of the field, in order")]
    UnsupportedPresentation,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Differential(#[from] DifferentialError),
}

/// A member X of the family, with its scalars and equation.
#[derive(Debug, Clone)]
pub struct HypersurfaceSpec {
    p: u32,
    scalar_ring: Arc<Ring>,
    ring: Arc<Ring>,
    scalars: Vec<FieldElement>,
    equation: FieldElement,
}

/// Names of the coordinates x_1, ..., x_n, y, z.
pub fn coordinate_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.push("y".into());
    names.push("z".into());
    names
}

/// The scalar ring's variables followed by `extra`.
pub(crate) fn joint_ring(scalar_ring: &Ring, extra: &[String]) -> Result<Arc<Ring>, FieldError> {
    let mut names = scalar_ring.var_names().to_vec();
    names.extend(extra.iter().cloned());
    Ring::from_names(scalar_ring.field().clone(), names)
}

/// Moves an element of the scalar ring into a ring whose first variables are
/// the scalar ring's.
pub(crate) fn lift(x: &FieldElement, target: &Arc<Ring>) -> FieldElement {
    let map: Vec<usize> = (0..x.ring().nvars()).collect();
    x.relabel(target, &map)
}

/// The Kollár-type equation with coordinate variables starting at `offset`.
fn kollar_equation(ring: &Arc<Ring>, offset: usize, p: u32, scalars: &[FieldElement]) -> FieldElement {
    let n = scalars.len();
    let y = FieldElement::var(ring, offset + n);
    let z = FieldElement::var(ring, offset + n + 1);
    let p64 = u64::from(p);
    let mut eq = &y.pow(p64) - &(&y * &z.pow(p64 - 1));
    for (i, t) in scalars.iter().enumerate() {
        eq = &eq + &(&lift(t, ring) * &FieldElement::var(ring, offset + i).pow(p64));
    }
    eq
}

/// Builds X for odd prime `p` and scalars t_1, ..., t_n with t_1 != 0.
pub fn kollar_hypersurface(p: u32, n: usize, t: &[FieldElement]) -> Result<HypersurfaceSpec, KollarError> {
    if n == 0 || t.len() != n {
        return Err(KollarError::BadDimension { expected: n.max(1), got: t.len() });
    }
    let scalar_ring = t[0].ring().clone();
    if t.iter().any(|x| !same_ring(x.ring(), &scalar_ring)) {
        return Err(KollarError::MixedFields);
    }
    if p < 3 || scalar_ring.characteristic() != p {
        return Err(KollarError::BadCharacteristic(p));
    }
    if t[0].is_zero() {
        return Err(KollarError::ZeroLeadingScalar);
    }
    let ring = joint_ring(&scalar_ring, &coordinate_names(n))?;
    let equation = kollar_equation(&ring, scalar_ring.nvars(), p, t);
    Ok(HypersurfaceSpec { p, scalar_ring, ring, scalars: t.to_vec(), equation })
}

impl HypersurfaceSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Number of x-coordinates; X has dimension n in P^(n+1).
    pub fn n(&self) -> usize {
        self.scalars.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() + 1
    }

    pub fn degree(&self) -> u32 {
        self.p
    }

    pub fn scalars(&self) -> &[FieldElement] {
        &self.scalars
    }

    pub fn scalar_ring(&self) -> &Arc<Ring> {
        &self.scalar_ring
    }

    /// Joint ring: scalar generators, then x_1..x_n, y, z.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Indices of x_1, ..., x_n, y, z in [`Self::ring`].
    pub fn coordinates(&self) -> Vec<usize> {
        let off = self.scalar_ring.nvars();
        (off..off + self.n() + 2).collect()
    }

    pub fn x(&self, i: usize) -> usize {
        self.scalar_ring.nvars() + i
    }

    pub fn y(&self) -> usize {
        self.scalar_ring.nvars() + self.n()
    }

    pub fn z(&self) -> usize {
        self.y() + 1
    }

    /// The equation with coefficients in F.
    pub fn equation(&self) -> &FieldElement {
        &self.equation
    }

    /// The equation with scalar denominators cleared; it defines the same X.
    pub fn defining(&self) -> &MultiPoly {
        self.equation.numerator()
    }

    pub fn is_homogeneous(&self) -> bool {
        !self.defining().is_zero() && self.defining().is_homogeneous_in(&self.coordinates(), self.p)
    }
}

/// Partial derivatives of the equation and the support certificate.
#[derive(Debug, Clone)]
pub struct NonsmoothLocus {
    /// d/dx_1, ..., d/dx_n, d/dy, d/dz.
    pub generators: Vec<FieldElement>,
    /// x-partials vanish, d/dy = -z^(p-1) and d/dz = y z^(p-2).
    pub partials_match: bool,
    /// Every generator is divisible by z^(p-2) and z^(p-1) is one of them up
    /// to sign, so the locus and {z = 0} have the same support on X.
    pub support_is_z_zero: bool,
}

pub fn nonsmooth_generators(h: &HypersurfaceSpec) -> NonsmoothLocus {
    let generators: Vec<FieldElement> = h.coordinates().iter().map(|&v| h.equation.partial_derivative(v)).collect();
    let r = h.ring();
    let p = u64::from(h.p);
    let y = FieldElement::var(r, h.y());
    let z = FieldElement::var(r, h.z());
    let n = h.n();
    let partials_match = generators[..n].iter().all(FieldElement::is_zero)
        && generators[n] == -&z.pow(p - 1)
        && generators[n + 1] == &y * &z.pow(p - 2);
    let zp2 = z.pow(p - 2);
    let zp1 = z.pow(p - 1);
    let divisible = generators.iter().all(|g| {
        g.as_polynomial().is_some_and(|g| zp2.numerator().divides(g))
    });
    let has_power = generators.iter().any(|g| g == &zp1 || g == &(-&zp1));
    NonsmoothLocus { generators, partials_match, support_is_z_zero: divisible && has_power }
}

/// Regularity of the Fermat hypersurface x_0^p + sum t_i x_i^p = 0, which is
/// equivalent to p-independence of the t_i.
pub fn fermat_regular(t: &[FieldElement]) -> Result<bool, KollarError> {
    Ok(is_p_independent(t)?)
}

/// As [`fermat_regular`] for sum c_i x_i^p = 0 with arbitrary coefficients:
/// divides by the first nonzero coefficient and tests the other ratios.
pub fn fermat_regular_general(coeffs: &[FieldElement]) -> Result<bool, KollarError> {
    let pivot = coeffs.iter().position(|c| !c.is_zero()).ok_or(KollarError::AllZero)?;
    let ratios: Vec<FieldElement> = coeffs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(_, c)| c.checked_div(&coeffs[pivot]))
        .collect::<Result<_, _>>()?;
    fermat_regular(&ratios)
}

/// Eisenstein at `prime` for `f` viewed as a polynomial in `var`: leading
/// coefficient a nonzero constant, other coefficients divisible by `prime`,
/// constant coefficient not divisible by `prime`^2.
pub fn eisenstein_check(f: &MultiPoly, var: usize, prime: &MultiPoly) -> bool {
    let coeffs = f.coefficients_in(var);
    let Some((lead, rest)) = coeffs.split_last() else {
        return false;
    };
    if rest.is_empty() || !lead.is_constant() || lead.is_zero() {
        return false;
    }
    let square = prime.pow(2);
    rest.iter().all(|c| prime.divides(c)) && !square.divides(&rest[0])
}

/// The irreducibility certificate over E = F(t_i^(1/p) : all generators).
#[derive(Debug, Clone)]
pub struct EisensteinCertificate {
    /// Ring of E with coordinates and the new variable v.
    pub ring: Arc<Ring>,
    /// The equation after x_1 = (v - y - sum_{i>=2} l_i x_i) / l_1, l_i^p = t_i.
    pub transformed: FieldElement,
    /// `transformed` equals v^p - y z^(p-1).
    pub identity_holds: bool,
    /// Eisenstein at the prime y, in the variable v.
    pub eisenstein: bool,
}

/// p-th roots of the scalars inside E, with E's ring extended by `extra`.
pub(crate) fn scalar_roots(
    h: &HypersurfaceSpec,
    extra: &[String],
) -> Result<(Arc<Ring>, Vec<FieldElement>), KollarError> {
    let all: Vec<usize> = (0..h.scalar_ring.nvars()).collect();
    let (e_scalars, embed) = root_extension(&h.scalar_ring, &all)?;
    let ring = joint_ring(&e_scalars, extra)?;
    let roots = h
        .scalars
        .iter()
        .map(|t| {
            let te = embed.apply(t)?;
            Ok(lift(&te.pth_root()?, &ring))
        })
        .collect::<Result<Vec<_>, FieldError>>()?;
    Ok((ring, roots))
}

pub fn eisenstein_certificate(h: &HypersurfaceSpec) -> Result<EisensteinCertificate, KollarError> {
    let n = h.n();
    let mut extra = coordinate_names(n);
    let mut v_name = "v".to_string();
    while extra.contains(&v_name) || h.scalar_ring.var_names().contains(&v_name) {
        v_name.push('_');
    }
    extra.push(v_name);
    let (ring, lambda) = scalar_roots(h, &extra)?;
    let off = h.scalar_ring.nvars();
    let var = |k: usize| FieldElement::var(&ring, off + k);
    let (x, y, z, v) = ((0..n).map(var).collect::<Vec<_>>(), var(n), var(n + 1), var(n + 2));
    let eq = kollar_equation(&ring, off, h.p, &lambda.iter().map(|l| l.pow(u64::from(h.p))).collect::<Vec<_>>());

    let mut shifted = &v - &y;
    for i in 1..n {
        shifted = &shifted - &(&lambda[i] * &x[i]);
    }
    let x1 = shifted.checked_div(&lambda[0])?;
    let transformed = eq.substitute_some(&[(off, x1)])?;
    let p = u64::from(h.p);
    let expected = &v.pow(p) - &(&y * &z.pow(p - 1));
    let identity_holds = transformed == expected;
    let eisenstein = transformed
        .as_polynomial()
        .is_some_and(|f| eisenstein_check(f, off + n + 2, y.numerator()));
    Ok(EisensteinCertificate { ring, transformed, identity_holds, eisenstein })
}

/// The coordinate change x'_(n-1) = x_(n-1) + l x_n with l^p = t_n / t_(n-1).
#[derive(Debug, Clone)]
pub struct ProjectiveChange {
    pub lambda: FieldElement,
    pub result: HypersurfaceSpec,
    /// The substituted equation equals the equation with t_n replaced by 0.
    pub identity_holds: bool,
}

pub fn projective_equivalence_step(h: &HypersurfaceSpec) -> Result<ProjectiveChange, KollarError> {
    let n = h.n();
    if n < 2 {
        return Err(KollarError::BadIndex(n));
    }
    let (prev, last) = (&h.scalars[n - 2], &h.scalars[n - 1]);
    if prev.is_zero() {
        return Err(KollarError::ZeroDivisor);
    }
    let lambda = last.checked_div(prev)?.pth_root().map_err(|_| KollarError::NotAPthPower)?;
    let mut t_new = h.scalars.clone();
    t_new[n - 1] = FieldElement::zero(&h.scalar_ring);
    let result = kollar_hypersurface(h.p, n, &t_new)?;
    // Old coordinates in terms of new: x_(n-1) = x'_(n-1) - l x_n.
    let r = h.ring();
    let image = &FieldElement::var(r, h.x(n - 2)) - &(&lift(&lambda, r) * &FieldElement::var(r, h.x(n - 1)));
    let substituted = h.equation.substitute_some(&[(h.x(n - 2), image)])?;
    let identity_holds = substituted == *result.equation();
    Ok(ProjectiveChange { lambda, result, identity_holds })
}

/// Constructive pieces of the argument that X is not unirational when the
/// scalars are p-independent generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnirationalityIngredients {
    /// X is regular (the Fermat criterion on the scalars).
    pub regular: bool,
    /// For n = 1: the non-smooth locus z = 0 is nonempty on X.
    pub nonsmooth_locus_nonempty: bool,
    /// For n >= 2: replacing t_n by s = t_n / t_(n-1) keeps a p-independent
    /// presentation of F.
    pub exchange_ok: Option<bool>,
    /// Over E = F(s^(1/p)) the last coefficient can be eliminated, making X a cone.
    pub cone_reduction_ok: Option<bool>,
    /// Rank of t_1, ..., t_(n-1) over E, expected n - 1.
    pub remaining_rank: Option<usize>,
    /// Dimension of the module of imperfection of E/F, expected 1.
    pub imperfection_dim: Option<usize>,
}

impl UnirationalityIngredients {
    pub fn all_hold(&self, n: usize) -> bool {
        self.regular
            && self.nonsmooth_locus_nonempty
            && (n < 2
                || (self.exchange_ok == Some(true)
                    && self.cone_reduction_ok == Some(true)
                    && self.remaining_rank == Some(n - 1)
                    && self.imperfection_dim == Some(1)))
    }
}

/// Requires the scalars to be exactly the generators of F, in order.
pub fn unirationality_ingredients(h: &HypersurfaceSpec) -> Result<UnirationalityIngredients, KollarError> {
    let n = h.n();
    let fr = h.scalar_ring.clone();
    let generators: Vec<FieldElement> = (0..fr.nvars()).map(|i| FieldElement::var(&fr, i)).collect();
    if h.scalars != generators {
        return Err(KollarError::UnsupportedPresentation);
    }
    let regular = fermat_regular(&h.scalars)?;
    // On z = 0 the equation restricts to y^p + sum t_i x_i^p, which is not a
    // unit, so the locus has a closed point.
    let restricted = h.equation.substitute_some(&[(h.z(), FieldElement::zero(h.ring()))])?;
    let nonsmooth_locus_nonempty = !restricted.is_zero() && restricted.as_constant().is_none();
    let mut out = UnirationalityIngredients {
        regular,
        nonsmooth_locus_nonempty,
        exchange_ok: None,
        cone_reduction_ok: None,
        remaining_rank: None,
        imperfection_dim: None,
    };
    if n < 2 {
        return Ok(out);
    }
    let exchanged = exchange_step(&h.scalars, n - 1, n - 2);
    out.exchange_ok = Some(exchanged.is_ok());

    // Present F by (t_1, ..., t_(n-1), s) with t_n = s t_(n-1).
    let mut names = fr.var_names().to_vec();
    let mut s_name = "s".to_string();
    while names.contains(&s_name) {
        s_name.push('_');
    }
    names[n - 1] = s_name;
    let fs = Ring::from_names(fr.field().clone(), names)?;
    let fam: Vec<FieldElement> = (0..n).map(|i| FieldElement::var(&fs, i)).collect();
    let adjoined = adjoin_root_rank(&fam, n - 1)?;
    out.remaining_rank = Some(adjoined.remaining_rank);
    out.imperfection_dim = Some(adjoined.imperfection_dim);

    let e = &adjoined.extension_ring;
    let w = FieldElement::var(e, n - 1);
    let mut t_e: Vec<FieldElement> = (0..n - 1).map(|i| FieldElement::var(e, i)).collect();
    t_e.push(&w.pow(u64::from(h.p)) * &t_e[n - 2]);
    let over_e = kollar_hypersurface(h.p, n, &t_e)?;
    let change = projective_equivalence_step(&over_e)?;
    out.cone_reduction_ok = Some(change.identity_holds && change.lambda == w && !change.result.defining().involves(change.result.x(n - 1)));
    Ok(out)
}
