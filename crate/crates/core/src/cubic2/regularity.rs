use super::{cubic_surface, CubicError, CubicSurfaceSpec, QuadElem, QuadExt, X1, X2, Y1, Y2};
use crate::differentials::p_independence_rank;
use crate::exactfield::{same_ring, FieldElement};

/// A closed point of X with residue field F[θ]/(θ² - c), given in
/// homogeneous coordinates normalized so that `coords[chart] = 1`.
#[derive(Debug, Clone)]
pub struct InseparablePoint {
    chart: usize,
    ext: QuadExt,
    coords: [QuadElem; 4],
}

impl InseparablePoint {
    pub fn new(chart: usize, c: &FieldElement, coords: [QuadElem; 4]) -> Result<InseparablePoint, CubicError> {
        let ext = QuadExt::new(c.clone()).ok_or(CubicError::NotInseparable)?;
        if chart >= 4 || coords[chart] != ext.one() {
            return Err(CubicError::BadChart);
        }
        if coords.iter().any(|q| !same_ring(q.a.ring(), c.ring()) || !same_ring(q.b.ring(), c.ring())) {
            return Err(CubicError::MixedFields);
        }
        Ok(InseparablePoint { chart, ext, coords })
    }

    /// (1 : 0 : √t1 : 0).
    pub fn on_first_conic(s: &CubicSurfaceSpec) -> Result<InseparablePoint, CubicError> {
        Self::root_point(X1, Y1, s.t1())
    }

    /// (0 : 1 : 0 : √t2).
    pub fn on_second_conic(s: &CubicSurfaceSpec) -> Result<InseparablePoint, CubicError> {
        Self::root_point(X2, Y2, s.t2())
    }

    fn root_point(chart: usize, rooted: usize, c: &FieldElement) -> Result<InseparablePoint, CubicError> {
        let ext = QuadExt::new(c.clone()).ok_or(CubicError::NotInseparable)?;
        let mut coords = [ext.zero(), ext.zero(), ext.zero(), ext.zero()];
        coords[chart] = ext.one();
        coords[rooted] = ext.theta();
        Self::new(chart, c, coords)
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn residue_field(&self) -> &QuadExt {
        &self.ext
    }

    pub fn coords(&self) -> &[QuadElem; 4] {
        &self.coords
    }
}

/// Class of the dehomogenized equation in m/m², as coordinates over the
/// residue field with respect to a basis of m/m².
#[derive(Debug, Clone)]
pub struct LocalRegularity {
    pub cotangent_class: Vec<QuadElem>,
    pub regular: bool,
}

fn from_class(cotangent_class: Vec<QuadElem>) -> LocalRegularity {
    let regular = cotangent_class.iter().any(|c| !c.is_zero());
    LocalRegularity { cotangent_class, regular }
}

/// Coefficients of `f` as a polynomial in `var`, lowest degree first, with
/// the remaining variables kept in the coefficients.
fn univariate(f: &FieldElement, var: usize) -> Vec<FieldElement> {
    let den = FieldElement::from(f.denominator().clone());
    debug_assert!(!den.involves(var));
    f.numerator()
        .coefficients_in(var)
        .into_iter()
        .map(|c| FieldElement::from(c).checked_div(&den).expect("nonzero denominator"))
        .collect()
}

/// Division with remainder by a monic divisor.
fn div_rem(a: &[FieldElement], monic: &[FieldElement]) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let mut rem: Vec<FieldElement> = a.to_vec();
    let d = monic.len() - 1;
    if rem.len() <= d {
        return (Vec::new(), rem);
    }
    let mut quot = vec![FieldElement::zero(monic[0].ring()); rem.len() - d];
    for i in (d..rem.len()).rev() {
        let lead = rem[i].clone();
        if lead.is_zero() {
            continue;
        }
        quot[i - d] = lead.clone();
        for (j, m) in monic.iter().enumerate() {
            let sub = &lead * m;
            rem[i - d + j] = &rem[i - d + j] - &sub;
        }
    }
    rem.truncate(d);
    (quot, rem)
}

/// Decides whether the local ring of X at an inseparable point is regular.
///
/// With v_k the first affine coordinate whose value a_k + b_k θ is not in F,
/// the maximal ideal is generated by g = (v_k - a_k)² - b_k² c and
/// w_j = v_j - a_j - (b_j / b_k)(v_k - a_k). Writing the equation as
/// f(v_k, w) = g(v_k) h(v_k) + Σ w_j f_j(v_k) + O(w²), its class in m/m² is
/// (h(α), f_j(α)) with α the value of v_k.
pub fn local_regularity_at(s: &CubicSurfaceSpec, pt: &InseparablePoint) -> Result<LocalRegularity, CubicError> {
    if !same_ring(pt.ext.ring(), s.scalar_ring()) {
        return Err(CubicError::MixedFields);
    }
    let ring = s.ring().clone();
    let ext = QuadExt::new(s.lift(pt.ext.c())).ok_or(CubicError::NotInseparable)?;
    let lifted = |q: &QuadElem| QuadElem { a: s.lift(&q.a), b: s.lift(&q.b) };
    let coords: Vec<QuadElem> = pt.coords.iter().map(lifted).collect();
    let nscal = s.scalar_ring().nvars();
    let mut values: Vec<QuadElem> = (0..nscal).map(|i| ext.from_base(FieldElement::var(&ring, i))).collect();
    values.extend(coords.iter().cloned());

    let f = s.equation().substitute_some(&[(s.coord(pt.chart), FieldElement::one(&ring))])?;
    if !ext.eval(&f, &values)?.is_zero() {
        return Err(CubicError::PointNotOnSurface);
    }
    let affine: Vec<usize> = (0..4).filter(|&k| k != pt.chart).collect();
    let Some(k) = affine.iter().copied().find(|&k| !coords[k].is_base()) else {
        let grad = affine.iter().map(|&j| ext.eval(&f.partial_derivative(s.coord(j)), &values)).collect::<Result<_, _>>()?;
        return Ok(from_class(grad));
    };
    let vk = s.coord(k);
    let (ak, bk) = (&coords[k].a, &coords[k].b);
    let shift = &FieldElement::var(&ring, vk) - ak;
    let others: Vec<usize> = affine.iter().copied().filter(|&j| j != k).collect();
    let subs = others
        .iter()
        .map(|&j| {
            let slope = coords[j].b.checked_div(bk)?;
            let image = &(&FieldElement::var(&ring, s.coord(j)) + &coords[j].a) + &(&slope * &shift);
            Ok((s.coord(j), image))
        })
        .collect::<Result<Vec<_>, CubicError>>()?;
    let f = f.substitute_some(&subs)?;

    // In the new coordinates the point has w_j = 0.
    let mut at = values.clone();
    for &j in &others {
        at[s.coord(j)] = ext.zero();
    }
    let mut class = Vec::with_capacity(3);
    let zeros: Vec<(usize, FieldElement)> = others.iter().map(|&j| (s.coord(j), FieldElement::zero(&ring))).collect();
    let f0 = f.substitute_some(&zeros)?;
    let c = ext.c().clone();
    let g = [&ak.pow(2) - &(&bk.pow(2) * &c), -&(&FieldElement::from_int(&ring, 2) * ak), FieldElement::one(&ring)];
    let (h, rem) = div_rem(&univariate(&f0, vk), &g);
    if rem.iter().any(|r| !r.is_zero()) {
        return Err(CubicError::PointNotOnSurface);
    }
    let (_, h_red) = div_rem(&h, &g);
    let coeff = |i: usize| h_red.get(i).cloned().unwrap_or_else(|| FieldElement::zero(&ring));
    let (r0, r1) = (coeff(0), coeff(1));
    class.push(QuadElem { a: &r0 + &(&r1 * ak), b: &r1 * bk });
    for &j in &others {
        class.push(ext.eval(&f.partial_derivative(s.coord(j)), &at)?);
    }
    Ok(from_class(class))
}

/// The same test at an F-rational point, where m/m² is spanned by the
/// translated affine coordinates and the class is the gradient.
pub fn local_regularity_at_rational(s: &CubicSurfaceSpec, coords: &[FieldElement; 4]) -> Result<LocalRegularity, CubicError> {
    if coords.iter().any(|c| !same_ring(c.ring(), s.scalar_ring())) {
        return Err(CubicError::MixedFields);
    }
    let chart = coords.iter().position(|c| !c.is_zero()).ok_or(CubicError::AllZero)?;
    let pivot = coords[chart].clone();
    let normalized: Vec<FieldElement> = coords.iter().map(|c| c.checked_div(&pivot)).collect::<Result<_, _>>()?;
    let ring = s.ring().clone();
    let f = s.equation().substitute_some(&[(s.coord(chart), FieldElement::one(&ring))])?;
    let point: Vec<(usize, FieldElement)> = (0..4).map(|k| (s.coord(k), s.lift(&normalized[k]))).collect();
    if !f.substitute_some(&point)?.is_zero() {
        return Err(CubicError::PointNotOnSurface);
    }
    let grad = (0..4)
        .filter(|&k| k != chart)
        .map(|k| {
            let a = f.partial_derivative(s.coord(k)).substitute_some(&point)?;
            Ok(QuadElem { b: FieldElement::zero(&ring), a })
        })
        .collect::<Result<_, CubicError>>()?;
    Ok(from_class(grad))
}

/// F(√t1) ⊗ F(√t2) is a field iff t1, t2 are 2-independent.
pub fn tensor_field_test(t1: &FieldElement, t2: &FieldElement) -> Result<bool, CubicError> {
    if t1.is_zero() || t2.is_zero() {
        return Err(CubicError::ZeroScalar);
    }
    Ok(p_independence_rank(&[t1.clone(), t2.clone()])? == 2)
}

#[derive(Debug, Clone)]
pub enum StratCase {
    /// Both inseparable points of D are regular and F(√t1) ⊗ F(√t2) is a field.
    Regular { at_first: bool, at_second: bool, tensor_field: bool },
    /// t_dep = α² + β² t_base, so (y + (α + β√t_base) x)² = y² + t_dep x² over
    /// F(√t_base) and the second conic of D becomes a double line. The point
    /// of the first conic stays regular, which gives normality.
    NormalSingular {
        base_is_t1: bool,
        alpha: FieldElement,
        beta: FieldElement,
        decomposition_holds: bool,
        square_identity_holds: bool,
        regular_point_ok: bool,
    },
    /// After x_i ↦ x_i / √t_i the equation is y1 (y1 + x1)² + y2 (y2 + x2)², and
    /// every point (λ : μ : λ : μ) is singular.
    NonNormal { normalization_holds: bool, singular_points: Vec<[FieldElement; 4]>, all_singular: bool },
}

#[derive(Debug, Clone)]
pub struct Stratification {
    pub n: usize,
    pub case: StratCase,
}

impl Stratification {
    /// Every certificate of the reported case holds.
    pub fn verified(&self) -> bool {
        match &self.case {
            StratCase::Regular { at_first, at_second, tensor_field } => *at_first && *at_second && *tensor_field,
            StratCase::NormalSingular { decomposition_holds, square_identity_holds, regular_point_ok, .. } => {
                *decomposition_holds && *square_identity_holds && *regular_point_ok
            }
            StratCase::NonNormal { normalization_holds, all_singular, .. } => *normalization_holds && *all_singular,
        }
    }
}

pub fn regularity_stratification(t1: &FieldElement, t2: &FieldElement) -> Result<Stratification, CubicError> {
    let s = cubic_surface(t1, t2)?;
    let n = p_independence_rank(&[t1.clone(), t2.clone()])?;
    let case = match n {
        2 => StratCase::Regular {
            at_first: local_regularity_at(&s, &InseparablePoint::on_first_conic(&s)?)?.regular,
            at_second: local_regularity_at(&s, &InseparablePoint::on_second_conic(&s)?)?.regular,
            tensor_field: tensor_field_test(t1, t2)?,
        },
        1 => rank_one(&s)?,
        _ => rank_zero(&s)?,
    };
    Ok(Stratification { n, case })
}

fn rank_one(s: &CubicSurfaceSpec) -> Result<StratCase, CubicError> {
    let scal = s.scalar_ring().clone();
    let gen_for = |t: &FieldElement| (0..scal.nvars()).find(|&g| !t.partial_derivative(g).is_zero());
    let (base_is_t1, base, dep, g) = match gen_for(s.t1()) {
        Some(g) => (true, s.t1(), s.t2(), g),
        None => (false, s.t2(), s.t1(), gen_for(s.t2()).ok_or(CubicError::NotInseparable)?),
    };
    // With dt_dep = β² dt_base, α² = t_dep - β² t_base has zero differential.
    let beta_sq = dep.partial_derivative(g).checked_div(&base.partial_derivative(g))?;
    let alpha_sq = dep - &(&beta_sq * base);
    let beta = beta_sq.pth_root()?;
    let alpha = alpha_sq.pth_root()?;
    let decomposition_holds = *dep == &alpha.pow(2) + &(&beta.pow(2) * base);

    let (xv, yv) = if base_is_t1 { (X2, Y2) } else { (X1, Y1) };
    let ext = QuadExt::new(s.lift(base)).ok_or(CubicError::NotInseparable)?;
    let linear = |v: usize| ext.from_base(s.coord_var(v));
    let coeff = QuadElem { a: s.lift(&alpha), b: s.lift(&beta) };
    let form = ext.add(&linear(yv), &ext.mul(&coeff, &linear(xv)));
    let square = ext.mul(&form, &form);
    let conic = &s.coord_var(yv).pow(2) + &(&s.lift(dep) * &s.coord_var(xv).pow(2));
    let square_identity_holds = square == ext.from_base(conic);

    let regular_point = if base_is_t1 { InseparablePoint::on_first_conic(s)? } else { InseparablePoint::on_second_conic(s)? };
    let regular_point_ok = local_regularity_at(s, &regular_point)?.regular;
    Ok(StratCase::NormalSingular { base_is_t1, alpha, beta, decomposition_holds, square_identity_holds, regular_point_ok })
}

fn rank_zero(s: &CubicSurfaceSpec) -> Result<StratCase, CubicError> {
    let scal = s.scalar_ring().clone();
    let (r1, r2) = (s.t1().pth_root()?, s.t2().pth_root()?);
    let ring = s.ring();
    let subs = [
        (s.coord(X1), s.coord_var(X1).checked_div(&s.lift(&r1))?),
        (s.coord(X2), s.coord_var(X2).checked_div(&s.lift(&r2))?),
    ];
    let normalized = s.equation().substitute_some(&subs)?;
    let one = FieldElement::one(&scal);
    let unit = cubic_surface(&one, &one)?;
    let expected = {
        let v = |k| s.coord_var(k);
        &(&v(Y1) * &(&v(Y1) + &v(X1)).pow(2)) + &(&v(Y2) * &(&v(Y2) + &v(X2)).pow(2))
    };
    let normalization_holds = normalized == expected && *unit.equation() == expected && same_ring(unit.ring(), ring);

    let mut values: Vec<FieldElement> = scal.field().elements().map(|c| FieldElement::constant(&scal, c)).collect();
    values.extend((0..scal.nvars()).map(|g| FieldElement::var(&scal, g)));
    let mut singular_points = Vec::new();
    for l in &values {
        for m in &values {
            if l.is_zero() && m.is_zero() {
                continue;
            }
            singular_points.push([l.clone(), m.clone(), l.clone(), m.clone()]);
        }
    }
    let mut all_singular = true;
    for p in &singular_points {
        all_singular &= !local_regularity_at_rational(&unit, p)?.regular;
    }
    Ok(StratCase::NonNormal { normalization_holds, singular_points, all_singular })
}
