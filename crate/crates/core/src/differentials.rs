//! Differentials of F = GF(p^m)(t_1, ..., t_n) relative to its declared
//! presentation: the dt_i form a basis of the differential module, so the
//! span of df_1, ..., df_r is the row space of the Jacobian.

use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{common_denominator, same_ring, FieldElement, FieldError, MultiPoly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DifferentialError {
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("division by zero element")]
    ZeroDivisor,
    #[error("family is not p-independent")]
    NotPIndependent,
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("root can only be adjoined to a declared generator")]
    UnsupportedRoot,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A family of field elements with its Jacobian against chosen generators.
#[derive(Debug, Clone)]
pub struct DifferentialSpan {
    elements: Vec<FieldElement>,
    generators: Vec<usize>,
    jacobian: Vec<Vec<FieldElement>>,
    rank: usize,
}

fn common_ring(elems: &[FieldElement]) -> Result<Option<Arc<Ring>>, DifferentialError> {
    let Some(first) = elems.first() else {
        return Ok(None);
    };
    if elems.iter().any(|e| !same_ring(e.ring(), first.ring())) {
        return Err(DifferentialError::MixedFields);
    }
    Ok(Some(first.ring().clone()))
}

impl DifferentialSpan {
    /// Uses every variable of the elements' ring as a generator.
    pub fn new(elems: &[FieldElement]) -> Result<DifferentialSpan, DifferentialError> {
        let gens = match common_ring(elems)? {
            Some(r) => (0..r.nvars()).collect(),
            None => Vec::new(),
        };
        Self::with_generators(elems, &gens)
    }

    /// Differentials against the listed variables only; the others are
    /// treated as independent of them.
    pub fn with_generators(elems: &[FieldElement], generators: &[usize]) -> Result<DifferentialSpan, DifferentialError> {
        if let Some(r) = common_ring(elems)? {
            if let Some(&bad) = generators.iter().find(|&&g| g >= r.nvars()) {
                return Err(DifferentialError::BadIndex(bad));
            }
        }
        let jacobian: Vec<Vec<FieldElement>> =
            elems.iter().map(|f| generators.iter().map(|&g| f.partial_derivative(g)).collect()).collect();
        let rank = jacobian_rank(&jacobian);
        Ok(DifferentialSpan { elements: elems.to_vec(), generators: generators.to_vec(), jacobian, rank })
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn jacobian(&self) -> &[Vec<FieldElement>] {
        &self.jacobian
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_p_independent(&self) -> bool {
        self.rank == self.elements.len()
    }
}

/// Rank of a matrix over the fraction field by fraction-free elimination.
///
/// Rows are cleared of denominators first; pivots are taken as the first
/// nonzero entry in column order, so the result is deterministic.
pub fn jacobian_rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<MultiPoly>> = rows
        .iter()
        .filter_map(|row| {
            let d = common_denominator(row)?;
            Some(row.iter().map(|e| e.clear_with(&d)).collect())
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let Some(ring) = rows.iter().flatten().next().map(|e| e.ring().clone()) else {
        return 0;
    };
    let mut prev = MultiPoly::one(&ring);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = m[r][col].clone();
            for c in col..ncols {
                let cross = &(&pivot * &m[r][c]) - &(&factor * &m[rank][c]);
                m[r][c] = cross.exact_div(&prev).expect("fraction-free elimination divides exactly");
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// dim of the span of the differentials of `elems`.
pub fn p_independence_rank(elems: &[FieldElement]) -> Result<usize, DifferentialError> {
    Ok(DifferentialSpan::new(elems)?.rank())
}

pub fn is_p_independent(elems: &[FieldElement]) -> Result<bool, DifferentialError> {
    Ok(DifferentialSpan::new(elems)?.is_p_independent())
}

/// Replaces `elems[i]` by `elems[i] / elems[j]`, requiring p-independence
/// before and after.
pub fn exchange_step(elems: &[FieldElement], i: usize, j: usize) -> Result<Vec<FieldElement>, DifferentialError> {
    let n = elems.len();
    if i >= n {
        return Err(DifferentialError::BadIndex(i));
    }
    if j >= n {
        return Err(DifferentialError::BadIndex(j));
    }
    if elems[j].is_zero() {
        return Err(DifferentialError::ZeroDivisor);
    }
    if !is_p_independent(elems)? {
        return Err(DifferentialError::NotPIndependent);
    }
    let mut out = elems.to_vec();
    out[i] = elems[i].checked_div(&elems[j])?;
    if !is_p_independent(&out)? {
        return Err(DifferentialError::NotPIndependent);
    }
    Ok(out)
}

/// Outcome of adjoining the p-th root of one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjoinedRoot {
    /// Rank over E of the differentials of the other elements.
    pub remaining_rank: usize,
    /// dim of the relative differentials of E over F.
    pub relative_dim: usize,
    /// dim of the kernel of the base-changed differentials of F into those of E.
    pub imperfection_dim: usize,
    /// The ring presenting E, with the root variable renamed.
    pub extension_ring: Arc<Ring>,
}

/// Presents E = F(t^(1/p)) for the generator `t = elems[root_of]` by
/// renaming it to a fresh variable u with t = u^p, and recomputes ranks there.
pub fn adjoin_root_rank(elems: &[FieldElement], root_of: usize) -> Result<AdjoinedRoot, DifferentialError> {
    let target = elems.get(root_of).ok_or(DifferentialError::BadIndex(root_of))?;
    if !is_p_independent(elems)? {
        return Err(DifferentialError::NotPIndependent);
    }
    let ring = target.ring().clone();
    let gen = target
        .as_polynomial()
        .filter(|f| f.is_monomial() && f.leading_coeff() == f.field().one() && f.total_degree() == Some(1))
        .and_then(|f| f.support_vars().first().copied())
        .ok_or(DifferentialError::UnsupportedRoot)?;
    let (e_ring, embedding) = root_extension(&ring, &[gen])?;
    let embed = |x: &FieldElement| embedding.apply(x);

    let remaining: Vec<FieldElement> =
        elems.iter().enumerate().filter(|&(k, _)| k != root_of).map(|(_, x)| embed(x)).collect::<Result<_, _>>()?;
    let remaining_rank = p_independence_rank(&remaining)?;

    // Images of dt_1, ..., dt_n: their rank is the image of the base change.
    let images: Vec<FieldElement> =
        (0..ring.nvars()).map(|k| embed(&FieldElement::var(&ring, k))).collect::<Result<_, _>>()?;
    let image_rank = if images.is_empty() { 0 } else { p_independence_rank(&images)? };
    let imperfection_dim = ring.nvars() - image_rank;
    let relative_dim = e_ring.nvars() - image_rank;
    // Cartier's equality with transcendence degree 0.
    assert_eq!(relative_dim, imperfection_dim, "relative differentials and imperfection disagree");
    Ok(AdjoinedRoot { remaining_rank, relative_dim, imperfection_dim, extension_ring: e_ring })
}

/// Ring presenting F(t_g^(1/p) : g in `roots`): each listed variable `t` is
/// replaced by `u_t`, and the returned substitution embeds F via t = u_t^p.
pub fn root_extension(
    ring: &Arc<Ring>,
    roots: &[usize],
) -> Result<(Arc<Ring>, crate::exactfield::Substitution), FieldError> {
    let mut names: Vec<String> = ring.var_names().to_vec();
    for &g in roots {
        let mut fresh = format!("u_{}", ring.var_name(g));
        while names.contains(&fresh) {
            fresh.insert(0, 'u');
        }
        names[g] = fresh;
    }
    let e_ring = Ring::from_names(ring.field().clone(), names)?;
    let p = u64::from(ring.characteristic());
    let images: Vec<FieldElement> = (0..ring.nvars())
        .map(|k| {
            let v = FieldElement::var(&e_ring, k);
            if roots.contains(&k) {
                v.pow(p)
            } else {
                v
            }
        })
        .collect();
    let sub = crate::exactfield::Substitution::new(&images)?;
    Ok((e_ring, sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Gf;

    fn gens(p: u32, n: usize) -> (Arc<Ring>, Vec<FieldElement>) {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let r = Ring::from_names(Gf::prime(p).unwrap(), names).unwrap();
        let t = (0..n).map(|i| FieldElement::var(&r, i)).collect();
        (r, t)
    }

    /// Rank as the size of the largest nonvanishing minor (Laplace expansion).
    fn minor_rank(m: &[Vec<FieldElement>]) -> usize {
        fn det(m: &[Vec<FieldElement>], rows: &[usize], cols: &[usize]) -> FieldElement {
            if rows.len() == 1 {
                return m[rows[0]][cols[0]].clone();
            }
            let ring = m[0][0].ring();
            let mut acc = FieldElement::zero(ring);
            for (k, &c) in cols.iter().enumerate() {
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = &m[rows[0]][c] * &det(m, &rows[1..], &sub);
                acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
        (1..=r.min(c))
            .rev()
            .find(|&k| subsets(r, k).iter().any(|rs| subsets(c, k).iter().any(|cs| !det(m, rs, cs).is_zero())))
            .unwrap_or(0)
    }

    #[test]
    fn generators_have_full_rank() {
        for (p, n) in [(2, 1), (3, 3), (5, 2)] {
            let (_, t) = gens(p, n);
            assert_eq!(p_independence_rank(&t).unwrap(), n);
        }
    }

    #[test]
    fn frobenius_image_has_no_differential() {
        let (_, t) = gens(3, 1);
        assert_eq!(p_independence_rank(&[t[0].clone(), t[0].pow(3)]).unwrap(), 1);
    }

    #[test]
    fn product_and_generator() {
        let (_, t) = gens(3, 2);
        let fam = [&t[0] * &t[1], t[1].clone()];
        let span = DifferentialSpan::new(&fam).unwrap();
        assert_eq!(span.rank(), 2);
        assert_eq!(span.rank(), minor_rank(span.jacobian()));
    }

    #[test]
    fn independence_verdicts() {
        let (_, t) = gens(2, 2);
        assert!(is_p_independent(&t).unwrap());
        assert!(!is_p_independent(&[t[0].clone(), t[1].clone(), &t[0] + &t[1]]).unwrap());
        assert!(is_p_independent(&[t[0].checked_div(&t[1]).unwrap(), t[1].clone()]).unwrap());
    }

    #[test]
    fn mixed_fields_rejected() {
        let (_, a) = gens(3, 1);
        let (_, b) = gens(3, 2);
        assert_eq!(p_independence_rank(&[a[0].clone(), b[1].clone()]), Err(DifferentialError::MixedFields));
    }

    #[test]
    fn exchange_steps() {
        let (_, t) = gens(3, 2);
        let out = exchange_step(&t, 1, 0).unwrap();
        assert_eq!(out[1], t[1].checked_div(&t[0]).unwrap());
        assert_eq!(p_independence_rank(&out).unwrap(), 2);
        let (_, s) = gens(3, 1);
        assert_eq!(exchange_step(&s, 0, 0), Err(DifferentialError::NotPIndependent));
        let fam = [&t[0] * &t[1], t[1].clone()];
        assert_eq!(exchange_step(&fam, 0, 1).unwrap(), t);
        let (r, _) = gens(3, 2);
        let with_zero = [t[0].clone(), FieldElement::zero(&r)];
        assert_eq!(exchange_step(&with_zero, 0, 1), Err(DifferentialError::ZeroDivisor));
    }

    #[test]
    fn adjoining_roots() {
        let (_, t) = gens(3, 3);
        let a = adjoin_root_rank(&t, 2).unwrap();
        assert_eq!((a.remaining_rank, a.relative_dim, a.imperfection_dim), (2, 1, 1));
        let (_, s) = gens(5, 1);
        assert_eq!(adjoin_root_rank(&s, 0).unwrap().remaining_rank, 0);
        let (_, u) = gens(2, 2);
        let a = adjoin_root_rank(&u, 1).unwrap();
        assert_eq!(a.remaining_rank, 1);
        assert_eq!(a.extension_ring.var_names(), ["t1", "u_t2"]);
    }

    #[test]
    fn adjoin_requires_generator_and_independence() {
        let (_, t) = gens(3, 2);
        let fam = [t[0].clone(), &t[0] * &t[1]];
        assert_eq!(adjoin_root_rank(&fam, 1), Err(DifferentialError::UnsupportedRoot));
        let dep = [t[0].clone(), t[0].pow(3)];
        assert_eq!(adjoin_root_rank(&dep, 0), Err(DifferentialError::NotPIndependent));
    }

    #[test]
    fn bareiss_agrees_with_minors_on_rational_entries() {
        let (_, t) = gens(5, 3);
        let fams = vec![
            vec![t[0].checked_div(&t[1]).unwrap(), &t[1] * &t[2], &(&t[0] + &t[2]) * &t[1]],
            vec![t[0].pow(2), &t[0] * &t[1], t[1].pow(2)],
            vec![&t[0] + &t[1].pow(5), t[2].checked_div(&(&t[0] + &t[1])).unwrap()],
        ];
        for fam in fams {
            let span = DifferentialSpan::new(&fam).unwrap();
            assert_eq!(span.rank(), minor_rank(span.jacobian()), "{fam:?}");
        }
    }
}
