use std::sync::Arc;

use super::{kollar_equation, kollar_hypersurface, scalar_roots, coordinate_names, KollarError};
use crate::exactfield::{FieldElement, FieldError, Ring};

/// A rational map between affine charts of one ambient ring: target
/// variable `target[k]` is sent to `components[k]`, a function of the
/// `source` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    ring: Arc<Ring>,
    source: Vec<usize>,
    target: Vec<usize>,
    components: Vec<FieldElement>,
}

impl RationalMap {
    pub fn new(ring: &Arc<Ring>, source: Vec<usize>, target: Vec<usize>, components: Vec<FieldElement>) -> RationalMap {
        assert_eq!(target.len(), components.len(), "one component per target coordinate");
        RationalMap { ring: ring.clone(), source, target, components }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn source_dim(&self) -> usize {
        self.source.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target.len()
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn components(&self) -> &[FieldElement] {
        &self.components
    }

    fn assignments(&self) -> Vec<(usize, FieldElement)> {
        self.target.iter().copied().zip(self.components.iter().cloned()).collect()
    }

    /// Pulls a function on the target back to the source.
    pub fn pullback(&self, f: &FieldElement) -> Result<FieldElement, FieldError> {
        f.substitute_some(&self.assignments())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RationalMap) -> Result<RationalMap, FieldError> {
        assert_eq!(self.target, next.source, "maps do not compose");
        let components = next.components.iter().map(|c| self.pullback(c)).collect::<Result<_, _>>()?;
        Ok(RationalMap::new(&self.ring, self.source.clone(), next.target.clone(), components))
    }

    /// True iff this is the identity on the generic point.
    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.components.iter().zip(&self.source).all(|(c, &v)| *c == FieldElement::var(&self.ring, v))
    }

    /// Evaluates at a point given by values of the source variables.
    pub fn eval(&self, values: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        let subs: Vec<(usize, FieldElement)> = self.source.iter().copied().zip(values.iter().cloned()).collect();
        self.components.iter().map(|c| c.substitute_some(&subs)).collect()
    }
}

/// A birational parametrization of X over E = F(t_i^(1/p)) on the chart z = 1.
#[derive(Debug, Clone)]
pub struct RationalityWitness {
    /// (s, x_2, ..., x_n) -> (x_1, ..., x_n, y).
    pub forward: RationalMap,
    /// (x_1, ..., x_n, y) -> (s, x_2, ..., x_n).
    pub inverse: RationalMap,
    /// The affine equation pulls back to 0.
    pub pullback_vanishes: bool,
    /// inverse ∘ forward is the identity.
    pub left_inverse: bool,
    /// forward ∘ inverse agrees with the identity modulo the equation.
    pub right_inverse_on_x: bool,
    /// s = c in GF(p), x_i = 0 maps to the point (0 : ... : 0 : c : 1).
    pub hits_obvious_points: bool,
}

impl RationalityWitness {
    pub fn certified(&self) -> bool {
        self.pullback_vanishes && self.left_inverse && self.right_inverse_on_x && self.hits_obvious_points
    }
}

/// Parametrizes X by y = s^p, x_1 = (s - s^p - sum_{i>=2} l_i x_i) / l_1 with
/// l_i^p = t_i, and inverts by s = (y + sum l_i x_i) / z.
pub fn geometric_rationality_witness(p: u32, n: usize, t: &[FieldElement]) -> Result<RationalityWitness, KollarError> {
    let h = kollar_hypersurface(p, n, t)?;
    let mut extra = coordinate_names(n);
    let mut s_name = "s".to_string();
    while extra.contains(&s_name) || h.scalar_ring().var_names().contains(&s_name) {
        s_name.push('_');
    }
    extra.push(s_name);
    let (ring, lambda) = scalar_roots(&h, &extra)?;
    let off = h.scalar_ring().nvars();
    let (xi, yi, zi, si) = (|k: usize| off + k, off + n, off + n + 1, off + n + 2);
    let var = |v: usize| FieldElement::var(&ring, v);
    let p64 = u64::from(p);

    let s = var(si);
    let mut x1 = &s - &s.pow(p64);
    for i in 1..n {
        x1 = &x1 - &(&lambda[i] * &var(xi(i)));
    }
    let x1 = x1.checked_div(&lambda[0])?;
    let mut fwd_target: Vec<usize> = (0..n).map(xi).collect();
    fwd_target.push(yi);
    let mut fwd_components = vec![x1];
    fwd_components.extend((1..n).map(|i| var(xi(i))));
    fwd_components.push(s.pow(p64));
    let mut fwd_source = vec![si];
    fwd_source.extend((1..n).map(xi));
    let forward = RationalMap::new(&ring, fwd_source.clone(), fwd_target.clone(), fwd_components);

    let z = var(zi);
    let mut s_of = var(yi);
    for (i, l) in lambda.iter().enumerate() {
        s_of = &s_of + &(l * &var(xi(i)));
    }
    let mut inv_components = vec![s_of.checked_div(&z)?];
    inv_components.extend((1..n).map(|i| var(xi(i))));
    let dehomogenize = |f: &FieldElement| f.substitute_some(&[(zi, FieldElement::one(&ring))]);
    let inv_components = inv_components.iter().map(dehomogenize).collect::<Result<Vec<_>, _>>()?;
    let inverse = RationalMap::new(&ring, fwd_target, fwd_source, inv_components);

    let scalars_p: Vec<FieldElement> = lambda.iter().map(|l| l.pow(p64)).collect();
    let affine = dehomogenize(&kollar_equation(&ring, off, p, &scalars_p))?;
    let pullback_vanishes = forward.pullback(&affine)?.is_zero();
    let left_inverse = forward.then(&inverse)?.is_identity();
    let round = inverse.then(&forward)?;
    let right_inverse_on_x = round
        .components()
        .iter()
        .zip(round.target())
        .all(|(c, &v)| affine.numerator().divides((c - &var(v)).numerator()));

    let hits_obvious_points = ring.field().elements().filter(|c| ring.field().as_prime_field(*c).is_some()).all(|c| {
        let mut at = vec![FieldElement::constant(&ring, c)];
        at.extend((1..n).map(|_| FieldElement::zero(&ring)));
        forward.eval(&at).is_ok_and(|img| {
            img[..n].iter().all(FieldElement::is_zero) && img[n] == FieldElement::constant(&ring, c)
        })
    });

    Ok(RationalityWitness { forward, inverse, pullback_vanishes, left_inverse, right_inverse_on_x, hits_obvious_points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Gf;

    fn scalars(p: u32, n: usize) -> Vec<FieldElement> {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let r = Ring::from_names(Gf::prime(p).unwrap(), names).unwrap();
        (0..n).map(|i| FieldElement::var(&r, i)).collect()
    }

    #[test]
    fn witness_p3_n1() {
        let w = geometric_rationality_witness(3, 1, &scalars(3, 1)).unwrap();
        assert!(w.certified(), "{w:?}");
        let comps: Vec<String> = w.forward.components().iter().map(|c| c.to_string()).collect();
        assert_eq!(comps, ["(2*s^3 + s)/u_t1", "s^3"]);
    }

    #[test]
    fn witness_origin_is_obvious_point() {
        let w = geometric_rationality_witness(5, 2, &scalars(5, 2)).unwrap();
        let r = w.forward.ring().clone();
        let img = w.forward.eval(&[FieldElement::zero(&r), FieldElement::zero(&r)]).unwrap();
        assert!(img.iter().all(FieldElement::is_zero));
    }

    #[test]
    fn witness_several_sizes() {
        for (p, n) in [(3, 2), (5, 1), (7, 2), (3, 3)] {
            let w = geometric_rationality_witness(p, n, &scalars(p, n)).unwrap();
            assert!(w.certified(), "p={p} n={n}");
        }
    }

    #[test]
    fn witness_with_non_generator_scalars() {
        let t = scalars(3, 2);
        let fam = [&t[0] * &t[1], t[1].checked_div(&t[0]).unwrap()];
        assert!(geometric_rationality_witness(3, 2, &fam).unwrap().certified());
    }
}
