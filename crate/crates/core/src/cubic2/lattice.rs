//! Integral lattices given by a Gram matrix.

use num_integer::Integer;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
}

impl IntLattice {
    /// Panics if the Gram matrix is not square and symmetric.
    pub fn new(labels: &[&str], gram: Vec<Vec<i64>>) -> IntLattice {
        let n = gram.len();
        assert_eq!(labels.len(), n, "one label per basis vector");
        for (i, row) in gram.iter().enumerate() {
            assert_eq!(row.len(), n, "Gram matrix must be square");
            for j in 0..n {
                assert_eq!(gram[i][j], gram[j][i], "Gram matrix must be symmetric");
            }
        }
        IntLattice { labels: labels.iter().map(|s| s.to_string()).collect(), gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Bilinear form on integer coordinate vectors.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        (0..self.rank()).map(|i| (0..self.rank()).map(|j| u[i] * self.gram[i][j] * v[j]).sum::<i64>()).sum()
    }

    /// Bilinear form extended to rational coordinates.
    pub fn pair_q(&self, u: &[Q], v: &[Q]) -> Q {
        let mut acc = Q::from_integer(0);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += u[i] * Q::from_integer(self.gram[i][j]) * v[j];
            }
        }
        acc
    }

    pub fn determinant(&self) -> i64 {
        let m: Vec<Vec<Q>> = self.gram.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
        let (det, _) = gauss_jordan(m);
        assert!(det.is_integer());
        det.to_integer()
    }

    /// Dual basis e_i* in coordinates of the e_j, i.e. the rows of the
    /// inverse Gram matrix. `None` if the form is degenerate.
    pub fn dual_basis(&self) -> Option<Vec<Vec<Q>>> {
        let m: Vec<Vec<Q>> = self.gram.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
        gauss_jordan(m).1
    }

    /// Diagonal of the Smith normal form of the Gram matrix.
    pub fn smith_invariants(&self) -> Vec<i64> {
        smith_normal_form(&self.gram)
    }

    /// |S*/S|, the product of the Smith invariants.
    pub fn discriminant_group_order(&self) -> i64 {
        self.smith_invariants().iter().product::<i64>().abs()
    }

    /// Order of a dual vector (rational coordinates) in S*/S.
    pub fn order_in_discriminant_group(&self, v: &[Q]) -> i64 {
        v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
    }

    pub fn is_primitive(v: &[i64]) -> bool {
        v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
    }
}

/// Determinant and inverse of a square rational matrix.
fn gauss_jordan(mut m: Vec<Vec<Q>>) -> (Q, Option<Vec<Vec<Q>>>) {
    let n = m.len();
    let mut inv: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| Q::from_integer(i64::from(i == j))).collect()).collect();
    let mut det = Q::from_integer(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != Q::from_integer(0)) else {
            return (Q::from_integer(0), None);
        };
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && m[r][col] != Q::from_integer(0) {
                let f = m[r][col];
                for j in 0..n {
                    let (a, b) = (m[col][j], inv[col][j]);
                    m[r][j] -= f * a;
                    inv[r][j] -= f * b;
                }
            }
        }
    }
    (det, Some(inv))
}

/// Smith normal form diagonal (nonnegative, each dividing the next).
pub fn smith_normal_form(a: &[Vec<i64>]) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Bring the smallest nonzero entry of the remaining block to (t, t).
        loop {
            let Some((pr, pc)) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| m[r][c] != 0)
                .min_by_key(|&(r, c)| m[r][c].abs())
            else {
                return finish(diag, rows.min(cols));
            };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let p = m[t][t];
            let mut clean = true;
            for r in t + 1..rows {
                let q = Integer::div_floor(&m[r][t], &p);
                for c in t..cols {
                    m[r][c] -= q * m[t][c];
                }
                clean &= m[r][t] == 0;
            }
            for c in t + 1..cols {
                let q = Integer::div_floor(&m[t][c], &p);
                for r in t..rows {
                    m[r][c] -= q * m[r][t];
                }
                clean &= m[t][c] == 0;
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the rest of the block.
            if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % p != 0)) {
                for c in t..cols {
                    m[t][c] += m[r][c];
                }
                continue;
            }
            break;
        }
        diag.push(m[t][t].abs());
    }
    finish(diag, rows.min(cols))
}

fn finish(mut diag: Vec<i64>, len: usize) -> Vec<i64> {
    diag.resize(len, 0);
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(smith_normal_form(&[vec![0, 2], vec![2, -1]]), vec![1, 4]);
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_normal_form(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn hyperbolic_plane_is_unimodular() {
        let u = IntLattice::new(&["e", "f"], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(u.determinant(), -1);
        assert_eq!(u.discriminant_group_order(), 1);
    }

    #[test]
    fn primitivity() {
        assert!(IntLattice::is_primitive(&[1, 2]));
        assert!(!IntLattice::is_primitive(&[2, 4]));
        assert!(!IntLattice::is_primitive(&[0, 0]));
    }
}
