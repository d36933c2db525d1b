use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use imperfect::differentials::{exchange_step, jacobian_rank, p_independence_rank, DifferentialSpan};
use imperfect::exactfield::{FieldElement, Gf, Ring};
use imperfect::exprparse::{parse_expr, parse_expr_list, parse_field, print_canonical, FieldDecl};
use imperfect::hyperkollar::fermat_regular;

use super::strings;
use crate::config::{ConfigError, SuiteConfig};
use crate::report::{Outcome, Recorder};
use crate::sampling::random_element;

pub const DEFAULT_ELEMS: &str = "t1, t2, t1*t2";
const SEEDED_CASES: usize = 200;

/// Ring and elements for the rank check, either from `--field` or from the
/// identifiers occurring in the element list.
pub(crate) fn elements(cfg: &SuiteConfig, p: u32) -> Result<Vec<FieldElement>, ConfigError> {
    let src = cfg.elems.as_deref().unwrap_or(DEFAULT_ELEMS);
    let bad = |e: &dyn std::fmt::Display| ConfigError::Input(e.to_string());
    let decl = match &cfg.field {
        Some(f) => parse_field(&format!("field {f}")).map_err(|e| bad(&e))?,
        None => {
            let names = imperfect::exprparse::identifiers(src).map_err(|e| bad(&e))?;
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            FieldDecl::new(p, 1, &names)
        }
    };
    let ring = decl.ring(&[]).map_err(|e| bad(&e))?;
    parse_expr_list(src, &ring).map_err(|e| bad(&e))
}

/// Characteristics to run: that of `--field` if given, else the configured primes.
pub(crate) fn primes(cfg: &SuiteConfig) -> Result<Vec<u32>, ConfigError> {
    match &cfg.field {
        Some(f) => {
            let decl = parse_field(&format!("field {f}")).map_err(|e| ConfigError::Input(e.to_string()))?;
            if cfg.p.is_some_and(|p| p != decl.characteristic) {
                return Err(ConfigError::Input(format!("--p disagrees with field {f}")));
            }
            Ok(vec![decl.characteristic])
        }
        None => Ok(cfg.pindep_primes()),
    }
}

/// Rank of integer exponent vectors reduced mod p. For Laurent monomials
/// c t^a the differentials are t^a Σ a_i dt_i / t_i, so this is their rank.
pub fn exponent_rank_mod_p(rows: &[Vec<i64>], p: u32) -> usize {
    let p = i64::from(p);
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|k| (k * m[rank][c]) % p == 1).expect("p is prime");
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Twenty families of Laurent monomials in t1, t2, t3 (with a unit
/// coefficient on one of them): generators, p-th powers, products, ratios.
pub fn fermat_matrix(p: u32) -> Vec<(i64, Vec<Vec<i64>>)> {
    let q = i64::from(p);
    vec![
        (1, vec![vec![1, 0, 0]]),
        (1, vec![vec![1, 0, 0], vec![0, 1, 0]]),
        (1, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        (1, vec![vec![q, 0, 0]]),
        (1, vec![vec![1, 0, 0], vec![0, q, 0]]),
        (1, vec![vec![1, 1, 0], vec![0, 0, 1]]),
        (1, vec![vec![1, 1, 0], vec![1, 0, 0]]),
        (1, vec![vec![1, 1, 0], vec![1, 0, 0], vec![0, 1, 0]]),
        (1, vec![vec![1, -1, 0], vec![0, 1, 0]]),
        (1, vec![vec![1, -1, 0], vec![-1, 1, 0]]),
        (1, vec![vec![2, 0, 0], vec![0, 1, 0]]),
        (1, vec![vec![q + 1, 0, 0], vec![0, 1, 0]]),
        (1, vec![vec![q, 1, 0], vec![0, 0, 1]]),
        (1, vec![vec![1, 1, 1]]),
        (1, vec![vec![q, q, 0]]),
        (1, vec![vec![1, -q, 0], vec![0, 1, 0]]),
        (1, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
        (1, vec![vec![2, 1, 0], vec![1, 2, 0]]),
        (-1, vec![vec![1, 0, 0], vec![0, 1, 0]]),
        (1, vec![vec![q - 1, 1, 0], vec![0, q - 1, 1], vec![1, 0, q - 1]]),
    ]
}

pub fn monomial(ring: &Arc<Ring>, coeff: i64, exps: &[i64]) -> FieldElement {
    let mut x = FieldElement::from_int(ring, coeff);
    for (i, &e) in exps.iter().enumerate() {
        x = &x * &FieldElement::var(ring, i).powi(e).expect("generators are nonzero");
    }
    x
}

fn generator_ring(p: u32) -> Arc<Ring> {
    Ring::new(Gf::prime(p).expect("prime"), &["t1", "t2", "t3"]).expect("distinct names")
}

pub(crate) fn run(rec: &mut Recorder, cfg: &SuiteConfig, p: u32, prefix: &str) -> Result<(), ConfigError> {
    let elems = elements(cfg, p)?;
    rec.run(format!("{prefix}.rank"), "pindep.rank", || {
        let span = match DifferentialSpan::new(&elems) {
            Ok(s) => s,
            Err(e) => return Outcome::failed(e.to_string()),
        };
        let jac = span.jacobian();
        let transposed: Vec<Vec<FieldElement>> =
            (0..jac.first().map_or(0, Vec::len)).map(|c| jac.iter().map(|row| row[c].clone()).collect()).collect();
        let rank_t = if transposed.is_empty() { 0 } else { jacobian_rank(&transposed) };
        let witness = json!({
            "elements": strings(&elems),
            "generators": span.generators().iter().map(|g| span.elements()[0].ring().var_name(*g).to_string()).collect::<Vec<_>>(),
            "jacobian": jac.iter().map(|r| strings(r)).collect::<Vec<_>>(),
            "rank": span.rank(),
            "p_independent": span.is_p_independent(),
        });
        Outcome::verdict(span.rank() == rank_t, witness)
    });

    rec.run(format!("{prefix}.fermat-matrix"), "pindep.fermat-matrix", || {
        let ring = generator_ring(p);
        let mut disagreements: Vec<Value> = Vec::new();
        let cases = fermat_matrix(p);
        for (coeff, rows) in &cases {
            let mut elems: Vec<FieldElement> = rows.iter().map(|e| monomial(&ring, 1, e)).collect();
            elems[0] = &elems[0] * &FieldElement::from_int(&ring, *coeff);
            let oracle = exponent_rank_mod_p(rows, p) == rows.len();
            match fermat_regular(&elems) {
                Ok(v) if v == oracle => {}
                Ok(v) => disagreements.push(json!({"elements": strings(&elems), "criterion": v, "oracle": oracle})),
                Err(e) => disagreements.push(json!({"elements": strings(&elems), "error": e.to_string()})),
            }
        }
        let witness = json!({"cases": cases.len(), "agreed": cases.len() - disagreements.len(), "disagreements": disagreements});
        Outcome::verdict(disagreements.is_empty(), witness)
    });

    rec.run(format!("{prefix}.exchange"), "pindep.exchange", || {
        let ring = generator_ring(p);
        let gens: Vec<FieldElement> = (0..3).map(|i| FieldElement::var(&ring, i)).collect();
        match exchange_step(&gens, 2, 1) {
            Ok(out) => {
                let rank = p_independence_rank(&out).unwrap_or(0);
                Outcome::verdict(rank == 3, json!({"result": strings(&out), "rank": rank}))
            }
            Err(e) => Outcome::failed(e.to_string()),
        }
    });

    rec.run(format!("{prefix}.seeded-identities"), "pindep.seeded-identities", || seeded_identities(cfg.seed, p));
    Ok(())
}

/// Leibniz rule, Frobenius additivity, p-th roots, inverses and printing
/// round trips on seeded random elements of GF(p)(t1, t2).
fn seeded_identities(seed: u64, p: u32) -> Outcome {
    let ring = Ring::new(Gf::prime(p).expect("prime"), &["t1", "t2"]).expect("distinct names");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(p).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let pe = u64::from(p);
    let mut failures: Vec<Value> = Vec::new();
    for _ in 0..SEEDED_CASES {
        let a = random_element(&mut rng, &ring);
        let b = random_element(&mut rng, &ring);
        let mut fail = |law: &str| failures.push(json!({"law": law, "a": print_canonical(&a), "b": print_canonical(&b)}));
        for v in 0..ring.nvars() {
            let lhs = (&a * &b).partial_derivative(v);
            let rhs = &(&a * &b.partial_derivative(v)) + &(&b * &a.partial_derivative(v));
            if lhs != rhs {
                fail("leibniz");
            }
        }
        if (&a + &b).pow(pe) != &a.pow(pe) + &b.pow(pe) {
            fail("frobenius-additive");
        }
        if a.pow(pe).pth_root().ok().as_ref() != Some(&a) {
            fail("pth-root");
        }
        if !a.is_zero() && !(&a * &a.inverse().expect("nonzero")).is_one() {
            fail("inverse");
        }
        if parse_expr(&print_canonical(&a), &ring).ok().as_ref() != Some(&a) {
            fail("print-parse");
        }
    }
    let witness = json!({"cases": SEEDED_CASES, "failures": failures.len(), "first_failures": failures.iter().take(3).collect::<Vec<_>>()});
    Outcome::verdict(failures.is_empty(), witness)
}
