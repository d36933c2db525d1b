//! Acceptance criteria, one line per criterion. Each criterion has a time
//! limit; exceeding it counts as a failure.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use imperfect::cubic2::{
    conic_classify, cubic_nonsmooth_locus, cubic_surface, frobenius_base_change, local_regularity_at,
    local_regularity_at_rational, picard_lattice, InseparablePoint, Q,
};
use imperfect::exactfield::{FieldElement, Gf, Ring};
use imperfect::exprparse::{parse_expr, print_canonical};
use imperfect::hyperkollar::{
    bounded_point_search, fermat_regular, geometric_rationality_witness, kollar_hypersurface, laurent_exhaustive,
    nonsmooth_generators, obvious_points, DEFAULT_BUDGET,
};
use imperfect_cli::sampling::random_element;
use imperfect_cli::suites::pindep::{fermat_matrix, monomial};

type Verdict = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn generators(p: u32, names: &[&str]) -> (Arc<Ring>, Vec<FieldElement>) {
    let ring = Ring::new(Gf::prime(p).unwrap(), names).unwrap();
    let gens = (0..names.len()).map(|i| FieldElement::var(&ring, i)).collect();
    (ring, gens)
}

fn family_scalars(p: u32, n: usize) -> Vec<FieldElement> {
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    generators(p, &names).1
}

fn nonsmooth_support() -> Verdict {
    for p in [3, 5] {
        for n in [1, 2] {
            let h = kollar_hypersurface(p, n, &family_scalars(p, n)).map_err(|e| e.to_string())?;
            let locus = nonsmooth_generators(&h);
            ensure(locus.partials_match && locus.support_is_z_zero, || format!("p={p} n={n}"))?;
        }
    }
    Ok(())
}

/// Rank mod p of the exponent vectors, computed by plain row reduction.
fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for col in 0..m.first().map_or(0, Vec::len) {
        if let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) {
            m.swap(rank, piv);
            for r in 0..m.len() {
                if r != rank {
                    let (a, b) = (m[rank][col], m[r][col]);
                    for k in 0..m[r].len() {
                        m[r][k] = (a * m[r][k] - b * m[rank][k]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

fn fermat_agreement() -> Verdict {
    for p in [2, 3, 5] {
        let (ring, _) = generators(p, &["t1", "t2", "t3"]);
        let cases = fermat_matrix(p);
        ensure(cases.len() == 20, || format!("{} cases", cases.len()))?;
        for (i, (coeff, rows)) in cases.iter().enumerate() {
            let elems: Vec<FieldElement> =
                rows.iter().enumerate().map(|(j, e)| monomial(&ring, if j == 0 { *coeff } else { 1 }, e)).collect();
            let regular = fermat_regular(&elems).map_err(|e| e.to_string())?;
            let expected = rank_mod_p(rows, i64::from(p)) == rows.len();
            ensure(regular == expected, || format!("p={p} case {i}: got {regular}, oracle {expected}"))?;
        }
    }
    Ok(())
}

fn rationality_witness() -> Verdict {
    for p in [3, 5] {
        for n in [1, 2] {
            let w = geometric_rationality_witness(p, n, &family_scalars(p, n)).map_err(|e| e.to_string())?;
            ensure(w.pullback_vanishes && w.left_inverse, || format!("p={p} n={n}"))?;
        }
    }
    Ok(())
}

fn point_count() -> Verdict {
    for (p, d, expected) in [(3, 2, 3), (5, 1, 5)] {
        let h = kollar_hypersurface(p, 1, &family_scalars(p, 1)).map_err(|e| e.to_string())?;
        let points = bounded_point_search(&h, d, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(points.len() == expected && points == obvious_points(&h), || {
            format!("p={p} d={d}: {} points", points.len())
        })?;
    }
    Ok(())
}

fn laurent_search() -> Verdict {
    let s = laurent_exhaustive(3, 2);
    ensure(s.triples_checked == 3u64.pow(9), || format!("{} triples", s.triples_checked))?;
    ensure(s.solutions_with_h.is_empty(), || format!("{} solutions with h != 0", s.solutions_with_h.len()))
}

fn cubic_regularity() -> Verdict {
    let (_, t) = generators(2, &["t1", "t2"]);
    let s = cubic_surface(&t[0], &t[1]).map_err(|e| e.to_string())?;
    let locus = cubic_nonsmooth_locus(&s);
    ensure(locus.holds() && locus.residual.is_zero(), || "P != y1 P1 + y2 P2".into())?;
    let first = InseparablePoint::on_first_conic(&s).map_err(|e| e.to_string())?;
    let second = InseparablePoint::on_second_conic(&s).map_err(|e| e.to_string())?;
    for (label, pt) in [("first", first), ("second", second)] {
        let r = local_regularity_at(&s, &pt).map_err(|e| e.to_string())?;
        ensure(r.regular, || format!("not regular at the {label} inseparable point"))?;
    }
    let (r0, _) = generators(2, &[]);
    let one = FieldElement::one(&r0);
    let unit = cubic_surface(&one, &one).map_err(|e| e.to_string())?;
    let r = local_regularity_at_rational(&unit, &[one.clone(), one.clone(), one.clone(), one])
        .map_err(|e| e.to_string())?;
    ensure(!r.regular, || "regular at (1:1:1:1) with t1 = t2 = 1".into())
}

fn frobenius_conic() -> Verdict {
    let (_, t) = generators(2, &["t1", "t2"]);
    let s = cubic_surface(&t[0], &t[1]).map_err(|e| e.to_string())?;
    let b = frobenius_base_change(&s, 1).map_err(|e| e.to_string())?;
    ensure(b.residual.is_zero(), || format!("residual {}", b.residual))?;
    let class = conic_classify(&b.modified).map_err(|e| e.to_string())?;
    ensure(class.is_regular && !class.is_geometrically_reduced, || format!("{class:?}"))
}

fn lattice_numbers() -> Verdict {
    let pic = picard_lattice();
    ensure(pic.lattice.gram() == [vec![0, 2], vec![2, -1]], || format!("gram {:?}", pic.lattice.gram()))?;
    ensure(pic.determinant == -4, || format!("det {}", pic.determinant))?;
    ensure(pic.discriminant_order == 4, || format!("|S*/S| = {}", pic.discriminant_order))?;
    ensure(pic.k_squared == 3 && pic.l_squared == -1, || format!("K^2 = {}, L^2 = {}", pic.k_squared, pic.l_squared))?;
    ensure(pic.d_class == [1, 2] && pic.d_primitive, || "C1 + 2L not primitive".into())?;
    // N.N - N.K is even on S but odd for N = C1/2.
    ensure(pic.riemann_roch_parity_on_s, || "parity fails on S".into())?;
    let v = pic.half_c1_parity_value;
    ensure(v.is_integer() && v.to_integer() % 2 != 0 && v != Q::from_integer(0), || format!("C1/2 gives {v}"))
}

const PROPERTY_CASES: usize = 1000;

fn property_suites() -> Verdict {
    for p in [2, 3, 5] {
        let (ring, _) = generators(p, &["t1", "t2"]);
        let mut rng = ChaCha8Rng::seed_from_u64(0xacce_5500 + u64::from(p));
        let pe = u64::from(p);
        let zero = FieldElement::zero(&ring);
        let one = FieldElement::one(&ring);
        for case in 0..PROPERTY_CASES {
            let a = random_element(&mut rng, &ring);
            let b = random_element(&mut rng, &ring);
            let c = random_element(&mut rng, &ring);
            let at = |law: &str| format!("p={p} case {case}: {law} for a = {a}, b = {b}, c = {c}");
            let axioms = &(&a + &b) + &c == &a + &(&b + &c)
                && &a + &b == &b + &a
                && &(&a * &b) * &c == &a * &(&b * &c)
                && &a * &b == &b * &a
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && &a + &zero == a
                && &a * &one == a
                && (&a + &(-&a)).is_zero()
                && (a.is_zero() || (&a * &a.inverse().unwrap()).is_one());
            ensure(axioms, || at("field axioms"))?;
            for v in 0..ring.nvars() {
                let lhs = (&a * &b).partial_derivative(v);
                let rhs = &(&a * &b.partial_derivative(v)) + &(&b * &a.partial_derivative(v));
                ensure(lhs == rhs, || at("Leibniz rule"))?;
            }
            ensure(a.pow(pe).pth_root().ok().as_ref() == Some(&a), || at("p-th root of p-th power"))?;
            ensure(parse_expr(&print_canonical(&a), &ring).ok().as_ref() == Some(&a), || at("parser round trip"))?;
        }
    }
    Ok(())
}

fn deterministic_reports() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_verify")).args(["all", "--seed", "2024"]).output().map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "verify all did not succeed".into())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Verdict); 10] = [
        ("nonsmooth support of the degree-p family", Duration::from_secs(1), nonsmooth_support),
        ("Fermat regularity agrees with p-independence", Duration::from_secs(1), fermat_agreement),
        ("rationality witness over the perfect closure", Duration::from_secs(5), rationality_witness),
        ("bounded point search", Duration::from_secs(60), point_count),
        ("Laurent search at p = 3", Duration::from_secs(60), laurent_search),
        ("cubic surface identity and local regularity", Duration::from_secs(1), cubic_regularity),
        ("Frobenius base change of the conic bundle", Duration::from_secs(1), frobenius_conic),
        ("lattice numbers", Duration::from_secs(1), lattice_numbers),
        ("property suites", Duration::from_secs(120), property_suites),
        ("deterministic reports", Duration::from_secs(120), deterministic_reports),
    ];
    let mut failed = 0;
    for (i, (label, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed();
        let verdict = verdict.and_then(|()| ensure(elapsed < *limit, || format!("took longer than {limit:?}")));
        match verdict {
            Ok(()) => println!("criterion {:>2} PASS  {label} ({} ms)", i + 1, elapsed.as_millis()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label} ({} ms): {why}", i + 1, elapsed.as_millis());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
