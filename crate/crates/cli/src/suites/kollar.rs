use serde_json::json;

use imperfect::exactfield::{FieldElement, Gf, Ring};
use imperfect::hyperkollar::{
    bounded_point_search, candidate_count, eisenstein_certificate, fermat_regular, geometric_rationality_witness,
    kollar_hypersurface, laurent_exhaustive, nonsmooth_generators, obvious_points, unirationality_ingredients,
    HypersurfaceSpec, KollarError,
};

use super::strings;
use crate::report::{Outcome, Recorder};

fn scalars(p: u32, n: usize) -> Vec<FieldElement> {
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let ring = Ring::from_names(Gf::prime(p).expect("prime"), names).expect("distinct names");
    (0..n).map(|i| FieldElement::var(&ring, i)).collect()
}

pub(crate) fn run(rec: &mut Recorder, p: u32, n: usize, degree: u32, budget: u64, prefix: &str) {
    let t = scalars(p, n);
    let h = match kollar_hypersurface(p, n, &t) {
        Ok(h) => h,
        Err(e) => {
            rec.run(format!("{prefix}.equation"), "kollar.equation", || Outcome::failed(e.to_string()));
            return;
        }
    };

    rec.run(format!("{prefix}.equation"), "kollar.equation", || {
        let ok = h.is_homogeneous() && h.degree() == p;
        Outcome::verdict(ok, json!({"equation": h.equation().to_string(), "degree": h.degree()}))
    });

    rec.run(format!("{prefix}.regularity"), "kollar.regularity", || match fermat_regular(&t) {
        Ok(v) => Outcome::verdict(v, json!({"scalars": strings(&t), "regular": v})),
        Err(e) => Outcome::failed(e.to_string()),
    });

    rec.run(format!("{prefix}.nonsmooth-support"), "kollar.nonsmooth-support", || {
        let locus = nonsmooth_generators(&h);
        let witness = json!({
            "generators": strings(&locus.generators),
            "partials_match": locus.partials_match,
            "support_is_z_zero": locus.support_is_z_zero,
        });
        Outcome::verdict(locus.partials_match && locus.support_is_z_zero, witness)
    });

    rec.run(format!("{prefix}.eisenstein"), "kollar.eisenstein", || match eisenstein_certificate(&h) {
        Ok(c) => {
            let witness = json!({"transformed": c.transformed.to_string(), "identity_holds": c.identity_holds, "eisenstein": c.eisenstein});
            Outcome::verdict(c.identity_holds && c.eisenstein, witness)
        }
        Err(e) => Outcome::failed(e.to_string()),
    });

    rec.run(format!("{prefix}.unirationality-ingredients"), "kollar.unirationality-ingredients", || {
        match unirationality_ingredients(&h) {
            Ok(u) => {
                let witness = json!({
                    "regular": u.regular,
                    "nonsmooth_locus_nonempty": u.nonsmooth_locus_nonempty,
                    "exchange_ok": u.exchange_ok,
                    "cone_reduction_ok": u.cone_reduction_ok,
                    "remaining_rank": u.remaining_rank,
                    "imperfection_dim": u.imperfection_dim,
                });
                Outcome::verdict(u.all_hold(n), witness)
            }
            Err(e) => Outcome::failed(e.to_string()),
        }
    });

    rec.run(format!("{prefix}.rationality-witness"), "kollar.rationality-witness", || {
        match geometric_rationality_witness(p, n, &t) {
            Ok(w) => {
                let witness = json!({
                    "forward": strings(w.forward.components()),
                    "inverse": strings(w.inverse.components()),
                    "pullback_vanishes": w.pullback_vanishes,
                    "left_inverse": w.left_inverse,
                    "right_inverse_on_x": w.right_inverse_on_x,
                    "hits_obvious_points": w.hits_obvious_points,
                });
                Outcome::verdict(w.certified(), witness)
            }
            Err(e) => Outcome::failed(e.to_string()),
        }
    });

    rec.run(format!("{prefix}.point-count"), "kollar.point-count", || point_count(&h, degree, budget));

    rec.run(format!("{prefix}.laurent"), "kollar.laurent", || {
        if n != 1 {
            return Outcome::skipped("the Laurent search concerns a single scalar");
        }
        let triples = u128::from(p).pow(3 * (degree + 1));
        if triples > u128::from(budget) {
            return Outcome::skipped(format!("needs {triples} triples, budget {budget}"));
        }
        let s = laurent_exhaustive(p, degree as usize);
        let found: Vec<String> = s.solutions_with_h.iter().map(|(f, g, h)| format!("f={:?} g={:?} h={:?}", f.coeffs(), g.coeffs(), h.coeffs())).collect();
        let witness = json!({
            "degree_bound": degree,
            "triples_checked": s.triples_checked,
            "solutions": s.solutions,
            "solutions_with_h": found,
        });
        Outcome::verdict(s.solutions_with_h.is_empty(), witness)
    });
}

fn point_count(h: &HypersurfaceSpec, degree: u32, budget: u64) -> Outcome {
    let candidates = candidate_count(h, degree);
    match bounded_point_search(h, degree, budget) {
        Ok(points) => {
            let expected = obvious_points(h);
            let witness = json!({
                "degree": degree,
                "candidates": candidates.to_string(),
                "point_count": points.len(),
                "points": points.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            Outcome::verdict(points == expected && points.len() == h.characteristic() as usize, witness)
        }
        Err(KollarError::BudgetExceeded { needed, budget }) => {
            Outcome::skipped(format!("needs {needed} candidates, budget {budget}"))
        }
        Err(e) => Outcome::failed(e.to_string()),
    }
}
