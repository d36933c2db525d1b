use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use imperfect::cubic2::{
    conic_classify, conics_disjoint, cubic_nonsmooth_locus, cubic_rationality_witness, cubic_surface, fiber_at,
    frobenius_base_change, local_regularity_at, local_regularity_at_rational, picard_lattice,
    regularity_stratification, tangent_section, tensor_field_test, CubicError, CubicSurfaceSpec, FiberParam,
    InseparablePoint, QuadElem, StratCase, Stratification,
};
use imperfect::exactfield::{FieldElement, Gf, Ring};

use super::strings;
use crate::report::{Outcome, Recorder};
use crate::sampling::random_nonzero_poly;

fn generic_ring(m: u32) -> Arc<Ring> {
    Ring::new(Gf::new(2, m).expect("GF(2^m)"), &["t1", "t2"]).expect("distinct names")
}

fn quad(q: &QuadElem) -> String {
    let b = if q.b.is_one() { "θ".to_string() } else { format!("({})*θ", q.b) };
    match (q.a.is_zero(), q.b.is_zero()) {
        (_, true) => q.a.to_string(),
        (true, false) => b,
        (false, false) => format!("{} + {b}", q.a),
    }
}

fn quads(xs: &[QuadElem]) -> Vec<String> {
    xs.iter().map(quad).collect()
}

fn or_fail(r: Result<Outcome, CubicError>) -> Outcome {
    r.unwrap_or_else(|e| Outcome::failed(e.to_string()))
}

pub(crate) fn run(rec: &mut Recorder, seed: u64, prefix: &str) {
    let ring = generic_ring(1);
    let (t1, t2) = (FieldElement::var(&ring, 0), FieldElement::var(&ring, 1));
    let s = cubic_surface(&t1, &t2).expect("nonzero scalars in characteristic 2");

    rec.run(format!("{prefix}.equation"), "cubic2.equation", || {
        Outcome::verdict(s.is_homogeneous_cubic(), json!({"equation": s.equation().to_string()}))
    });

    rec.run(format!("{prefix}.jacobian-identity"), "cubic2.jacobian-identity", || {
        let c = cubic_nonsmooth_locus(&s);
        let witness = json!({
            "p1": c.p1.to_string(),
            "p2": c.p2.to_string(),
            "x_partials_vanish": c.x_partials_vanish,
            "residual": c.residual.to_string(),
        });
        Outcome::verdict(c.holds(), witness)
    });

    rec.run(format!("{prefix}.regular-inseparable-points"), "cubic2.regular-inseparable-points", || {
        or_fail((|| {
            let a = local_regularity_at(&s, &InseparablePoint::on_first_conic(&s)?)?;
            let b = local_regularity_at(&s, &InseparablePoint::on_second_conic(&s)?)?;
            let witness = json!({
                "(1 : 0 : θ : 0), θ^2 = t1": {"class": quads(&a.cotangent_class), "regular": a.regular},
                "(0 : 1 : 0 : θ), θ^2 = t2": {"class": quads(&b.cotangent_class), "regular": b.regular},
            });
            Ok(Outcome::verdict(a.regular && b.regular, witness))
        })())
    });

    rec.run(format!("{prefix}.singular-point"), "cubic2.singular-point", || {
        or_fail((|| {
            let r0 = Ring::new(Gf::prime(2).expect("prime"), &[]).expect("empty ring");
            let one = FieldElement::one(&r0);
            let unit = cubic_surface(&one, &one)?;
            let pt = [one.clone(), one.clone(), one.clone(), one.clone()];
            let l = local_regularity_at_rational(&unit, &pt)?;
            Ok(Outcome::verdict(!l.regular, json!({"point": "(1 : 1 : 1 : 1)", "class": quads(&l.cotangent_class)})))
        })())
    });

    rec.run(format!("{prefix}.tensor-field"), "cubic2.tensor-field", || {
        or_fail((|| {
            let generic = tensor_field_test(&t1, &t2)?;
            let equal = tensor_field_test(&t1, &t1)?;
            let square_ratio = tensor_field_test(&t1, &(&t1 * &t2.pow(2)))?;
            let witness = json!({"(t1, t2)": generic, "(t1, t1)": equal, "(t1, t1*t2^2)": square_ratio});
            Ok(Outcome::verdict(generic && !equal && !square_ratio, witness))
        })())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = FieldElement::from(random_nonzero_poly(&mut rng, &ring, 3, 2));
    let params = [
        FiberParam::Affine(FieldElement::zero(&ring)),
        FiberParam::Affine(FieldElement::one(&ring)),
        FiberParam::Affine(t1.clone()),
        FiberParam::Affine(random),
        FiberParam::Infinity,
    ];
    for param in &params {
        let label = match param {
            FiberParam::Affine(l) => format!("lambda={l}"),
            FiberParam::Infinity => "lambda=inf".to_string(),
        };
        rec.run(format!("{prefix}.fiber[{label}]"), "cubic2.fiber", || fiber(&s, param));
    }

    rec.run(format!("{prefix}.conics-disjoint"), "cubic2.conics-disjoint", || {
        or_fail(conics_disjoint(&s).map(|d| Outcome::verdict(d, json!({"disjoint": d}))))
    });

    for nu in [1, 2] {
        rec.run(format!("{prefix}.frobenius-base-change[nu={nu}]"), "cubic2.frobenius-base-change", || {
            or_fail((|| {
                let b = frobenius_base_change(&s, nu)?;
                let class = conic_classify(&b.modified)?;
                let witness = json!({
                    "q": b.q,
                    "pulled_back": strings(&b.pulled_back.coeffs),
                    "scale0": b.scale0.to_string(),
                    "scale2": b.scale2.to_string(),
                    "modified": strings(&b.modified.coeffs),
                    "residual": b.residual.to_string(),
                    "constant_in_mu": b.constant_in_mu,
                    "regular": class.is_regular,
                    "geometrically_reduced": class.is_geometrically_reduced,
                });
                let ok = b.residual.is_zero() && b.constant_in_mu && class.is_regular && !class.is_geometrically_reduced;
                Ok(Outcome::verdict(ok, witness))
            })())
        });
    }

    rec.run(format!("{prefix}.rationality-over-root"), "cubic2.rationality-over-root", || {
        or_fail(cubic_rationality_witness(&s).map(|w| {
            let witness = json!({
                "transformed": w.transformed.to_string(),
                "forward": strings(w.forward.components()),
                "inverse": strings(w.inverse.components()),
                "identity_holds": w.identity_holds,
                "pullback_vanishes": w.pullback_vanishes,
                "left_inverse": w.left_inverse,
                "right_inverse_on_x": w.right_inverse_on_x,
            });
            Outcome::verdict(w.certified(), witness)
        }))
    });

    rec.run(format!("{prefix}.tangent-section[(1 : 0 : 0 : 0)]"), "cubic2.tangent-section", || {
        let (one, zero) = (FieldElement::one(&ring), FieldElement::zero(&ring));
        or_fail(tangent_section(&s, &[one, zero.clone(), zero.clone(), zero]).map(|t| {
            let witness = json!({"curve": t.curve.to_string(), "divisible_by": t.linear_factor.to_string(), "purely_inseparable": t.purely_inseparable});
            Outcome::verdict(t.divisible && t.purely_inseparable, witness)
        }))
    });

    rec.run(format!("{prefix}.tangent-section[(0 : 0 : 1 : c), c in GF(4)*]"), "cubic2.tangent-section", || {
        or_fail((|| {
            let r4 = generic_ring(2);
            let s4 = cubic_surface(&FieldElement::var(&r4, 0), &FieldElement::var(&r4, 1))?;
            let zero = FieldElement::zero(&r4);
            let mut rows = Vec::new();
            let mut ok = true;
            for c in r4.field().elements().filter(|&c| c != r4.field().zero()) {
                let l = FieldElement::constant(&r4, c);
                let t = tangent_section(&s4, &[zero.clone(), zero.clone(), FieldElement::one(&r4), l.clone()])?;
                ok &= t.divisible && !t.purely_inseparable;
                rows.push(json!({"c": l.to_string(), "curve": t.curve.to_string(), "purely_inseparable": t.purely_inseparable}));
            }
            Ok(Outcome::verdict(ok, Value::Array(rows)))
        })())
    });

    rec.run(format!("{prefix}.picard-lattice"), "cubic2.picard-lattice", || {
        let pic = picard_lattice();
        let witness = json!({
            "basis": pic.lattice.labels(),
            "gram": pic.lattice.gram(),
            "determinant": pic.determinant,
            "smith_invariants": pic.smith_invariants,
            "discriminant_order": pic.discriminant_order,
            "anticanonical": pic.anticanonical,
            "k_squared": pic.k_squared,
            "l_squared": pic.l_squared,
            "l_dot_c1": pic.l_dot_c1,
            "d_class": pic.d_class,
            "d_primitive": pic.d_primitive,
            "d_dot_c1": pic.d_dot_c1,
        });
        let ok = pic.lattice.gram() == [vec![0, 2], vec![2, -1]]
            && pic.determinant == -4
            && pic.discriminant_order == 4
            && pic.dual_pairings_ok
            && pic.k_squared == 3
            && pic.l_squared == -1
            && pic.d_primitive
            && pic.l_dot_c1 == 2
            && pic.d_dot_c1 == 4;
        Outcome::verdict(ok, witness)
    });

    rec.run(format!("{prefix}.discriminant-group"), "cubic2.discriminant-group", || {
        let pic = picard_lattice();
        let dual: Vec<Vec<String>> = pic.dual_basis.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
        let e1_order = pic.lattice.order_in_discriminant_group(&pic.dual_basis[0]);
        let parity = pic.half_c1_parity_value;
        let witness = json!({
            "dual_basis": dual,
            "e1_dual_order": e1_order,
            "half_c1_is_e2_dual": pic.half_c1_is_e2_dual,
            "half_c1_order": pic.half_c1_order,
            "half_c1_parity_value": parity.to_string(),
            "parity_even_on_lattice": pic.riemann_roch_parity_on_s,
        });
        // The parity value of C1/2 is odd, so no overlattice containing it can
        // carry the Riemann-Roch parity; every nontrivial subgroup of the
        // cyclic discriminant group of order 4 contains C1/2.
        let odd = parity.is_integer() && parity.to_integer().rem_euclid(2) == 1;
        let ok = e1_order == 4 && pic.half_c1_is_e2_dual && pic.half_c1_order == 2 && odd && pic.riemann_roch_parity_on_s;
        Outcome::verdict(ok, witness)
    });

    let r1 = Ring::new(Gf::prime(2).expect("prime"), &["t"]).expect("one name");
    let t = FieldElement::var(&r1, 0);
    let r0 = Ring::new(Gf::prime(2).expect("prime"), &[]).expect("empty ring");
    let cases: [(String, FieldElement, FieldElement, usize); 3] = [
        ("(t1, t2)".into(), t1.clone(), t2.clone(), 2),
        ("(t, t^3)".into(), t.clone(), t.pow(3), 1),
        ("(1, 1)".into(), FieldElement::one(&r0), FieldElement::one(&r0), 0),
    ];
    for (label, a, b, expected_n) in cases {
        rec.run(format!("{prefix}.stratification[{label}]"), "cubic2.stratification", || {
            or_fail(regularity_stratification(&a, &b).map(|st| {
                let ok = st.n == expected_n && st.verified();
                Outcome::verdict(ok, stratification_witness(&st))
            }))
        });
    }
}

fn fiber(s: &CubicSurfaceSpec, param: &FiberParam) -> Outcome {
    or_fail(fiber_at(s, param).and_then(|f| {
        let class = if f.degenerate { None } else { Some(conic_classify(&f.conic)?) };
        let witness = json!({
            "conic": strings(&f.conic.coeffs),
            "variables": f.conic.vars,
            "excluded": f.excluded,
            "degenerate": f.degenerate,
            "section_decomposes": f.section_decomposes,
            "regular": class.map(|c| c.is_regular),
        });
        Ok(Outcome::verdict(f.section_decomposes, witness))
    }))
}

fn stratification_witness(st: &Stratification) -> Value {
    match &st.case {
        StratCase::Regular { at_first, at_second, tensor_field } => json!({
            "n": st.n, "case": "regular", "at_first": at_first, "at_second": at_second, "tensor_field": tensor_field,
        }),
        StratCase::NormalSingular { base_is_t1, alpha, beta, decomposition_holds, square_identity_holds, regular_point_ok } => json!({
            "n": st.n,
            "case": "normal, singular",
            "square_root_of": if *base_is_t1 { "first scalar" } else { "second scalar" },
            "alpha": alpha.to_string(),
            "beta": beta.to_string(),
            "decomposition_holds": decomposition_holds,
            "square_identity_holds": square_identity_holds,
            "regular_point_ok": regular_point_ok,
        }),
        StratCase::NonNormal { normalization_holds, singular_points, all_singular } => json!({
            "n": st.n,
            "case": "not normal",
            "normalization_holds": normalization_holds,
            "singular_points": singular_points.iter().map(|p| format!("({})", strings(p).join(" : "))).collect::<Vec<_>>(),
            "all_singular": all_singular,
        }),
    }
}
