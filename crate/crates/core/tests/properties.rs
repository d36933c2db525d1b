use std::sync::Arc;

use proptest::prelude::*;

use imperfect::exactfield::{multipoly_gcd, FieldElement, Gf, MultiPoly, Ring};
use imperfect::exprparse::{parse_expr, print_canonical};

fn ring(p: u32, m: u32, vars: &[&str]) -> Arc<Ring> {
    Ring::new(Gf::new(p, m).unwrap(), vars).unwrap()
}

/// Polynomial from (exponents, residue digits) pairs.
fn poly(r: &Arc<Ring>, terms: &[(Vec<u32>, Vec<u32>)]) -> MultiPoly {
    let f = r.field().clone();
    MultiPoly::from_terms(r, terms.iter().map(|(e, d)| (e.clone(), f.from_residues(d))))
}

fn terms(nvars: usize, m: usize, p: u32, max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, Vec<u32>)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), prop::collection::vec(0..p, m)),
        0..4,
    )
}

fn fraction(r: &Arc<Ring>, num: &[(Vec<u32>, Vec<u32>)], den: &[(Vec<u32>, Vec<u32>)]) -> FieldElement {
    let d = poly(r, den);
    let d = if d.is_zero() { MultiPoly::one(r) } else { d };
    FieldElement::new(poly(r, num), d).unwrap()
}

/// (p, m) pairs with small constant fields of each shape.
const FIELDS: [(u32, u32); 4] = [(2, 1), (2, 2), (3, 1), (5, 1)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_functions_form_a_field(
        which in 0..FIELDS.len(),
        a in terms(2, 2, 5, 3), ad in terms(2, 2, 5, 2),
        b in terms(2, 2, 5, 3), bd in terms(2, 2, 5, 2),
        c in terms(2, 2, 5, 3),
    ) {
        let (p, m) = FIELDS[which];
        let reduce = |t: &[(Vec<u32>, Vec<u32>)]| -> Vec<(Vec<u32>, Vec<u32>)> {
            t.iter().map(|(e, d)| (e.clone(), d[..m as usize].iter().map(|x| x % p).collect())).collect()
        };
        let r = ring(p, m, &["t1", "t2"]);
        let a = fraction(&r, &reduce(&a), &reduce(&ad));
        let b = fraction(&r, &reduce(&b), &reduce(&bd));
        let c = fraction(&r, &reduce(&c), &[]);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
            prop_assert_eq!(&(&b * &a).checked_div(&a).unwrap(), &b);
        }
        // Canonical form: monic denominator coprime to the numerator.
        prop_assert!(a.denominator().leading_coeff() == r.field().one());
        let g = multipoly_gcd(a.numerator(), a.denominator());
        prop_assert!(g.is_constant());
    }

    #[test]
    fn derivations_and_frobenius(p in prop::sample::select(vec![2u32, 3, 5]), a in terms(2, 1, 5, 4), b in terms(2, 1, 5, 4), bd in terms(2, 1, 5, 2)) {
        let reduce = |t: &[(Vec<u32>, Vec<u32>)]| -> Vec<(Vec<u32>, Vec<u32>)> {
            t.iter().map(|(e, d)| (e.clone(), vec![d[0] % p])).collect()
        };
        let r = ring(p, 1, &["t1", "t2"]);
        let a = fraction(&r, &reduce(&a), &[]);
        let b = fraction(&r, &reduce(&b), &reduce(&bd));
        let pe = u64::from(p);
        for v in 0..2 {
            prop_assert_eq!(
                (&a * &b).partial_derivative(v),
                &(&a * &b.partial_derivative(v)) + &(&b * &a.partial_derivative(v))
            );
            prop_assert!(a.pow(pe).partial_derivative(v).is_zero());
        }
        prop_assert_eq!((&a + &b).pow(pe), &a.pow(pe) + &b.pow(pe));
        prop_assert_eq!(b.pow(pe).pth_root().unwrap(), b.clone());
        prop_assert!(b.pow(pe).is_pth_power());
    }
}

/// Dense univariate Euclid over GF(p), coefficients lowest degree first.
fn dense_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let inv = |x: u64| (1..p).find(|k| k * x % p == 1).unwrap();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lead_inv = inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = a.last().unwrap() * lead_inv % p;
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + p * p - f * c % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let li = inv(l);
        a.iter_mut().for_each(|c| *c = *c * li % p);
    }
    a
}

fn dense(f: &MultiPoly, p: u32) -> Vec<u64> {
    let mut out = Vec::new();
    for (m, c) in f.terms() {
        let e = m.exponents()[0] as usize;
        if out.len() <= e {
            out.resize(e + 1, 0);
        }
        out[e] = u64::from(f.field().as_prime_field(*c).unwrap() % p);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn univariate_gcd_matches_euclid(p in prop::sample::select(vec![2u32, 3, 5, 7]), a in prop::collection::vec(0u32..7, 0..8), b in prop::collection::vec(0u32..7, 0..8), h in prop::collection::vec(0u32..7, 1..4)) {
        let r = ring(p, 1, &["t"]);
        let f = r.field().clone();
        let mk = |c: &[u32]| MultiPoly::from_terms(&r, c.iter().enumerate().map(|(i, &x)| (vec![i as u32], f.from_int(i64::from(x % p)))));
        let h = mk(&h);
        let (a, b) = (&mk(&a) * &h, &mk(&b) * &h);
        let g = multipoly_gcd(&a, &b);
        let expected = dense_gcd(dense(&a, p), dense(&b, p), u64::from(p));
        let got = if g.is_zero() { Vec::new() } else { dense(&g.monic(), p) };
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn bivariate_gcd_divides_and_absorbs_common_factor(a in terms(2, 1, 3, 3), b in terms(2, 1, 3, 3), h in terms(2, 1, 3, 2)) {
        let r = ring(3, 1, &["t1", "t2"]);
        let reduce = |t: &[(Vec<u32>, Vec<u32>)]| -> Vec<(Vec<u32>, Vec<u32>)> { t.iter().map(|(e, d)| (e.clone(), vec![d[0] % 3])).collect() };
        let h = poly(&r, &reduce(&h));
        prop_assume!(!h.is_zero());
        let (a, b) = (&poly(&r, &reduce(&a)) * &h, &poly(&r, &reduce(&b)) * &h);
        let g = multipoly_gcd(&a, &b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        if !a.is_zero() || !b.is_zero() {
            prop_assert!(h.divides(&g));
        }
    }
}

/// Expression trees for the precedence oracle.
#[derive(Debug, Clone)]
enum Ast {
    Int(u32),
    Var(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

const VARS: [&str; 3] = ["t1", "t2", "x"];

fn ast() -> impl Strategy<Value = Ast> {
    let leaf = prop_oneof![(0u32..12).prop_map(Ast::Int), (0..VARS.len()).prop_map(Ast::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Ast::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Div(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, e)| Ast::Pow(Box::new(a), e)),
        ]
    })
}

/// Binding strength: sums 1, products 2, unary minus 3, atoms 4.
fn level(a: &Ast) -> u8 {
    match a {
        Ast::Add(..) | Ast::Sub(..) => 1,
        Ast::Mul(..) | Ast::Div(..) => 2,
        Ast::Neg(_) => 3,
        Ast::Pow(..) => 3,
        Ast::Int(_) | Ast::Var(_) => 4,
    }
}

/// Prints with the fewest parentheses the grammar allows.
fn show(a: &Ast, min: u8) -> String {
    let s = match a {
        Ast::Int(n) => n.to_string(),
        Ast::Var(i) => VARS[*i].to_string(),
        Ast::Neg(x) => format!("-{}", show(x, 3)),
        Ast::Add(x, y) => format!("{} + {}", show(x, 1), show(y, 2)),
        Ast::Sub(x, y) => format!("{} - {}", show(x, 1), show(y, 2)),
        Ast::Mul(x, y) => format!("{}*{}", show(x, 2), show(y, 3)),
        Ast::Div(x, y) => format!("{}/{}", show(x, 2), show(y, 3)),
        Ast::Pow(x, e) => format!("{}^{e}", show(x, 4)),
    };
    if level(a) < min {
        format!("({s})")
    } else {
        s
    }
}

fn eval(a: &Ast, r: &Arc<Ring>) -> Option<FieldElement> {
    Some(match a {
        Ast::Int(n) => FieldElement::from_int(r, i64::from(*n)),
        Ast::Var(i) => FieldElement::var(r, *i),
        Ast::Neg(x) => -&eval(x, r)?,
        Ast::Add(x, y) => &eval(x, r)? + &eval(y, r)?,
        Ast::Sub(x, y) => &eval(x, r)? - &eval(y, r)?,
        Ast::Mul(x, y) => &eval(x, r)? * &eval(y, r)?,
        Ast::Div(x, y) => eval(x, r)?.checked_div(&eval(y, r)?).ok()?,
        Ast::Pow(x, e) => eval(x, r)?.pow(u64::from(*e)),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parser_follows_precedence(p in prop::sample::select(vec![2u32, 3, 5]), tree in ast()) {
        let r = ring(p, 1, &VARS);
        let text = show(&tree, 0);
        match eval(&tree, &r) {
            Some(expected) => {
                let got = parse_expr(&text, &r);
                prop_assert_eq!(got.as_ref().ok(), Some(&expected), "{}", text);
                prop_assert_eq!(parse_expr(&print_canonical(&expected), &r).unwrap(), expected);
            }
            None => prop_assert!(parse_expr(&text, &r).is_err(), "{} should divide by zero", text),
        }
    }
}
