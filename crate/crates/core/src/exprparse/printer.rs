use crate::exactfield::{FieldElement, Gf, GfElem, Monomial, MultiPoly, Ring};

fn monomial_text(ring: &Ring, m: &Monomial) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { ring.var_name(i).to_string() } else { format!("{}^{}", ring.var_name(i), e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Coefficient text and whether it is a sum (needs parentheses as a factor).
fn coeff_text(field: &Gf, c: GfElem) -> (String, bool) {
    if field.degree() == 1 {
        return (field.residues(c)[0].to_string(), false);
    }
    let parts: Vec<String> = field
        .residues(c)
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| {
            let gen = match i {
                0 => String::new(),
                1 => "$a".to_string(),
                _ => format!("$a^{i}"),
            };
            match (d, gen.is_empty()) {
                (_, true) => d.to_string(),
                (1, false) => gen,
                (_, false) => format!("{d}*{gen}"),
            }
        })
        .collect();
    let compound = parts.len() > 1;
    (parts.join(" + "), compound)
}

fn term_text(ring: &Ring, m: &Monomial, c: GfElem) -> String {
    let (ct, compound) = coeff_text(ring.field(), c);
    if m.is_one() {
        return ct;
    }
    let mt = monomial_text(ring, m);
    if c == ring.field().one() {
        mt
    } else if compound {
        format!("({ct})*{mt}")
    } else {
        format!("{ct}*{mt}")
    }
}

/// Canonical text of a polynomial: terms in descending graded-lex order,
/// coefficients as residues, unit coefficients omitted.
pub fn print_poly(f: &MultiPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.terms().rev().map(|(m, c)| term_text(f.ring(), m, *c)).collect::<Vec<_>>().join(" + ")
}

fn is_single_factor(f: &MultiPoly) -> bool {
    if f.num_terms() != 1 {
        return false;
    }
    let (m, c) = f.leading_term().unwrap();
    if m.is_one() {
        return !coeff_text(f.field(), c).1;
    }
    c == f.field().one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
}

/// Canonical text of a fraction field element, `num` or `num/den`.
pub fn print_canonical(x: &FieldElement) -> String {
    let num = print_poly(x.numerator());
    if x.is_polynomial() {
        return num;
    }
    let num = if x.numerator().num_terms() > 1 || coeff_compound_constant(x.numerator()) {
        format!("({num})")
    } else {
        num
    };
    let den = print_poly(x.denominator());
    if is_single_factor(x.denominator()) {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

fn coeff_compound_constant(f: &MultiPoly) -> bool {
    f.is_constant() && coeff_text(f.field(), f.constant_coeff()).1
}
