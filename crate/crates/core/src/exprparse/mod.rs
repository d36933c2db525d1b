//! Text format for fields, polynomials and rational functions.
//!
//! ```text
//! field GF(3)(t1, t2)        # or GF(2^2)(t), GF(4)(t)
//! coords x1, y, z
//! expr y^3 - y*z^2 + t1*x1^3
//! ```
//!
//! Expressions use `+ - * / ^` with the usual precedence, left-associative
//! binary operators, unary minus and integer-literal exponents. `$a` names
//! the generator of GF(p^m) over GF(p) when m > 1. Juxtaposition is rejected.

mod lexer;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{prime_power, FieldElement, FieldError, Gf, MultiPoly, Ring};

pub use lexer::Pos;
pub use parser::{parse_expr_ast, Expr, MAX_EXPONENT};
pub use printer::{print_canonical, print_poly};

use lexer::Tok;
use parser::{eval_expr, Parser};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {}, column {}: {msg}", pos.line, pos.col)]
    SyntaxError { pos: Pos, msg: String },
    #[error("GF({0}) is not a field of prime power order")]
    NonPrimeCharacteristic(u32),
    #[error("unknown identifier `{name}` at line {}, column {}", pos.line, pos.col)]
    UnknownIdentifier { name: String, pos: Pos },
    #[error("division by zero at line {}, column {}", pos.line, pos.col)]
    DivisionByZero { pos: Pos },
    #[error("expression is not a polynomial")]
    NotAPolynomial,
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::SyntaxError { pos, msg: msg.into() }
    }

    /// Line and column for errors that carry a position.
    pub fn position(&self) -> Option<Pos> {
        match self {
            ParseError::SyntaxError { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::DivisionByZero { pos } => Some(*pos),
            _ => None,
        }
    }
}

/// A presentation GF(p^m)(t_1, ..., t_n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub characteristic: u32,
    pub extension_degree: u32,
    pub generators: Vec<String>,
}

impl FieldDecl {
    pub fn new(p: u32, m: u32, generators: &[&str]) -> FieldDecl {
        FieldDecl { characteristic: p, extension_degree: m, generators: generators.iter().map(|s| s.to_string()).collect() }
    }

    pub fn constants(&self) -> Result<Arc<Gf>, FieldError> {
        Gf::new(self.characteristic, self.extension_degree)
    }

    /// The ring with the generators followed by `coords`.
    pub fn ring(&self, coords: &[&str]) -> Result<Arc<Ring>, FieldError> {
        let mut names = self.generators.clone();
        names.extend(coords.iter().map(|s| s.to_string()));
        Ring::from_names(self.constants()?, names)
    }
}

impl fmt::Display for FieldDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.extension_degree == 1 {
            write!(f, "field GF({})", self.characteristic)?;
        } else {
            write!(f, "field GF({}^{})", self.characteristic, self.extension_degree)?;
        }
        write!(f, "({})", self.generators.join(", "))
    }
}

fn parse_field_line(src: &str, line: usize) -> Result<FieldDecl, ParseError> {
    let mut p = Parser::new(src, line)?;
    let (kw, pos) = p.ident()?;
    if kw != "field" {
        return Err(ParseError::syntax(pos, "expected `field`"));
    }
    let (gf, pos) = p.ident()?;
    if gf != "GF" {
        return Err(ParseError::syntax(pos, "expected `GF`"));
    }
    p.expect(Tok::LParen)?;
    let (base, pos) = p.int()?;
    let base: u32 = base.parse().map_err(|_| ParseError::syntax(pos, "field size too large"))?;
    let (char_p, m) = if p.eat(&Tok::Caret) {
        let (e, epos) = p.int()?;
        let e: u32 = e.parse().map_err(|_| ParseError::syntax(epos, "extension degree too large"))?;
        if !crate::exactfield::is_prime(base) {
            return Err(ParseError::NonPrimeCharacteristic(base));
        }
        (base, e)
    } else {
        prime_power(base).ok_or(ParseError::NonPrimeCharacteristic(base))?
    };
    p.expect(Tok::RParen)?;
    p.expect(Tok::LParen)?;
    let mut generators = Vec::new();
    if !p.eat(&Tok::RParen) {
        loop {
            let (name, npos) = p.ident()?;
            if generators.contains(&name) {
                return Err(ParseError::syntax(npos, format!("generator `{name}` declared twice")));
            }
            generators.push(name);
            if p.eat(&Tok::RParen) {
                break;
            }
            p.expect(Tok::Comma)?;
        }
    }
    p.finish()?;
    let decl = FieldDecl { characteristic: char_p, extension_degree: m, generators };
    decl.constants()?;
    Ok(decl)
}

/// Parses `field GF(q)(t1, ..., tn)` where q = p or q = p^m.
pub fn parse_field(src: &str) -> Result<FieldDecl, ParseError> {
    parse_field_line(src, 1)
}

fn parse_expr_line(src: &str, line: usize, ring: &Arc<Ring>) -> Result<FieldElement, ParseError> {
    let mut p = Parser::new(src, line)?;
    let e = p.expr()?;
    p.finish()?;
    eval_expr(&e, ring, &p.ident_pos)
}

/// Parses and evaluates an expression in the fraction field of `ring`.
pub fn parse_expr(src: &str, ring: &Arc<Ring>) -> Result<FieldElement, ParseError> {
    parse_expr_line(src, 1, ring)
}

/// Like [`parse_expr`] but insists on a polynomial result.
pub fn parse_poly(src: &str, ring: &Arc<Ring>) -> Result<MultiPoly, ParseError> {
    let v = parse_expr(src, ring)?;
    v.as_polynomial().cloned().ok_or(ParseError::NotAPolynomial)
}

/// Parses a comma-separated list of expressions.
pub fn parse_expr_list(src: &str, ring: &Arc<Ring>) -> Result<Vec<FieldElement>, ParseError> {
    let mut p = Parser::new(src, 1)?;
    let mut out = Vec::new();
    loop {
        let e = p.expr()?;
        out.push(eval_expr(&e, ring, &p.ident_pos)?);
        if p.at_eof() {
            break;
        }
        p.expect(Tok::Comma)?;
    }
    Ok(out)
}

/// Distinct identifiers of `src` in order of first appearance.
pub fn identifiers(src: &str) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::new();
    for t in lexer::tokenize(src, 1)? {
        if let Tok::Ident(name) = t.tok {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

/// A parsed fixture file: one field declaration, optional coordinates, and
/// any number of expressions.
#[derive(Debug, Clone)]
pub struct Script {
    pub field: FieldDecl,
    pub coords: Vec<String>,
    pub ring: Arc<Ring>,
    pub exprs: Vec<FieldElement>,
}

/// Parses newline-delimited statements; `#` starts a comment.
pub fn parse_script(src: &str) -> Result<Script, ParseError> {
    let mut field: Option<FieldDecl> = None;
    let mut coords: Vec<String> = Vec::new();
    let mut ring: Option<Arc<Ring>> = None;
    let mut exprs = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = text.len() - trimmed.len();
        let keyword: String = trimmed.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
        let rest_col = indent + keyword.len();
        // Pad with spaces so reported columns refer to the original line.
        let rest = format!("{}{}", " ".repeat(rest_col), &text[rest_col..]);
        match keyword.as_str() {
            "field" if field.is_none() => field = Some(parse_field_line(text, line)?),
            "coords" if field.is_some() && ring.is_none() => {
                let mut p = Parser::new(&rest, line)?;
                while !p.at_eof() {
                    let (name, pos) = p.ident()?;
                    if coords.contains(&name) {
                        return Err(ParseError::syntax(pos, format!("coordinate `{name}` declared twice")));
                    }
                    coords.push(name);
                    if !p.at_eof() {
                        p.expect(Tok::Comma)?;
                    }
                }
            }
            "expr" if field.is_some() => {
                if ring.is_none() {
                    let names: Vec<&str> = coords.iter().map(String::as_str).collect();
                    ring = Some(field.as_ref().unwrap().ring(&names)?);
                }
                exprs.push(parse_expr_line(&rest, line, ring.as_ref().unwrap())?);
            }
            _ => {
                return Err(ParseError::syntax(Pos { line, col: indent + 1 }, format!("unexpected statement `{keyword}`")));
            }
        }
    }
    let field = field.ok_or_else(|| ParseError::syntax(Pos { line: 1, col: 1 }, "missing field declaration"))?;
    let ring = match ring {
        Some(r) => r,
        None => {
            let names: Vec<&str> = coords.iter().map(String::as_str).collect();
            field.ring(&names)?
        }
    };
    Ok(Script { field, coords, ring, exprs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, coords: &[&str]) -> Arc<Ring> {
        FieldDecl::new(p, 1, &["t1", "t2"]).ring(coords).unwrap()
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(identifiers("t2*t1 + t2^3, x/t1").unwrap(), ["t2", "t1", "x"]);
        assert!(identifiers("2t").is_err());
    }

    #[test]
    fn field_declarations() {
        let f = parse_field("field GF(3)(t1)").unwrap();
        assert_eq!((f.characteristic, f.extension_degree, f.generators.clone()), (3, 1, vec!["t1".to_string()]));
        let f = parse_field("field  GF( 2 )( t1 ,t2 )").unwrap();
        assert_eq!((f.characteristic, f.extension_degree), (2, 1));
        assert_eq!(f.generators, ["t1", "t2"]);
        let f = parse_field("field GF(4)(t)").unwrap();
        assert_eq!((f.characteristic, f.extension_degree), (2, 2));
        assert_eq!(parse_field("field GF(2^2)(t)").unwrap(), f);
        assert_eq!(parse_field("field GF(6)(t)"), Err(ParseError::NonPrimeCharacteristic(6)));
        assert!(matches!(parse_field("field GF(3)(t, t)"), Err(ParseError::SyntaxError { .. })));
        assert_eq!(parse_field(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn kollar_polynomial_parses_and_prints() {
        let r = ring(3, &["x1", "y", "z"]);
        let f = parse_poly("y^3 - y*z^2 + t1*x1^3", &r).unwrap();
        // Degree 4 term first, then degree 3 terms in lex order.
        assert_eq!(print_poly(&f), "t1*x1^3 + y^3 + 2*y*z^2");
        assert_eq!(parse_poly(&print_poly(&f), &r).unwrap(), f);
    }

    #[test]
    fn common_denominator() {
        let r = ring(5, &[]);
        let v = parse_expr("t1/t2 + t2/t1", &r).unwrap();
        let w = parse_expr("(t1^2 + t2^2)/(t1*t2)", &r).unwrap();
        assert_eq!(v, w);
        assert_eq!(print_canonical(&v), "(t1^2 + t2^2)/(t1*t2)");
    }

    #[test]
    fn small_outputs() {
        let r = ring(3, &[]);
        assert_eq!(print_canonical(&parse_expr("t1 - t1", &r).unwrap()), "0");
        assert_eq!(print_canonical(&parse_expr("1/t1", &r).unwrap()), "1/t1");
        assert_eq!(print_canonical(&parse_expr("-t1/t2^2", &r).unwrap()), "2*t1/t2^2");
    }

    #[test]
    fn error_positions() {
        let r = ring(3, &[]);
        let e = parse_expr("(t1", &r).unwrap_err();
        assert!(matches!(e, ParseError::SyntaxError { .. }));
        assert_eq!(e.position(), Some(Pos { line: 1, col: 4 }));
        assert_eq!(
            parse_expr("t1 + w", &r).unwrap_err(),
            ParseError::UnknownIdentifier { name: "w".into(), pos: Pos { line: 1, col: 6 } }
        );
        assert_eq!(parse_expr("t1/(t2-t2)", &r).unwrap_err(), ParseError::DivisionByZero { pos: Pos { line: 1, col: 3 } });
        assert_eq!(parse_expr("2t1", &r).unwrap_err().position(), Some(Pos { line: 1, col: 2 }));
        assert!(parse_expr("t1^2^3", &r).is_err());
        assert!(parse_expr("t1^-1", &r).is_err());
        assert!(parse_poly("1/t1", &r).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        let r = ring(5, &[]);
        let p = |s| parse_expr(s, &r).unwrap();
        assert_eq!(p("t1 - t2 - t1"), p("-t2"));
        assert_eq!(p("t1/t2/t1"), p("1/t2"));
        assert_eq!(p("-t1^2"), p("-(t1^2)"));
        assert_eq!(p("2 + 3*4^2"), p("0"));
    }

    #[test]
    fn extension_coefficients_round_trip() {
        let decl = parse_field("field GF(4)(t)").unwrap();
        let r = decl.ring(&[]).unwrap();
        let v = parse_expr("($a + 1)*t^2/($a*t + 1)", &r).unwrap();
        let text = print_canonical(&v);
        assert_eq!(parse_expr(&text, &r).unwrap(), v);
        let w = parse_expr("$a^2 + $a + 1", &r).unwrap();
        assert!(w.is_zero());
        let prime = ring(3, &[]);
        assert!(matches!(parse_expr("$a", &prime), Err(ParseError::UnknownIdentifier { .. })));
    }

    #[test]
    fn scripts() {
        let src = "# fixture\nfield GF(3)(t1)\ncoords x1, y, z\nexpr y^3 - y*z^2 + t1*x1^3\nexpr 1/t1 # inverse\n";
        let s = parse_script(src).unwrap();
        assert_eq!(s.coords, ["x1", "y", "z"]);
        assert_eq!(s.exprs.len(), 2);
        let bad = parse_script("field GF(3)(t1)\nexpr t1 +\n").unwrap_err();
        assert_eq!(bad.position(), Some(Pos { line: 2, col: 10 }));
        assert!(parse_script("expr t1").is_err());
    }

    #[test]
    fn hostile_input_does_not_panic() {
        let r = ring(2, &[]);
        let deep = "(".repeat(10_000) + &")".repeat(10_000);
        assert!(parse_expr(&deep, &r).is_err());
        let minus = "-".repeat(10_000) + "t1";
        assert!(parse_expr(&minus, &r).is_err());
        assert!(parse_expr("t1^99999999999999999999", &r).is_err());
        assert!(parse_expr("123456789012345678901234567890", &r).is_ok());
        assert!(parse_expr("\u{0}\u{ffff}$", &r).is_err());
    }
}
