use std::sync::Arc;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;
use crate::exactfield::{FieldElement, Ring};

/// Largest exponent literal accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Decimal literal, kept as written and reduced mod p on evaluation.
    Int(String),
    Ident(String),
    FieldGen,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// The position of the `/` is kept for division-by-zero reports.
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

/// Binary-operator syntax tree positions are recorded only where evaluation
/// can fail; identifiers carry theirs through a side table.
pub(crate) struct Parser {
    toks: Vec<Token>,
    at: usize,
    depth: usize,
    pub(crate) ident_pos: Vec<(String, Pos)>,
}

impl Parser {
    pub(crate) fn new(src: &str, line: usize) -> Result<Parser, ParseError> {
        Ok(Parser { toks: tokenize(src, line)?, at: 0, depth: 0, ident_pos: Vec::new() })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        let t = self.peek();
        let what = match &t.tok {
            Tok::Eof => "unexpected end of input".to_string(),
            other => format!("unexpected token {other:?}"),
        };
        ParseError::syntax(t.pos, what)
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected())
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    pub(crate) fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => Ok((name, self.bump().pos)),
            _ => Err(self.unexpected()),
        }
    }

    pub(crate) fn int(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(digits) => Ok((digits, self.bump().pos)),
            _ => Err(self.unexpected()),
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::syntax(self.peek().pos, "expression nested too deeply"));
        }
        Ok(())
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        self.descend()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek().tok == Tok::Slash {
                let pos = self.bump().pos;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            self.descend()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let (digits, pos) = self.int()?;
            let e = digits
                .parse::<u32>()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| ParseError::syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(d) => {
                self.bump();
                Ok(Expr::Int(d))
            }
            Tok::Ident(name) => {
                self.bump();
                self.ident_pos.push((name.clone(), t.pos));
                Ok(Expr::Ident(name))
            }
            Tok::FieldGen => {
                self.bump();
                self.ident_pos.push(("$a".into(), t.pos));
                Ok(Expr::FieldGen)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses an expression without resolving identifiers.
pub fn parse_expr_ast(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src, 1)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

fn reduce_literal(digits: &str, p: u32) -> i64 {
    digits.bytes().fold(0u64, |acc, d| (acc * 10 + u64::from(d - b'0')) % u64::from(p)) as i64
}

/// Evaluates an expression tree in the fraction field of `ring`.
pub fn eval_expr(e: &Expr, ring: &Arc<Ring>, positions: &[(String, Pos)]) -> Result<FieldElement, ParseError> {
    let lookup = |name: &str| positions.iter().find(|(n, _)| n == name).map(|(_, p)| *p).unwrap_or(Pos { line: 1, col: 1 });
    let go = |x: &Expr| eval_expr(x, ring, positions);
    Ok(match e {
        Expr::Int(d) => FieldElement::from_int(ring, reduce_literal(d, ring.characteristic())),
        Expr::Ident(name) => match ring.var_index(name) {
            Ok(i) => FieldElement::var(ring, i),
            Err(_) => return Err(ParseError::UnknownIdentifier { name: name.clone(), pos: lookup(name) }),
        },
        Expr::FieldGen => {
            if ring.field().degree() == 1 {
                return Err(ParseError::UnknownIdentifier { name: "$a".into(), pos: lookup("$a") });
            }
            FieldElement::constant(ring, ring.field().generator())
        }
        Expr::Neg(a) => -go(a)?,
        Expr::Add(a, b) => go(a)? + go(b)?,
        Expr::Sub(a, b) => go(a)? - go(b)?,
        Expr::Mul(a, b) => go(a)? * go(b)?,
        Expr::Div(a, b, pos) => {
            let den = go(b)?;
            go(a)?.checked_div(&den).map_err(|_| ParseError::DivisionByZero { pos: *pos })?
        }
        Expr::Pow(a, k) => go(a)?.pow(u64::from(*k)),
    })
}
