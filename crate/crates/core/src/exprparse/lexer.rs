use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(String),
    Ident(String),
    /// `$a`, the class of X in GF(p)[X]/(f).
    FieldGen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits one line of input into tokens. Columns count characters from 1;
/// the trailing `Eof` sits one past the last character.
pub fn tokenize(src: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: i + 1 };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(ParseError::syntax(Pos { line, col: i + 1 }, "implicit multiplication is not allowed"));
            }
            out.push(Token { tok: Tok::Int(chars[start..i].iter().collect()), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
        } else if c == '$' {
            if chars.get(i + 1) == Some(&'a') && !chars.get(i + 2).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                out.push(Token { tok: Tok::FieldGen, pos });
                i += 2;
            } else {
                return Err(ParseError::syntax(pos, "expected `$a`"));
            }
        } else {
            return Err(ParseError::syntax(pos, format!("unexpected character {c:?}")));
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col: chars.len() + 1 } });
    Ok(out)
}
