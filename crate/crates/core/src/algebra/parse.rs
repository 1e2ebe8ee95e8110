//! Text form of polynomials used by the fixture files.
//!
//! The canonical emission is a sum of terms `c*v^e*...` in descending
//! graded-revlex order. The reader also accepts products, parentheses and
//! integer powers of sub-expressions so that factored displays can be
//! transcribed as written.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::error::ParseError;
use super::poly::MPoly;
use super::vars::VarTable;

/// Renders terms in descending order, e.g. `16*g - 4*m`.
pub fn format_poly(a: &MPoly) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let vars = a.vars();
    let mut out = String::new();
    for (i, (m, c)) in a.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (v, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars.name(v).to_string()),
                _ => factors.push(format!("{}^{}", vars.name(v), e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Parses with the canonical table `b g m w k xb xg`.
pub fn parse_canonical(text: &str) -> Result<MPoly, ParseError> {
    parse_poly(text, &VarTable::canonical())
}

/// Parses one polynomial. `#` starts a comment running to the end of the line.
pub fn parse_poly(text: &str, vars: &Arc<VarTable>) -> Result<MPoly, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        let (line, column) = end_position(text);
        return Err(ParseError { line, column, message: "empty polynomial".into() });
    }
    let mut p = Parser { tokens, pos: 0, vars, text };
    let poly = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(t.error(format!("unexpected `{}`", t.kind.describe())));
    }
    Ok(poly)
}

/// Identifiers appearing in `text`, in first-appearance order.
pub fn identifiers(text: &str) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::new();
    for t in tokenize(text)? {
        if let TokenKind::Ident(s) = t.kind {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    (line, column)
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Int(n) => n.to_string(),
            TokenKind::Ident(s) => s.clone(),
            TokenKind::Plus => "+".into(),
            TokenKind::Minus => "-".into(),
            TokenKind::Star => "*".into(),
            TokenKind::Slash => "/".into(),
            TokenKind::Caret => "^".into(),
            TokenKind::LParen => "(".into(),
            TokenKind::RParen => ")".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: String) -> ParseError {
        ParseError { line: self.line, column: self.column, message }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line_no, col) = (li + 1, i + 1);
            let simple = match c {
                '#' => break,
                _ if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '+' => Some(TokenKind::Plus),
                '-' => Some(TokenKind::Minus),
                '*' => Some(TokenKind::Star),
                '/' => Some(TokenKind::Slash),
                '^' => Some(TokenKind::Caret),
                '(' => Some(TokenKind::LParen),
                ')' => Some(TokenKind::RParen),
                _ => None,
            };
            if let Some(kind) = simple {
                tokens.push(Token { kind, line: line_no, column: col });
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n: BigInt = s.parse().expect("digits");
                tokens.push(Token { kind: TokenKind::Int(n), line: line_no, column: col });
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                tokens.push(Token { kind: TokenKind::Ident(s), line: line_no, column: col });
            } else {
                return Err(ParseError { line: line_no, column: col, message: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Arc<VarTable>,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn eof_error(&self, what: &str) -> ParseError {
        let (line, column) = end_position(self.text);
        ParseError { line, column, message: format!("unexpected end of input, expected {what}") }
    }

    fn next(&mut self, what: &str) -> Result<Token, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error(what))?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = MPoly::zero(self.vars);
        let mut negate = false;
        match self.peek() {
            Some(TokenKind::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(TokenKind::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            match self.peek() {
                Some(TokenKind::Plus) => negate = false,
                Some(TokenKind::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.power()?;
        while let Some(TokenKind::Star) = self.peek() {
            self.pos += 1;
            acc = acc * self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if let Some(TokenKind::Caret) = self.peek() {
            self.pos += 1;
            let t = self.next("an exponent")?;
            match &t.kind {
                TokenKind::Int(n) => {
                    let e: u32 = n.try_into().map_err(|_| t.error("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                k => return Err(t.error(format!("expected a non-negative integer exponent, found `{}`", k.describe()))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        let t = self.next("a number, variable or `(`")?;
        match t.kind.clone() {
            TokenKind::Int(n) => {
                if let Some(TokenKind::Slash) = self.peek() {
                    self.pos += 1;
                    let d = self.next("a denominator")?;
                    match d.kind.clone() {
                        TokenKind::Int(den) if den != BigInt::from(0) => {
                            return Ok(MPoly::constant(self.vars, BigRational::new(n, den)));
                        }
                        TokenKind::Int(_) => return Err(d.error("zero denominator".into())),
                        k => return Err(d.error(format!("expected an integer denominator, found `{}`", k.describe()))),
                    }
                }
                Ok(MPoly::constant(self.vars, BigRational::from_integer(n)))
            }
            TokenKind::Ident(name) => match self.vars.index_of(&name) {
                Some(v) => Ok(MPoly::var(self.vars, v)),
                None => Err(t.error(format!("unknown variable `{name}`"))),
            },
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.next("`)`")?;
                if close.kind != TokenKind::RParen {
                    return Err(close.error(format!("expected `)`, found `{}`", close.kind.describe())));
                }
                Ok(inner)
            }
            k => Err(t.error(format!("unexpected `{}`", k.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vars::{GAMMA, MU};

    #[test]
    fn parses_p1() {
        let p1 = parse_canonical("16*g - 4*m").unwrap();
        let expect = MPoly::var(p1.vars(), GAMMA).scale(&BigRational::from_integer(16.into()))
            - MPoly::var(p1.vars(), MU).scale(&BigRational::from_integer(4.into()));
        assert_eq!(p1, expect);
        assert_eq!(format_poly(&p1), "16*g - 4*m");
    }

    #[test]
    fn empty_is_error() {
        let e = parse_canonical("").unwrap_err();
        assert_eq!(e.message, "empty polynomial");
        assert!(parse_canonical("   # only a comment\n").is_err());
    }

    #[test]
    fn merges_like_terms() {
        assert_eq!(format_poly(&parse_canonical("g^2 + 2*g^2").unwrap()), "3*g^2");
    }

    #[test]
    fn error_positions() {
        let e = parse_canonical("g +\n  3*q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_canonical("g + $").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_canonical("(g + m").unwrap_err();
        assert!(e.message.contains("`)`"));
        assert!(parse_canonical("g^m").is_err());
        assert!(parse_canonical("1/0*g").is_err());
    }

    #[test]
    fn factored_and_rational_input() {
        let a = parse_canonical("(m - g)*(2*g^2 - g*m - 1)^2 # q4 prefix\n").unwrap();
        let b = parse_canonical("m - g").unwrap() * parse_canonical("2*g^2 - g*m - 1").unwrap().pow(2);
        assert_eq!(a, b);
        let r = parse_canonical("-3/2*g*m + 3*g^2").unwrap();
        assert_eq!(format_poly(&r), "3*g^2 - 3/2*g*m");
        assert_eq!(format_poly(&parse_canonical("-1 + xb*xg").unwrap()), "xb*xg - 1");
    }

    #[test]
    fn identifiers_in_order() {
        assert_eq!(identifiers("x - a + x*b").unwrap(), vec!["x", "a", "b"]);
    }
}
