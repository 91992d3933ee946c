//! Textual grammar for scalars.
//!
//!   expr   := term (('+' | '-') term)*
//!   term   := factor (('*' | '/') factor)*
//!   factor := atom ('^' ('-')? int)?
//!   atom   := int | 'q' | 'sqrt2' | '(' expr ')' | '-' atom
//!
//! '*' and '/' associate left, so `1/2*sqrt2` means `(1/2)*sqrt2`. Display
//! output re-parses to the same value in the same mode.

use super::{KqElem, QMode, Scalar};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("scalar parse error: {0}")]
pub struct ParseScalarError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ParseScalarError> {
    Err(ParseScalarError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Q,
    Sqrt2,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Tok>, ParseScalarError> {
    let mut toks = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push(Tok::Int(input[start..i].to_string()));
            }
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                match &input[start..i] {
                    "q" => toks.push(Tok::Q),
                    "sqrt2" => toks.push(Tok::Sqrt2),
                    other => return err(format!("unknown symbol '{}'", other)),
                }
            }
            _ => return err(format!("unexpected character '{}'", c)),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    mode: QMode,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return err("division by zero");
                    }
                    acc = acc.mul(&rhs.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exp = self.exponent()?;
            return self.pow(base, exp);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseScalarError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(s)) => {
                let v: i64 = s.parse().map_err(|_| ParseScalarError(format!("exponent '{}' out of range", s)))?;
                Ok(if neg { -v } else { v })
            }
            _ => err("expected integer exponent after '^'"),
        }
    }

    fn pow(&self, base: Scalar, exp: i64) -> Result<Scalar, ParseScalarError> {
        if exp == 0 {
            return Ok(Scalar::one(self.mode));
        }
        let (b, n) = if exp < 0 {
            if base.is_zero() {
                return err("negative power of zero");
            }
            (base.inv(), exp.unsigned_abs())
        } else {
            (base, exp.unsigned_abs())
        };
        let mut acc = Scalar::one(self.mode);
        let mut sq = b;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.bump() {
            Some(Tok::Int(s)) => {
                let v = num::BigInt::from_str(&s)
                    .map_err(|_| ParseScalarError(format!("bad integer '{}'", s)))?;
                Ok(Scalar::from_rational(self.mode, num::BigRational::from(v)))
            }
            Some(Tok::Q) => Ok(Scalar::q_pow(self.mode, 1)),
            Some(Tok::Sqrt2) => Ok(Scalar::sqrt2(self.mode)),
            Some(Tok::Minus) => Ok(self.atom()?.neg()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => err("missing ')'"),
                }
            }
            Some(t) => err(format!("unexpected token {:?}", t)),
            None => err("unexpected end of input"),
        }
    }
}

/// Parse a scalar expression in the given coefficient mode.
pub fn parse_scalar(input: &str, mode: QMode) -> Result<Scalar, ParseScalarError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return err("empty input");
    }
    let mut p = Parser { toks, pos: 0, mode };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return err(format!("trailing input at token {}", p.pos));
    }
    Ok(v)
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Parses in formal mode; use `parse_scalar` to target a root-of-unity
    /// mode.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s, QMode::Formal)
    }
}

/// Render a KqElem so it can stand as the left operand of '*'.
fn kq_mul_operand(e: &KqElem) -> String {
    match e {
        // Fraction display already parenthesizes multi-term numerators and
        // denominators, and '/' chains left, so it is product-safe as is.
        KqElem::Formal(f) => format!("{}", f),
        KqElem::Cyclo(c) => {
            let s = format!("{}", c);
            let multi = s.contains(" + ") || s.contains(" - ");
            if multi {
                format!("({})", s)
            } else {
                s
            }
        }
    }
}

fn kq_additive(e: &KqElem) -> String {
    match e {
        KqElem::Formal(f) => format!("{}", f),
        KqElem::Cyclo(c) => format!("{}", c),
    }
}

pub(super) fn format_scalar(s: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.is_zero() {
        return write!(f, "0");
    }
    let a = s.rational_part();
    let b = s.sqrt2_part();
    let mut wrote = false;
    if !a.is_zero() {
        write!(f, "{}", kq_additive(a))?;
        wrote = true;
    }
    if !b.is_zero() {
        let piece = if b.is_one() {
            "sqrt2".to_string()
        } else if b.neg().is_one() {
            "-sqrt2".to_string()
        } else {
            format!("{}*sqrt2", kq_mul_operand(b))
        };
        if wrote {
            if let Some(rest) = piece.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", piece)?;
            }
        } else {
            write!(f, "{}", piece)?;
        }
    }
    Ok(())
}
