//! Recursive-descent parser for coefficient expressions.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := base ("^" int)?
//! base   := number | "t" | ident "(" expr ")" | "(" expr ")" | "-" base
//! ident  := sin | cos | exp | sqrt | log
//! number := decimal | integer "/" integer
//! ```
//!
//! A leading `p/q` pair of bare integers in a term is read as one rational
//! literal, which is how such literals are printed.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use super::expr::{Expr, Func};
use crate::vf_algebra::linalg::Q;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownIdentifier { pos, .. } => *pos,
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

/// How a factor was written; only bare literals take part in `p/q` folding.
#[derive(PartialEq)]
enum Shape {
    BareInteger,
    Other,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let (mut lhs, shape) = self.factor()?;
        let mut first = shape == Shape::BareInteger;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?.0));
            } else if self.eat(b'/') {
                let (rhs, rshape) = self.factor()?;
                match (&lhs, &rhs) {
                    (Expr::Num(a), Expr::Num(b))
                        if first && rshape == Shape::BareInteger && !b.is_zero() =>
                    {
                        lhs = Expr::Num(a / b);
                    }
                    _ => lhs = Expr::Div(Box::new(lhs), Box::new(rhs)),
                }
            } else {
                return Ok(lhs);
            }
            first = false;
        }
    }

    fn factor(&mut self) -> Result<(Expr, Shape), ParseError> {
        let (base, shape) = self.base()?;
        if !self.eat(b'^') {
            return Ok((base, shape));
        }
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat(b'-');
        self.skip_ws();
        let digits = self.digits();
        let after = self.peek();
        if digits.is_empty() || matches!(after, Some(b'.') | Some(b'e') | Some(b'E')) {
            self.pos = start;
            return Err(self.error("exponent must be an integer literal (use sqrt for 1/2)"));
        }
        let n: i32 = digits
            .parse()
            .map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })?;
        Ok((Expr::Pow(Box::new(base), if neg { -n } else { n }), Shape::Other))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<(Expr, Shape), ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                let (b, _) = self.base()?;
                Ok((Expr::Neg(Box::new(b)), Shape::Other))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok((e, Shape::Other))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
                if name == "t" {
                    return Ok((Expr::T, Shape::Other));
                }
                let f = Func::from_name(&name).ok_or(ParseError::UnknownIdentifier {
                    pos: start,
                    name,
                })?;
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok((Expr::Call(f, Box::new(arg)), Shape::Other))
            }
            Some(c) => Err(self.error(&format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<(Expr, Shape), ParseError> {
        let start = self.pos;
        let int_part = self.digits();
        let mut frac = String::new();
        let mut exact_integer = true;
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            frac = self.digits();
            exact_integer = false;
        }
        if int_part.is_empty() && frac.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let mut exp: i64 = 0;
        if self.pos < self.s.len() && matches!(self.s[self.pos], b'e' | b'E') {
            self.pos += 1;
            let neg = if self.pos < self.s.len() && matches!(self.s[self.pos], b'+' | b'-') {
                self.pos += 1;
                self.s[self.pos - 1] == b'-'
            } else {
                false
            };
            let d = self.digits();
            if d.is_empty() {
                return Err(self.error("malformed exponent in number"));
            }
            exp = d.parse().map_err(|_| self.error("number exponent out of range"))?;
            if neg {
                exp = -exp;
            }
            exact_integer = false;
        }
        let mantissa: BigInt = format!("{int_part}{frac}")
            .parse()
            .unwrap_or_else(|_| BigInt::zero());
        let scale = exp - frac.len() as i64;
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            Q::from_integer(mantissa * Pow::pow(&ten, scale as u64))
        } else {
            Q::new(mantissa, Pow::pow(&ten, (-scale) as u64))
        };
        let shape = if exact_integer {
            Shape::BareInteger
        } else {
            Shape::Other
        };
        debug_assert!(!exact_integer || value.denom().is_one());
        Ok((Expr::Num(value), shape))
    }
}
