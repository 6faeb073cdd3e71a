//! Parser for scalar and Laurent-entry strings.
//!
//! ```text
//! entry   = sum ;
//! sum     = [ "+" | "-" ] product { ( "+" | "-" ) product } ;
//! product = power { ( "*" | "/" ) power } ;
//! power   = atom [ "^" [ "+" | "-" ] digits ] ;
//! atom    = digits | "s" | "p" | identifier | "(" sum ")" ;
//! ```
//!
//! `p` is the prime of the ambient context, `s` the family variable, and any
//! other identifier must be bound by the caller (e.g. `alpha`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::context::PrimeContext;
use super::number::PadicNumber;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_error(self.column(), "expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digit string"))
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = if self.eat(b'-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat(b'+');
            self.product()?
        };
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else if self.peek() == Some(b'/') {
                let col = self.column();
                self.pos += 1;
                acc = Expr::Div(Box::new(acc), Box::new(self.power()?), col);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let col = self.column();
            self.pos += 1;
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let d = self.digits()?;
            let e: i64 = d
                .try_into()
                .map_err(|_| parse_error(col, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, col));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.digits()?)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(parse_error(self.column(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Expr::Var(name.to_string(), start + 1))
            }
            Some(c) => Err(parse_error(
                self.column(),
                format!("unexpected character '{}'", c as char),
            )),
            None => Err(parse_error(self.column(), "unexpected end of input")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    if !text.is_ascii() {
        let col = text.char_indices().find(|(_, c)| !c.is_ascii()).map(|(i, _)| i + 1);
        return Err(parse_error(col.unwrap_or(1), "non-ASCII character"));
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = parser.sum()?;
    if parser.peek().is_some() {
        return Err(parse_error(parser.column(), "trailing input"));
    }
    Ok(e)
}

/// Operations needed to evaluate an [`Expr`] in some ring.
pub trait ExprAlgebra {
    type Value: Clone;
    fn int(&self, n: &BigInt) -> Self::Value;
    fn var(&self, name: &str, column: usize) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value, column: usize) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, e: i64, column: usize) -> Result<Self::Value>;
}

pub fn evaluate<A: ExprAlgebra>(alg: &A, e: &Expr) -> Result<A::Value> {
    Ok(match e {
        Expr::Int(n) => alg.int(n),
        Expr::Var(name, col) => alg.var(name, *col)?,
        Expr::Neg(a) => alg.neg(&evaluate(alg, a)?),
        Expr::Add(a, b) => alg.add(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Sub(a, b) => alg.sub(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Mul(a, b) => alg.mul(&evaluate(alg, a)?, &evaluate(alg, b)?),
        Expr::Div(a, b, col) => alg.div(&evaluate(alg, a)?, &evaluate(alg, b)?, *col)?,
        Expr::Pow(a, k, col) => alg.pow(&evaluate(alg, a)?, *k, *col)?,
    })
}

/// Scalar evaluation: `p` is the prime, other names come from `bindings`.
pub struct ScalarAlgebra<'a> {
    pub ctx: PrimeContext,
    pub bindings: &'a BTreeMap<String, PadicNumber>,
}

impl ExprAlgebra for ScalarAlgebra<'_> {
    type Value = PadicNumber;
    fn int(&self, n: &BigInt) -> PadicNumber {
        self.ctx.big_integer(n.clone())
    }
    fn var(&self, name: &str, column: usize) -> Result<PadicNumber> {
        if name == "p" {
            return Ok(self.ctx.integer(self.ctx.p() as i64));
        }
        self.bindings
            .get(name)
            .cloned()
            .ok_or_else(|| parse_error(column, format!("unbound name '{name}'")))
    }
    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a + b
    }
    fn sub(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a - b
    }
    fn mul(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a * b
    }
    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        -a
    }
    fn div(&self, a: &PadicNumber, b: &PadicNumber, column: usize) -> Result<PadicNumber> {
        a.checked_div(b)
            .map_err(|e| parse_error(column, format!("division failed: {e}")))
    }
    fn pow(&self, a: &PadicNumber, e: i64, column: usize) -> Result<PadicNumber> {
        a.powi(e)
            .map_err(|err| parse_error(column, format!("power failed: {err}")))
    }
}

/// Parse a scalar literal such as `3`, `-1/2`, `p^-2*7` or `alpha^2`.
pub fn parse_scalar(
    ctx: PrimeContext,
    text: &str,
    bindings: &BTreeMap<String, PadicNumber>,
) -> Result<PadicNumber> {
    let e = parse_expr(text)?;
    evaluate(&ScalarAlgebra { ctx, bindings }, &e)
}

/// Parse a scalar with no named parameters.
pub fn parse_plain_scalar(ctx: PrimeContext, text: &str) -> Result<PadicNumber> {
    parse_scalar(ctx, text, &BTreeMap::new())
}

/// Exact rational from "a" or "a/b" (used by small helpers and tests).
pub fn rational_literal(text: &str) -> Option<BigRational> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(n, d))
}
