use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{exhausted, Error, Result};
use crate::padic::literal::{evaluate, parse_expr, ExprAlgebra};
use crate::padic::{PadicNumber, PrimeContext, Valuation};

/// A Laurent polynomial in s over Q_p. Evaluating at s = p^-m gives the
/// m-th member of a family. Exact zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    ctx: PrimeContext,
    terms: BTreeMap<i32, PadicNumber>,
}

impl LaurentPoly {
    pub fn zero(ctx: PrimeContext) -> Self {
        LaurentPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: PadicNumber, d: i32) -> Self {
        let ctx = c.ctx();
        let mut terms = BTreeMap::new();
        if !c.is_exact_zero() {
            terms.insert(d, c);
        }
        LaurentPoly { ctx, terms }
    }

    pub fn constant(c: PadicNumber) -> Self {
        Self::monomial(c, 0)
    }

    pub fn s(ctx: PrimeContext) -> Self {
        Self::monomial(ctx.one(), 1)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &PadicNumber)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn coeff(&self, d: i32) -> PadicNumber {
        self.terms.get(&d).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    /// Highest degree with a certified nonzero coefficient; fails if an
    /// uncertified coefficient sits above it.
    pub fn top_degree(&self) -> Result<Option<i32>> {
        for (d, c) in self.terms.iter().rev() {
            match c.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(_) => return Ok(Some(*d)),
                Valuation::AtLeast(_) => {
                    return Err(exhausted(format!("coefficient of s^{d} is uncertified")))
                }
            }
        }
        Ok(None)
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// `(c, d)` if this is a single certified monomial c s^d.
    pub fn as_monomial(&self) -> Option<(PadicNumber, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (d, c) = self.terms.iter().next()?;
        c.is_certified_nonzero().then(|| (c.clone(), *d))
    }

    pub fn as_constant(&self) -> Option<PadicNumber> {
        match self.terms.len() {
            0 => Some(self.ctx.zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        let mut out = LaurentPoly::zero(self.ctx);
        for (d, x) in &self.terms {
            out.insert(*d, x * c);
        }
        out
    }

    /// Multiply by s^k.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    fn insert(&mut self, d: i32, c: PadicNumber) {
        if c.is_exact_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, c);
        }
    }

    /// Value at s = p^-m.
    pub fn eval_at(&self, m: i64) -> PadicNumber {
        self.terms.iter().fold(self.ctx.zero(), |acc, (d, c)| {
            &acc + &(c * &self.ctx.p_power(-m * *d as i64))
        })
    }

    /// Value at an arbitrary s.
    pub fn eval(&self, s: &PadicNumber) -> Result<PadicNumber> {
        let mut acc = self.ctx.zero();
        for (d, c) in &self.terms {
            acc = &acc + &(c * &s.powi(*d as i64)?);
        }
        Ok(acc)
    }

    /// Substitute s -> c s.
    pub fn substitute_scale(&self, c: &PadicNumber) -> Result<Self> {
        let mut out = LaurentPoly::zero(self.ctx);
        for (d, x) in &self.terms {
            out.insert(*d, x * &c.powi(*d as i64)?);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::constant(self.ctx.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let body = if body.contains('+') || body.contains('O') {
                format!("({body})")
            } else {
                body
            };
            match *d {
                0 => write!(f, "{body}")?,
                d => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    if d == 1 {
                        write!(f, "s")?
                    } else {
                        write!(f, "s^{d}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            let v = &out.coeff(*d) + c;
            out.insert(*d, v);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.ctx);
        for (da, a) in &self.terms {
            for (db, b) in &rhs.terms {
                let v = &out.coeff(da + db) + &(a * b);
                out.insert(da + db, v);
            }
        }
        out
    }
}

/// Evaluates entry strings into Laurent polynomials; `s` is the family
/// variable, `p` the prime, other names come from the bindings.
pub struct LaurentAlgebra<'a> {
    pub ctx: PrimeContext,
    pub bindings: &'a BTreeMap<String, PadicNumber>,
}

fn entry_error(column: usize, message: String) -> Error {
    Error::Parse {
        line: 1,
        column,
        message,
    }
}

impl ExprAlgebra for LaurentAlgebra<'_> {
    type Value = LaurentPoly;
    fn int(&self, n: &BigInt) -> LaurentPoly {
        LaurentPoly::constant(self.ctx.big_integer(n.clone()))
    }
    fn var(&self, name: &str, column: usize) -> Result<LaurentPoly> {
        match name {
            "s" => Ok(LaurentPoly::s(self.ctx)),
            "p" => Ok(LaurentPoly::constant(self.ctx.integer(self.ctx.p() as i64))),
            _ => self
                .bindings
                .get(name)
                .map(|c| LaurentPoly::constant(c.clone()))
                .ok_or_else(|| entry_error(column, format!("unbound name '{name}'"))),
        }
    }
    fn add(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        a + b
    }
    fn sub(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        a - b
    }
    fn mul(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        a * b
    }
    fn neg(&self, a: &LaurentPoly) -> LaurentPoly {
        -a
    }
    fn div(&self, a: &LaurentPoly, b: &LaurentPoly, column: usize) -> Result<LaurentPoly> {
        let (c, d) = b
            .as_monomial()
            .ok_or_else(|| entry_error(column, "divisor must be a nonzero monomial".into()))?;
        let inv = c.inv().map_err(|e| entry_error(column, e.to_string()))?;
        Ok(a.scale(&inv).shift(-d))
    }
    fn pow(&self, a: &LaurentPoly, e: i64, column: usize) -> Result<LaurentPoly> {
        if e >= 0 {
            return Ok(a.pow(e as u32));
        }
        let (c, d) = a
            .as_monomial()
            .ok_or_else(|| entry_error(column, "negative powers need a monomial base".into()))?;
        let inv = c.inv().map_err(|err| entry_error(column, err.to_string()))?;
        let k = e.unsigned_abs() as u32;
        Ok(LaurentPoly::monomial(inv.pow(k), -d * k as i32))
    }
}

/// Parse an entry string such as `1/2*s^2 + 3` or `alpha*s`.
pub fn parse_laurent(
    ctx: PrimeContext,
    text: &str,
    bindings: &BTreeMap<String, PadicNumber>,
) -> Result<LaurentPoly> {
    let e = parse_expr(text)?;
    evaluate(&LaurentAlgebra { ctx, bindings }, &e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn parse(text: &str) -> LaurentPoly {
        parse_laurent(ctx(), text, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("1/2*s^2 + 3").to_string(), "1/2*s^2 + 3");
        assert_eq!(parse("s^2/2 - s").to_string(), "1/2*s^2 - s");
        assert_eq!(parse("(1 + s)^2").to_string(), "s^2 + 2*s + 1");
        assert_eq!(parse("s^-1").to_string(), "s^-1");
        assert_eq!(parse("p*s - 5*s").to_string(), "0");
        assert!(parse_laurent(ctx(), "1/(1+s)", &BTreeMap::new()).is_err());
    }

    #[test]
    fn evaluation_at_p_powers() {
        let c = ctx();
        let f = parse("s^2 + 1");
        assert!(f.eval_at(1).agrees(&(c.rational(1, 25) + c.one())).unwrap());
    }

    #[test]
    fn top_degree_and_monomials() {
        let f = parse("3*s^4 - s");
        assert_eq!(f.top_degree().unwrap(), Some(4));
        assert!(f.as_monomial().is_none());
        let (c, d) = parse("7*s^-2").as_monomial().unwrap();
        assert_eq!(d, -2);
        assert_eq!(c.to_string(), "7");
    }
}
