use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::context::PrimeContext;
use crate::error::{exhausted, Error, Result};

/// An element of Q_p.
///
/// Values built from rationals are kept exactly. Values produced by series,
/// root extraction or lifting are approximate: `p^v * unit` with the unit
/// known modulo `p^digits`, `digits <= precision`. An approximate value with
/// no certified digits is the inexact zero `O(p^v)`; it is never confused
/// with the exact zero.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    ctx: PrimeContext,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Zero,
    Exact(BigRational),
    Approx { v: i64, unit: BigInt, digits: u32 },
}

/// Valuation as far as it is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Infinite,
    Finite(i64),
    AtLeast(i64),
}

/// Split a nonzero rational as p^v * (unit rational).
fn split(ctx: &PrimeContext, q: &BigRational) -> (i64, BigRational) {
    let vn = ctx.int_valuation(q.numer());
    let vd = ctx.int_valuation(q.denom());
    let v = vn - vd;
    let u = q / pow_p_rat(ctx, v);
    (v, u)
}

fn pow_p_rat(ctx: &PrimeContext, v: i64) -> BigRational {
    let pk = ctx.p_pow(v.unsigned_abs() as u32);
    if v >= 0 {
        BigRational::from_integer(pk)
    } else {
        BigRational::new(BigInt::one(), pk)
    }
}

/// q mod p^k for a rational q with v_p(q) >= 0.
fn residue(ctx: &PrimeContext, q: &BigRational, k: u32) -> BigInt {
    let m = ctx.p_pow(k);
    if k == 0 {
        return BigInt::zero();
    }
    let den = q.denom().mod_floor(&m);
    let inv = den
        .modinv(&m)
        .expect("denominator of a p-integral rational is a unit");
    (q.numer().mod_floor(&m) * inv).mod_floor(&m)
}

impl PadicNumber {
    pub fn zero(ctx: PrimeContext) -> Self {
        PadicNumber { ctx, repr: Repr::Zero }
    }

    pub fn from_rational(ctx: PrimeContext, q: BigRational) -> Self {
        let repr = if q.is_zero() { Repr::Zero } else { Repr::Exact(q) };
        PadicNumber { ctx, repr }
    }

    /// `p^v * x` known modulo `p^(v + digits)`; normalizes the unit and
    /// caps the relative precision at the context's budget.
    pub fn approx(ctx: PrimeContext, v: i64, x: BigInt, digits: u32) -> Self {
        let m = ctx.p_pow(digits);
        let x = x.mod_floor(&m);
        if x.is_zero() {
            return Self::inexact_zero(ctx, v + digits as i64);
        }
        let t = ctx.int_valuation(&x);
        let unit = &x / ctx.p_pow(t as u32);
        let mut d = digits - t as u32;
        let mut unit = unit;
        if d > ctx.precision() {
            d = ctx.precision();
            unit = unit.mod_floor(&ctx.p_pow(d));
        }
        PadicNumber {
            ctx,
            repr: Repr::Approx {
                v: v + t,
                unit,
                digits: d,
            },
        }
    }

    /// The value O(p^a): zero to absolute precision a, nothing more known.
    pub fn inexact_zero(ctx: PrimeContext, a: i64) -> Self {
        PadicNumber {
            ctx,
            repr: Repr::Approx {
                v: a,
                unit: BigInt::zero(),
                digits: 0,
            },
        }
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.repr, Repr::Approx { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when the value is certainly nonzero.
    pub fn is_certified_nonzero(&self) -> bool {
        match &self.repr {
            Repr::Zero => false,
            Repr::Exact(_) => true,
            Repr::Approx { digits, .. } => *digits > 0,
        }
    }

    /// Exact zero or an inexact zero O(p^a).
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        !self.is_certified_nonzero()
    }

    /// Certified zero test; inexact zeros cannot be decided.
    pub fn zero_test(&self) -> Result<bool> {
        match &self.repr {
            Repr::Zero => Ok(true),
            Repr::Exact(_) => Ok(false),
            Repr::Approx { v, digits, .. } => {
                if *digits > 0 {
                    Ok(false)
                } else {
                    Err(exhausted(format!("cannot decide whether O(p^{v}) is zero")))
                }
            }
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Exact(q) => Valuation::Finite(split(&self.ctx, q).0),
            Repr::Approx { v, digits, .. } => {
                if *digits > 0 {
                    Valuation::Finite(*v)
                } else {
                    Valuation::AtLeast(*v)
                }
            }
        }
    }

    /// `Ok(None)` for exact zero; error if the valuation is uncertified.
    pub fn certified_valuation(&self) -> Result<Option<i64>> {
        match self.valuation() {
            Valuation::Infinite => Ok(None),
            Valuation::Finite(v) => Ok(Some(v)),
            Valuation::AtLeast(a) => Err(exhausted(format!("valuation of O(p^{a}) is unknown"))),
        }
    }

    /// Valuation of a value that must be nonzero.
    pub fn nonzero_valuation(&self) -> Result<i64> {
        match self.valuation() {
            Valuation::Infinite => Err(Error::DivisionByZero),
            Valuation::Finite(v) => Ok(v),
            Valuation::AtLeast(a) => Err(exhausted(format!("valuation of O(p^{a}) is unknown"))),
        }
    }

    /// A lower bound for the valuation; `None` means +infinity.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Infinite => None,
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
        }
    }

    /// Absolute precision: the value is known modulo p^result. `None` for exact values.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Approx { v, digits, .. } => Some(v + *digits as i64),
            _ => None,
        }
    }

    /// Certified relative digits. Exact values report the context budget.
    pub fn known_precision(&self) -> u32 {
        match &self.repr {
            Repr::Approx { digits, .. } => *digits,
            _ => self.ctx.precision(),
        }
    }

    pub fn exact_value(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Zero => Some(BigRational::zero()),
            Repr::Exact(q) => Some(q.clone()),
            Repr::Approx { .. } => None,
        }
    }

    /// Unit part modulo p^k; fails if fewer than k digits are certified.
    pub fn unit_residue(&self, k: u32) -> Result<BigInt> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Exact(q) => {
                let (_, u) = split(&self.ctx, q);
                Ok(residue(&self.ctx, &u, k))
            }
            Repr::Approx { unit, digits, .. } => {
                if *digits < k {
                    Err(exhausted(format!("unit known to {digits} digits, {k} needed")))
                } else {
                    Ok(unit.mod_floor(&self.ctx.p_pow(k)))
                }
            }
        }
    }

    /// Re-home the value in a context with the same prime, capping digits.
    pub fn with_context(&self, ctx: PrimeContext) -> Self {
        assert_eq!(ctx.p(), self.ctx.p(), "prime mismatch");
        match &self.repr {
            Repr::Approx { v, unit, digits } => PadicNumber::approx(ctx, *v, unit.clone(), *digits),
            r => PadicNumber { ctx, repr: r.clone() },
        }
    }

    /// Forget exactness: an approximate value with the full digit budget.
    pub fn to_approx(&self) -> Self {
        match &self.repr {
            Repr::Exact(q) => {
                let (v, u) = split(&self.ctx, q);
                let n = self.ctx.precision();
                PadicNumber::approx(self.ctx, v, residue(&self.ctx, &u, n), n)
            }
            _ => self.clone(),
        }
    }

    /// Truncate to absolute precision `a` (no-op if already coarser).
    pub fn truncate_absolute(&self, a: i64) -> Self {
        match &self.repr {
            Repr::Zero => PadicNumber::inexact_zero(self.ctx, a),
            Repr::Exact(q) => {
                let (v, u) = split(&self.ctx, q);
                if v >= a {
                    return PadicNumber::inexact_zero(self.ctx, a);
                }
                let d = (a - v) as u32;
                PadicNumber::approx(self.ctx, v, residue(&self.ctx, &u, d), d)
            }
            Repr::Approx { v, unit, digits } => {
                if v + *digits as i64 <= a {
                    return self.clone();
                }
                if *v >= a {
                    return PadicNumber::inexact_zero(self.ctx, a);
                }
                PadicNumber::approx(self.ctx, *v, unit.clone(), (a - v) as u32)
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> PrimeContext {
        assert_eq!(self.ctx.p(), other.ctx.p(), "mixing different primes");
        if self.ctx.precision() <= other.ctx.precision() {
            self.ctx
        } else {
            other.ctx
        }
    }

    /// Integer X with value = p^w * X modulo p^(w + len); requires v >= w.
    fn scaled_residue(&self, w: i64, len: u32) -> BigInt {
        match &self.repr {
            Repr::Zero => BigInt::zero(),
            Repr::Exact(q) => {
                let shifted = q / pow_p_rat(&self.ctx, w);
                residue(&self.ctx, &shifted, len)
            }
            Repr::Approx { v, unit, .. } => {
                let shift = (v - w) as u32;
                if shift >= len {
                    BigInt::zero()
                } else {
                    unit * self.ctx.p_pow(shift)
                }
            }
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        let ctx = self.check_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => return other.with_context(ctx),
            (_, Repr::Zero) => return self.with_context(ctx),
            (Repr::Exact(a), Repr::Exact(b)) => return PadicNumber::from_rational(ctx, a + b),
            _ => {}
        }
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let w = self
            .valuation_lower_bound()
            .unwrap()
            .min(other.valuation_lower_bound().unwrap());
        if w >= abs {
            return PadicNumber::inexact_zero(ctx, abs);
        }
        let len = (abs - w) as u32;
        let x = self.scaled_residue(w, len) + other.scaled_residue(w, len);
        PadicNumber::approx(ctx, w, x, len)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let ctx = self.check_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => PadicNumber::zero(ctx),
            (Repr::Exact(a), Repr::Exact(b)) => PadicNumber::from_rational(ctx, a * b),
            _ => {
                let va = self.valuation_lower_bound().unwrap();
                let vb = other.valuation_lower_bound().unwrap();
                if !self.is_certified_nonzero() || !other.is_certified_nonzero() {
                    // O(p^a) * y is O(p^(a + v(y))), and lower bounds add.
                    return PadicNumber::inexact_zero(ctx, va + vb);
                }
                let d = self.known_precision().min(other.known_precision()).min(ctx.precision());
                let ua = self.unit_residue(d).unwrap();
                let ub = other.unit_residue(d).unwrap();
                PadicNumber::approx(ctx, va + vb, ua * ub, d)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Exact(q) => Ok(PadicNumber::from_rational(self.ctx, q.recip())),
            Repr::Approx { v, unit, digits } => {
                if *digits == 0 {
                    return Err(exhausted(format!("cannot invert O(p^{v})")));
                }
                let m = self.ctx.p_pow(*digits);
                let inv = unit.modinv(&m).expect("unit is invertible");
                Ok(PadicNumber::approx(self.ctx, -v, inv, *digits))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u32))
        }
    }

    /// Equality to certified precision: the difference is exactly zero, or an
    /// inexact zero that still pins at least one digit of the operands.
    pub fn agrees(&self, other: &Self) -> Result<bool> {
        let d = self - other;
        match d.valuation() {
            Valuation::Infinite => Ok(true),
            Valuation::Finite(_) => Ok(false),
            Valuation::AtLeast(a) => {
                let floor = match (self.valuation_lower_bound(), other.valuation_lower_bound()) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => return Ok(true),
                };
                if a > floor {
                    Ok(true)
                } else {
                    Err(exhausted("equality test rests on uncertified digits"))
                }
            }
        }
    }

    /// Like `agrees`, but an undecidable comparison counts as "not equal".
    pub fn agrees_lenient(&self, other: &Self) -> bool {
        self.agrees(other).unwrap_or(false)
    }

    /// Number of leading p-adic digits (absolute, below valuation `floor`)
    /// on which two values agree, capped at the context budget.
    pub fn agreement_digits(&self, other: &Self) -> u32 {
        let cap = self.ctx.precision();
        let d = self - other;
        let scale = match (self.valuation_lower_bound(), other.valuation_lower_bound()) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return cap,
        };
        match d.valuation() {
            Valuation::Infinite => cap,
            Valuation::Finite(v) | Valuation::AtLeast(v) => (v - scale).clamp(0, cap as i64) as u32,
        }
    }

    /// Canonical ordering key for exact values (used to sort small sets).
    pub fn sort_key(&self) -> (i64, BigInt) {
        match self.valuation() {
            Valuation::Infinite => (i64::MAX, BigInt::zero()),
            Valuation::Finite(v) | Valuation::AtLeast(v) => {
                let u = self.unit_residue(self.known_precision()).unwrap_or_default();
                (v, u)
            }
        }
    }

    /// Render as `p^v*u` with u the unit residue (lossy for exact
    /// non-integral units, exact when the unit part is an integer).
    pub fn to_padic_string(&self) -> String {
        match &self.repr {
            Repr::Zero => "0".to_string(),
            Repr::Exact(q) => {
                let (v, u) = split(&self.ctx, q);
                if u.is_integer() {
                    format_pu(v, &u.to_integer())
                } else {
                    let n = self.ctx.precision();
                    format_pu(v, &residue(&self.ctx, &u, n))
                }
            }
            Repr::Approx { v, unit, digits } => {
                if *digits == 0 {
                    format!("O(p^{v})")
                } else {
                    format_pu(*v, unit)
                }
            }
        }
    }
}

fn format_pu(v: i64, u: &BigInt) -> String {
    if v == 0 {
        return u.to_string();
    }
    if u.is_one() {
        return format!("p^{v}");
    }
    if u.is_negative() {
        format!("-p^{v}*{}", -u)
    } else {
        format!("p^{v}*{u}")
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Exact(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Approx { .. } => write!(f, "{}", self.to_padic_string()),
        }
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Exact(q) => PadicNumber::from_rational(self.ctx, -q),
            Repr::Approx { v, unit, digits } => {
                if *digits == 0 {
                    self.clone()
                } else {
                    PadicNumber::approx(self.ctx, *v, -unit, *digits)
                }
            }
        }
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:expr) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                $imp(self, rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                $imp(&self, rhs)
            }
        }
        impl $tr<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                $imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &PadicNumber, b: &PadicNumber| a.add_impl(b));
forward_binop!(Sub, sub, |a: &PadicNumber, b: &PadicNumber| a.add_impl(&-b));
forward_binop!(Mul, mul, |a: &PadicNumber, b: &PadicNumber| a.mul_impl(b));

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p, 32).unwrap()
    }

    #[test]
    fn inverse_of_p_has_negative_valuation() {
        let c = ctx(3);
        let x = c.integer(3).inv().unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(-1));
        assert_eq!(x.unit_residue(5).unwrap(), BigInt::from(1));
    }

    #[test]
    fn inverse_of_one_minus_p_is_geometric_series() {
        let c = ctx(5);
        let x = c.integer(1 - 5).to_approx();
        let y = x.inv().unwrap();
        // 1 + 5 + 5^2 + ... mod 5^32
        let expect: BigInt = (0..32).map(|i| c.p_pow(i)).sum();
        assert_eq!(y.unit_residue(32).unwrap(), expect);
        assert!((&y * &x).agrees(&c.one()).unwrap());
    }

    #[test]
    fn exact_zero_is_not_small() {
        let c = ctx(7);
        let a = c.integer(5);
        assert!((&a - &a).is_exact_zero());
        let b = a.to_approx();
        let d = &b - &b;
        assert!(!d.is_exact_zero());
        assert!(d.is_indistinguishable_from_zero());
        assert!(d.zero_test().is_err());
        assert!(c.zero().inv().is_err());
    }

    #[test]
    fn cancellation_reduces_certified_digits() {
        let c = ctx(5);
        let a = c.integer(1).to_approx();
        let b = (c.integer(1) + c.p_power(10)).to_approx();
        let d = &b - &a;
        assert_eq!(d.valuation(), Valuation::Finite(10));
        assert_eq!(d.known_precision(), 22);
    }

    #[test]
    fn approximate_multiplication_keeps_min_digits() {
        let c = ctx(5);
        let a = c.integer(7).truncate_absolute(10);
        let b = c.integer(3).to_approx();
        let prod = &a * &b;
        assert_eq!(prod.known_precision(), 10);
        assert!(prod.agrees(&c.integer(21)).unwrap());
    }

    #[test]
    fn display_grammar() {
        let c = ctx(5);
        assert_eq!(c.rational(3, 4).to_string(), "3/4");
        assert_eq!(c.integer(-7).to_string(), "-7");
        assert_eq!(c.rational(50, 1).to_padic_string(), "p^2*2");
        assert_eq!(c.p_power(-3).to_padic_string(), "p^-3");
        assert_eq!(PadicNumber::inexact_zero(c, 4).to_string(), "O(p^4)");
    }

    #[test]
    fn agreement_digits_caps_at_budget() {
        let c = ctx(3);
        let a = c.integer(10);
        assert_eq!(a.agreement_digits(&a), 32);
        assert_eq!(a.agreement_digits(&(&a + &c.p_power(5))), 5);
    }
}
