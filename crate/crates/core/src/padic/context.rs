use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::number::PadicNumber;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 32;

/// A prime together with the number of relative base-p digits carried by
/// approximate values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    precision: u32,
}

/// Deterministic Miller-Rabin; the witness set is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision < 4 {
            return Err(Error::InvalidContext(format!(
                "precision {precision} is below the minimum of 4"
            )));
        }
        Ok(PrimeContext { p, precision })
    }

    pub fn with_default_precision(p: u64) -> Result<Self> {
        Self::new(p, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same prime, different digit budget.
    pub fn with_precision(&self, precision: u32) -> Self {
        PrimeContext {
            p: self.p,
            precision: precision.max(4),
        }
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn p_pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.p_big(), k as usize)
    }

    /// v_p of a nonzero integer.
    pub fn int_valuation(&self, x: &BigInt) -> i64 {
        debug_assert!(!x.is_zero());
        let p = self.p_big();
        let mut v = 0;
        let mut y = x.clone();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&y, &p);
            if !r.is_zero() {
                return v;
            }
            y = q;
            v += 1;
        }
    }

    /// v_p of a machine integer; zero maps to `u32::MAX`.
    pub fn small_valuation(&self, mut x: u64) -> u32 {
        if x == 0 {
            return u32::MAX;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero(*self)
    }

    pub fn one(&self) -> PadicNumber {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> PadicNumber {
        PadicNumber::from_rational(*self, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn big_integer(&self, n: BigInt) -> PadicNumber {
        PadicNumber::from_rational(*self, BigRational::from_integer(n))
    }

    /// n/d; panics on d = 0, which is a programming error.
    pub fn rational(&self, n: i64, d: i64) -> PadicNumber {
        assert!(d != 0, "zero denominator");
        PadicNumber::from_rational(*self, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(&self, q: BigRational) -> PadicNumber {
        PadicNumber::from_rational(*self, q)
    }

    /// Exact p^k for any integer k.
    pub fn p_power(&self, k: i64) -> PadicNumber {
        let pk = self.p_pow(k.unsigned_abs() as u32);
        let q = if k >= 0 {
            BigRational::from_integer(pk)
        } else {
            BigRational::new(BigInt::one(), pk)
        };
        PadicNumber::from_rational(*self, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn rejects_composites_and_tiny_precision() {
        assert_eq!(PrimeContext::new(9, 32), Err(Error::NotPrime(9)));
        assert!(PrimeContext::new(5, 3).is_err());
        assert!(PrimeContext::new(2, 4).is_ok());
    }

    #[test]
    fn valuations() {
        let ctx = PrimeContext::new(3, 10).unwrap();
        assert_eq!(ctx.int_valuation(&BigInt::from(-54)), 3);
        assert_eq!(ctx.small_valuation(81), 4);
        assert_eq!(ctx.small_valuation(0), u32::MAX);
    }
}
