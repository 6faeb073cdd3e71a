#![allow(dead_code)]

use chabauty_core::linalg::PMatrix;
use chabauty_core::{PadicNumber, PrimeContext};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// Random nonzero rational num/den * p^k with small num, den and |k| <= spread.
pub fn rational<R: Rng>(ctx: PrimeContext, rng: &mut R, spread: i64) -> PadicNumber {
    let mut num: i64 = 0;
    while num == 0 {
        num = rng.gen_range(-40..=40);
    }
    let den: i64 = rng.gen_range(1..=40);
    let k = rng.gen_range(-spread..=spread);
    &ctx.rational(num, den) * &ctx.p_power(k)
}

/// Random integer-or-zero entry in [-bound, bound].
pub fn small<R: Rng>(ctx: PrimeContext, rng: &mut R, bound: i64) -> PadicNumber {
    ctx.integer(rng.gen_range(-bound..=bound))
}

pub fn exact(x: &PadicNumber) -> BigRational {
    x.exact_value().expect("exact test value")
}

/// v_p and the unit part of a nonzero rational, computed with plain integers.
pub fn split(p: u64, q: &BigRational) -> (i64, BigRational) {
    assert!(!q.is_zero());
    let pb = BigInt::from(p);
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let mut v = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    while d.is_multiple_of(&pb) {
        d /= &pb;
        v -= 1;
    }
    (v, BigRational::new(n, d))
}

/// u mod p^e for a p-adic unit u given as a rational.
pub fn unit_mod(p: u64, u: &BigRational, e: u32) -> u64 {
    let m = BigInt::from(p).pow(e);
    let n = u.numer().mod_floor(&m);
    let d = u.denom().mod_floor(&m);
    let dinv = d.modpow(&(phi(p, e) - BigInt::one()), &m);
    let r = (n * dinv).mod_floor(&m);
    u64::try_from(r).unwrap()
}

fn phi(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e - 1) * BigInt::from(p - 1)
}

/// Brute force: is the rational q a k-th power in Q_p? Only for p not dividing k.
pub fn is_kth_power(p: u64, k: u64, q: &BigRational) -> bool {
    assert!(!k.is_multiple_of(p));
    let (v, u) = split(p, q);
    if v.rem_euclid(k as i64) != 0 {
        return false;
    }
    let r = unit_mod(p, &u, 1);
    (1..p).any(|x| num_powmod(x, k, p) == r)
}

pub fn num_powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}


/// Random upper triangular n x n matrix with small integer entries.
pub fn upper<R: Rng>(ctx: PrimeContext, rng: &mut R, n: usize, strict: bool) -> PMatrix {
    PMatrix::from_fn(ctx, n, |i, j| {
        if j > i || (j == i && !strict) {
            small(ctx, rng, 6)
        } else {
            ctx.zero()
        }
    })
}
