//! Logarithm, exponential and principal n-th roots on their convergence domains.

use super::context::PrimeContext;
use super::number::{PadicNumber, Valuation};
use crate::error::{Error, Result};

/// Smallest valuation for which both series converge.
fn domain_floor(ctx: &PrimeContext) -> i64 {
    if ctx.p() == 2 {
        2
    } else {
        1
    }
}

fn floor_log_p(p: u64, i: u64) -> i64 {
    let mut k = 0;
    let mut x = i;
    while x >= p {
        x /= p;
        k += 1;
    }
    k
}

/// log(x) for v(x - 1) >= 1 (>= 2 when p = 2).
pub fn padic_log(x: &PadicNumber) -> Result<PadicNumber> {
    let ctx = x.ctx();
    let y = x - &ctx.one();
    let floor = domain_floor(&ctx);
    let v = match y.valuation() {
        Valuation::Infinite => return Ok(ctx.zero()),
        Valuation::AtLeast(a) if a >= floor => return Ok(PadicNumber::inexact_zero(ctx, a)),
        Valuation::Finite(v) if v >= floor => v,
        _ => {
            return Err(Error::OutOfDomain(format!(
                "log needs v(x-1) >= {floor}, got x = {x}"
            )))
        }
    };
    let target = v + y.known_precision().min(ctx.precision()) as i64;
    let y = y.to_approx();
    let p = ctx.p();
    let mut sum = ctx.zero();
    let mut power = ctx.one();
    let mut i: u64 = 1;
    loop {
        if i as i64 * v - floor_log_p(p, i) >= target && i > 1 {
            break;
        }
        power = &power * &y;
        let term = power.checked_div(&ctx.integer(i as i64))?;
        sum = if i % 2 == 1 { &sum + &term } else { &sum - &term };
        i += 1;
    }
    Ok(sum.truncate_absolute(target))
}

/// exp(z) for v(z) >= 1 (>= 2 when p = 2).
pub fn padic_exp(z: &PadicNumber) -> Result<PadicNumber> {
    let ctx = z.ctx();
    let floor = domain_floor(&ctx);
    let v = match z.valuation() {
        Valuation::Infinite => return Ok(ctx.one()),
        Valuation::AtLeast(a) if a >= floor => {
            return Ok(&ctx.one() + &PadicNumber::inexact_zero(ctx, a))
        }
        Valuation::Finite(v) if v >= floor => v,
        _ => {
            return Err(Error::OutOfDomain(format!(
                "exp needs v(z) >= {floor}, got z = {z}"
            )))
        }
    };
    let target = v + z.known_precision().min(ctx.precision()) as i64;
    let z = z.to_approx();
    let pm1 = (ctx.p() - 1) as i64;
    let mut sum = ctx.one();
    let mut term = ctx.one();
    let mut i: i64 = 1;
    // v(z^i / i!) >= i*v - (i-1)/(p-1), which grows linearly in i.
    while i * v - (i - 1) / pm1 < target {
        term = (&term * &z).checked_div(&ctx.integer(i))?;
        sum = &sum + &term;
        i += 1;
    }
    Ok(sum.truncate_absolute(target))
}

/// The principal m-th root exp(log(x)/m), congruent to 1 mod p.
pub fn nth_root(x: &PadicNumber, m: u64) -> Result<PadicNumber> {
    if m == 0 {
        return Err(Error::InvalidInput("root of order 0".into()));
    }
    let ctx = x.ctx();
    let vm = ctx.small_valuation(m) as i64;
    let need = domain_floor(&ctx) + vm;
    let d = x - &ctx.one();
    match d.valuation() {
        Valuation::Infinite => return Ok(ctx.one()),
        Valuation::Finite(v) | Valuation::AtLeast(v) if v >= need => {}
        _ => {
            return Err(Error::OutOfDomain(format!(
                "{m}-th root needs v(x-1) >= {need}, got x = {x}"
            )))
        }
    }
    let l = padic_log(x)?;
    padic_exp(&l.checked_div(&ctx.integer(m as i64))?)
}
