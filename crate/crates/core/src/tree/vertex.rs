//! Vertices of the Bruhat-Tits tree of SL(2, Q_p) as homothety classes of
//! lattices, the action of SL(2), distances and translation lengths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{newton_slopes, PMatrix};
use crate::padic::PrimeContext;

/// The class of the lattice spanned by the columns of [[p^a, b], [0, p^c]],
/// scaled to be primitive in Z_p^2: min(a, c, v(b)) = 0 and 0 <= b < p^a.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeVertex {
    pub p: u64,
    pub a: u32,
    #[serde(serialize_with = "as_decimal")]
    pub b: BigInt,
    pub c: u32,
}

fn as_decimal<S: serde::Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

impl LatticeVertex {
    /// The class of Z_p^2.
    pub fn base(ctx: PrimeContext) -> Self {
        LatticeVertex {
            p: ctx.p(),
            a: 0,
            b: BigInt::zero(),
            c: 0,
        }
    }

    /// Validates the normal-form conditions.
    pub fn new(ctx: PrimeContext, a: u32, b: BigInt, c: u32) -> Result<Self> {
        let modulus = ctx.p_pow(a);
        if b.is_negative() || b >= modulus {
            return Err(Error::InvalidInput(format!("b = {b} must lie in [0, p^{a})")));
        }
        let b_unit = !b.is_zero() && ctx.int_valuation(&b) == 0;
        if a > 0 && c > 0 && !b_unit {
            return Err(Error::InvalidInput(format!(
                "[p^{a}, {b}; 0, p^{c}] is not primitive: b must be a unit when a, c > 0"
            )));
        }
        Ok(LatticeVertex { p: ctx.p(), a, b, c })
    }

    /// Normal form of the lattice spanned by the columns of m.
    pub fn from_basis(m: &PMatrix) -> Result<Self> {
        let ctx = m.ctx();
        if m.n() != 2 {
            return Err(Error::InvalidInput("lattice bases are 2x2".into()));
        }
        let (mut c1, mut c2) = ((m.get(0, 0).clone(), m.get(1, 0).clone()), (m.get(0, 1).clone(), m.get(1, 1).clone()));
        let v21 = c1.1.certified_valuation()?;
        let v22 = c2.1.certified_valuation()?;
        // c2 carries the smallest valuation in the second row
        if matches!((v21, v22), (Some(x), Some(y)) if x < y) || v22.is_none() {
            std::mem::swap(&mut c1, &mut c2);
        }
        if c2.1.is_exact_zero() {
            return Err(Error::Singular);
        }
        let q = c1.1.checked_div(&c2.1)?;
        let x = &c1.0 - &(&q * &c2.0);
        let a = x.certified_valuation()?.ok_or(Error::Singular)?;
        let c = c2.1.nonzero_valuation()?;
        let unit = c2.1.checked_div(&ctx.p_power(c))?;
        let y = c2.0.checked_div(&unit)?;
        let k = match y.certified_valuation()? {
            Some(vy) => a.min(c).min(vy),
            None => a.min(c),
        };
        let (a, c) = ((a - k) as u32, (c - k) as u32);
        let y = y.checked_div(&ctx.p_power(k))?;
        let b = match y.certified_valuation()? {
            Some(vy) if vy < a as i64 => {
                let r = y.unit_residue(a - vy as u32)? * ctx.p_pow(vy as u32);
                r.mod_floor(&ctx.p_pow(a))
            }
            _ => BigInt::zero(),
        };
        Ok(LatticeVertex { p: ctx.p(), a, b, c })
    }

    pub fn basis(&self, ctx: PrimeContext) -> PMatrix {
        PMatrix::new(
            ctx,
            2,
            vec![ctx.p_power(self.a as i64), ctx.big_integer(self.b.clone()), ctx.zero(), ctx.p_power(self.c as i64)],
        )
    }

    /// Distance to the base vertex.
    pub fn depth(&self) -> u32 {
        self.a + self.c
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[p^{}, {}; 0, p^{}]", self.a, self.b, self.c)
    }
}

/// Parses the printed form `[p^a, b; 0, p^c]`. The prime comes from `ctx`.
pub fn parse_vertex(ctx: PrimeContext, text: &str) -> Result<LatticeVertex> {
    let bad = || Error::InvalidInput(format!("expected a vertex like [p^2, 7; 0, p^0], got '{text}'"));
    let t = text.trim();
    if t.eq_ignore_ascii_case("base") {
        return Ok(LatticeVertex::base(ctx));
    }
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    let (top, bottom) = inner.split_once(';').ok_or_else(bad)?;
    let (pa, b) = top.split_once(',').ok_or_else(bad)?;
    let (zero, pc) = bottom.split_once(',').ok_or_else(bad)?;
    if zero.trim() != "0" {
        return Err(bad());
    }
    let exp = |s: &str| -> Result<u32> { s.trim().strip_prefix("p^").and_then(|e| u32::from_str(e).ok()).ok_or_else(bad) };
    let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
    LatticeVertex::new(ctx, exp(pa)?, b, exp(pc)?)
}

fn require_sl2(g: &PMatrix) -> Result<()> {
    if g.n() != 2 || !g.det().agrees(&g.ctx().one())? {
        return Err(Error::InvalidInput(format!("{g} is not in SL(2)")));
    }
    Ok(())
}

/// Normal form of g applied to the lattice of v.
pub fn act(g: &PMatrix, v: &LatticeVertex) -> Result<LatticeVertex> {
    require_sl2(g)?;
    LatticeVertex::from_basis(&(g * &v.basis(g.ctx())))
}

/// v(det X) - 2 min v(X_ij) for X = M_v^-1 M_w.
pub fn distance(ctx: PrimeContext, v: &LatticeVertex, w: &LatticeVertex) -> Result<u32> {
    let x = &v.basis(ctx).inverse()? * &w.basis(ctx);
    let vd = x.det().nonzero_valuation()?;
    let vmin = x.min_valuation().ok_or(Error::Singular)?;
    Ok((vd - 2 * vmin) as u32)
}

/// d(v, g v) without building the normal form of g v.
pub fn displacement(g: &PMatrix, v: &LatticeVertex) -> Result<u32> {
    let ctx = g.ctx();
    let m = v.basis(ctx);
    let x = &(&m.inverse()? * g) * &m;
    let vmin = x.min_valuation().ok_or(Error::Singular)?;
    Ok((-2 * vmin) as u32)
}

/// M^-1 g M ∈ GL(2, Z_p) for the basis M of v.
pub fn stabilizer_membership(g: &PMatrix, v: &LatticeVertex) -> Result<bool> {
    require_sl2(g)?;
    let m = v.basis(g.ctx());
    let x = &(&m.inverse()? * g) * &m;
    x.is_integral()
}

/// 2 |slope| of the Newton polygon of the characteristic polynomial.
pub fn translation_length(g: &PMatrix) -> Result<u32> {
    require_sl2(g)?;
    let s = newton_slopes(g)?.max_abs_slope() * 2;
    if !s.is_integer() {
        return Err(Error::InvalidInput(format!("half-integral slope for {g}")));
    }
    Ok(s.to_integer() as u32)
}

/// All vertices at distance exactly k from the base.
pub fn sphere(ctx: PrimeContext, k: u32) -> Vec<LatticeVertex> {
    let p = ctx.p();
    let mut out = Vec::new();
    for a in 0..=k {
        let c = k - a;
        let modulus = ctx.p_pow(a).to_u64().expect("sphere radius too large");
        for b in 0..modulus {
            if a > 0 && c > 0 && b % p == 0 {
                continue;
            }
            out.push(LatticeVertex { p, a, b: BigInt::from(b), c });
        }
    }
    out
}

pub fn ball(ctx: PrimeContext, radius: u32) -> Vec<LatticeVertex> {
    (0..=radius).flat_map(|k| sphere(ctx, k)).collect()
}

/// Minimum displacement over the ball of the given radius around the base.
pub fn min_displacement_in_ball(g: &PMatrix, radius: u32) -> Result<u32> {
    require_sl2(g)?;
    let vertices = ball(g.ctx(), radius);
    let ds: Vec<u32> = vertices.par_iter().map(|v| displacement(g, v)).collect::<Result<_>>()?;
    Ok(ds.into_iter().min().expect("ball contains the base"))
}

/// Translation length by direct minimisation. The ball of radius
/// ceil(d(x0, g x0) / 2) always meets the minimal set of g.
pub fn translation_length_by_ball(g: &PMatrix) -> Result<u32> {
    let d0 = displacement(g, &LatticeVertex::base(g.ctx()))?;
    min_displacement_in_ball(g, d0.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn diag(c: PrimeContext, k: i64) -> PMatrix {
        PMatrix::diagonal(c, &[c.p_power(k), c.p_power(-k)])
    }

    #[test]
    fn action_examples() {
        let c = ctx();
        let base = LatticeVertex::base(c);
        assert_eq!(act(&PMatrix::identity(c, 2), &base).unwrap(), base);
        let moved = act(&diag(c, 1), &base).unwrap();
        assert_eq!(distance(c, &base, &moved).unwrap(), 2);
        assert_eq!(moved.to_string(), "[p^2, 0; 0, p^0]");
        let u = PMatrix::from_ints(c, &[vec![1, 17], vec![0, 1]]);
        assert_eq!(act(&u, &base).unwrap(), base);
    }

    #[test]
    fn normal_form_is_canonical() {
        let c = ctx();
        // same lattice, different bases
        let m1 = PMatrix::from_ints(c, &[vec![25, 3], vec![0, 1]]);
        let m2 = PMatrix::from_ints(c, &[vec![28, 3 + 50], vec![1, 1]]);
        let m3 = m1.scale(&c.rational(7, 125));
        let v1 = LatticeVertex::from_basis(&m1).unwrap();
        assert_eq!(v1, LatticeVertex::from_basis(&m2).unwrap());
        assert_eq!(v1, LatticeVertex::from_basis(&m3).unwrap());
        assert_eq!(parse_vertex(c, &v1.to_string()).unwrap(), v1);
    }

    #[test]
    fn spheres_have_the_right_size() {
        let c = ctx();
        assert_eq!(sphere(c, 0).len(), 1);
        for k in 1..4 {
            let s = sphere(c, k);
            assert_eq!(s.len() as u64, 6 * 5u64.pow(k - 1));
            let base = LatticeVertex::base(c);
            assert!(s.iter().all(|v| distance(c, &base, v).unwrap() == k));
        }
    }

    #[test]
    fn translation_lengths() {
        let c = ctx();
        assert_eq!(translation_length(&diag(c, 1)).unwrap(), 2);
        assert_eq!(translation_length(&diag(c, 2)).unwrap(), 4);
        assert_eq!(translation_length_by_ball(&diag(c, 2)).unwrap(), 4);
        let k = PMatrix::from_ints(c, &[vec![2, 3], vec![1, 2]]);
        assert_eq!(translation_length(&k).unwrap(), 0);
        assert_eq!(translation_length_by_ball(&k).unwrap(), 0);
    }

    #[test]
    fn stabilizers() {
        let c = ctx();
        let base = LatticeVertex::base(c);
        assert!(stabilizer_membership(&PMatrix::from_ints(c, &[vec![2, 3], vec![1, 2]]), &base).unwrap());
        assert!(!stabilizer_membership(&diag(c, 1), &base).unwrap());
    }
}
