//! The standard ray toward the end fixed by the upper Borel, eventual fixing
//! of unipotents along it, and stabilization of translation lengths.

use serde::Serialize;

use super::vertex::{stabilizer_membership, translation_length, LatticeVertex};
use crate::error::{Error, Result};
use crate::linalg::PMatrix;
use crate::padic::PrimeContext;

/// The vertex of diag(1, p^l) on the standard ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RayPoint {
    pub index: u32,
}

impl RayPoint {
    pub fn vertex(&self, ctx: PrimeContext) -> LatticeVertex {
        LatticeVertex {
            p: ctx.p(),
            a: 0,
            b: 0.into(),
            c: self.index,
        }
    }
}

/// Smallest l from which [[1, x], [0, 1]] fixes every ray point.
pub fn fixing_exponent(u: &PMatrix) -> Result<u32> {
    Ok(match u.get(0, 1).certified_valuation()? {
        None => 0,
        Some(v) => (-v).max(0) as u32,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnipotentRow {
    pub u: Vec<Vec<String>>,
    pub expected_exponent: u32,
    /// Whether u fixes ray point l, for l = 0..=depth.
    pub fixes: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitElementRow {
    pub g: Vec<Vec<String>>,
    /// Valuation of the lower-left entry, None for exact zero.
    pub lower_left_valuation: Option<i64>,
    pub upper_triangular_limit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParahoricReport {
    pub depth: u32,
    pub unipotents: Vec<UnipotentRow>,
    pub limit_elements: Vec<LimitElementRow>,
    pub violations: Vec<String>,
}

impl ParahoricReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_upper_unipotent(u: &PMatrix) -> Result<bool> {
    let ctx = u.ctx();
    Ok(u.n() == 2
        && u.get(1, 0).zero_test()?
        && u.get(0, 0).agrees(&ctx.one())?
        && u.get(1, 1).agrees(&ctx.one())?)
}

/// For each unipotent u and l <= depth: u fixes ray point l exactly when
/// l >= max(0, -v(u_12)). For each element g of the sequence, g_l is taken
/// to be the l-th element and must fix ray point l; its lower-left entry
/// must shrink to zero along the sequence, so the limit is upper triangular.
pub fn parahoric_limit_check(
    ctx: PrimeContext,
    unipotents: &[PMatrix],
    sequence: &[PMatrix],
    depth: u32,
) -> Result<ParahoricReport> {
    if depth < 1 {
        return Err(Error::InvalidInput("ray depth must be at least 1".into()));
    }
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for u in unipotents {
        if !is_upper_unipotent(u)? {
            return Err(Error::InvalidInput(format!("{u} is not upper unipotent")));
        }
        let e = fixing_exponent(u)?;
        let mut fixes = Vec::new();
        for l in 0..=depth {
            let f = stabilizer_membership(u, &RayPoint { index: l }.vertex(ctx))?;
            if f != (l >= e) {
                violations.push(format!("u = {u}, l = {l}: fixes = {f}, expected {}", l >= e));
            }
            fixes.push(f);
        }
        rows.push(UnipotentRow {
            u: u.to_strings(),
            expected_exponent: e,
            fixes,
        });
    }
    let mut limit_elements = Vec::new();
    for (l, g) in sequence.iter().enumerate() {
        if !stabilizer_membership(g, &RayPoint { index: l as u32 }.vertex(ctx))? {
            violations.push(format!("sequence element {l} does not fix ray point {l}"));
        }
        let vll = g.get(1, 0).certified_valuation()?;
        let ok = vll.is_none_or(|v| v >= l as i64);
        if !ok {
            violations.push(format!("sequence element {l} has lower-left valuation {vll:?} < {l}"));
        }
        limit_elements.push(LimitElementRow {
            g: g.to_strings(),
            lower_left_valuation: vll,
            upper_triangular_limit: ok,
        });
    }
    Ok(ParahoricReport {
        depth,
        unipotents: rows,
        limit_elements,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub lengths: Vec<u32>,
    pub limit_length: u32,
    /// First index from which every length equals the limit's.
    pub stable_from: Option<usize>,
}

/// Translation lengths along a sequence converging to `limit`.
pub fn stabilization_check(sequence: &[PMatrix], limit: &PMatrix) -> Result<StabilizationReport> {
    let lengths: Vec<u32> = sequence.iter().map(translation_length).collect::<Result<_>>()?;
    let limit_length = translation_length(limit)?;
    let tail = lengths.iter().rev().take_while(|&&l| l == limit_length).count();
    let stable_from = (tail > 0).then(|| lengths.len() - tail);
    Ok(StabilizationReport {
        lengths,
        limit_length,
        stable_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn unip(c: PrimeContext, x: crate::padic::PadicNumber) -> PMatrix {
        PMatrix::new(c, 2, vec![c.one(), x, c.zero(), c.one()])
    }

    #[test]
    fn eventual_fixing() {
        let c = ctx();
        let us = [unip(c, c.integer(3)), unip(c, c.rational(2, 125)), unip(c, c.zero())];
        let r = parahoric_limit_check(c, &us, &[], 8).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.unipotents[1].expected_exponent, 3);
        assert_eq!(r.unipotents[1].fixes[..4], [false, false, false, true]);
    }

    #[test]
    fn lower_unipotents_leave_deep_points() {
        let c = ctx();
        let low = PMatrix::from_ints(c, &[vec![1, 0], vec![1, 1]]);
        assert!(stabilizer_membership(&low, &RayPoint { index: 0 }.vertex(c)).unwrap());
        assert!(!stabilizer_membership(&low, &RayPoint { index: 3 }.vertex(c)).unwrap());
    }

    #[test]
    fn stabilization_along_a_sequence() {
        let c = ctx();
        let limit = PMatrix::diagonal(c, &[c.integer(5), c.rational(1, 5)]);
        let seq: Vec<PMatrix> = (0..10)
            .map(|k| &limit * &PMatrix::new(c, 2, vec![c.one(), c.zero(), c.p_power(k), c.one()]))
            .collect();
        let r = stabilization_check(&seq, &limit).unwrap();
        assert_eq!(r.limit_length, 2);
        assert!(r.stable_from.unwrap() <= 2);
    }
}
