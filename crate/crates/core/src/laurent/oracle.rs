//! Numerical cross-check of the leading-term reduction.
//!
//! The family is evaluated at s = p^-m with exact rationals, inverted by
//! Gauss-Jordan (not the Laurent adjugate), and each member subspace is put
//! into a full-pivot chart, whose entries are bounded and depend on t = p^m
//! rationally and regularly at t = 0. Lagrange extrapolation of the chart to
//! t = 0 then recovers the limit far beyond the ~m digits that a single
//! evaluation provides.

use serde::Serialize;

use super::limit::AlgebraFamily;
use crate::error::{Error, Result};
use crate::linalg::{echelonize, Ambient, Subspace};
use crate::padic::{PadicNumber, PrimeContext, Valuation};

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub limit: Subspace,
    pub pivot_columns: Vec<usize>,
    /// m values whose charts share the final pivot pattern.
    pub stable_m: Vec<i64>,
    /// Digits on which the last two raw (unextrapolated) charts agree.
    pub raw_agreement_digits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub pivot_columns: Vec<usize>,
    pub stable_m: Vec<i64>,
    pub raw_agreement_digits: u32,
}

impl OracleReport {
    pub fn summary(&self) -> OracleSummary {
        OracleSummary {
            pivot_columns: self.pivot_columns.clone(),
            stable_m: self.stable_m.clone(),
            raw_agreement_digits: self.raw_agreement_digits,
        }
    }
}

/// Full-pivot chart: each row has a 1 in its pivot column and 0 in every
/// other pivot column; rows are sorted by pivot column.
fn full_pivot_chart(mut rows: Vec<Vec<PadicNumber>>, ctx: PrimeContext) -> Result<(Vec<usize>, Vec<Vec<PadicNumber>>)> {
    let k = rows.len();
    let d = rows.first().map_or(0, |r| r.len());
    let mut used_rows = vec![false; k];
    let mut used_cols = vec![false; d];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for _ in 0..k {
        let mut best: Option<(i64, usize, usize)> = None;
        for c in (0..d).filter(|&c| !used_cols[c]) {
            for r in (0..k).filter(|&r| !used_rows[r]) {
                match rows[r][c].valuation() {
                    Valuation::Infinite => {}
                    Valuation::AtLeast(_) => {
                        return Err(Error::PrecisionExhausted("oracle chart entry is inexact".into()))
                    }
                    Valuation::Finite(v) => {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, c, r));
                        }
                    }
                }
            }
        }
        let (_, c, r) = best.ok_or_else(|| Error::NotStabilized("member subspace lost rank".into()))?;
        let inv = rows[r][c].inv()?;
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_exact_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * y);
            }
            row[c] = ctx.zero();
        }
        used_rows[r] = true;
        used_cols[c] = true;
        pivots.push((c, r));
    }
    pivots.sort();
    let cols = pivots.iter().map(|(c, _)| *c).collect();
    let chart = pivots.iter().map(|(_, r)| rows[*r].clone()).collect();
    Ok((cols, chart))
}

/// Value at t = 0 of the interpolating polynomial through (t_i, f_i).
fn extrapolate_to_zero(ts: &[PadicNumber], fs: &[PadicNumber]) -> Result<PadicNumber> {
    let ctx = ts[0].ctx();
    let mut acc = ctx.zero();
    for (i, fi) in fs.iter().enumerate() {
        let mut w = ctx.one();
        for (j, tj) in ts.iter().enumerate() {
            if i != j {
                w = &w * &tj.checked_div(&(tj - &ts[i]))?;
            }
        }
        acc = &acc + &(&w * fi);
    }
    Ok(acc)
}

/// Evaluate, chart and extrapolate. `m_range` must be increasing.
pub fn numeric_limit_oracle(af: &AlgebraFamily, m_range: &[i64]) -> Result<OracleReport> {
    if m_range.len() < 2 || m_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("oracle needs an increasing list of at least two m".into()));
    }
    let base = af.base();
    let ctx = base.ctx();
    let amb: Ambient = base.ambient();
    let basis = base.basis_matrices()?;
    let mut charts = Vec::new();
    for &m in m_range {
        let g = af.family().eval(m);
        let g_inv = g.inverse()?;
        let rows = basis
            .iter()
            .map(|b| amb.coords(&(&(&g * b) * &g_inv)))
            .collect::<Result<Vec<_>>>()?;
        charts.push(full_pivot_chart(rows, ctx)?);
    }
    let last = charts.len() - 1;
    if charts[last].0 != charts[last - 1].0 {
        return Err(Error::NotStabilized(format!(
            "pivot columns {:?} at m = {} vs {:?} at m = {}",
            charts[last - 1].0,
            m_range[last - 1],
            charts[last].0,
            m_range[last]
        )));
    }
    let pivots = charts[last].0.clone();
    let mut first = last;
    while first > 0 && charts[first - 1].0 == pivots {
        first -= 1;
    }
    let stable_m: Vec<i64> = m_range[first..].to_vec();
    let ts: Vec<PadicNumber> = stable_m.iter().map(|&m| ctx.p_power(m)).collect();

    let raw_agreement_digits = charts[last]
        .1
        .iter()
        .flatten()
        .zip(charts[last - 1].1.iter().flatten())
        .map(|(a, b)| a.agreement_digits(b))
        .min()
        .unwrap_or(ctx.precision());

    let k = pivots.len();
    let d = amb.dim();
    let mut extrapolated = Vec::with_capacity(k);
    for r in 0..k {
        let mut row = Vec::with_capacity(d);
        for c in 0..d {
            let fs: Vec<PadicNumber> = charts[first..].iter().map(|(_, ch)| ch[r][c].clone()).collect();
            let v = if fs.iter().all(|x| x.is_exact_zero()) {
                ctx.zero()
            } else {
                extrapolate_to_zero(&ts, &fs)?.to_approx()
            };
            row.push(v);
        }
        extrapolated.push(row);
    }
    // the identity block in the pivot columns is exact for every m
    for (r, row) in extrapolated.iter_mut().enumerate() {
        for (i, &c) in pivots.iter().enumerate() {
            row[c] = if i == r { ctx.one() } else { ctx.zero() };
        }
    }
    let limit = echelonize(ctx, amb, &extrapolated)?;
    Ok(OracleReport {
        limit,
        pivot_columns: pivots,
        stable_m,
        raw_agreement_digits,
    })
}
