//! Elliptic/hyperbolic classification, hyperbolic witnesses and block shapes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::normalize_into_group;
use crate::linalg::{newton_slopes, PMatrix, Subspace};
use crate::padic::{PadicNumber, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Isometry {
    Elliptic,
    Hyperbolic,
}

/// Hyperbolic iff the characteristic polynomial has a nonzero Newton slope.
pub fn classify_isometry(g: &PMatrix) -> Result<Isometry> {
    if !g.det().agrees(&g.ctx().one())? {
        return Err(Error::InvalidInput(format!("{g} does not have determinant 1")));
    }
    Ok(if newton_slopes(g)?.has_nonzero_slope() {
        Isometry::Hyperbolic
    } else {
        Isometry::Elliptic
    })
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub lambda: PadicNumber,
    /// Index whose diagonal entry dominates.
    pub i: usize,
    /// Index shifted to zero.
    pub j: usize,
    pub m: u32,
    pub h: PMatrix,
}

fn val(x: &PadicNumber) -> Result<Option<i64>> {
    x.certified_valuation()
}

/// Search λ = -a_jj + p^m, m = 1..N/2: pick i with |a_ii - a_jj| maximal and
/// require |a_ii + λ|^n > |a_jj + λ|^n and |a_ii + λ|^n > prod_t |a_tt + λ|.
/// Then h = (a + λ)^n / det(a + λ) has |h_ii| > 1.
pub fn hyperbolic_witness(a: &PMatrix) -> Result<Witness> {
    let ctx = a.ctx();
    let n = a.n();
    if !a.is_upper_triangular() {
        return Err(Error::InvalidInput("witness search needs an upper triangular matrix".into()));
    }
    if !a.trace().zero_test()? {
        return Err(Error::InvalidInput("witness search needs trace zero".into()));
    }
    let d: Vec<PadicNumber> = (0..n).map(|i| a.get(i, i).clone()).collect();
    let mut all_zero = true;
    for x in &d {
        all_zero &= x.zero_test()?;
    }
    if all_zero {
        return Err(Error::NoWitnessNeeded);
    }
    let nn = n as i64;
    for j in (0..n).rev() {
        let shifted: Vec<PadicNumber> = d.iter().map(|x| x - &d[j]).collect();
        // i maximises |a_ii - a_jj|, lowest index on ties
        let mut best: Option<(usize, i64)> = None;
        for (t, x) in shifted.iter().enumerate() {
            if let Some(v) = val(x)? {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((t, v));
                }
            }
        }
        let Some((i, _)) = best else { continue };
        for m in 1..=(ctx.precision() / 2).max(1) {
            let pm = ctx.p_power(m as i64);
            let vals: Vec<Option<i64>> = shifted.iter().map(|x| val(&(x + &pm))).collect::<Result<_>>()?;
            let (Some(vi), Some(vj)) = (vals[i], vals[j]) else { continue };
            let Some(vprod) = vals.iter().try_fold(0i64, |acc, v| v.map(|v| acc + v)) else { continue };
            // |x|^n > |y|^n  <=>  n v(x) < n v(y)
            if nn * vi < nn * vj && nn * vi < vprod {
                let lambda = &pm - &d[j];
                let shifted_a = a + &PMatrix::identity(ctx, n).scale(&lambda);
                let h = normalize_into_group(&shifted_a)?;
                return Ok(Witness { lambda, i, j, m, h });
            }
        }
    }
    Err(Error::PrecisionExhausted("no witness found for m <= N/2".into()))
}

/// Consecutive block sizes summing to n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    pub sizes: Vec<usize>,
}

/// Finest consecutive partition for which every basis element is
/// block diagonal with a constant diagonal inside each block.
pub fn block_structure_check(a: &Subspace) -> Result<BlockPartition> {
    let n = a
        .ambient()
        .matrix_size()
        .ok_or_else(|| Error::InvalidInput("algebra must live in matrix space".into()))?;
    let mats = a.basis_matrices()?;
    // cut[k]: a block boundary may sit between index k and k+1
    let mut cut = vec![true; n.saturating_sub(1)];
    for m in &mats {
        for i in 0..n {
            for j in 0..n {
                if i > j && !m.get(i, j).zero_test()? {
                    return Err(Error::NotBlockConstant(format!(
                        "basis element has a nonzero entry below the diagonal at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if i < j && !m.get(i, j).zero_test()? {
                    for c in cut.iter_mut().take(j).skip(i) {
                        *c = false;
                    }
                }
            }
        }
    }
    let mut sizes = Vec::new();
    let mut start = 0;
    for k in 0..n {
        if k + 1 == n || cut[k] {
            for m in &mats {
                for t in start + 1..=k {
                    if !(m.get(t, t) - m.get(start, start)).zero_test()? {
                        return Err(Error::NotBlockConstant(format!(
                            "diagonal varies inside block {}..{}",
                            start + 1,
                            k + 1
                        )));
                    }
                }
            }
            sizes.push(k + 1 - start);
            start = k + 1;
        }
    }
    Ok(BlockPartition { sizes })
}

/// Some diagonal entry has |h_ii| > 1.
pub fn has_expanding_diagonal(h: &PMatrix) -> bool {
    (0..h.n()).any(|i| matches!(h.get(i, i).valuation(), Valuation::Finite(v) if v < 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ambient;
    use crate::padic::PrimeContext;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    #[test]
    fn classification_examples() {
        let c = ctx();
        let d = PMatrix::diagonal(c, &[c.integer(5), c.one(), c.rational(1, 5)]);
        assert_eq!(classify_isometry(&d).unwrap(), Isometry::Hyperbolic);
        let u = PMatrix::from_ints(c, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(classify_isometry(&u).unwrap(), Isometry::Elliptic);
        let k = PMatrix::from_ints(c, &[vec![2, 3], vec![1, 2]]);
        assert_eq!(classify_isometry(&k).unwrap(), Isometry::Elliptic);
    }

    #[test]
    fn witness_for_diag_one_minus_one() {
        let c = ctx();
        let a = PMatrix::diagonal(c, &[c.one(), c.integer(-1)]);
        let w = hyperbolic_witness(&a).unwrap();
        assert!(w.lambda.agrees(&c.integer(6)).unwrap());
        assert!(w.h.get(0, 0).agrees(&c.rational(7, 5)).unwrap());
        assert!(w.h.get(1, 1).agrees(&c.rational(5, 7)).unwrap());
        assert_eq!(classify_isometry(&w.h).unwrap(), Isometry::Hyperbolic);
    }

    #[test]
    fn witness_with_upper_part() {
        let c = ctx();
        let a = PMatrix::from_ints(c, &[vec![1, 4, 2], vec![0, 1, 3], vec![0, 0, -2]]);
        let w = hyperbolic_witness(&a).unwrap();
        assert!(has_expanding_diagonal(&w.h));
        let strict = PMatrix::from_ints(c, &[vec![0, 1], vec![0, 0]]);
        assert!(matches!(hyperbolic_witness(&strict), Err(Error::NoWitnessNeeded)));
    }

    #[test]
    fn block_shapes() {
        let c = ctx();
        assert_eq!(block_structure_check(&Subspace::cartan(c, 3)).unwrap().sizes, vec![1, 1, 1]);
        let h = [PMatrix::diagonal(c, &[c.one(), c.one(), c.integer(-2)]), PMatrix::unit(c, 3, 0, 1)];
        let a = Subspace::from_matrices(c, Ambient::TraceZero(3), &h).unwrap();
        assert_eq!(block_structure_check(&a).unwrap().sizes, vec![2, 1]);
        let bad = [PMatrix::diagonal(c, &[c.one(), c.integer(-1), c.zero()]), PMatrix::unit(c, 3, 0, 1)];
        let a = Subspace::from_matrices(c, Ambient::TraceZero(3), &bad).unwrap();
        assert!(matches!(block_structure_check(&a), Err(Error::NotBlockConstant(_))));
    }
}
