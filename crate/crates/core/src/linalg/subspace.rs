//! Canonical (reduced row echelon) subspaces of matrix space.

use serde::Serialize;

use super::matrix::PMatrix;
use crate::error::{exhausted, Error, Result};
use crate::padic::{PadicNumber, PrimeContext, Valuation};

/// Coordinate system of the ambient space.
///
/// `TraceZero(n)` uses the off-diagonal units E_ij (i != j) in row-major
/// order followed by H_1..H_{n-1}, H_i = E_ii - E_{i+1,i+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    Matrix(usize),
    TraceZero(usize),
    Plain(usize),
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match *self {
            Ambient::Matrix(n) => n * n,
            Ambient::TraceZero(n) => n * n - 1,
            Ambient::Plain(d) => d,
        }
    }

    pub fn matrix_size(&self) -> Option<usize> {
        match *self {
            Ambient::Matrix(n) | Ambient::TraceZero(n) => Some(n),
            Ambient::Plain(_) => None,
        }
    }

    /// Coordinates of a matrix; `TraceZero` requires trace zero.
    pub fn coords(&self, m: &PMatrix) -> Result<Vec<PadicNumber>> {
        let n = m.n();
        match *self {
            Ambient::Matrix(k) if k == n => Ok(m.entries().to_vec()),
            Ambient::TraceZero(k) if k == n => {
                let ctx = m.ctx();
                if !m.trace().agrees(&ctx.zero())? {
                    return Err(Error::InvalidInput(format!("matrix {m} is not trace zero")));
                }
                let mut out = Vec::with_capacity(n * n - 1);
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            out.push(m.get(i, j).clone());
                        }
                    }
                }
                let mut h = ctx.zero();
                for i in 0..n - 1 {
                    h = &h + m.get(i, i);
                    out.push(h.clone());
                }
                Ok(out)
            }
            _ => Err(Error::InvalidInput(format!(
                "{n}x{n} matrix does not live in {self:?}"
            ))),
        }
    }

    pub fn matrix(&self, ctx: PrimeContext, v: &[PadicNumber]) -> Result<PMatrix> {
        assert_eq!(v.len(), self.dim());
        match *self {
            Ambient::Matrix(n) => Ok(PMatrix::new(ctx, n, v.to_vec())),
            Ambient::TraceZero(n) => {
                let mut m = PMatrix::zero(ctx, n);
                let mut k = 0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m.set(i, j, v[k].clone());
                            k += 1;
                        }
                    }
                }
                let h = &v[n * n - n..];
                for i in 0..n {
                    let hi = if i < n - 1 { h[i].clone() } else { ctx.zero() };
                    let prev = if i > 0 { h[i - 1].clone() } else { ctx.zero() };
                    m.set(i, i, &hi - &prev);
                }
                Ok(m)
            }
            Ambient::Plain(_) => Err(Error::InvalidInput("plain vectors are not matrices".into())),
        }
    }
}

/// Reduced row echelon form: pivot of each column is the entry of smallest
/// valuation (ties to the lowest row), normalized to 1, eliminated above and
/// below. Returns the nonzero rows and their pivot columns.
pub fn rref(
    mut rows: Vec<Vec<PadicNumber>>,
    ncols: usize,
) -> Result<(Vec<Vec<PadicNumber>>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let mut best: Option<(usize, i64)> = None;
        let mut uncertain = false;
        for (i, row) in rows.iter().enumerate().skip(r) {
            match row[c].valuation() {
                Valuation::Infinite => {}
                Valuation::AtLeast(_) => uncertain = true,
                Valuation::Finite(v) => {
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((i, v));
                    }
                }
            }
        }
        let (i, _) = match best {
            Some(b) => b,
            None if uncertain => {
                return Err(exhausted(format!("rank decision in column {c} is uncertified")))
            }
            None => continue,
        };
        rows.swap(r, i);
        let inv = rows[r][c].inv()?;
        let ctx = inv.ctx();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        rows[r][c] = ctx.one();
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_exact_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_exact_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            row[c] = ctx.zero();
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Ok((rows, pivots))
}

/// A linear subspace in canonical reduced echelon form.
#[derive(Debug, Clone)]
pub struct Subspace {
    ctx: PrimeContext,
    ambient: Ambient,
    rows: Vec<Vec<PadicNumber>>,
    pivots: Vec<usize>,
}

/// Canonical basis of the span of `vectors`.
pub fn echelonize(ctx: PrimeContext, ambient: Ambient, vectors: &[Vec<PadicNumber>]) -> Result<Subspace> {
    let d = ambient.dim();
    for v in vectors {
        if v.len() != d {
            return Err(Error::InvalidInput(format!(
                "vector of length {} in ambient of dimension {d}",
                v.len()
            )));
        }
    }
    let (rows, pivots) = rref(vectors.to_vec(), d)?;
    Ok(Subspace {
        ctx,
        ambient,
        rows,
        pivots,
    })
}

impl Subspace {
    pub fn zero(ctx: PrimeContext, ambient: Ambient) -> Self {
        Subspace {
            ctx,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ctx: PrimeContext, ambient: Ambient) -> Self {
        let d = ambient.dim();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
            .collect();
        Subspace {
            ctx,
            ambient,
            rows,
            pivots: (0..d).collect(),
        }
    }

    /// Span of matrices, in the given matrix ambient.
    pub fn from_matrices(ctx: PrimeContext, ambient: Ambient, mats: &[PMatrix]) -> Result<Self> {
        let vs = mats.iter().map(|m| ambient.coords(m)).collect::<Result<Vec<_>>>()?;
        echelonize(ctx, ambient, &vs)
    }

    /// The diagonal Cartan subalgebra of sl(n).
    pub fn cartan(ctx: PrimeContext, n: usize) -> Self {
        let mats: Vec<PMatrix> = (0..n - 1)
            .map(|i| {
                let mut m = PMatrix::zero(ctx, n);
                m.set(i, i, ctx.one());
                m.set(i + 1, i + 1, ctx.integer(-1));
                m
            })
            .collect();
        Self::from_matrices(ctx, Ambient::TraceZero(n), &mats).expect("trace zero")
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<PadicNumber>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrices(&self) -> Result<Vec<PMatrix>> {
        self.rows.iter().map(|r| self.ambient.matrix(self.ctx, r)).collect()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidInput(format!(
                "ambient mismatch: {:?} vs {:?}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        echelonize(self.ctx, self.ambient, &vs)
    }

    /// Zassenhaus: reduce [a | a] and [b | 0]; rows with zero left half span the intersection.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let d = self.ambient.dim();
        let zero = self.ctx.zero();
        let mut rows = Vec::new();
        for a in &self.rows {
            let mut r = a.clone();
            r.extend(a.iter().cloned());
            rows.push(r);
        }
        for b in &other.rows {
            let mut r = b.clone();
            r.extend(std::iter::repeat_n(zero.clone(), d));
            rows.push(r);
        }
        let (red, pivots) = rref(rows, 2 * d)?;
        let inter: Vec<Vec<PadicNumber>> = red
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= d)
            .map(|(r, _)| r[d..].to_vec())
            .collect();
        echelonize(self.ctx, self.ambient, &inter)
    }

    /// Residual of v after reduction by the canonical basis.
    pub fn residual(&self, v: &[PadicNumber]) -> Vec<PadicNumber> {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_exact_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_exact_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        r
    }

    /// Membership to certified precision.
    pub fn contains(&self, v: &[PadicNumber]) -> Result<bool> {
        if v.len() != self.ambient.dim() {
            return Err(Error::InvalidInput("vector length does not match ambient".into()));
        }
        let scale = v.iter().filter_map(|x| x.valuation_lower_bound()).min();
        for x in self.residual(v) {
            match x.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(_) => return Ok(false),
                Valuation::AtLeast(a) => {
                    if scale.is_none_or(|s| a <= s) {
                        return Err(exhausted("membership rests on uncertified digits"));
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn contains_matrix(&self, m: &PMatrix) -> Result<bool> {
        match self.ambient.coords(m) {
            Ok(v) => self.contains(&v),
            Err(Error::InvalidInput(_)) if matches!(self.ambient, Ambient::TraceZero(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Identical canonical bases (to certified precision).
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.ambient != other.ambient || self.pivots != other.pivots {
            return Ok(false);
        }
        for (a, b) in self.rows.iter().zip(&other.rows) {
            for (x, y) in a.iter().zip(b) {
                if !x.agrees(y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Minimum over basis entries of the number of agreeing digits; `None`
    /// when the pivot patterns differ.
    pub fn agreement_digits(&self, other: &Self) -> Option<u32> {
        if self.ambient != other.ambient || self.pivots != other.pivots {
            return None;
        }
        let cap = self.ctx.precision();
        let mut best = cap;
        for (a, b) in self.rows.iter().zip(&other.rows) {
            for (x, y) in a.iter().zip(b) {
                best = best.min(x.agreement_digits(y));
            }
        }
        Some(best)
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_exact())
    }

    /// Re-express a subspace of sl(n) inside M(n) (or keep M(n) as is).
    pub fn to_matrix_ambient(&self) -> Result<Self> {
        match self.ambient {
            Ambient::Matrix(_) => Ok(self.clone()),
            Ambient::TraceZero(n) => {
                Self::from_matrices(self.ctx, Ambient::Matrix(n), &self.basis_matrices()?)
            }
            Ambient::Plain(_) => Err(Error::InvalidInput("plain subspace has no matrix form".into())),
        }
    }

    /// Trace-zero part of a subspace of M(n), in sl(n) coordinates.
    pub fn trace_zero_part(&self) -> Result<Self> {
        match self.ambient {
            Ambient::TraceZero(_) => Ok(self.clone()),
            Ambient::Matrix(n) => {
                let tz = Subspace::traceless(self.ctx, n);
                let inter = self.intersection(&tz)?;
                Self::from_matrices(self.ctx, Ambient::TraceZero(n), &inter.basis_matrices()?)
            }
            Ambient::Plain(_) => Err(Error::InvalidInput("plain subspace has no trace".into())),
        }
    }

    /// sl(n) as a subspace of M(n).
    pub fn traceless(ctx: PrimeContext, n: usize) -> Self {
        let full = Subspace::full(ctx, Ambient::TraceZero(n));
        let mats = full.basis_matrices().expect("matrix ambient");
        Self::from_matrices(ctx, Ambient::Matrix(n), &mats).expect("matrix ambient")
    }

    /// Basis rows rendered in the scalar grammar.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    /// Basis matrices rendered as "[a, b; c, d]".
    pub fn matrix_strings(&self) -> Result<Vec<String>> {
        Ok(self.basis_matrices()?.iter().map(|m| m.to_string()).collect())
    }
}

/// Basis of the left kernel {c : sum_i c_i rows[i] = 0}.
pub fn left_kernel(rows: &[Vec<PadicNumber>], ctx: PrimeContext) -> Result<Vec<Vec<PadicNumber>>> {
    let k = rows.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let d = rows[0].len();
    // Columns of the transpose are the rows; solve T c = 0 with T = rows^t.
    let t: Vec<Vec<PadicNumber>> = (0..d).map(|j| (0..k).map(|i| rows[i][j].clone()).collect()).collect();
    let (red, pivots) = rref(t, k)?;
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut c = vec![ctx.zero(); k];
        c[f] = ctx.one();
        for (row, &p) in red.iter().zip(&pivots) {
            c[p] = -&row[f];
        }
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn ints(c: PrimeContext, v: &[i64]) -> Vec<PadicNumber> {
        v.iter().map(|&x| c.integer(x)).collect()
    }

    #[test]
    fn e1_and_sum_give_standard_basis() {
        let c = ctx();
        let s = echelonize(c, Ambient::Plain(2), &[ints(c, &[1, 0]), ints(c, &[1, 1])]).unwrap();
        assert!(s.equals(&Subspace::full(c, Ambient::Plain(2))).unwrap());
    }

    #[test]
    fn forced_dependency_drops_rank() {
        let c = ctx();
        let a = ints(c, &[1, 5, 0, 2, 3, 0, 0, 25]);
        let b = ints(c, &[0, 1, 1, 1, 4, 2, 0, 0]);
        let comb: Vec<PadicNumber> = a.iter().zip(&b).map(|(x, y)| &(x * &c.integer(3)) - &(y * &c.rational(1, 5))).collect();
        let s = echelonize(c, Ambient::Plain(8), &[a, b, comb]).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn trace_zero_coordinates_round_trip() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![2, 1, 0], vec![3, -5, 7], vec![0, 1, 3]]);
        let amb = Ambient::TraceZero(3);
        let v = amb.coords(&m).unwrap();
        assert_eq!(v.len(), 8);
        assert!(amb.matrix(c, &v).unwrap().agrees(&m).unwrap());
        assert!(amb.coords(&PMatrix::identity(c, 3)).is_err());
    }

    #[test]
    fn cartan_plus_identity_is_diagonal() {
        let c = ctx();
        let n = 3;
        let cart = Subspace::cartan(c, n).to_matrix_ambient().unwrap();
        let id = Subspace::from_matrices(c, Ambient::Matrix(n), &[PMatrix::identity(c, n)]).unwrap();
        let diag = Subspace::from_matrices(
            c,
            Ambient::Matrix(n),
            &(0..n).map(|i| PMatrix::unit(c, n, i, i)).collect::<Vec<_>>(),
        )
        .unwrap();
        let span = cart.sum(&id).unwrap();
        assert!(span.equals(&diag).unwrap());
        let back = span.intersection(&Subspace::traceless(c, n)).unwrap();
        assert!(back.equals(&cart).unwrap());
    }

    #[test]
    fn left_kernel_finds_relation() {
        let c = ctx();
        let rows = vec![ints(c, &[1, 2]), ints(c, &[2, 4]), ints(c, &[0, 1])];
        let k = left_kernel(&rows, c).unwrap();
        assert_eq!(k.len(), 1);
        let combo: Vec<PadicNumber> = (0..2)
            .map(|j| (0..3).fold(c.zero(), |acc, i| &acc + &(&k[0][i] * &rows[i][j])))
            .collect();
        assert!(combo.iter().all(|x| x.is_exact_zero()));
    }

    #[test]
    fn uncertified_rank_fails_loudly() {
        let c = ctx();
        let a = vec![c.integer(1).to_approx(), c.integer(2).to_approx()];
        let b = vec![c.integer(1).to_approx(), c.integer(2).to_approx()];
        assert!(matches!(
            echelonize(c, Ambient::Plain(2), &[a, b]),
            Err(Error::PrecisionExhausted(_))
        ));
    }
}
