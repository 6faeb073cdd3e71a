use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{exhausted, Error, Result};
use crate::padic::{PadicNumber, PrimeContext, Valuation};

/// A square matrix over Q_p, row-major.
#[derive(Clone, Debug)]
pub struct PMatrix {
    ctx: PrimeContext,
    n: usize,
    entries: Vec<PadicNumber>,
}

impl PMatrix {
    pub fn new(ctx: PrimeContext, n: usize, entries: Vec<PadicNumber>) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        PMatrix { ctx, n, entries }
    }

    pub fn from_fn(ctx: PrimeContext, n: usize, mut f: impl FnMut(usize, usize) -> PadicNumber) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        PMatrix { ctx, n, entries }
    }

    pub fn zero(ctx: PrimeContext, n: usize) -> Self {
        Self::from_fn(ctx, n, |_, _| ctx.zero())
    }

    pub fn identity(ctx: PrimeContext, n: usize) -> Self {
        Self::from_fn(ctx, n, |i, j| if i == j { ctx.one() } else { ctx.zero() })
    }

    /// Matrix unit E_ij (0-based indices).
    pub fn unit(ctx: PrimeContext, n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(ctx, n, |a, b| if (a, b) == (i, j) { ctx.one() } else { ctx.zero() })
    }

    pub fn diagonal(ctx: PrimeContext, d: &[PadicNumber]) -> Self {
        let n = d.len();
        Self::from_fn(ctx, n, |i, j| if i == j { d[i].clone() } else { ctx.zero() })
    }

    pub fn from_ints(ctx: PrimeContext, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        Self::from_fn(ctx, n, |i, j| ctx.integer(rows[i][j]))
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicNumber) {
        self.entries[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        PMatrix {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ctx, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> PadicNumber {
        (0..self.n).fold(self.ctx.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.ctx, self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Determinant via the division-free characteristic polynomial.
    pub fn det(&self) -> PadicNumber {
        let c = super::charpoly::char_poly(self);
        if self.n.is_multiple_of(2) {
            c[0].clone()
        } else {
            -&c[0]
        }
    }

    /// Gauss-Jordan inverse with maximal-|.|_p pivots.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<PadicNumber>> = (0..n)
            .map(|i| {
                let mut row: Vec<PadicNumber> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { self.ctx.one() } else { self.ctx.zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let mut best: Option<(usize, i64)> = None;
            let mut uncertain = false;
            for (r, row) in a.iter().enumerate().skip(c) {
                match row[c].valuation() {
                    Valuation::Infinite => {}
                    Valuation::AtLeast(_) => uncertain = true,
                    Valuation::Finite(v) => {
                        if best.is_none_or(|(_, bv)| v < bv) {
                            best = Some((r, v));
                        }
                    }
                }
            }
            let (r, _) = match best {
                Some(b) => b,
                None if uncertain => return Err(exhausted("inverse: pivot not certified")),
                None => return Err(Error::Singular),
            };
            a.swap(c, r);
            let inv = a[c][c].inv()?;
            a[c] = a[c].iter().map(|x| x * &inv).collect();
            for r2 in 0..n {
                if r2 != c && !a[r2][c].is_exact_zero() {
                    let f = a[r2][c].clone();
                    let pivot_row = a[c].clone();
                    for (x, y) in a[r2].iter_mut().zip(pivot_row.iter()) {
                        *x = &*x - &(&f * y);
                    }
                    a[r2][c] = self.ctx.zero();
                }
            }
        }
        Ok(Self::from_fn(self.ctx, n, |i, j| a[i][n + j].clone()))
    }

    /// Entrywise equality to certified precision.
    pub fn agrees(&self, other: &Self) -> Result<bool> {
        if self.n != other.n {
            return Ok(false);
        }
        for (x, y) in self.entries.iter().zip(other.entries.iter()) {
            if !x.agrees(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> Result<bool> {
        self.agrees(&Self::identity(self.ctx, self.n))
    }

    /// Every entry below the diagonal is (indistinguishable from) zero.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_indistinguishable_from_zero()))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.n).all(|i| self.get(i, i).is_indistinguishable_from_zero())
    }

    /// Smallest entry valuation (a lower bound when entries are inexact);
    /// `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(|x| x.valuation_lower_bound()).min()
    }

    /// All entries certainly lie in Z_p.
    pub fn is_integral(&self) -> Result<bool> {
        for x in &self.entries {
            match x.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(v) => {
                    if v < 0 {
                        return Ok(false);
                    }
                }
                Valuation::AtLeast(a) => {
                    if a < 0 {
                        return Err(exhausted("integrality of an inexact entry"));
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|x| x.is_exact())
    }

    /// Entries as strings in the scalar grammar.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Add for &PMatrix {
    type Output = PMatrix;
    fn add(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n);
        PMatrix {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PMatrix {
    type Output = PMatrix;
    fn sub(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n);
        PMatrix {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PMatrix {
    type Output = PMatrix;
    fn neg(self) -> PMatrix {
        PMatrix {
            ctx: self.ctx,
            n: self.n,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &PMatrix {
    type Output = PMatrix;
    fn mul(self, rhs: &PMatrix) -> PMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        PMatrix::from_fn(self.ctx, n, |i, j| {
            let mut acc = self.ctx.zero();
            for k in 0..n {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![2, 1, 0], vec![1, 3, 5], vec![0, 4, 1]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity().unwrap());
        // 2*(3-20) - 1*(1-0) = -35
        assert!(m.det().agrees(&c.integer(-35)).unwrap());
        let sing = PMatrix::from_ints(c, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn display_row_major() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![1, 0], vec![-1, 2]]);
        assert_eq!(m.to_string(), "[1, 0; -1, 2]");
    }
}
