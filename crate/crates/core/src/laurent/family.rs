use std::collections::{BTreeMap, HashMap};

use super::poly::{parse_laurent, LaurentPoly};
use crate::error::{Error, Result};
use crate::linalg::{Ambient, PMatrix};
use crate::padic::{PadicNumber, PrimeContext};

/// An invertible n x n matrix over Q_p[s, 1/s].
#[derive(Clone, Debug)]
pub struct LaurentFamily {
    ctx: PrimeContext,
    n: usize,
    g: Vec<LaurentPoly>,
    inverse: Vec<LaurentPoly>,
    det: (PadicNumber, i32),
}

/// Determinant by Laplace expansion over column subsets (memoized).
pub fn laurent_det(ctx: PrimeContext, m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::constant(ctx.one());
    }
    // memo[mask] = det of rows 0..popcount(mask) against the columns in mask
    let mut memo: HashMap<u32, LaurentPoly> = HashMap::new();
    memo.insert(0, LaurentPoly::constant(ctx.one()));
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = &m[k - 1];
        let mut acc = LaurentPoly::zero(ctx);
        for j in 0..n {
            if mask & (1 << j) == 0 || row[j].is_zero() {
                continue;
            }
            let rest = mask & !(1 << j);
            let sub = &memo[&rest];
            if sub.is_zero() {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let term = &row[j] * sub;
            acc = if above % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        memo.insert(mask, acc);
    }
    memo.remove(&((1u32 << n) - 1)).unwrap()
}

fn minor(m: &[Vec<LaurentPoly>], skip_r: usize, skip_c: usize) -> Vec<Vec<LaurentPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

impl LaurentFamily {
    pub fn new(ctx: PrimeContext, n: usize, g: Vec<LaurentPoly>) -> Result<Self> {
        if g.len() != n * n {
            return Err(Error::InvalidInput(format!("expected {} entries, got {}", n * n, g.len())));
        }
        if n > 16 {
            return Err(Error::InvalidInput("families larger than 16x16 are not supported".into()));
        }
        let grid: Vec<Vec<LaurentPoly>> = (0..n).map(|i| g[i * n..(i + 1) * n].to_vec()).collect();
        let det = laurent_det(ctx, &grid);
        let (c, d) = det.as_monomial().ok_or_else(|| {
            Error::NonInvertibleFamily(format!("determinant {det} is not a unit of Q_p[s, 1/s]"))
        })?;
        let cinv = c.inv()?;
        let mut inverse = vec![LaurentPoly::zero(ctx); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut cof = laurent_det(ctx, &minor(&grid, i, j));
                if (i + j) % 2 == 1 {
                    cof = -&cof;
                }
                // inverse[j][i] = cofactor(i, j) / det
                inverse[j * n + i] = cof.scale(&cinv).shift(-d);
            }
        }
        Ok(LaurentFamily {
            ctx,
            n,
            g,
            inverse,
            det: (c, d),
        })
    }

    pub fn identity(ctx: PrimeContext, n: usize) -> Self {
        Self::constant(&PMatrix::identity(ctx, n)).expect("identity is invertible")
    }

    pub fn constant(m: &PMatrix) -> Result<Self> {
        let g = m.entries().iter().map(|x| LaurentPoly::constant(x.clone())).collect();
        Self::new(m.ctx(), m.n(), g)
    }

    /// Parse a grid of entry strings.
    pub fn parse(
        ctx: PrimeContext,
        rows: &[Vec<String>],
        bindings: &BTreeMap<String, PadicNumber>,
    ) -> Result<Self> {
        let n = rows.len();
        let mut g = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "conjugator row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, text) in row.iter().enumerate() {
                let e = parse_laurent(ctx, text, bindings).map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::Parse {
                        line: 1,
                        column,
                        message: format!("conjugator[{i}][{j}] \"{text}\": {message}"),
                    },
                    other => other,
                })?;
                g.push(e);
            }
        }
        Self::new(ctx, n, g)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.g[i * self.n + j]
    }

    pub fn inverse_get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.inverse[i * self.n + j]
    }

    /// det = c s^d.
    pub fn determinant(&self) -> (PadicNumber, i32) {
        self.det.clone()
    }

    /// The member at s = p^-m.
    pub fn eval(&self, m: i64) -> PMatrix {
        PMatrix::new(self.ctx, self.n, self.g.iter().map(|x| x.eval_at(m)).collect())
    }

    pub fn eval_inverse(&self, m: i64) -> PMatrix {
        PMatrix::new(self.ctx, self.n, self.inverse.iter().map(|x| x.eval_at(m)).collect())
    }

    /// Entries of g X g^-1 for a constant matrix X.
    pub fn conjugate(&self, x: &PMatrix) -> Vec<LaurentPoly> {
        let n = self.n;
        let ctx = self.ctx;
        let mut gx = vec![LaurentPoly::zero(ctx); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(ctx);
                for k in 0..n {
                    let xk = x.get(k, j);
                    if !xk.is_exact_zero() {
                        acc = &acc + &self.get(i, k).scale(xk);
                    }
                }
                gx[i * n + j] = acc;
            }
        }
        let mut out = vec![LaurentPoly::zero(ctx); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(ctx);
                for k in 0..n {
                    let a = &gx[i * n + k];
                    let b = self.inverse_get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out[i * n + j] = acc;
            }
        }
        out
    }

    /// The family s -> g(c s).
    pub fn substitute_scale(&self, c: &PadicNumber) -> Result<Self> {
        let g = self.g.iter().map(|x| x.substitute_scale(c)).collect::<Result<Vec<_>>>()?;
        Self::new(self.ctx, self.n, g)
    }

    /// The family g * k for a constant matrix k.
    pub fn right_multiply(&self, k: &PMatrix) -> Result<Self> {
        let n = self.n;
        let mut g = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(self.ctx);
                for l in 0..n {
                    acc = &acc + &self.get(i, l).scale(k.get(l, j));
                }
                g.push(acc);
            }
        }
        Self::new(self.ctx, n, g)
    }

    /// Entry strings, row-major.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

/// Coordinates of a Laurent matrix grid in a matrix ambient.
pub fn laurent_coords(ambient: Ambient, grid: &[LaurentPoly], ctx: PrimeContext) -> Result<Vec<LaurentPoly>> {
    match ambient {
        Ambient::Matrix(n) if grid.len() == n * n => Ok(grid.to_vec()),
        Ambient::TraceZero(n) if grid.len() == n * n => {
            let mut tr = LaurentPoly::zero(ctx);
            for i in 0..n {
                tr = &tr + &grid[i * n + i];
            }
            if !tr.terms().all(|(_, c)| c.is_indistinguishable_from_zero()) {
                return Err(Error::InvalidInput("conjugated matrix is not trace zero".into()));
            }
            let mut out = Vec::with_capacity(n * n - 1);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(grid[i * n + j].clone());
                    }
                }
            }
            let mut h = LaurentPoly::zero(ctx);
            for i in 0..n - 1 {
                h = &h + &grid[i * n + i];
                out.push(h.clone());
            }
            Ok(out)
        }
        _ => Err(Error::InvalidInput(format!("grid does not fit {ambient:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn fam(rows: &[&[&str]]) -> Result<LaurentFamily> {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        LaurentFamily::parse(ctx(), &rows, &BTreeMap::new())
    }

    #[test]
    fn unipotent_family_inverse() {
        let f = fam(&[&["1", "s"], &["0", "1"]]).unwrap();
        assert_eq!(f.inverse_get(0, 1).to_string(), "-s");
        for m in 1..4 {
            assert!((&f.eval(m) * &f.eval_inverse(m)).is_identity().unwrap());
        }
    }

    #[test]
    fn non_unit_determinant_rejected() {
        assert!(matches!(
            fam(&[&["1", "s"], &["1", "1"]]),
            Err(Error::NonInvertibleFamily(_))
        ));
    }

    #[test]
    fn three_by_three_inverse_evaluates_correctly() {
        let f = fam(&[&["2", "s", "s^2/2"], &["0", "1", "s"], &["0", "0", "1/2"]]).unwrap();
        assert_eq!(f.determinant().1, 0);
        for m in 1..3 {
            assert!((&f.eval(m) * &f.eval_inverse(m)).is_identity().unwrap());
        }
    }

    #[test]
    fn parse_error_names_the_cell() {
        match fam(&[&["1", "s +"], &["0", "1"]]) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("conjugator[0][1]")),
            other => panic!("{other:?}"),
        }
    }
}
