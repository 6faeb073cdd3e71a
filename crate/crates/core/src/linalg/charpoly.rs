//! Characteristic polynomials (Berkowitz, division free) and Newton polygons.

use num_rational::Ratio;
use serde::Serialize;

use super::matrix::PMatrix;
use crate::error::{exhausted, Result};
use crate::padic::{PadicNumber, Valuation};

/// Coefficients c_0..c_n (lowest degree first) of det(t Id - M); c_n = 1.
pub fn char_poly(m: &PMatrix) -> Vec<PadicNumber> {
    let n = m.n();
    let ctx = m.ctx();
    let rows: Vec<Vec<PadicNumber>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut high_first = berkowitz(&rows, &ctx.one(), &ctx.zero());
    high_first.reverse();
    high_first
}

fn matvec(a: &[Vec<PadicNumber>], v: &[PadicNumber], zero: &PadicNumber) -> Vec<PadicNumber> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(zero.clone(), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

/// Highest-degree-first coefficient vector of det(t Id - A).
fn berkowitz(a: &[Vec<PadicNumber>], one: &PadicNumber, zero: &PadicNumber) -> Vec<PadicNumber> {
    let n = a.len();
    if n == 0 {
        return vec![one.clone()];
    }
    if n == 1 {
        return vec![one.clone(), -&a[0][0]];
    }
    let a11 = &a[0][0];
    let r: Vec<PadicNumber> = a[0][1..].to_vec();
    let c: Vec<PadicNumber> = a[1..].iter().map(|row| row[0].clone()).collect();
    let sub: Vec<Vec<PadicNumber>> = a[1..].iter().map(|row| row[1..].to_vec()).collect();

    // Toeplitz column: 1, -a11, -R C, -R A C, ..., -R A^(n-2) C
    let mut diags = vec![one.clone(), -a11];
    let mut v = c;
    for k in 0..n - 1 {
        let rv = r.iter().zip(&v).fold(zero.clone(), |acc, (x, y)| &acc + &(x * y));
        diags.push(-&rv);
        if k + 1 < n - 1 {
            v = matvec(&sub, &v, zero);
        }
    }
    let inner = berkowitz(&sub, one, zero);
    // (n+1) x n lower-triangular Toeplitz times inner (length n)
    (0..=n)
        .map(|i| {
            (0..n)
                .filter(|&j| j <= i)
                .fold(zero.clone(), |acc, j| &acc + &(&diags[i - j] * &inner[j]))
        })
        .collect()
}

/// Evaluate a polynomial (lowest degree first) at a matrix.
pub fn eval_poly_at(coeffs: &[PadicNumber], m: &PMatrix) -> PMatrix {
    let ctx = m.ctx();
    let id = PMatrix::identity(ctx, m.n());
    let mut acc = PMatrix::zero(ctx, m.n());
    for c in coeffs.iter().rev() {
        acc = &(&acc * m) + &id.scale(c);
    }
    acc
}

/// One edge of the lower convex hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slope {
    pub numer: i64,
    pub denom: i64,
    pub multiplicity: usize,
}

impl Slope {
    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.numer, self.denom)
    }
}

/// Newton polygon of a characteristic polynomial. Each slope s with
/// multiplicity m accounts for m roots of valuation -s; roots equal to zero
/// are counted separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub slopes: Vec<Slope>,
    pub zero_roots: usize,
}

impl NewtonPolygon {
    pub fn from_coefficients(coeffs: &[PadicNumber]) -> Result<Self> {
        let mut certain: Vec<(i64, i64)> = Vec::new();
        let mut bounds: Vec<(i64, i64)> = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            match c.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(v) => certain.push((i as i64, v)),
                Valuation::AtLeast(a) => bounds.push((i as i64, a)),
            }
        }
        let Some(&(first, _)) = certain.first() else {
            return Err(exhausted("no certified coefficient"));
        };
        let hull = lower_hull(&certain);
        // An uncertified coefficient is harmless when its lower bound already
        // sits on or above the hull; below the first certified index it could
        // change the number of zero roots.
        for &(i, a) in &bounds {
            if i < first {
                return Err(exhausted("low-degree coefficient is uncertified"));
            }
            if i > certain.last().unwrap().0 {
                continue;
            }
            let seg = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
            let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
            // hull height at i is y0 + (y1-y0)(i-x0)/(x1-x0); require a >= it
            if a * (x1 - x0) < y0 * (x1 - x0) + (y1 - y0) * (i - x0) {
                return Err(exhausted("uncertified coefficient may lie below the Newton polygon"));
            }
        }
        let slopes = hull
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                let r = Ratio::new(w[1].1 - w[0].1, dx);
                Slope {
                    numer: *r.numer(),
                    denom: *r.denom(),
                    multiplicity: dx as usize,
                }
            })
            .collect();
        Ok(NewtonPolygon {
            slopes,
            zero_roots: first as usize,
        })
    }

    /// Valuations of the nonzero roots, with multiplicity, ascending.
    pub fn root_valuations(&self) -> Vec<Ratio<i64>> {
        let mut out: Vec<Ratio<i64>> = self
            .slopes
            .iter()
            .flat_map(|s| std::iter::repeat_n(-s.value(), s.multiplicity))
            .collect();
        out.sort();
        out
    }

    pub fn has_nonzero_slope(&self) -> bool {
        self.slopes.iter().any(|s| s.numer != 0)
    }

    pub fn max_abs_slope(&self) -> Ratio<i64> {
        self.slopes
            .iter()
            .map(|s| {
                let v = s.value();
                if v < Ratio::from_integer(0) {
                    -v
                } else {
                    v
                }
            })
            .max()
            .unwrap_or_else(|| Ratio::from_integer(0))
    }
}

fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below segment a-pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Newton polygon of the characteristic polynomial of m.
pub fn newton_slopes(m: &PMatrix) -> Result<NewtonPolygon> {
    NewtonPolygon::from_coefficients(&char_poly(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    #[test]
    fn identity_char_poly() {
        let c = ctx();
        let cp = char_poly(&PMatrix::identity(c, 2));
        let expect = [1, -2, 1];
        for (x, e) in cp.iter().zip(expect) {
            assert!(x.agrees(&c.integer(e)).unwrap());
        }
    }

    #[test]
    fn diag_p_char_poly_and_slopes() {
        let c = ctx();
        let m = PMatrix::diagonal(c, &[c.p_power(1), c.p_power(-1)]);
        let cp = char_poly(&m);
        assert!(cp[1].agrees(&-(c.p_power(1) + c.p_power(-1))).unwrap());
        let np = newton_slopes(&m).unwrap();
        let vals: Vec<i64> = np.slopes.iter().map(|s| s.numer).collect();
        assert_eq!(vals, vec![-1, 1]);
        assert!(np.has_nonzero_slope());
    }

    #[test]
    fn unipotent_slopes_are_zero() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![1, 1], vec![0, 1]]);
        let np = newton_slopes(&m).unwrap();
        assert_eq!(np.slopes.len(), 1);
        assert_eq!(np.slopes[0].numer, 0);
        assert_eq!(np.slopes[0].multiplicity, 2);
    }

    #[test]
    fn cayley_hamilton_on_fixed_matrix() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        let p = char_poly(&m);
        assert!(eval_poly_at(&p, &m).agrees(&PMatrix::zero(c, 3)).unwrap());
    }

    #[test]
    fn zero_roots_counted() {
        let c = ctx();
        let m = PMatrix::from_ints(c, &[vec![0, 1], vec![0, 0]]);
        let np = newton_slopes(&m).unwrap();
        assert_eq!(np.zero_roots, 2);
        assert!(np.slopes.is_empty());
    }
}
