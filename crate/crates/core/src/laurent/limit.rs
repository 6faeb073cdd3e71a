//! Limits of conjugated subspaces by leading-term reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::{laurent_coords, LaurentFamily};
use super::poly::LaurentPoly;
use crate::error::{Error, Result};
use crate::linalg::{echelonize, left_kernel, span_with_identity, Ambient, PMatrix, Subspace};
use crate::padic::PadicNumber;

/// The family of subspaces g(s) B g(s)^-1.
#[derive(Clone, Debug)]
pub struct AlgebraFamily {
    base: Subspace,
    family: LaurentFamily,
    rows: Vec<Vec<LaurentPoly>>,
}

/// Conjugate every basis element of `base` by the family.
pub fn conjugate_family(base: &Subspace, family: &LaurentFamily) -> Result<AlgebraFamily> {
    let n = family.n();
    match base.ambient() {
        Ambient::TraceZero(k) | Ambient::Matrix(k) if k == n => {}
        other => {
            return Err(Error::InvalidInput(format!(
                "base lives in {other:?}, family has size {n}"
            )))
        }
    }
    let ctx = family.ctx();
    let rows = base
        .basis_matrices()?
        .iter()
        .map(|b| laurent_coords(base.ambient(), &family.conjugate(b), ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgebraFamily {
        base: base.clone(),
        family: family.clone(),
        rows,
    })
}

impl AlgebraFamily {
    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn family(&self) -> &LaurentFamily {
        &self.family
    }

    pub fn conjugated_basis(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    pub fn ambient(&self) -> Ambient {
        self.base.ambient()
    }

    /// The member subspace at s = p^-m.
    pub fn eval(&self, m: i64) -> Result<Subspace> {
        let vs: Vec<Vec<PadicNumber>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.eval_at(m)).collect())
            .collect();
        echelonize(self.base.ctx(), self.ambient(), &vs)
    }
}

/// Outcome of the leading-term reduction.
#[derive(Clone, Debug)]
pub struct LimitReduction {
    pub limit: Subspace,
    /// Rows spanning the same family as the input rows for every s.
    pub rows: Vec<Vec<LaurentPoly>>,
    /// Top s-degree of each reduced row.
    pub degrees: Vec<i32>,
    /// Leading coefficient vector of each reduced row.
    pub leading: Vec<Vec<PadicNumber>>,
    pub steps: usize,
}

fn row_top_degree(row: &[LaurentPoly]) -> Result<Option<i32>> {
    let mut best: Option<i32> = None;
    for x in row {
        if let Some(d) = x.top_degree()? {
            best = Some(best.map_or(d, |b| b.max(d)));
        }
    }
    Ok(best)
}

/// Leading-term reduction: while the leading vectors are dependent, replace
/// the row of largest top degree occurring in a dependency by the
/// corresponding combination, which strictly lowers that row's top degree.
pub fn grassmann_limit_reduction(af: &AlgebraFamily) -> Result<LimitReduction> {
    let ctx = af.base.ctx();
    let k = af.rows.len();
    let mut rows = af.rows.clone();
    let (lo, hi) = rows
        .iter()
        .flatten()
        .filter_map(|x| x.degree_range())
        .fold((0, 0), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
    let guard = 10 * k.max(1) * ((hi - lo).max(1) as usize) + 10;
    let mut steps = 0;
    loop {
        let mut degrees = Vec::with_capacity(k);
        for (i, r) in rows.iter().enumerate() {
            let d = row_top_degree(r)?.ok_or_else(|| {
                Error::InvalidInput(format!("row {i} vanishes: input rows are dependent"))
            })?;
            degrees.push(d);
        }
        let leading: Vec<Vec<PadicNumber>> = rows
            .iter()
            .zip(&degrees)
            .map(|(r, &d)| r.iter().map(|x| x.coeff(d)).collect())
            .collect();
        let kernel = left_kernel(&leading, ctx)?;
        let Some(c) = kernel.first() else {
            let limit = echelonize(ctx, af.ambient(), &leading)?;
            return Ok(LimitReduction {
                limit,
                rows,
                degrees,
                leading,
                steps,
            });
        };
        steps += 1;
        if steps > guard {
            return Err(Error::NonConvergent(steps));
        }
        let j = (0..k)
            .filter(|&i| !c[i].is_exact_zero())
            .max_by(|&a, &b| degrees[a].cmp(&degrees[b]).then(b.cmp(&a)))
            .expect("kernel vector is nonzero");
        let dj = degrees[j];
        let d = af.rows[0].len();
        let mut new_row = vec![LaurentPoly::zero(ctx); d];
        for i in 0..k {
            if c[i].is_exact_zero() {
                continue;
            }
            let shift = dj - degrees[i];
            for (acc, x) in new_row.iter_mut().zip(&rows[i]) {
                *acc = &*acc + &x.scale(&c[i]).shift(shift);
            }
        }
        rows[j] = new_row;
    }
}

/// The limit subspace of the family as s = p^-m, m -> infinity.
pub fn grassmann_limit(af: &AlgebraFamily) -> Result<Subspace> {
    Ok(grassmann_limit_reduction(af)?.limit)
}

/// One sampled group sequence h_m -> h.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSample {
    pub coefficients: Vec<i64>,
    /// h lies in Gr of the limit algebra.
    pub limit_member: bool,
    /// Every h_m lies in Gr of the m-th conjugate.
    pub members_along: bool,
    /// min valuation of h_m - h for each m.
    pub distances: Vec<i64>,
    pub converging: bool,
}

#[derive(Clone, Debug)]
pub struct GroupLimitReport {
    pub limit: Subspace,
    pub samples: Vec<GroupSample>,
}

impl GroupLimitReport {
    pub fn all_passed(&self) -> bool {
        self.samples
            .iter()
            .all(|s| s.limit_member && s.members_along && s.converging)
    }
}

/// Y^n / det(Y): maps Y in a product-closed span containing Id into the
/// determinant-one part of that span.
pub fn normalize_into_group(y: &PMatrix) -> Result<PMatrix> {
    let det = y.det();
    if det.zero_test()? {
        return Err(Error::Singular);
    }
    Ok(y.pow(y.n() as u32).scale(&det.inv()?))
}

fn in_group(span: &Subspace, h: &PMatrix) -> Result<bool> {
    Ok(h.det().agrees(&h.ctx().one())? && span.contains_matrix(h)?)
}

/// Certify on samples that group elements of the conjugates converge into
/// Gr of the limit algebra.
pub fn chabauty_group_limit(
    af: &AlgebraFamily,
    samples: usize,
    m_values: &[i64],
    seed: u64,
) -> Result<GroupLimitReport> {
    let red = grassmann_limit_reduction(af)?;
    let ctx = af.base.ctx();
    let amb = af.ambient();
    let n = amb.matrix_size().expect("matrix ambient");
    let limit_span = span_with_identity(&red.limit)?;
    let member_spans = m_values
        .iter()
        .map(|&m| span_with_identity(&af.eval(m)?))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = PMatrix::identity(ctx, n);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < samples && attempts < samples * 20 {
        attempts += 1;
        let coeffs: Vec<i64> = (0..red.rows.len()).map(|_| rng.gen_range(-4..=4)).collect();
        let x = red
            .leading
            .iter()
            .zip(&coeffs)
            .map(|(l, &c)| Ok(amb.matrix(ctx, l)?.scale(&ctx.integer(c))))
            .try_fold(PMatrix::zero(ctx, n), |acc, m: Result<PMatrix>| Ok::<_, Error>(&acc + &m?))?;
        let h = match normalize_into_group(&(&id + &x)) {
            Ok(h) => h,
            Err(Error::Singular) => continue,
            Err(e) => return Err(e),
        };
        let limit_member = in_group(&limit_span, &h)?;
        let mut members_along = true;
        let mut distances = Vec::new();
        let mut singular = false;
        for (&m, span) in m_values.iter().zip(&member_spans) {
            // X_m = sum c_i r_i(s) / s^(d_i) at s = p^-m
            let mut xm = PMatrix::zero(ctx, n);
            for ((row, &d), &c) in red.rows.iter().zip(&red.degrees).zip(&coeffs) {
                if c == 0 {
                    continue;
                }
                let v: Vec<PadicNumber> = row.iter().map(|x| x.shift(-d).eval_at(m)).collect();
                xm = &xm + &amb.matrix(ctx, &v)?.scale(&ctx.integer(c));
            }
            let hm = match normalize_into_group(&(&id + &xm)) {
                Ok(h) => h,
                Err(Error::Singular) => {
                    singular = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            members_along &= in_group(span, &hm)?;
            distances.push((&hm - &h).min_valuation().unwrap_or(i64::MAX));
        }
        if singular {
            continue;
        }
        let converging = distances.windows(2).all(|w| w[1] >= w[0])
            && distances.last().is_none_or(|&d| d > distances[0] || d == i64::MAX);
        out.push(GroupSample {
            coefficients: coeffs,
            limit_member,
            members_along,
            distances,
            converging,
        });
    }
    Ok(GroupLimitReport {
        limit: red.limit,
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;
    use std::collections::BTreeMap;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn fam(c: PrimeContext, rows: &[&[&str]]) -> LaurentFamily {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        LaurentFamily::parse(c, &rows, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn constant_family_keeps_base() {
        let c = ctx();
        let base = Subspace::cartan(c, 3);
        let af = conjugate_family(&base, &LaurentFamily::identity(c, 3)).unwrap();
        assert!(grassmann_limit(&af).unwrap().equals(&base).unwrap());
    }

    #[test]
    fn sl2_conjugated_coordinates() {
        let c = ctx();
        let af = conjugate_family(&Subspace::cartan(c, 2), &fam(c, &[&["1", "s"], &["0", "1"]])).unwrap();
        let row = &af.conjugated_basis()[0];
        // coordinates: E12, E21, H1
        assert_eq!(row[0].to_string(), "-2*s");
        assert_eq!(row[1].to_string(), "0");
        assert_eq!(row[2].to_string(), "1");
    }

    #[test]
    fn sl2_limit_is_nilpotent_line() {
        let c = ctx();
        let af = conjugate_family(&Subspace::cartan(c, 2), &fam(c, &[&["1", "s"], &["0", "1"]])).unwrap();
        let lim = grassmann_limit(&af).unwrap();
        let e12 = Subspace::from_matrices(c, Ambient::TraceZero(2), &[PMatrix::unit(c, 2, 0, 1)]).unwrap();
        assert!(lim.equals(&e12).unwrap());
    }

    #[test]
    fn group_sequences_converge() {
        let c = ctx();
        let af = conjugate_family(&Subspace::cartan(c, 2), &fam(c, &[&["1", "s"], &["0", "1"]])).unwrap();
        let rep = chabauty_group_limit(&af, 4, &[2, 4, 6], 7).unwrap();
        assert_eq!(rep.samples.len(), 4);
        assert!(rep.all_passed(), "{:?}", rep.samples);
    }
}
