//! Conjugacy invariants of limit algebras: structural dimensions of the
//! nilpotent part, centralizers and normalizers, plus power-class labels of
//! the family parameters.

use serde::Serialize;

use super::cross_ratio::equivalent_parameters;
use super::presets::LimitFamilySpec;
use crate::error::{Error, Result};
use crate::linalg::{echelonize, left_kernel, Ambient, PMatrix, Subspace};
use crate::padic::{kth_root, PadicNumber, PowerClassTable, PrimeContext};

/// Dimensions that are invariant under conjugation in GL(n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StructuralInvariants {
    pub nilpotent_dim: usize,
    pub nil_square_dim: usize,
    pub nil_cube_dim: usize,
    pub common_kernel_dim: usize,
    pub image_dim: usize,
    pub centralizer_dim: usize,
    pub normalizer_dim: usize,
}

fn matrix_span(ctx: PrimeContext, n: usize, mats: &[PMatrix]) -> Result<Subspace> {
    Subspace::from_matrices(ctx, Ambient::Matrix(n), mats)
}

/// The unital associative algebra generated by A.
pub fn generated_algebra(a: &Subspace) -> Result<Subspace> {
    let ctx = a.ctx();
    let n = a.ambient().matrix_size().expect("matrix ambient");
    let mut mats = a.basis_matrices()?;
    mats.push(PMatrix::identity(ctx, n));
    let mut span = matrix_span(ctx, n, &mats)?;
    loop {
        let basis = span.basis_matrices()?;
        let mut grown = basis.clone();
        for x in &basis {
            for y in &basis {
                let xy = x * y;
                if !span.contains_matrix(&xy)? {
                    grown.push(xy);
                }
            }
        }
        if grown.len() == basis.len() {
            return Ok(span);
        }
        span = matrix_span(ctx, n, &grown)?;
    }
}

/// Nilpotent elements of a commutative A: X with tr(XY) = 0 for every Y in
/// the unital algebra generated by A.
pub fn nilpotent_part(a: &Subspace) -> Result<Vec<PMatrix>> {
    let ctx = a.ctx();
    let n = a.ambient().matrix_size().expect("matrix ambient");
    let basis = a.basis_matrices()?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let ys = generated_algebra(a)?.basis_matrices()?;
    let rows: Vec<Vec<PadicNumber>> = basis
        .iter()
        .map(|b| ys.iter().map(|y| (b * y).trace()).collect())
        .collect();
    let kernel = left_kernel(&rows, ctx)?;
    Ok(kernel
        .iter()
        .map(|c| {
            basis.iter().zip(c).fold(PMatrix::zero(ctx, n), |acc, (b, ci)| &acc + &b.scale(ci))
        })
        .collect())
}

fn products(ctx: PrimeContext, n: usize, xs: &[PMatrix], ys: &[PMatrix]) -> Result<Vec<PMatrix>> {
    let prods: Vec<PMatrix> = xs.iter().flat_map(|x| ys.iter().map(move |y| x * y)).collect();
    if prods.is_empty() {
        return Ok(Vec::new());
    }
    matrix_span(ctx, n, &prods)?.basis_matrices()
}

fn rank_of(ctx: PrimeContext, d: usize, vectors: Vec<Vec<PadicNumber>>) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(echelonize(ctx, Ambient::Plain(d), &vectors)?.dim())
}

/// Nullity of a linear map on M(n) given by its values on the unit matrices.
fn nullity_on_mn(ctx: PrimeContext, n: usize, f: impl Fn(&PMatrix) -> Result<Vec<PadicNumber>>) -> Result<usize> {
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            images.push(f(&PMatrix::unit(ctx, n, i, j))?);
        }
    }
    let d = images[0].len();
    Ok(n * n - rank_of(ctx, d.max(1), images)?)
}

pub fn structural_invariants(a: &Subspace) -> Result<StructuralInvariants> {
    let ctx = a.ctx();
    let n = a
        .ambient()
        .matrix_size()
        .ok_or_else(|| Error::InvalidInput("algebra must live in matrix space".into()))?;
    let nil = nilpotent_part(a)?;
    let n2 = products(ctx, n, &nil, &nil)?;
    let n3 = products(ctx, n, &n2, &nil)?;
    let rows: Vec<Vec<PadicNumber>> = nil
        .iter()
        .flat_map(|m| (0..n).map(move |i| (0..n).map(|j| m.get(i, j).clone()).collect::<Vec<_>>()))
        .collect();
    let cols: Vec<Vec<PadicNumber>> = nil
        .iter()
        .flat_map(|m| (0..n).map(move |j| (0..n).map(|i| m.get(i, j).clone()).collect::<Vec<_>>()))
        .collect();
    let basis = a.basis_matrices()?;
    let centralizer_dim = nullity_on_mn(ctx, n, |x| {
        Ok(basis.iter().flat_map(|b| x.commutator(b).entries().to_vec()).collect())
    })?;
    let amb = a.ambient();
    let normalizer_dim = nullity_on_mn(ctx, n, |x| {
        let mut out = Vec::new();
        for b in &basis {
            out.extend(a.residual(&amb.coords(&x.commutator(b))?));
        }
        Ok(out)
    })?;
    Ok(StructuralInvariants {
        nilpotent_dim: nil.len(),
        nil_square_dim: n2.len(),
        nil_cube_dim: n3.len(),
        common_kernel_dim: n - rank_of(ctx, n, rows)?,
        image_dim: rank_of(ctx, n, cols)?,
        centralizer_dim,
        normalizer_dim,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinct,
    Conjugate,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct ConjugacyReport {
    pub verdict: Verdict,
    pub reason: String,
    /// Diagonal matrix T with T A1 T^-1 = A2, when one was constructed.
    pub conjugator: Option<PMatrix>,
    pub conjugator_verified: bool,
}

impl ConjugacyReport {
    fn plain(verdict: Verdict, reason: impl Into<String>) -> Self {
        ConjugacyReport {
            verdict,
            reason: reason.into(),
            conjugator: None,
            conjugator_verified: false,
        }
    }
}

fn powers(k: u64) -> String {
    match k {
        2 => "squares".into(),
        3 => "cubes".into(),
        k => format!("{k}th powers"),
    }
}

/// Power-class label of x as the string of its canonical representative.
pub fn class_label(x: &PadicNumber, k: u64) -> Result<String> {
    Ok(PowerClassTable::new(x.ctx(), k)?.label(x)?.representative_string())
}

fn diagonal_conjugator(spec: &LimitFamilySpec, ratio: &PadicNumber) -> Result<PMatrix> {
    let ctx = ratio.ctx();
    let d = match (spec.n, spec.stem) {
        (3, "Nalpha") => {
            let r = kth_root(ratio, 3)?;
            vec![r.clone(), r.clone(), r.pow(2).inv()?]
        }
        (4, "N1") => {
            let r = kth_root(ratio, 2)?;
            vec![r.inv()?, ctx.one(), r, ctx.one()]
        }
        (4, "N4") => {
            let r = kth_root(ratio, 8)?;
            vec![ctx.one(), r.pow(3), r.inv()?, r.pow(2).inv()?]
        }
        _ => return Err(Error::InvalidInput(format!("no diagonal conjugator for {}", spec.stem))),
    };
    Ok(PMatrix::diagonal(ctx, &d))
}

/// T A1 T^-1 ⊆ A2 on generators.
pub fn verify_conjugator(t: &PMatrix, a1: &Subspace, a2: &Subspace) -> Result<bool> {
    let t_inv = t.inverse()?;
    for b in a1.basis_matrices()? {
        if !a2.contains_matrix(&(&(t * &b) * &t_inv))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decide conjugacy of two table families.
pub fn conjugacy_invariant(ctx: PrimeContext, s1: &LimitFamilySpec, s2: &LimitFamilySpec) -> Result<ConjugacyReport> {
    if s1.n != s2.n {
        return Ok(ConjugacyReport::plain(Verdict::Distinct, "different matrix sizes"));
    }
    if s1.stem != s2.stem {
        let i1 = structural_invariants(&s1.algebra(ctx)?)?;
        let i2 = structural_invariants(&s2.algebra(ctx)?)?;
        return Ok(if i1 != i2 {
            ConjugacyReport::plain(Verdict::Distinct, format!("structural invariants differ: {i1:?} vs {i2:?}"))
        } else {
            ConjugacyReport::plain(Verdict::Undecided, "structural invariants agree")
        });
    }
    let (Some(a), Some(b)) = (&s1.parameter, &s2.parameter) else {
        return Ok(ConjugacyReport::plain(Verdict::Conjugate, "same family"));
    };
    let ratio = b.checked_div(a)?;
    let (verdict, reason) = match (s1.n, s1.stem) {
        (3, "Nalpha") | (4, "N1") => {
            let k = if s1.n == 3 { 3 } else { 2 };
            let (la, lb) = (class_label(a, k)?, class_label(b, k)?);
            if la == lb {
                (Verdict::Conjugate, format!("same class mod {} ({la})", powers(k)))
            } else {
                (Verdict::Distinct, format!("classes mod {} differ ({la} vs {lb})", powers(k)))
            }
        }
        (4, "N4") => {
            let (a4, b4) = (class_label(a, 4)?, class_label(b, 4)?);
            let (a8, b8) = (class_label(a, 8)?, class_label(b, 8)?);
            if a4 != b4 {
                (Verdict::Distinct, format!("classes mod 4th powers differ ({a4} vs {b4})"))
            } else if a8 == b8 {
                (Verdict::Conjugate, format!("same class mod 8th powers ({a8})"))
            } else {
                (
                    Verdict::Undecided,
                    format!("same class mod 4th powers ({a4}) but not mod 8th powers ({a8} vs {b8})"),
                )
            }
        }
        (7, "L") => {
            if ratio.agrees(&ctx.one())? {
                (Verdict::Conjugate, "same parameter".to_string())
            } else {
                let eq = equivalent_parameters(a)?;
                let mut hit = false;
                for x in &eq {
                    hit |= x.agrees(b)?;
                }
                if hit {
                    (Verdict::Undecided, "unordered cross ratios agree".to_string())
                } else {
                    (Verdict::Distinct, "unordered cross ratios differ".to_string())
                }
            }
        }
        _ => (Verdict::Undecided, "no invariant for this family".to_string()),
    };
    let mut report = ConjugacyReport::plain(verdict, reason);
    if verdict == Verdict::Conjugate && s1.n != 7 {
        match diagonal_conjugator(s1, &ratio) {
            Ok(t) => {
                report.conjugator_verified = verify_conjugator(&t, &s1.algebra(ctx)?, &s2.algebra(ctx)?)?;
                report.conjugator = Some(t);
            }
            Err(Error::RootOutOfDomain(msg)) => {
                report.reason.push_str(&format!("; no constructive conjugator: {msg}"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::presets::table_stems;
    use std::collections::BTreeSet;

    #[test]
    fn sl4_stems_are_separated() {
        let ctx = PrimeContext::new(5, 32).unwrap();
        let mut seen = BTreeSet::new();
        for info in table_stems(4) {
            let param = info.parameter.map(|_| ctx.integer(3));
            let spec = LimitFamilySpec::new(4, info.stem, param).unwrap();
            let inv = structural_invariants(&spec.algebra(ctx).unwrap()).unwrap();
            assert!(seen.insert(inv.clone()), "{} collides: {inv:?}", info.stem);
        }
        assert_eq!(seen.len(), 14);
    }

    #[test]
    fn cartan_invariants() {
        let ctx = PrimeContext::new(5, 32).unwrap();
        let inv = structural_invariants(&Subspace::cartan(ctx, 3)).unwrap();
        assert_eq!(inv.nilpotent_dim, 0);
        assert_eq!(inv.centralizer_dim, 3);
        assert_eq!(inv.normalizer_dim, 3);
    }

    #[test]
    fn sl3_parameter_verdicts() {
        let ctx = PrimeContext::new(5, 32).unwrap();
        let spec = |x: PadicNumber| LimitFamilySpec::new(3, "Nalpha", Some(x)).unwrap();
        let r = conjugacy_invariant(ctx, &spec(ctx.one()), &spec(ctx.integer(125))).unwrap();
        assert_eq!(r.verdict, Verdict::Conjugate);
        assert!(r.conjugator_verified);
        let r = conjugacy_invariant(ctx, &spec(ctx.one()), &spec(ctx.integer(5))).unwrap();
        assert_eq!(r.verdict, Verdict::Distinct);
    }

    #[test]
    fn n4_gap_is_undecided() {
        let ctx = PrimeContext::new(5, 32).unwrap();
        let spec = |x: PadicNumber| LimitFamilySpec::new(4, "N4", Some(x)).unwrap();
        let r = conjugacy_invariant(ctx, &spec(ctx.one()), &spec(ctx.integer(625))).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
        let r = conjugacy_invariant(ctx, &spec(ctx.one()), &spec(ctx.p_power(8))).unwrap();
        assert_eq!(r.verdict, Verdict::Conjugate);
        assert!(r.conjugator_verified);
        let r = conjugacy_invariant(ctx, &spec(ctx.one()), &spec(ctx.integer(2))).unwrap();
        assert_eq!(r.verdict, Verdict::Distinct);
    }

    #[test]
    fn n1_square_classes() {
        let ctx = PrimeContext::new(7, 32).unwrap();
        let spec = |x: PadicNumber| LimitFamilySpec::new(4, "N1", Some(x)).unwrap();
        let r = conjugacy_invariant(ctx, &spec(ctx.integer(2)), &spec(ctx.integer(8))).unwrap();
        assert_eq!(r.verdict, Verdict::Conjugate);
        assert!(r.conjugator_verified);
        let r = conjugacy_invariant(ctx, &spec(ctx.integer(1)), &spec(ctx.integer(3))).unwrap();
        assert_eq!(r.verdict, Verdict::Distinct);
    }
}
