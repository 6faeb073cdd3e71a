//! Built-in limit families of the diagonal Cartan in SL(2), SL(3), SL(4) and
//! the one-parameter SL(7) family, each with a conjugator family g(s).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentFamily;
use crate::linalg::{Ambient, PMatrix, Subspace};
use crate::padic::{PadicNumber, PrimeContext};

/// A named family of limit algebras, optionally depending on one parameter.
#[derive(Clone, Debug)]
pub struct LimitFamilySpec {
    pub n: usize,
    pub stem: &'static str,
    pub parameter: Option<PadicNumber>,
}

/// Static description of one stem.
#[derive(Clone, Debug, Serialize)]
pub struct StemInfo {
    pub n: usize,
    pub stem: &'static str,
    /// Name of the parameter in entry strings, if any.
    pub parameter: Option<&'static str>,
    /// Exponent k whose power classes index the conjugacy classes.
    pub class_exponent: Option<u64>,
    pub partition: &'static [usize],
    pub construction: &'static str,
}

const STEMS: &[StemInfo] = &[
    StemInfo { n: 2, stem: "C", parameter: None, class_exponent: None, partition: &[1, 1], construction: "diagonal Cartan, constant conjugator" },
    StemInfo { n: 2, stem: "U", parameter: None, class_exponent: None, partition: &[2], construction: "unipotent conjugator [[1,s],[0,1]]" },
    StemInfo { n: 3, stem: "C", parameter: None, class_exponent: None, partition: &[1, 1, 1], construction: "diagonal Cartan, constant conjugator" },
    StemInfo { n: 3, stem: "H", parameter: None, class_exponent: None, partition: &[2, 1], construction: "hyperbolic block limit, conjugator I + s E12" },
    StemInfo { n: 3, stem: "Nalpha", parameter: Some("alpha"), class_exponent: Some(3), partition: &[3], construction: "regular unipotent limit, conjugator with alpha, s, s^2/2, s, 1/alpha" },
    StemInfo { n: 3, stem: "Nrow", parameter: None, class_exponent: None, partition: &[3], construction: "first-row unipotent limit, conjugator I + s E12 + s E13" },
    StemInfo { n: 3, stem: "Ncol", parameter: None, class_exponent: None, partition: &[3], construction: "last-column unipotent limit, conjugator I + s E13 + s E23" },
    StemInfo { n: 4, stem: "C", parameter: None, class_exponent: None, partition: &[1, 1, 1, 1], construction: "diagonal Cartan, constant conjugator" },
    StemInfo { n: 4, stem: "E1", parameter: None, class_exponent: None, partition: &[1, 2, 1], construction: "conjugator I + s E23" },
    StemInfo { n: 4, stem: "F0", parameter: None, class_exponent: None, partition: &[2, 2], construction: "conjugator I + s E12 + s E34" },
    StemInfo { n: 4, stem: "F1", parameter: None, class_exponent: None, partition: &[3, 1], construction: "conjugator I + s E12 + s^2/2 E13 + s E23" },
    StemInfo { n: 4, stem: "F2", parameter: None, class_exponent: None, partition: &[3, 1], construction: "conjugator I + s E12 + s E13" },
    StemInfo { n: 4, stem: "F3", parameter: None, class_exponent: None, partition: &[3, 1], construction: "conjugator I + s E13 + s E23" },
    StemInfo { n: 4, stem: "N1", parameter: Some("beta"), class_exponent: Some(2), partition: &[4], construction: "regular unipotent limit, exponential-type conjugator with beta, 1/beta on the diagonal" },
    StemInfo { n: 4, stem: "N2", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator I + s E12 + s^2/2 E13 + s E14 + s E23" },
    StemInfo { n: 4, stem: "N3", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator I + s E14 + s E23 + s^2/2 E24 + s E34" },
    StemInfo { n: 4, stem: "N4", parameter: Some("alpha"), class_exponent: Some(4), partition: &[4], construction: "conjugator with coefficients rational in alpha, verified to give exactly N4(alpha)" },
    StemInfo { n: 4, stem: "N5", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator with constant lower block [[2,1],[1,1]]" },
    StemInfo { n: 4, stem: "N6", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator I + s E12 + s E14 + s E34" },
    StemInfo { n: 4, stem: "N7", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator I + s (E14 + E24 + E34)" },
    StemInfo { n: 4, stem: "N8", parameter: None, class_exponent: None, partition: &[4], construction: "conjugator I + s (E12 + E13 + E14)" },
    StemInfo { n: 7, stem: "L", parameter: Some("alpha"), class_exponent: None, partition: &[7], construction: "cross-ratio family, conjugator with columns (s,s,s,s,s^2) and (0,s,2s,alpha s,s^2)" },
];

/// All stems of the SL(n) table.
pub fn table_stems(n: usize) -> Vec<&'static StemInfo> {
    STEMS.iter().filter(|s| s.n == n).collect()
}

pub fn stem_info(n: usize, stem: &str) -> Result<&'static StemInfo> {
    STEMS
        .iter()
        .find(|s| s.n == n && s.stem.eq_ignore_ascii_case(stem))
        .ok_or_else(|| Error::InvalidInput(format!("no preset family '{stem}' for n = {n}")))
}

/// Parse a preset name such as `sl3-Nalpha` into (n, stem).
pub fn parse_preset_name(name: &str) -> Result<(usize, &'static str)> {
    let bad = || Error::InvalidInput(format!("unknown preset '{name}', expected e.g. sl3-Nalpha"));
    let rest = name.strip_prefix("sl").ok_or_else(bad)?;
    let (n, stem) = rest.split_once('-').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    Ok((n, stem_info(n, stem)?.stem))
}

fn unit(ctx: PrimeContext, n: usize, terms: &[(usize, usize, PadicNumber)]) -> PMatrix {
    let mut m = PMatrix::zero(ctx, n);
    for (i, j, c) in terms {
        let v = m.get(*i, *j) + c;
        m.set(*i, *j, v);
    }
    m
}

fn diag(ctx: PrimeContext, d: &[i64]) -> PMatrix {
    PMatrix::diagonal(ctx, &d.iter().map(|&x| ctx.integer(x)).collect::<Vec<_>>())
}

/// Sum of unit matrices with integer coefficients, 1-based indices.
fn e(ctx: PrimeContext, n: usize, terms: &[(usize, usize)]) -> PMatrix {
    let t: Vec<_> = terms.iter().map(|&(i, j)| (i - 1, j - 1, ctx.one())).collect();
    unit(ctx, n, &t)
}

impl LimitFamilySpec {
    pub fn new(n: usize, stem: &str, parameter: Option<PadicNumber>) -> Result<Self> {
        let info = stem_info(n, stem)?;
        match (info.parameter, &parameter) {
            (Some(name), None) => {
                return Err(Error::InvalidInput(format!("family {stem} needs a value for {name}")))
            }
            (None, Some(_)) => {
                return Err(Error::InvalidInput(format!("family {stem} takes no parameter")))
            }
            (Some(name), Some(x)) => {
                if x.zero_test()? {
                    return Err(Error::DegenerateParameter(format!("{name} must be nonzero")));
                }
                if info.n == 7 {
                    for bad in [1, 2] {
                        if (x - &x.ctx().integer(bad)).zero_test()? {
                            return Err(Error::DegenerateParameter(format!("{name} must avoid 0, 1, 2")));
                        }
                    }
                }
            }
            (None, None) => {}
        }
        Ok(LimitFamilySpec {
            n,
            stem: info.stem,
            parameter,
        })
    }

    pub fn info(&self) -> &'static StemInfo {
        stem_info(self.n, self.stem).expect("validated at construction")
    }

    /// Display name such as `N1(beta=3)`.
    pub fn name(&self) -> String {
        match (&self.parameter, self.info().parameter) {
            (Some(x), Some(pn)) => format!("{}({pn}={x})", self.stem),
            _ => self.stem.to_string(),
        }
    }

    pub fn partition(&self) -> Vec<usize> {
        self.info().partition.to_vec()
    }

    fn param(&self) -> PadicNumber {
        self.parameter.clone().expect("parametrized family")
    }

    /// Generators of the limit algebra, as trace-zero matrices.
    pub fn generators(&self, ctx: PrimeContext) -> Vec<PMatrix> {
        let n = self.n;
        let e = |t: &[(usize, usize)]| e(ctx, n, t);
        let d = |v: &[i64]| diag(ctx, v);
        let with = |base: &[(usize, usize)], extra: (usize, usize)| {
            let mut terms: Vec<_> = base.iter().map(|&(i, j)| (i - 1, j - 1, ctx.one())).collect();
            terms.push((extra.0 - 1, extra.1 - 1, self.param()));
            unit(ctx, n, &terms)
        };
        match (n, self.stem) {
            (_, "C") => Subspace::cartan(ctx, n).basis_matrices().expect("matrix ambient"),
            (2, "U") => vec![e(&[(1, 2)])],
            (3, "H") => vec![d(&[1, 1, -2]), e(&[(1, 2)])],
            (3, "Nalpha") => vec![with(&[(1, 2)], (2, 3)), e(&[(1, 3)])],
            (3, "Nrow") => vec![e(&[(1, 2)]), e(&[(1, 3)])],
            (3, "Ncol") => vec![e(&[(1, 3)]), e(&[(2, 3)])],
            (4, "E1") => vec![d(&[1, 0, 0, -1]), d(&[0, 1, 1, -2]), e(&[(2, 3)])],
            (4, "F0") => vec![d(&[1, 1, -1, -1]), e(&[(1, 2)]), e(&[(3, 4)])],
            (4, "F1") => vec![d(&[1, 1, 1, -3]), e(&[(1, 2), (2, 3)]), e(&[(1, 3)])],
            (4, "F2") => vec![d(&[1, 1, 1, -3]), e(&[(1, 2)]), e(&[(1, 3)])],
            (4, "F3") => vec![d(&[1, 1, 1, -3]), e(&[(1, 3)]), e(&[(2, 3)])],
            (4, "N1") => vec![with(&[(1, 2), (2, 3)], (3, 4)), with(&[(1, 3)], (2, 4)), e(&[(1, 4)])],
            (4, "N2") => vec![e(&[(1, 2), (2, 3)]), e(&[(1, 3)]), e(&[(1, 4)])],
            (4, "N3") => vec![e(&[(2, 3), (3, 4)]), e(&[(2, 4)]), e(&[(1, 4)])],
            (4, "N4") => vec![with(&[(1, 2)], (2, 4)), e(&[(1, 3), (3, 4)]), e(&[(1, 4)])],
            (4, "N5") => vec![e(&[(2, 3)]), e(&[(1, 3), (2, 4)]), e(&[(1, 4)])],
            (4, "N6") => vec![e(&[(1, 2)]), e(&[(3, 4)]), e(&[(1, 4)])],
            (4, "N7") => vec![e(&[(1, 4)]), e(&[(2, 4)]), e(&[(3, 4)])],
            (4, "N8") => vec![e(&[(1, 2)]), e(&[(1, 3)]), e(&[(1, 4)])],
            (7, "L") => {
                let two = ctx.integer(2);
                vec![
                    e(&[(1, 6)]),
                    e(&[(2, 6), (2, 7)]),
                    unit(ctx, 7, &[(2, 5, ctx.one()), (2, 6, two)]),
                    with(&[(4, 6)], (4, 7)),
                    e(&[(5, 6)]),
                    e(&[(5, 7)]),
                ]
            }
            _ => unreachable!("stem table and generator table disagree"),
        }
    }

    /// The limit algebra in sl(n) coordinates.
    pub fn algebra(&self, ctx: PrimeContext) -> Result<Subspace> {
        Subspace::from_matrices(ctx, Ambient::TraceZero(self.n), &self.generators(ctx))
    }

    /// Entry strings of the conjugator family and the bindings they use.
    pub fn conjugator_entries(&self, ctx: PrimeContext) -> Result<(Vec<Vec<String>>, BTreeMap<String, PadicNumber>)> {
        let mut b = BTreeMap::new();
        if let (Some(name), Some(x)) = (self.info().parameter, &self.parameter) {
            b.insert(name.to_string(), x.clone());
        }
        let rows: &[&[&str]] = match (self.n, self.stem) {
            (2, "C") => &[&["1", "0"], &["0", "1"]],
            (3, "C") => &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
            (4, "C") => &[&["1", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (2, "U") => &[&["1", "s"], &["0", "1"]],
            (3, "H") => &[&["1", "s", "0"], &["0", "1", "0"], &["0", "0", "1"]],
            (3, "Nalpha") => &[&["alpha", "s", "s^2/2"], &["0", "1", "s"], &["0", "0", "1/alpha"]],
            (3, "Nrow") => &[&["1", "s", "s"], &["0", "1", "0"], &["0", "0", "1"]],
            (3, "Ncol") => &[&["1", "0", "s"], &["0", "1", "s"], &["0", "0", "1"]],
            (4, "E1") => &[&["1", "0", "0", "0"], &["0", "1", "s", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (4, "F0") => &[&["1", "s", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "s"], &["0", "0", "0", "1"]],
            (4, "F1") => &[&["1", "s", "s^2/2", "0"], &["0", "1", "s", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (4, "F2") => &[&["1", "s", "s", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (4, "F3") => &[&["1", "0", "s", "0"], &["0", "1", "s", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (4, "N1") => &[
                &["beta", "s", "s^2/2", "s^3/6"],
                &["0", "1", "s", "s^2/2"],
                &["0", "0", "1", "s"],
                &["0", "0", "0", "1/beta"],
            ],
            (4, "N2") => &[&["1", "s", "s^2/2", "s"], &["0", "1", "s", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (4, "N3") => &[&["1", "0", "0", "s"], &["0", "1", "s", "s^2/2"], &["0", "0", "1", "s"], &["0", "0", "0", "1"]],
            (4, "N4") => {
                // r avoids the two poles of the coefficients below
                let alpha = self.param();
                let mut r = 1;
                loop {
                    let rr = ctx.integer(r);
                    let quad = &(&(&rr * &rr) - &(&alpha * &rr)) + &alpha;
                    if !(&rr - &alpha).zero_test()? && !quad.zero_test()? {
                        break;
                    }
                    r += 1;
                }
                let rr = ctx.integer(r);
                b.insert("z".into(), rr.inv()?);
                b.insert("u".into(), (&rr - &alpha).inv()?);
                let den = &(&(&alpha * &rr) - &(&rr * &rr)) - &alpha;
                b.insert("w".into(), alpha.checked_div(&den)?);
                b.insert("t".into(), rr.checked_div(&alpha)?);
                &[
                    &["1", "u*s", "w*s", "z*s^2"],
                    &["0", "1", "0", "s"],
                    &["0", "-t", "1", "s - t*s"],
                    &["0", "0", "0", "1"],
                ]
            }
            (4, "N5") => &[&["1", "0", "s", "s"], &["0", "1", "-s", "-s/2"], &["0", "0", "2", "1"], &["0", "0", "1", "1"]],
            (4, "N6") => &[&["1", "s", "0", "s"], &["0", "1", "0", "0"], &["0", "0", "1", "s"], &["0", "0", "0", "1"]],
            (4, "N7") => &[&["1", "0", "0", "s"], &["0", "1", "0", "s"], &["0", "0", "1", "s"], &["0", "0", "0", "1"]],
            (4, "N8") => &[&["1", "s", "s", "s"], &["0", "1", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
            (7, "L") => &[
                &["1", "0", "0", "0", "0", "s", "0"],
                &["0", "1", "0", "0", "0", "s", "s"],
                &["0", "0", "1", "0", "0", "s", "2*s"],
                &["0", "0", "0", "1", "0", "s", "alpha*s"],
                &["0", "0", "0", "0", "1", "s^2", "s^2"],
                &["0", "0", "0", "0", "0", "1", "0"],
                &["0", "0", "0", "0", "0", "0", "1"],
            ],
            _ => unreachable!("stem table and conjugator table disagree"),
        };
        let rows = rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        Ok((rows, b))
    }

    pub fn conjugator(&self, ctx: PrimeContext) -> Result<LaurentFamily> {
        let (rows, b) = self.conjugator_entries(ctx)?;
        LaurentFamily::parse(ctx, &rows, &b)
    }
}
