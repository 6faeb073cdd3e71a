//! Mechanical verification of the SL(2), SL(3), SL(4) limit tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::block_structure_check;
use super::gr::{flatness_defect, group_samples, GrGroup};
use super::invariants::{conjugacy_invariant, structural_invariants, StructuralInvariants, Verdict};
use super::presets::{table_stems, LimitFamilySpec};
use crate::error::{Error, Result};
use crate::laurent::{conjugate_family, grassmann_limit, numeric_limit_oracle};
use crate::linalg::{is_abelian_algebra, Subspace};
use crate::padic::{count_power_classes, PowerClassTable, PrimeContext};

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub seed: u64,
    pub oracle_range: Vec<i64>,
    pub samples: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            seed: 2024,
            oracle_range: (6..=10).collect(),
            samples: 50,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub stem: &'static str,
    pub parameter: Option<String>,
    pub dim: usize,
    pub partition: Vec<usize>,
    pub oracle_digits: u32,
    pub flat_defect: i64,
    pub invariants: StructuralInvariants,
    pub construction: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationEvidence {
    pub first: String,
    pub second: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub n: usize,
    pub p: u64,
    pub precision: u32,
    pub families: Vec<FamilyReport>,
    /// Number of pairwise separated classes exhibited.
    pub class_count: usize,
    /// The count as a formula in the power-class numbers, e.g. "12 + Q2 + Q4".
    pub formula: String,
    /// Upper bound, only for n = 4 where the N4 classes are not decided.
    pub upper_bound: Option<u64>,
    pub separations: Vec<SeparationEvidence>,
}

fn fail(family: &str, reason: impl Into<String>) -> Error {
    Error::CheckFailed {
        family: family.to_string(),
        reason: reason.into(),
    }
}

/// One instance per family without parameter, one per power-class
/// representative otherwise.
pub fn table_instances(n: usize, ctx: PrimeContext) -> Result<Vec<LimitFamilySpec>> {
    let mut out = Vec::new();
    for info in table_stems(n) {
        match info.class_exponent {
            None => out.push(LimitFamilySpec::new(n, info.stem, None)?),
            Some(k) => {
                for label in PowerClassTable::new(ctx, k)?.labels() {
                    out.push(LimitFamilySpec::new(n, info.stem, Some(label.representative(ctx)))?);
                }
            }
        }
    }
    Ok(out)
}

/// Every check on a single family; the error names the family.
pub fn check_family(ctx: PrimeContext, spec: &LimitFamilySpec, opts: &TableOptions) -> Result<FamilyReport> {
    let name = spec.name();
    let wrap = |e: Error| match e {
        e @ Error::CheckFailed { .. } => e,
        e => fail(&name, e.to_string()),
    };
    let n = spec.n;
    let algebra = spec.algebra(ctx).map_err(wrap)?;
    if algebra.dim() != n - 1 {
        return Err(fail(&name, format!("dimension {} instead of {}", algebra.dim(), n - 1)));
    }
    if !is_abelian_algebra(&algebra) {
        return Err(fail(&name, "algebra is not abelian"));
    }
    let group = GrGroup::new(&algebra).map_err(wrap)?;

    let fam = spec.conjugator(ctx).map_err(wrap)?;
    let af = conjugate_family(&Subspace::cartan(ctx, n), &fam).map_err(wrap)?;
    let symbolic = grassmann_limit(&af).map_err(wrap)?;
    if !symbolic.equals(&algebra).map_err(wrap)? {
        return Err(fail(&name, "symbolic limit differs from the table algebra"));
    }
    let oracle = numeric_limit_oracle(&af, &opts.oracle_range).map_err(wrap)?;
    let oracle_digits = oracle
        .limit
        .agreement_digits(&algebra)
        .ok_or_else(|| fail(&name, "oracle limit has a different pivot pattern"))?;
    let needed = ctx.precision().saturating_sub(8);
    if oracle_digits < needed {
        return Err(fail(&name, format!("oracle agrees to {oracle_digits} digits, need {needed}")));
    }

    let partition = block_structure_check(&algebra).map_err(wrap)?.sizes;
    if partition != spec.partition() {
        return Err(fail(&name, format!("block partition {partition:?}, declared {:?}", spec.partition())));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = group_samples(group.algebra(), opts.samples, &mut rng).map_err(wrap)?;
    let flat_defect = flatness_defect(&samples, &algebra).map_err(wrap)?;
    if flat_defect != 0 {
        return Err(fail(&name, format!("flatness defect {flat_defect}")));
    }

    Ok(FamilyReport {
        name: name.clone(),
        stem: spec.stem,
        parameter: spec.parameter.as_ref().map(|x| x.to_string()),
        dim: algebra.dim(),
        partition,
        oracle_digits,
        flat_defect,
        invariants: structural_invariants(&algebra).map_err(wrap)?,
        construction: spec.info().construction,
    })
}

fn formula(n: usize) -> &'static str {
    match n {
        2 => "2",
        3 => "4 + Q3",
        _ => "12 + Q2 + Q4",
    }
}

/// Verify every family of the SL(n) table and the pairwise separation.
pub fn verify_table(n: usize, ctx: PrimeContext, opts: &TableOptions) -> Result<TableReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidInput(format!("tables exist for n = 2, 3, 4, not {n}")));
    }
    let specs = table_instances(n, ctx)?;
    let families: Vec<FamilyReport> = specs
        .par_iter()
        .map(|s| check_family(ctx, s, opts))
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|i| (i + 1..specs.len()).map(move |j| (i, j)))
        .collect();
    let separations: Vec<SeparationEvidence> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&specs[i], &specs[j]);
            let reason = if a.stem != b.stem {
                if families[i].invariants == families[j].invariants {
                    return Err(fail(&families[i].name, format!("not separated from {}", families[j].name)));
                }
                "structural invariants differ".to_string()
            } else {
                let r = conjugacy_invariant(ctx, a, b)?;
                if r.verdict != Verdict::Distinct {
                    return Err(fail(&families[i].name, format!("not separated from {}: {}", families[j].name, r.reason)));
                }
                r.reason
            };
            Ok(SeparationEvidence {
                first: families[i].name.clone(),
                second: families[j].name.clone(),
                reason,
            })
        })
        .collect::<Result<_>>()?;

    let upper_bound = if n == 4 {
        Some(12 + count_power_classes(ctx, 2)? + count_power_classes(ctx, 8)?)
    } else {
        None
    };
    Ok(TableReport {
        n,
        p: ctx.p(),
        precision: ctx.precision(),
        class_count: families.len(),
        families,
        formula: formula(n).to_string(),
        upper_bound,
        separations,
    })
}
