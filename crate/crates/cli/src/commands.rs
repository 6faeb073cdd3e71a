use std::fmt::Write as _;
use std::path::Path;

use chabauty_core::cartan::{
    classify_isometry, conjugacy_invariant, generated_algebra, hyperbolic_witness, parse_preset_name, verify_table,
    Isometry, LimitFamilySpec, TableOptions,
};
use chabauty_core::io::{load_family, load_matrix, parse_matrix_rows, preset_family};
use chabauty_core::laurent::{grassmann_limit, numeric_limit_oracle};
use chabauty_core::linalg::{is_abelian_algebra, newton_slopes, Ambient, PMatrix, Subspace};
use chabauty_core::padic::literal::parse_plain_scalar;
use chabauty_core::padic::count_power_classes;
use chabauty_core::tree::{
    act, distance, parahoric_limit_check, parse_vertex, stabilizer_membership, translation_length,
    translation_length_by_ball,
};
use chabauty_core::{Error, PrimeContext, Result};
use serde_json::{json, Value};

use crate::{Cli, Command, Global, MatrixInput, Outcome, TreeCommand};

const SCHEMA_VERSION: u32 = 1;

fn ctx_from_flags(g: &Global) -> Result<PrimeContext> {
    let p = g
        .p
        .ok_or_else(|| Error::InvalidInput("--p is required for this command".into()))?;
    PrimeContext::new(p, g.precision)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn matrix(g: &Global, input: &MatrixInput) -> Result<PMatrix> {
    match (&input.file, &input.matrix) {
        (Some(path), _) => load_matrix(&read(path)?),
        (None, Some(rows)) => {
            let rows: Vec<Vec<String>> = serde_json::from_str(rows).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: format!("--matrix: {e}"),
            })?;
            parse_matrix_rows(ctx_from_flags(g)?, &rows)
        }
        (None, None) => Err(Error::InvalidInput("give a matrix file or --matrix".into())),
    }
}

fn report(command: &str, ctx: PrimeContext, body: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "p": ctx.p(),
        "precision": ctx.precision(),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Qk { k } => qk(g, *k),
        Command::Limit { file, preset, param } => limit(g, file.as_deref(), preset.as_deref(), param.as_deref()),
        Command::Tables { n } => tables(g, *n),
        Command::Classify(input) => classify(g, input),
        Command::Witness(input) => witness(g, input),
        Command::Invariant { first, second } => invariant(g, first, second),
        Command::Tree(t) => tree(g, t),
    }
}

fn qk(g: &Global, k: u64) -> Result<Outcome> {
    let ctx = ctx_from_flags(g)?;
    let count = count_power_classes(ctx, k)?;
    Ok(Outcome {
        json: report("qk", ctx, json!({ "k": k, "count": count })),
        text: format!("{count}\n"),
        passed: true,
    })
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn limit(g: &Global, file: Option<&Path>, preset: Option<&str>, param: Option<&str>) -> Result<Outcome> {
    let loaded = match (file, preset) {
        (Some(path), _) => load_family(&read(path)?)?,
        (None, Some(name)) => preset_family(ctx_from_flags(g)?, name, param)?,
        (None, None) => return Err(Error::InvalidInput("give a family file or --preset".into())),
    };
    let ctx = loaded.ctx;
    let lim = grassmann_limit(&loaded.family)?;
    let mut checks = Vec::new();

    let needed = ctx.precision().saturating_sub(8);
    let range: Vec<i64> = (6..=10).collect();
    checks.push(match numeric_limit_oracle(&loaded.family, &range) {
        Ok(o) => {
            let digits = o.limit.agreement_digits(&lim);
            Check {
                name: "numeric oracle",
                passed: digits.is_some_and(|d| d >= needed),
                detail: match digits {
                    Some(d) => format!("{d} agreeing digits at m = 6..10 (need {needed})"),
                    None => "different pivot pattern".into(),
                },
            }
        }
        Err(e) => Check {
            name: "numeric oracle",
            passed: false,
            detail: e.to_string(),
        },
    });
    checks.push(Check {
        name: "abelian",
        passed: is_abelian_algebra(&lim),
        detail: String::new(),
    });
    let base_dim = loaded.family.base().dim();
    checks.push(Check {
        name: "dimension",
        passed: lim.dim() == base_dim,
        detail: format!("limit {} vs family {base_dim}", lim.dim()),
    });
    if let Some(spec) = &loaded.spec {
        checks.push(Check {
            name: "table algebra",
            passed: lim.equals(&spec.algebra(ctx)?)?,
            detail: spec.info().construction.to_string(),
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    let basis = lim.matrix_strings()?;

    let mut text = format!("{}: limit of dimension {}\n", loaded.name, lim.dim());
    for b in &basis {
        let _ = writeln!(text, "  {b}");
    }
    for c in &checks {
        let mark = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(text, "{:<14} {mark}{}", c.name, if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) });
    }
    let json = report(
        "limit",
        ctx,
        json!({
            "family": loaded.name,
            "dimension": lim.dim(),
            "basis": basis,
            "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
            "passed": passed,
        }),
    );
    Ok(Outcome { json, text, passed })
}

fn tables(g: &Global, n: usize) -> Result<Outcome> {
    let ctx = ctx_from_flags(g)?;
    if ctx.precision() < 8 {
        return Err(Error::InvalidInput("table verification needs --precision >= 8".into()));
    }
    let opts = TableOptions {
        seed: g.seed,
        ..TableOptions::default()
    };
    let r = verify_table(n, ctx, &opts)?;
    let mut text = format!("{} classes verified ({} at p = {})\n", r.class_count, r.formula, r.p);
    if let Some(ub) = r.upper_bound {
        let _ = writeln!(text, "upper bound 12 + Q2 + Q8 = {ub}");
    }
    for f in &r.families {
        let _ = writeln!(
            text,
            "  {:<16} blocks {:?}  oracle digits {}  flat defect {}",
            f.name, f.partition, f.oracle_digits, f.flat_defect
        );
    }
    let _ = writeln!(text, "{} pairs separated", r.separations.len());
    let json = report("tables", ctx, serde_json::to_value(&r).expect("report serializes"));
    Ok(Outcome { json, text, passed: true })
}

fn classify(g: &Global, input: &MatrixInput) -> Result<Outcome> {
    let m = matrix(g, input)?;
    let kind = classify_isometry(&m)?;
    let slopes: Vec<String> = newton_slopes(&m)?.root_valuations().iter().map(|r| r.to_string()).collect();
    let name = match kind {
        Isometry::Elliptic => "elliptic",
        Isometry::Hyperbolic => "hyperbolic",
    };
    Ok(Outcome {
        json: report("classify", m.ctx(), json!({ "matrix": m.to_strings(), "class": kind, "eigenvalue_valuations": slopes })),
        text: format!("{name}\neigenvalue valuations: {}\n", slopes.join(", ")),
        passed: true,
    })
}

fn witness(g: &Global, input: &MatrixInput) -> Result<Outcome> {
    let a = matrix(g, input)?;
    let ctx = a.ctx();
    let w = match hyperbolic_witness(&a) {
        Ok(w) => w,
        Err(Error::NoWitnessNeeded) => {
            return Ok(Outcome {
                json: report("witness", ctx, json!({ "matrix": a.to_strings(), "witness": null, "reason": "diagonal is zero" })),
                text: "no witness needed: the diagonal is zero, so every element is elliptic\n".into(),
                passed: true,
            })
        }
        Err(e) => return Err(e),
    };
    let hyperbolic = classify_isometry(&w.h)? == Isometry::Hyperbolic;
    let span = generated_algebra(&Subspace::from_matrices(ctx, Ambient::Matrix(a.n()), std::slice::from_ref(&a))?)?;
    let member = span.contains_matrix(&w.h)? && w.h.det().agrees(&ctx.one())?;
    let passed = hyperbolic && member;
    let text = format!(
        "lambda = {} (m = {}, i = {}, j = {})\nh = {}\nhyperbolic: {hyperbolic}\nin the group of the algebra generated by a: {member}\n",
        w.lambda,
        w.m,
        w.i + 1,
        w.j + 1,
        w.h
    );
    let json = report(
        "witness",
        ctx,
        json!({
            "matrix": a.to_strings(),
            "witness": {
                "lambda": w.lambda.to_string(),
                "m": w.m,
                "i": w.i + 1,
                "j": w.j + 1,
                "h": w.h.to_strings(),
                "hyperbolic": hyperbolic,
                "member": member,
            },
            "passed": passed,
        }),
    );
    Ok(Outcome { json, text, passed })
}

fn parse_family_arg(ctx: PrimeContext, arg: &str) -> Result<LimitFamilySpec> {
    let (name, param) = match arg.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (arg, None),
    };
    let (n, stem) = parse_preset_name(name)?;
    let param = param.map(|t| parse_plain_scalar(ctx, t)).transpose()?;
    LimitFamilySpec::new(n, stem, param)
}

fn invariant(g: &Global, first: &str, second: &str) -> Result<Outcome> {
    let ctx = ctx_from_flags(g)?;
    let s1 = parse_family_arg(ctx, first)?;
    let s2 = parse_family_arg(ctx, second)?;
    let r = conjugacy_invariant(ctx, &s1, &s2)?;
    let passed = r.conjugator.is_none() || r.conjugator_verified;
    let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
    let mut text = format!("{}: {}\n", verdict.as_str().unwrap_or_default(), r.reason);
    if let Some(t) = &r.conjugator {
        let _ = writeln!(text, "conjugator {t} verified: {}", r.conjugator_verified);
    }
    let json = report(
        "invariant",
        ctx,
        json!({
            "first": s1.name(),
            "second": s2.name(),
            "verdict": r.verdict,
            "reason": r.reason,
            "conjugator": r.conjugator.as_ref().map(|t| t.to_strings()),
            "conjugator_verified": r.conjugator_verified,
        }),
    );
    Ok(Outcome { json, text, passed })
}

fn tree(g: &Global, t: &TreeCommand) -> Result<Outcome> {
    match t {
        TreeCommand::TranslationLength(input) => {
            let m = matrix(g, input)?;
            let newton = translation_length(&m)?;
            let ball = translation_length_by_ball(&m)?;
            let passed = newton == ball;
            Ok(Outcome {
                json: report("tree translation-length", m.ctx(), json!({ "matrix": m.to_strings(), "translation_length": newton, "ball_minimum": ball, "passed": passed })),
                text: format!("{newton}\nball minimisation: {ball}\n"),
                passed,
            })
        }
        TreeCommand::Act { input, vertex } => {
            let m = matrix(g, input)?;
            let ctx = m.ctx();
            let v = parse_vertex(ctx, vertex)?;
            let w = act(&m, &v)?;
            let d = distance(ctx, &v, &w)?;
            Ok(Outcome {
                json: report("tree act", ctx, json!({ "vertex": v.to_string(), "image": w.to_string(), "distance": d })),
                text: format!("{w}\ndistance moved: {d}\n"),
                passed: true,
            })
        }
        TreeCommand::Stabilizer { input, vertex } => {
            let m = matrix(g, input)?;
            let ctx = m.ctx();
            let v = parse_vertex(ctx, vertex)?;
            let fixes = stabilizer_membership(&m, &v)?;
            Ok(Outcome {
                json: report("tree stabilizer", ctx, json!({ "vertex": v.to_string(), "fixes": fixes })),
                text: format!("{fixes}\n"),
                passed: true,
            })
        }
        TreeCommand::Ray { input, depth } => {
            let m = matrix(g, input)?;
            let ctx = m.ctx();
            let r = parahoric_limit_check(ctx, std::slice::from_ref(&m), &[], *depth)?;
            let row = &r.unipotents[0];
            let mut text = format!("fixes ray points l >= {}\n", row.expected_exponent);
            for (l, f) in row.fixes.iter().enumerate() {
                let _ = writeln!(text, "  l = {l:>2}: {f}");
            }
            for v in &r.violations {
                let _ = writeln!(text, "violation: {v}");
            }
            Ok(Outcome {
                json: report("tree ray", ctx, serde_json::to_value(&r).expect("report serializes")),
                text,
                passed: r.passed(),
            })
        }
    }
}
