//! Input documents: one JSON object per file, tagged by `kind`, always with
//! an explicit prime and precision.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::cartan::{parse_preset_name, LimitFamilySpec};
use crate::error::{Error, Result};
use crate::laurent::{conjugate_family, AlgebraFamily, LaurentFamily};
use crate::linalg::{Ambient, PMatrix, Subspace};
use crate::padic::literal::{parse_plain_scalar, parse_scalar};
use crate::padic::{PadicNumber, PrimeContext};

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputDocument {
    Family(FamilyDoc),
    Preset(PresetDoc),
    Matrix(MatrixDoc),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum BaseDoc {
    /// Only "cartan" is accepted.
    Named(String),
    Generators(Vec<Vec<Vec<String>>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub p: u64,
    pub precision: u32,
    pub base: BaseDoc,
    #[serde(default)]
    pub bindings: BTreeMap<String, String>,
    pub conjugator: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetDoc {
    pub p: u64,
    pub precision: u32,
    pub name: String,
    pub parameter: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub p: u64,
    pub precision: u32,
    pub rows: Vec<Vec<String>>,
}

/// A conjugated family ready for limit computations.
#[derive(Clone, Debug)]
pub struct LoadedFamily {
    pub ctx: PrimeContext,
    pub name: String,
    pub family: AlgebraFamily,
    /// The table entry, for presets.
    pub spec: Option<LimitFamilySpec>,
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Square matrix from entry strings in the scalar grammar.
pub fn parse_matrix_rows(ctx: PrimeContext, rows: &[Vec<String>]) -> Result<PMatrix> {
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, t) in row.iter().enumerate() {
            entries.push(parse_plain_scalar(ctx, t).map_err(|e| locate(e, &format!("rows[{i}][{j}]")))?);
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    Ok(PMatrix::new(ctx, n, entries))
}

fn locate(e: Error, place: &str) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{place}: {message}"),
        },
        other => other,
    }
}

/// Byte offsets of the string literals inside the value of `key`, in order.
fn string_literals_after(text: &str, key: &str) -> Vec<usize> {
    let needle = format!("\"{key}\"");
    let Some(start) = text.find(&needle) else { return Vec::new() };
    let bytes = text.as_bytes();
    let mut i = start + needle.len();
    let mut depth = 0i32;
    let mut out = Vec::new();
    while i < bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            b'"' => {
                out.push(i + 1);
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    out
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |k| k + 1) + 1;
    (line, column)
}

/// Re-anchor a cell parse error at its position in the source document.
fn anchor_cell_error(text: &str, rows: &[Vec<String>], e: Error) -> Error {
    let Error::Parse { column, message, .. } = &e else { return e };
    let Some(cell) = message.strip_prefix("conjugator[") else { return e };
    let idx: Vec<usize> = cell
        .split(['[', ']'])
        .filter_map(|s| s.parse().ok())
        .take(2)
        .collect();
    if idx.len() != 2 {
        return e;
    }
    let k = rows.iter().take(idx[0]).map(|r| r.len()).sum::<usize>() + idx[1];
    match string_literals_after(text, "conjugator").get(k) {
        Some(&off) => {
            let (line, col) = line_column(text, off);
            Error::Parse {
                line,
                column: col + column - 1,
                message: message.clone(),
            }
        }
        None => e,
    }
}

fn context(p: u64, precision: u32) -> Result<PrimeContext> {
    PrimeContext::new(p, precision)
}

fn base_subspace(ctx: PrimeContext, n: usize, base: &BaseDoc) -> Result<Subspace> {
    match base {
        BaseDoc::Named(s) if s == "cartan" => Ok(Subspace::cartan(ctx, n)),
        BaseDoc::Named(s) => Err(Error::InvalidInput(format!("unknown base '{s}', expected \"cartan\" or generators"))),
        BaseDoc::Generators(gens) => {
            let mats = gens.iter().map(|g| parse_matrix_rows(ctx, g)).collect::<Result<Vec<_>>>()?;
            if mats.iter().any(|m| m.n() != n) {
                return Err(Error::InvalidInput(format!("base generators must be {n}x{n}")));
            }
            let mut traceless = true;
            for m in &mats {
                traceless &= m.trace().zero_test()?;
            }
            let ambient = if traceless { Ambient::TraceZero(n) } else { Ambient::Matrix(n) };
            Subspace::from_matrices(ctx, ambient, &mats)
        }
    }
}

/// Preset family from a name like `sl3-Nalpha` and an optional parameter literal.
pub fn preset_family(ctx: PrimeContext, name: &str, parameter: Option<&str>) -> Result<LoadedFamily> {
    let (n, stem) = if name == "sl2" { (2, "U") } else { parse_preset_name(name)? };
    let param = parameter.map(|t| parse_plain_scalar(ctx, t)).transpose()?;
    let spec = LimitFamilySpec::new(n, stem, param)?;
    let family = conjugate_family(&Subspace::cartan(ctx, n), &spec.conjugator(ctx)?)?;
    Ok(LoadedFamily {
        ctx,
        name: format!("sl{n}-{}", spec.name()),
        family,
        spec: Some(spec),
    })
}

pub fn load_family(text: &str) -> Result<LoadedFamily> {
    match parse_document(text)? {
        InputDocument::Family(doc) => {
            let ctx = context(doc.p, doc.precision)?;
            let mut bindings: BTreeMap<String, PadicNumber> = BTreeMap::new();
            for (k, v) in &doc.bindings {
                let x = parse_scalar(ctx, v, &bindings).map_err(|e| locate(e, &format!("bindings.{k}")))?;
                bindings.insert(k.clone(), x);
            }
            let fam = LaurentFamily::parse(ctx, &doc.conjugator, &bindings)
                .map_err(|e| anchor_cell_error(text, &doc.conjugator, e))?;
            let base = base_subspace(ctx, fam.n(), &doc.base)?;
            Ok(LoadedFamily {
                ctx,
                name: "family".into(),
                family: conjugate_family(&base, &fam)?,
                spec: None,
            })
        }
        InputDocument::Preset(doc) => {
            let ctx = context(doc.p, doc.precision)?;
            preset_family(ctx, &doc.name, doc.parameter.as_deref())
        }
        InputDocument::Matrix(_) => Err(Error::InvalidInput("expected a family or preset document, got a matrix".into())),
    }
}

pub fn load_matrix(text: &str) -> Result<PMatrix> {
    match parse_document(text)? {
        InputDocument::Matrix(doc) => parse_matrix_rows(context(doc.p, doc.precision)?, &doc.rows),
        _ => Err(Error::InvalidInput("expected a matrix document".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::grassmann_limit;

    #[test]
    fn family_document() {
        let text = r#"{
  "kind": "family",
  "p": 5,
  "precision": 32,
  "base": "cartan",
  "conjugator": [["1", "s"], ["0", "1"]]
}"#;
        let f = load_family(text).unwrap();
        let lim = grassmann_limit(&f.family).unwrap();
        let ctx = f.ctx;
        assert!(lim.contains_matrix(&PMatrix::unit(ctx, 2, 0, 1)).unwrap());
        assert_eq!(lim.dim(), 1);
    }

    #[test]
    fn cell_errors_point_into_the_file() {
        let text = "{\n  \"kind\": \"family\", \"p\": 5, \"precision\": 32, \"base\": \"cartan\",\n  \"conjugator\": [[\"1\", \"s\"],\n                 [\"0\", \"1 + $\"]]\n}";
        match load_family(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 29);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_errors_and_wrong_kinds() {
        assert!(matches!(parse_document("{\"kind\": "), Err(Error::Parse { line: 1, .. })));
        assert!(load_matrix(r#"{"kind": "preset", "p": 5, "precision": 32, "name": "sl2"}"#).is_err());
        assert!(load_family(r#"{"kind": "preset", "p": 5, "precision": 32, "name": "sl2", "extra": 1}"#).is_err());
        let m = load_matrix(r#"{"kind": "matrix", "p": 5, "precision": 16, "rows": [["5", "0"], ["0", "1/5"]]}"#).unwrap();
        assert_eq!(m.ctx().precision(), 16);
    }

    #[test]
    fn preset_documents() {
        let f = load_family(r#"{"kind": "preset", "p": 7, "precision": 32, "name": "sl3-Nalpha", "parameter": "1"}"#).unwrap();
        let spec = f.spec.clone().unwrap();
        assert!(grassmann_limit(&f.family).unwrap().equals(&spec.algebra(f.ctx).unwrap()).unwrap());
    }
}
