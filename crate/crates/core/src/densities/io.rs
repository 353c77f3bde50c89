//! JSON density files.
//!
//! ```json
//! {
//!   "omega": 2,
//!   "gamma": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
//!   "kappa": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
//!   "two_body_diag": [[0.0, 0.0], [0.0, 0.0]]
//! }
//! ```
//!
//! `two_body_diag` may be replaced by `"quasiparticle_vacuum": true`; one of
//! the two is required.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{CMatrix, DensitySet};
use crate::error::{Error, Result};

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn rows<'a>(value: &'a Value, path: &str, n: usize) -> Result<&'a Vec<Value>> {
    let rows = value
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(schema(path, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

fn row<'a>(value: &'a Value, path: &str, n: usize) -> Result<&'a Vec<Value>> {
    let row = value
        .as_array()
        .ok_or_else(|| schema(path, "expected an array"))?;
    if row.len() != n {
        return Err(schema(path, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(row)
}

fn number(value: &Value, path: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| schema(path, "expected a number"))
}

fn complex_matrix(obj: &Map<String, Value>, field: &str, n: usize) -> Result<CMatrix> {
    let value = obj
        .get(field)
        .ok_or_else(|| schema(field, "missing field"))?;
    let mut m = CMatrix::zeros(n, n);
    for (i, r) in rows(value, field, n)?.iter().enumerate() {
        let rpath = format!("{field}[{i}]");
        for (j, entry) in row(r, &rpath, n)?.iter().enumerate() {
            let epath = format!("{field}[{i}][{j}]");
            let pair = row(entry, &epath, 2)?;
            m[(i, j)] = Complex64::new(
                number(&pair[0], &format!("{epath}[0]"))?,
                number(&pair[1], &format!("{epath}[1]"))?,
            );
        }
    }
    Ok(m)
}

fn real_matrix(value: &Value, field: &str, n: usize) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(n, n);
    for (i, r) in rows(value, field, n)?.iter().enumerate() {
        let rpath = format!("{field}[{i}]");
        for (j, entry) in row(r, &rpath, n)?.iter().enumerate() {
            m[(i, j)] = number(entry, &format!("{field}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

/// Parses and validates a density file.
pub fn density_set_from_json(value: &Value) -> Result<DensitySet> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    let omega = obj
        .get("omega")
        .ok_or_else(|| schema("omega", "missing field"))?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| schema("omega", "expected a positive integer"))? as usize;
    let gamma = complex_matrix(obj, "gamma", omega)?;
    let kappa = complex_matrix(obj, "kappa", omega)?;

    let qp_flag = match obj.get("quasiparticle_vacuum") {
        None => false,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| schema("quasiparticle_vacuum", "expected a boolean"))?,
    };
    match (obj.get("two_body_diag"), qp_flag) {
        (Some(_), true) => Err(schema(
            "two_body_diag",
            "conflicts with \"quasiparticle_vacuum\": true",
        )),
        (Some(v), false) => {
            let two_body = real_matrix(v, "two_body_diag", omega)?;
            DensitySet::new(gamma, kappa, two_body)
        }
        (None, true) => DensitySet::from_quasiparticle_vacuum(gamma, kappa),
        (None, false) => Err(schema(
            "two_body_diag",
            "missing field (or set \"quasiparticle_vacuum\": true)",
        )),
    }
}

pub fn density_set_from_str(text: &str) -> Result<DensitySet> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    density_set_from_json(&value)
}

/// Serialises densities with an explicit two-body diagonal.
pub fn density_set_to_json(d: &DensitySet) -> Value {
    let n = d.dim();
    let complex = |m: &CMatrix| -> Value {
        Value::Array(
            (0..n)
                .map(|i| {
                    Value::Array(
                        (0..n)
                            .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                            .collect(),
                    )
                })
                .collect(),
        )
    };
    let two_body = d.two_body_diag();
    json!({
        "omega": n,
        "gamma": complex(d.gamma()),
        "kappa": complex(d.kappa()),
        "two_body_diag": (0..n)
            .map(|i| (0..n).map(|j| two_body[(i, j)]).collect::<Vec<f64>>())
            .collect::<Vec<_>>(),
    })
}
