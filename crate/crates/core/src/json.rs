//! JSON encodings for the external interfaces: complex numbers as
//! `[re, im]` pairs, matrices row-major, subspaces as arrays of column
//! vectors.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::subspace::Subspace;

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<C64> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidInput("complex entries must be [re, im] pairs".into()))?;
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| Error::InvalidInput("re must be a number".into()))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| Error::InvalidInput("im must be a number".into()))?;
    Ok(C64::new(re, im))
}

/// Row-major nested arrays of `[re, im]` pairs.
pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<CMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::InvalidInput(
            "matrix must have at least one row".into(),
        ));
    }
    let ncols = rows[0]
        .as_array()
        .ok_or_else(|| Error::InvalidInput("matrix rows must be arrays".into()))?
        .len();
    let mut out = CMat::zeros(rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == ncols)
            .ok_or_else(|| Error::InvalidInput(format!("row {i} has inconsistent length")))?;
        for (j, entry) in row.iter().enumerate() {
            out[(i, j)] = complex_from_json(entry)?;
        }
    }
    Ok(out)
}

pub fn vector_to_json(v: &CVec) -> Value {
    Value::Array((0..v.len()).map(|i| complex_to_json(v[i])).collect())
}

pub fn vector_from_json(v: &Value) -> Result<CVec> {
    let entries = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("vector must be an array".into()))?;
    let mut out = CVec::zeros(entries.len());
    for (i, e) in entries.iter().enumerate() {
        out[i] = complex_from_json(e)?;
    }
    Ok(out)
}

/// A subspace is an array of complex column vectors.
pub fn subspace_to_json(u: &Subspace) -> Value {
    Value::Array(
        (0..u.dim())
            .map(|j| vector_to_json(&u.columns().column(j).clone_owned()))
            .collect(),
    )
}

/// Columns are orthonormalized on ingestion, so any spanning set is
/// accepted.
pub fn subspace_from_json(v: &Value, config: &crate::Config) -> Result<Subspace> {
    let cols = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("subspace must be an array of column vectors".into()))?;
    if cols.is_empty() {
        return Err(Error::InvalidInput(
            "subspace needs at least one column".into(),
        ));
    }
    let first = vector_from_json(&cols[0])?;
    let mut m = CMat::zeros(first.len(), cols.len());
    m.set_column(0, &first);
    for (j, c) in cols.iter().enumerate().skip(1) {
        let col = vector_from_json(c)?;
        if col.len() != first.len() {
            return Err(Error::InvalidInput(
                "subspace columns have mixed lengths".into(),
            ));
        }
        m.set_column(j, &col);
    }
    Subspace::from_span(&m, config)
}
