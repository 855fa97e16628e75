//! Worst-case and generic degree predictors for the certification
//! hierarchy.
//!
//! Worst-case degrees come from closed forms keyed by variety family; the
//! regularity constants are table values, never computed. Generic degrees
//! come from the exact dimension-count inequality
//! `dim I_k^⊥ < C(N-s+k, k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symalg::binomial;
use crate::varieties::{admissible_partitions, BasisCache, VarietySpec};

/// Worst-case degree report. `exact` distinguishes families where the level
/// is known precisely from those where only an upper bound is available
/// (fermionic, MPS); the surrogate carries a caveat note instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeReport {
    pub spec: VarietySpec,
    pub ambient_dim: usize,
    pub worst_case_degree: u128,
    /// True when the degree is known exactly; false flags an upper bound.
    pub worst_case_exact: bool,
    /// Regularity constant used, when the Cohen-Macaulay closed form
    /// applies.
    pub regularity: Option<u128>,
    pub note: Option<String>,
}

/// The level guaranteed to certify every X-tangled subspace.
pub fn worst_case_degree(spec: &VarietySpec) -> Result<DegreeReport> {
    spec.validate()?;
    let ambient = spec.ambient_dim()?;
    let report = |k: u128, exact: bool, reg: Option<u128>, note: Option<String>| DegreeReport {
        spec: spec.clone(),
        ambient_dim: ambient,
        worst_case_degree: k,
        worst_case_exact: exact,
        regularity: reg,
        note,
    };
    Ok(match spec {
        VarietySpec::Schmidt { r, dims } => {
            let reg = (*r as u128) * (dims[0].min(dims[1]) - r) as u128;
            report(reg + 1, true, Some(reg), None)
        }
        VarietySpec::Sep { dims } => {
            let sum: u128 = dims.iter().map(|&d| d as u128).sum();
            let max = dims.iter().copied().max().unwrap() as u128;
            let reg = sum - max - dims.len() as u128 + 1;
            report(reg + 1, true, Some(reg), None)
        }
        VarietySpec::Bosonic { m, n } => {
            let reg = (*n as u128) - n.div_ceil(*m) as u128;
            report(reg + 1, true, Some(reg), None)
        }
        VarietySpec::Fermionic { m, n } => {
            let k = binomial(*n as u64, *m as u64)? + 1;
            report(k, false, None, None)
        }
        VarietySpec::Mps { r, dims } => {
            let prod: u128 = dims.iter().map(|&d| d as u128).product();
            let k = prod
                .checked_mul(*r as u128)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(|| Error::Overflow("mps worst-case degree".into()))?;
            report(k, false, None, None)
        }
        VarietySpec::Bisep { dims }
        | VarietySpec::LSep { dims, .. }
        | VarietySpec::TProd { dims, .. } => {
            let parts = admissible_partitions(spec).expect("union-type spec");
            let k = parts
                .iter()
                .map(|blocks| {
                    blocks
                        .iter()
                        .map(|b| b.iter().map(|&f| dims[f] as u128).product::<u128>())
                        .min()
                        .unwrap_or(1)
                })
                .max()
                .unwrap_or(1);
            report(
                k,
                true,
                None,
                Some(
                    "per-cut guarantee: run the rank-one hierarchy for each admissible \
                     partition up to this level; the joint summed-complement test may \
                     need a higher level"
                        .into(),
                ),
            )
        }
        VarietySpec::SchmidtSurrogate { r, .. } => {
            let (a, b) = spec.surrogate_cut_dims();
            let reg = (*r as u128) * (a.min(b) - r) as u128;
            report(
                reg + 1,
                true,
                Some(reg),
                Some(
                    "surrogate: certifies tanglement for the contained tensor-network \
                     variety, but cannot certify every tangled subspace of it; the \
                     degree is exact for the surrogate only"
                        .into(),
                ),
            )
        }
    })
}

/// Outcome of the generic-degree search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum GenericDegree {
    /// Smallest level at which a generically chosen `s`-dimensional
    /// subspace is certified.
    Found {
        k: usize,
    },
    NotFound {
        searched_up_to: usize,
    },
}

/// Smallest `k ≤ k_cap` with `dim I_k^⊥ < C(N-s+k, k)`, by exact integer
/// comparison. Uses the closed dimension formulas where available and the
/// numerically certified rank otherwise.
pub fn generic_degree(
    spec: &VarietySpec,
    s: usize,
    k_cap: usize,
    cache: &BasisCache,
) -> Result<GenericDegree> {
    spec.validate()?;
    let n = spec.ambient_dim()?;
    if s < 1 || s > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= s <= {n}, got s={s}"
        )));
    }
    for k in 1..=k_cap {
        let dim = match spec.predicted_ikperp_dim(k)? {
            Some(d) => d,
            None => cache.closed_form(spec, k)?.dim() as u128,
        };
        let bound = binomial((n - s + k) as u64, k as u64)?;
        if dim < bound {
            return Ok(GenericDegree::Found { k });
        }
    }
    Ok(GenericDegree::NotFound {
        searched_up_to: k_cap,
    })
}
