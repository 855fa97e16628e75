//! Closed-form trace-distance bounds from a level-`k` tendable state to the
//! X-arable set, available for the three irreducibly-represented cases:
//! distinguishable, bosonic, and fermionic separability.

use crate::error::{Error, Result};
use crate::varieties::VarietySpec;

/// `4m(n-m)/(n+k)` for fermionic, `4m(max_j n_j - 1)/(k+1)` for
/// distinguishable, `4m(n-1)/(k+1)` for bosonic separability. The ratio is
/// formed in exact integer arithmetic before conversion. Other varieties
/// are unsupported (no bound is available).
pub fn definetti_bound(spec: &VarietySpec, k: usize) -> Result<f64> {
    spec.validate()?;
    if k < 1 {
        return Err(Error::InvalidSpec("de Finetti bound needs k >= 1".into()));
    }
    let (num, den): (u128, u128) = match spec {
        VarietySpec::Fermionic { m, n } => {
            (4 * (*m as u128) * ((*n - *m) as u128), (*n + k) as u128)
        }
        VarietySpec::Sep { dims } => {
            let max = *dims.iter().max().expect("nonempty dims");
            (
                4 * (dims.len() as u128) * ((max - 1) as u128),
                (k + 1) as u128,
            )
        }
        VarietySpec::Bosonic { m, n } => (4 * (*m as u128) * ((*n - 1) as u128), (k + 1) as u128),
        other => {
            return Err(Error::UnsupportedVariety {
                op: "definetti_bound".into(),
                variety: other.name(),
            })
        }
    };
    Ok(num as f64 / den as f64)
}
