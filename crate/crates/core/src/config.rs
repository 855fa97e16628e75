//! Caps and tolerance policy shared by every module.
//!
//! All numerical-rank decisions use one relative threshold so that the
//! route-agreement and hierarchy-equivalence tests compare like with like.

use serde::{Deserialize, Serialize};

/// Hermitian / projector / orthonormality checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative rank threshold: singular values above `RANK_REL_TOL * σ_max`
/// count toward the numerical rank.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Eigenpair residual bound, relative to the operator norm.
pub const EIG_RESIDUAL_TOL: f64 = 1e-8;

/// Isometry round-trip tolerance for the symmetric injection.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Mutual-projection residual for route-agreement checks between
/// independently constructed bases of the same space.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-8;

/// Slack allowed when checking monotonicity of hierarchy traces.
pub const MONOTONE_SLACK: f64 = 1e-8;

/// A level value certifies a witness when it is at least `-WITNESS_PSD_TOL`.
pub const WITNESS_PSD_TOL: f64 = 1e-10;

/// Strict-gap tolerance for the `ν_k < 1` test of subspace certification.
pub const NU_GAP_TOL: f64 = 1e-8;

/// Tension invariants: PSD slack, trace slack, entrywise partial-trace slack.
pub const TENSION_PSD_TOL: f64 = 1e-8;
pub const TENSION_TRACE_TOL: f64 = 1e-8;
pub const TENSION_MARGINAL_TOL: f64 = 1e-6;

/// Size guardrail for dense constructions in `H^{⊗k}`.
///
/// Every matrix materialized by the hierarchies (basis matrices, compressed
/// operators, sampling spans) is checked against this cap on the number of
/// complex entries before allocation. Exceeding it is a clean
/// [`Error::CapExceeded`](crate::error::Error::CapExceeded), not an abort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_entries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_entries: 4_000_000,
        }
    }
}

impl Caps {
    pub fn new(max_entries: usize) -> Self {
        Caps { max_entries }
    }

    /// Check that a `rows x cols` dense allocation fits under the cap.
    pub fn ensure(&self, rows: usize, cols: usize, what: &str) -> crate::Result<()> {
        let entries = rows.saturating_mul(cols);
        if entries > self.max_entries {
            return Err(crate::Error::CapExceeded {
                what: what.to_string(),
                needed: entries,
                cap: self.max_entries,
            });
        }
        Ok(())
    }
}

/// Effective configuration for a run: the ambient cap plus the rank
/// tolerance (overridable per call site through this struct).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub caps: Caps,
    pub rank_rel_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            caps: Caps::default(),
            rank_rel_tol: RANK_REL_TOL,
        }
    }
}

impl Config {
    pub fn with_cap(max_entries: usize) -> Self {
        Config {
            caps: Caps::new(max_entries),
            ..Config::default()
        }
    }
}
