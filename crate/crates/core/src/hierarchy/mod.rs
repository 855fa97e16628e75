//! Level-`k` eigencomputations: compressed operators
//! `Π_{I,k} (H ⊗ 1^{⊗k-1}) Π_{I,k}`, extremal values `ν_k`, hierarchy
//! traces, and witness certification.
//!
//! All compressed operators are formed in complement-basis coordinates (side
//! `dim I_k^⊥`), never as full `N^k x N^k` projector products, and
//! `H ⊗ 1^{⊗k-1}` is applied column-by-column using factor-index arithmetic
//! rather than a materialized Kronecker matrix.

mod hermitian_form;

pub use hermitian_form::{hermitian_form_level, hsos_decompose, HsosDecomposition, HsosOutcome};

use serde::{Deserialize, Serialize};

use crate::config::{HERMITIAN_TOL, MONOTONE_SLACK, WITNESS_PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, apply_on_positions, CMat};
use crate::varieties::{BasisCache, VarietySpec};

/// A level value `ν_k`, together with the convention flag for the empty
/// complement case (`I_k^⊥ = {0}` legitimately certifies that the variety
/// cut out by the ideal is empty; callers must branch on the flag).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nu {
    pub value: f64,
    pub empty_complement: bool,
}

impl Nu {
    fn finite(value: f64) -> Self {
        Nu {
            value,
            empty_complement: false,
        }
    }
}

/// The compressed operator `B† (H ⊗ 1^{⊗k-1}) B` with `B` the complement
/// basis; Hermitian of side `dim I_k^⊥`.
#[derive(Debug, Clone)]
pub struct LevelOperator {
    spec: VarietySpec,
    level: usize,
    compressed: CMat,
}

impl LevelOperator {
    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn matrix(&self) -> &CMat {
        &self.compressed
    }

    pub fn side(&self) -> usize {
        self.compressed.nrows()
    }
}

/// Compress `Hform ⊗ 1^{⊗(k-d)}`, with `Hform` given on `S^d(H)`
/// coordinates, into the level-`k` complement basis. For `d = 1` this is the
/// plain observable compression; every ν-computation funnels through here so
/// the `d = 1` reduction of the Hermitian-form hierarchy is bit-identical
/// with `nu_min`.
pub(crate) fn compress_form(
    hform: &CMat,
    d: usize,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<CMat> {
    let n = spec.ambient_dim()?;
    if k < d {
        return Err(Error::InvalidSpec(format!(
            "level k={k} below form degree d={d}"
        )));
    }
    linalg::check_hermitian(hform, HERMITIAN_TOL)?;
    let config = cache.config();
    let (op, op_side) = if d == 1 {
        if hform.nrows() != n {
            return Err(Error::DimensionMismatch {
                context: "observable side".into(),
                expected: n,
                got: hform.nrows(),
            });
        }
        (hform.clone(), n)
    } else {
        // Lift the form to (C^N)^{⊗d} through the symmetric chart.
        let sym_d = crate::symalg::sym_basis(n, d, &config.caps)?;
        if hform.nrows() != sym_d.len() {
            return Err(Error::DimensionMismatch {
                context: "Hermitian form side (dim S^d coordinates)".into(),
                expected: sym_d.len(),
                got: hform.nrows(),
            });
        }
        let side = n.pow(d as u32);
        config.caps.ensure(side, side, "lifted Hermitian form")?;
        let inj = sym_d.injection_matrix(&config.caps)?;
        ((&inj * hform) * inj.adjoint(), side)
    };
    let icb = cache.closed_form(spec, k)?;
    let dim = icb.dim();
    if dim == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    // Layout: one fused position for the first d copies, then k-d single
    // copies.
    let mut dims = vec![op_side];
    dims.extend(std::iter::repeat_n(n, k - d));
    let mut applied = CMat::zeros(icb.ambient_power_dim(), dim);
    for j in 0..dim {
        let col = icb.basis().column(j).clone_owned();
        let (w, _) = apply_on_positions(&col, &dims, &[0], &op, &[op_side]);
        applied.set_column(j, &w);
    }
    Ok(linalg::hermitize(&(icb.basis().adjoint() * applied)))
}

/// The compressed level-`k` operator of an observable `H` on `H`.
pub fn level_operator(
    h: &CMat,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<LevelOperator> {
    let compressed = compress_form(h, 1, spec, k, cache)?;
    Ok(LevelOperator {
        spec: spec.clone(),
        level: k,
        compressed,
    })
}

fn extremes(compressed: &CMat) -> Result<(Nu, Nu)> {
    if compressed.nrows() == 0 {
        return Ok((
            Nu {
                value: f64::INFINITY,
                empty_complement: true,
            },
            Nu {
                value: f64::NEG_INFINITY,
                empty_complement: true,
            },
        ));
    }
    let (vals, _) = linalg::hermitian_eigen_unchecked(compressed)?;
    Ok((Nu::finite(vals[0]), Nu::finite(vals[vals.len() - 1])))
}

/// `ν_k = λ_max(Π_{I,k} (H ⊗ 1^{⊗k-1}) Π_{I,k})`: a non-increasing upper
/// bound on the maximum of `⟨ψ|Hψ⟩` over the variety.
pub fn nu_max(h: &CMat, spec: &VarietySpec, k: usize, cache: &BasisCache) -> Result<Nu> {
    let c = compress_form(h, 1, spec, k, cache)?;
    Ok(extremes(&c)?.1)
}

/// `ν_k = λ_min(…)`: a non-decreasing lower bound on the minimum over the
/// variety.
pub fn nu_min(h: &CMat, spec: &VarietySpec, k: usize, cache: &BasisCache) -> Result<Nu> {
    let c = compress_form(h, 1, spec, k, cache)?;
    Ok(extremes(&c)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub k: usize,
    pub value: f64,
    pub empty_complement: bool,
}

/// Sequence of level values with the monotonicity verdict. Each entry is a
/// valid one-sided bound on the variety optimum (upper bound in the `Max`
/// direction, lower bound in the `Min` direction).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HierarchyTrace {
    pub direction: Direction,
    pub entries: Vec<TraceEntry>,
    /// Non-increasing (max) / non-decreasing (min) within slack.
    pub monotone: bool,
    /// Last finite level value.
    pub final_bound: Option<f64>,
    /// Set when a per-level cap error truncated the trace.
    pub truncated: Option<String>,
}

/// Run the eigenvalue hierarchy for `k = 1..=k_max`. Per-level cap errors
/// downgrade to a truncated trace with a warning rather than failing the
/// whole run.
pub fn optimize_over_variety(
    h: &CMat,
    spec: &VarietySpec,
    k_max: usize,
    direction: Direction,
    cache: &BasisCache,
) -> Result<HierarchyTrace> {
    if k_max < 1 {
        return Err(Error::InvalidSpec("k_max must be >= 1".into()));
    }
    let mut entries = Vec::new();
    let mut truncated = None;
    for k in 1..=k_max {
        let nu = match direction {
            Direction::Max => nu_max(h, spec, k, cache),
            Direction::Min => nu_min(h, spec, k, cache),
        };
        match nu {
            Ok(v) => entries.push(TraceEntry {
                k,
                value: v.value,
                empty_complement: v.empty_complement,
            }),
            Err(Error::CapExceeded { what, needed, cap }) => {
                truncated = Some(format!("level {k}: {what} needs {needed} > cap {cap}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let monotone = entries.windows(2).all(|w| match direction {
        Direction::Max => w[1].value <= w[0].value + MONOTONE_SLACK,
        Direction::Min => w[1].value >= w[0].value - MONOTONE_SLACK,
    });
    let final_bound = entries
        .iter()
        .rev()
        .find(|e| e.value.is_finite())
        .map(|e| e.value);
    Ok(HierarchyTrace {
        direction,
        entries,
        monotone,
        final_bound,
        truncated,
    })
}

/// Witness check at a fixed level: `H` is certified when the compressed
/// minimum is nonnegative (to tolerance) while `H` itself has a negative
/// eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub level: usize,
    pub nu_min: f64,
    pub nu_min_empty_complement: bool,
    /// Eigenvalues of `H` below `-1e-10`, ascending.
    pub negative_eigenvalues: Vec<f64>,
    pub certified: bool,
}

pub fn witness_certify(
    h: &CMat,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<WitnessCertificate> {
    linalg::check_hermitian(h, HERMITIAN_TOL)?;
    let (vals, _) = linalg::hermitian_eigen_unchecked(h)?;
    let negative: Vec<f64> = vals
        .iter()
        .copied()
        .filter(|&v| v < -WITNESS_PSD_TOL)
        .collect();
    let nu = nu_min(h, spec, k, cache)?;
    let certified = !negative.is_empty() && !nu.empty_complement && nu.value >= -WITNESS_PSD_TOL;
    Ok(WitnessCertificate {
        level: k,
        nu_min: nu.value,
        nu_min_empty_complement: nu.empty_complement,
        negative_eigenvalues: negative,
        certified,
    })
}
