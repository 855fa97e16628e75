//! X-tangled subspace certification: the Nullstellensatz linear-system
//! hierarchy, geometric-measure bounds, witness construction, the
//! robustness radius, the range criterion for states, and degree
//! predictors.

mod degree;

pub use degree::{generic_degree, worst_case_degree, DegreeReport, GenericDegree};

use serde::{Deserialize, Serialize};

use crate::config::{Config, NU_GAP_TOL};
use crate::error::{Error, Result};
use crate::hierarchy::{self, WitnessCertificate};
use crate::linalg::{self, CMat, CVec, C64};
use crate::varieties::{BasisCache, VarietySpec};

/// A subspace `U ⊆ H` held as orthonormal columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    columns: CMat,
    label: Option<String>,
}

impl Subspace {
    /// Wrap columns that are already orthonormal (checked to 1e-10).
    pub fn new(columns: CMat) -> Result<Self> {
        let s = columns.ncols();
        if s == 0 || s > columns.nrows() {
            return Err(Error::InvalidInput(format!(
                "subspace needs 1 <= dim <= ambient, got {s} columns in C^{}",
                columns.nrows()
            )));
        }
        let gram = columns.adjoint() * &columns;
        let dev = linalg::max_abs(&(gram - CMat::identity(s, s)));
        if dev > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "subspace columns not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Subspace {
            columns,
            label: None,
        })
    }

    /// Orthonormalize a spanning set first.
    pub fn from_span(span: &CMat, config: &Config) -> Result<Self> {
        let basis = linalg::span_orthonormalize(span, config.rank_rel_tol);
        Subspace::new(basis.basis)
    }

    pub fn single(psi: &CVec) -> Result<Self> {
        let norm = psi.norm();
        if norm < 1e-12 {
            return Err(Error::InvalidInput("zero vector spans no subspace".into()));
        }
        let mut m = CMat::zeros(psi.len(), 1);
        m.set_column(0, &(psi / C64::new(norm, 0.0)));
        Subspace::new(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn columns(&self) -> &CMat {
        &self.columns
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Orthogonal projection onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.columns * self.columns.adjoint()
    }
}

/// Orthonormal basis of `S^k(U)` in `H^{⊗k}` coordinates: the occupation
/// basis of `S^k(C^s)` pushed through `U^{⊗k}`. Dimension `C(s+k-1, k)`.
pub fn sym_power_basis(u: &Subspace, k: usize, config: &Config) -> Result<CMat> {
    let s = u.dim();
    let n = u.ambient_dim();
    let small = crate::symalg::sym_basis(s, k, &config.caps)?;
    let rows = n
        .checked_pow(k as u32)
        .ok_or_else(|| Error::Overflow(format!("{n}^{k}")))?;
    config
        .caps
        .ensure(rows, small.len(), "symmetric power of subspace")?;
    let mut out = CMat::zeros(rows, small.len());
    for j in 0..small.len() {
        let mut e = CVec::zeros(small.len());
        e[j] = linalg::cone();
        let mut v = small.inject(&e)?;
        let mut dims = vec![s; k];
        for pos in 0..k {
            let (nv, nd) = linalg::apply_on_positions(&v, &dims, &[pos], u.columns(), &[n]);
            v = nv;
            dims = nd;
        }
        out.set_column(j, &v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedTangled,
    Inconclusive,
}

/// Numerical-rank data backing a certification verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankWitness {
    pub complement_dim: usize,
    pub sym_subspace_dim: usize,
    pub joint_rank: usize,
    pub smallest_singular_value: f64,
    pub sigma_max: f64,
    /// Smallest singular value within a decade of the rank threshold; the
    /// eigen cross-check is mandatory in this regime.
    pub borderline: bool,
}

/// Outcome of the level-`k` certification: the rank test on
/// `[I_k^⊥ | S^k(U)]` together with the equivalent `ν_k < 1` eigen test for
/// cross-validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationResult {
    pub verdict: Verdict,
    pub level: usize,
    pub rank_witness: RankWitness,
    /// `ν_k = λ_max` of the compressed subspace projector.
    pub nu: f64,
    pub nu_empty_complement: bool,
    /// The two routes agreed (always true for returned results; disagreement
    /// raises a diagnostic error instead of a silent verdict).
    pub agreement: bool,
}

fn rank_test(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<RankWitness> {
    let config = cache.config();
    let icb = cache.closed_form(spec, k)?;
    let sym_u = sym_power_basis(u, k, config)?;
    let d1 = icb.dim();
    let d2 = sym_u.ncols();
    let rows = icb.ambient_power_dim();
    config.caps.ensure(rows, d1 + d2, "joint rank test")?;
    let mut joint = CMat::zeros(rows, d1 + d2);
    joint.view_mut((0, 0), (rows, d1)).copy_from(icb.basis());
    joint.view_mut((0, d1), (rows, d2)).copy_from(&sym_u);
    let svals = linalg::singular_values(&joint);
    let sigma_max = svals.first().copied().unwrap_or(0.0);
    let threshold = config.rank_rel_tol * sigma_max;
    let joint_rank = svals.iter().filter(|&&x| x > threshold).count();
    let smallest = svals.last().copied().unwrap_or(0.0);
    let borderline = smallest >= threshold && smallest < 10.0 * threshold;
    Ok(RankWitness {
        complement_dim: d1,
        sym_subspace_dim: d2,
        joint_rank,
        smallest_singular_value: smallest,
        sigma_max,
        borderline,
    })
}

/// Certify that `U` avoids the variety at level `k`: the concatenation
/// `[I_k^⊥ | S^k(U)]` must have full column rank (trivial intersection).
/// The equivalent eigen test (`ν_k < 1`) is always computed; disagreement
/// between the two routes raises a diagnostic error.
pub fn nullstellensatz_certify(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<CertificationResult> {
    check_ambient(u, spec)?;
    let witness = rank_test(u, spec, k, cache)?;
    let rank_certified = witness.joint_rank == witness.complement_dim + witness.sym_subspace_dim;
    let nu = hierarchy::nu_max(&u.projector(), spec, k, cache)?;
    let nu_certified = nu.empty_complement || nu.value < 1.0 - NU_GAP_TOL;
    if rank_certified != nu_certified {
        return Err(Error::Inconsistency(format!(
            "rank test ({}) and eigen test (nu_k = {:.12}) disagree at level {k}{}",
            if rank_certified {
                "certified"
            } else {
                "inconclusive"
            },
            nu.value,
            if witness.borderline {
                " [borderline rank]"
            } else {
                ""
            },
        )));
    }
    Ok(CertificationResult {
        verdict: if rank_certified {
            Verdict::CertifiedTangled
        } else {
            Verdict::Inconclusive
        },
        level: k,
        rank_witness: witness,
        nu: nu.value,
        nu_empty_complement: nu.empty_complement,
        agreement: true,
    })
}

/// Both routes, reported raw without raising on disagreement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub rank_certified: bool,
    pub nu_certified: bool,
    pub agree: bool,
    pub nu: f64,
    pub smallest_singular_value: f64,
}

pub fn equivalence_crosscheck(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<EquivalenceReport> {
    check_ambient(u, spec)?;
    let witness = rank_test(u, spec, k, cache)?;
    let rank_certified = witness.joint_rank == witness.complement_dim + witness.sym_subspace_dim;
    let nu = hierarchy::nu_max(&u.projector(), spec, k, cache)?;
    let nu_certified = nu.empty_complement || nu.value < 1.0 - NU_GAP_TOL;
    Ok(EquivalenceReport {
        rank_certified,
        nu_certified,
        agree: rank_certified == nu_certified,
        nu: nu.value,
        smallest_singular_value: witness.smallest_singular_value,
    })
}

/// `1 - ν_k`: a lower bound on the geometric measure of X-tanglement of
/// `U`, non-decreasing in `k`.
pub fn gm_lower_bound(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<f64> {
    check_ambient(u, spec)?;
    let nu = hierarchy::nu_max(&u.projector(), spec, k, cache)?;
    if nu.empty_complement {
        return Ok(1.0);
    }
    Ok(1.0 - nu.value)
}

/// Build the witness `H = 1 - (1/ν_k) Π_U` from a subspace certified at
/// level `k` (`ν_k < 1`). `H` has exactly `dim U` negative eigenvalues of
/// magnitude `1/ν_k - 1`, and certifies at the same level by construction.
pub fn witness_from_subspace(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<(CMat, WitnessCertificate)> {
    check_ambient(u, spec)?;
    let nu = hierarchy::nu_max(&u.projector(), spec, k, cache)?;
    if !nu.empty_complement && nu.value >= 1.0 - NU_GAP_TOL {
        return Err(Error::UncertifiedLevel { k, nu: nu.value });
    }
    let mu = 1.0 / nu.value;
    let n = u.ambient_dim();
    let h = CMat::identity(n, n) - u.projector() * C64::new(mu, 0.0);
    let cert = hierarchy::witness_certify(&h, spec, k, cache)?;
    Ok((h, cert))
}

/// `sqrt(max(0, gm_lower_bound))`: any state supported on `U` conjugated by
/// `e^{iK}` with trace-norm of `K` below this radius stays X-tangled.
pub fn robustness_radius(
    u: &Subspace,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<f64> {
    Ok(gm_lower_bound(u, spec, k, cache)?.max(0.0).sqrt())
}

/// Range criterion: a state whose image is an X-tangled subspace is
/// X-tangled. Computes `Im(ρ)` at the rank tolerance and delegates to the
/// subspace certifier.
pub fn range_criterion(
    rho: &CMat,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<CertificationResult> {
    let n = spec.ambient_dim()?;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "state side".into(),
            expected: n,
            got: rho.nrows(),
        });
    }
    validate_state(rho)?;
    let (vals, vecs) = linalg::hermitian_eigen(rho)?;
    let lmax = vals.last().copied().unwrap_or(0.0);
    let threshold = cache.config().rank_rel_tol * lmax;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > threshold).collect();
    let mut image = CMat::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        image.set_column(j, &vecs.column(i));
    }
    let u = Subspace::new(image)?;
    nullstellensatz_certify(&u, spec, k, cache)
}

/// PSD to tolerance and unit trace.
pub fn validate_state(rho: &CMat) -> Result<()> {
    linalg::check_hermitian(rho, crate::config::HERMITIAN_TOL)?;
    let (vals, _) = linalg::hermitian_eigen_unchecked(rho)?;
    if vals.first().copied().unwrap_or(0.0) < -1e-8 {
        return Err(Error::MalformedState {
            reason: format!("negative eigenvalue {:.3e}", vals[0]),
        });
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::MalformedState {
            reason: format!("trace {tr} != 1"),
        });
    }
    Ok(())
}

fn check_ambient(u: &Subspace, spec: &VarietySpec) -> Result<()> {
    let n = spec.ambient_dim()?;
    if u.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            context: "subspace ambient dimension".into(),
            expected: n,
            got: u.ambient_dim(),
        });
    }
    Ok(())
}
