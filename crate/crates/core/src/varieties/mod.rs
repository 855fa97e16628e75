//! Catalog of supported varieties `X ⊆ P(H)` and the constructions of the
//! degree-`k` ideal-complement spaces `I_k^⊥ = span{ψ^{⊗k} : ψψ* ∈ X}`.
//!
//! Three independent routes are provided: closed-form projector composition
//! ([`ikperp_closed_form`]), generator multiplication followed by a kernel
//! computation ([`ideal_component_from_generators`]), and the orthonormalized
//! span of sampled `ψ^{⊗k}` ([`ikperp_sampling`]). Where an exact dimension
//! formula exists it is attached to the basis as a certificate.

mod cache;
mod ikperp;
mod membership;
mod sample;

pub use cache::BasisCache;
pub use ikperp::{
    ideal_component_from_generators, ikperp_closed_form, ikperp_sampling, minor_generators,
    GeneratorIdeal, IdealComplementBasis, Route,
};
pub use membership::membership_check;
pub use sample::{sample_point, sample_point_rng};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symalg::binomial;

/// Tagged description of which variety is in play.
///
/// Serialized with a `"variety"` tag; see the CLI documentation for the
/// exact JSON field names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variety", deny_unknown_fields)]
pub enum VarietySpec {
    /// Product states on `H_1 ⊗ … ⊗ H_m`.
    #[serde(rename = "sep")]
    Sep { dims: Vec<usize> },
    /// Bipartite states of Schmidt rank at most `r` on `C^{n1} ⊗ C^{n2}`.
    #[serde(rename = "schmidt")]
    Schmidt { r: usize, dims: Vec<usize> },
    /// Bosonic product states `ψ^{⊗m}` on `S^m(C^n)`.
    #[serde(rename = "bosonic")]
    Bosonic { m: usize, n: usize },
    /// Fermionic product states `ψ_1 ∧ … ∧ ψ_m` on `Λ^m(C^n)`.
    #[serde(rename = "fermionic")]
    Fermionic { m: usize, n: usize },
    /// Biseparable states: product across at least one bipartition.
    #[serde(rename = "bisep")]
    Bisep { dims: Vec<usize> },
    /// ℓ-separable states: product across some partition into exactly `l`
    /// blocks.
    #[serde(rename = "lsep")]
    LSep { l: usize, dims: Vec<usize> },
    /// t-producible states: product across some partition with every block
    /// of size at most `t`.
    #[serde(rename = "tprod")]
    TProd { t: usize, dims: Vec<usize> },
    /// Matrix product states of bond dimension at most `r`.
    #[serde(rename = "mps")]
    Mps { r: usize, dims: Vec<usize> },
    /// Schmidt-rank upper-approximation of a tensor-network variety across
    /// one chosen bipartition (`bipartition` lists the factor indices on one
    /// side). Certifying against the surrogate proves X-tanglement for the
    /// contained network variety, but cannot certify every such subspace.
    #[serde(rename = "schmidt_surrogate")]
    SchmidtSurrogate {
        r: usize,
        dims: Vec<usize>,
        bipartition: Vec<usize>,
    },
}

impl VarietySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            VarietySpec::Sep { dims } => {
                if dims.is_empty() || dims.contains(&0) {
                    return bad(format!("sep requires non-empty dims >= 1, got {dims:?}"));
                }
            }
            VarietySpec::Schmidt { r, dims } => {
                if dims.len() != 2 || dims.contains(&0) {
                    return bad(format!(
                        "schmidt requires exactly two dims >= 1, got {dims:?}"
                    ));
                }
                let min = dims[0].min(dims[1]);
                if *r < 1 || *r > min {
                    return bad(format!(
                        "schmidt requires 1 <= r <= min(dims) = {min}, got r={r}"
                    ));
                }
            }
            VarietySpec::Bosonic { m, n } => {
                if *m < 1 || *n < 1 {
                    return bad(format!("bosonic requires m, n >= 1, got m={m}, n={n}"));
                }
            }
            VarietySpec::Fermionic { m, n } => {
                if *m < 1 || *n < 1 || m > n {
                    return bad(format!("fermionic requires 1 <= m <= n, got m={m}, n={n}"));
                }
            }
            VarietySpec::Bisep { dims } => {
                if dims.len() < 2 || dims.contains(&0) {
                    return bad(format!(
                        "bisep requires at least two dims >= 1, got {dims:?}"
                    ));
                }
            }
            VarietySpec::LSep { l, dims } => {
                if dims.len() < 2 || dims.contains(&0) {
                    return bad(format!(
                        "lsep requires at least two dims >= 1, got {dims:?}"
                    ));
                }
                if *l < 2 || *l > dims.len() {
                    return bad(format!(
                        "lsep requires 2 <= l <= m = {}, got l={l}",
                        dims.len()
                    ));
                }
            }
            VarietySpec::TProd { t, dims } => {
                if dims.len() < 2 || dims.contains(&0) {
                    return bad(format!(
                        "tprod requires at least two dims >= 1, got {dims:?}"
                    ));
                }
                if *t < 1 || *t > dims.len() {
                    return bad(format!(
                        "tprod requires 1 <= t <= m = {}, got t={t}",
                        dims.len()
                    ));
                }
            }
            VarietySpec::Mps { r, dims } => {
                if dims.len() < 2 || dims.contains(&0) {
                    return bad(format!("mps requires at least two dims >= 1, got {dims:?}"));
                }
                if *r < 1 {
                    return bad("mps requires r >= 1".into());
                }
            }
            VarietySpec::SchmidtSurrogate {
                r,
                dims,
                bipartition,
            } => {
                if dims.len() < 2 || dims.contains(&0) {
                    return bad(format!(
                        "schmidt_surrogate requires at least two dims >= 1, got {dims:?}"
                    ));
                }
                if bipartition.is_empty() || bipartition.len() >= dims.len() {
                    return bad(
                        "schmidt_surrogate bipartition must be a nonempty proper subset".into(),
                    );
                }
                let mut seen = vec![false; dims.len()];
                for &f in bipartition {
                    if f >= dims.len() || seen[f] {
                        return bad(format!(
                            "schmidt_surrogate bipartition has invalid factor {f}"
                        ));
                    }
                    seen[f] = true;
                }
                let (a, b) = self.surrogate_cut_dims();
                if *r < 1 || *r > a.min(b) {
                    return bad(format!(
                        "schmidt_surrogate requires 1 <= r <= min cut dim, got r={r}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the ambient Hilbert space `H`.
    pub fn ambient_dim(&self) -> Result<usize> {
        self.validate()?;
        let fit = |v: u128| -> Result<usize> {
            v.try_into()
                .map_err(|_| Error::Overflow("ambient dimension".into()))
        };
        match self {
            VarietySpec::Sep { dims }
            | VarietySpec::Bisep { dims }
            | VarietySpec::LSep { dims, .. }
            | VarietySpec::TProd { dims, .. }
            | VarietySpec::Mps { dims, .. }
            | VarietySpec::Schmidt { dims, .. }
            | VarietySpec::SchmidtSurrogate { dims, .. } => Ok(dims.iter().product()),
            VarietySpec::Bosonic { m, n } => fit(binomial((*n + *m - 1) as u64, *m as u64)?),
            VarietySpec::Fermionic { m, n } => fit(binomial(*n as u64, *m as u64)?),
        }
    }

    /// Degree in which the ideal used for this variety is generated: 2 for
    /// the product-state family (bipartite rank-one conditions and
    /// Grassmannian quadrics), `r + 1` for the bounded-Schmidt-rank family.
    pub fn generating_degree(&self) -> usize {
        match self {
            VarietySpec::Sep { .. }
            | VarietySpec::Bosonic { .. }
            | VarietySpec::Fermionic { .. }
            | VarietySpec::Bisep { .. }
            | VarietySpec::LSep { .. }
            | VarietySpec::TProd { .. } => 2,
            VarietySpec::Schmidt { r, .. }
            | VarietySpec::Mps { r, .. }
            | VarietySpec::SchmidtSurrogate { r, .. } => r + 1,
        }
    }

    /// Exact dimension of `I_k^⊥` where a formula exists.
    pub fn predicted_ikperp_dim(&self, k: usize) -> Result<Option<u128>> {
        self.validate()?;
        let v = match self {
            VarietySpec::Sep { dims } => {
                let mut prod: u128 = 1;
                for &n in dims {
                    prod = prod
                        .checked_mul(binomial((n + k - 1) as u64, k as u64)?)
                        .ok_or_else(|| Error::Overflow("sep complement dimension".into()))?;
                }
                Some(prod)
            }
            VarietySpec::Bosonic { m, n } => {
                Some(binomial((*n + k * *m - 1) as u64, (k * *m) as u64)?)
            }
            VarietySpec::Fermionic { m, n } => {
                Some(crate::symalg::rect_schur_dim(k as u32, *m, *n as u64)?)
            }
            VarietySpec::Schmidt { r, dims } => {
                Some(schmidt_complement_dim(*r, dims[0], dims[1], k)?)
            }
            VarietySpec::SchmidtSurrogate { r, .. } => {
                let (a, b) = self.surrogate_cut_dims();
                Some(schmidt_complement_dim(*r, a, b, k)?)
            }
            _ => None,
        };
        Ok(v)
    }

    /// For the surrogate: the two grouped cut dimensions (bipartition side,
    /// complement side).
    pub fn surrogate_cut_dims(&self) -> (usize, usize) {
        match self {
            VarietySpec::SchmidtSurrogate {
                dims, bipartition, ..
            } => {
                let a: usize = bipartition.iter().map(|&f| dims[f]).product();
                let b: usize = dims
                    .iter()
                    .enumerate()
                    .filter(|(f, _)| !bipartition.contains(f))
                    .map(|(_, &d)| d)
                    .product();
                (a, b)
            }
            _ => unreachable!("surrogate_cut_dims on non-surrogate spec"),
        }
    }

    /// Short human-readable tag for error messages and reports.
    pub fn name(&self) -> String {
        match self {
            VarietySpec::Sep { dims } => format!("sep{dims:?}"),
            VarietySpec::Schmidt { r, dims } => format!("schmidt(r={r}){dims:?}"),
            VarietySpec::Bosonic { m, n } => format!("bosonic(m={m},n={n})"),
            VarietySpec::Fermionic { m, n } => format!("fermionic(m={m},n={n})"),
            VarietySpec::Bisep { dims } => format!("bisep{dims:?}"),
            VarietySpec::LSep { l, dims } => format!("lsep(l={l}){dims:?}"),
            VarietySpec::TProd { t, dims } => format!("tprod(t={t}){dims:?}"),
            VarietySpec::Mps { r, dims } => format!("mps(r={r}){dims:?}"),
            VarietySpec::SchmidtSurrogate {
                r,
                dims,
                bipartition,
            } => {
                format!("schmidt_surrogate(r={r},cut={bipartition:?}){dims:?}")
            }
        }
    }
}

/// `dim I(X_r)_k^⊥ = Σ_{λ ⊢ k, ℓ(λ) ≤ r} dim S^λ(C^{n1}) · dim S^λ(C^{n2})`.
pub fn schmidt_complement_dim(r: usize, n1: usize, n2: usize, k: usize) -> Result<u128> {
    let mut total: u128 = 0;
    for lambda in crate::symalg::partitions(k as u32, r) {
        let d1 = crate::symalg::schur_dim(&lambda, n1 as u64)?;
        let d2 = crate::symalg::schur_dim(&lambda, n2 as u64)?;
        total = total
            .checked_add(
                d1.checked_mul(d2)
                    .ok_or_else(|| Error::Overflow("schmidt dim".into()))?,
            )
            .ok_or_else(|| Error::Overflow("schmidt dim".into()))?;
    }
    Ok(total)
}

/// All set partitions of `0..m`, canonical form: blocks sorted by least
/// element, elements sorted within blocks. Generated via restricted growth
/// strings, so the order is deterministic.
pub(crate) fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(m: usize, i: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            let blocks = max + 1;
            let mut part = vec![Vec::new(); blocks];
            for (el, &b) in rgs.iter().enumerate() {
                part[b].push(el);
            }
            out.push(part);
            return;
        }
        for b in 0..=max + 1 {
            rgs.push(b);
            rec(m, i + 1, rgs, max.max(b), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        let mut rgs = vec![0usize];
        rec(m, 1, &mut rgs, 0, &mut out);
    }
    out
}

/// The admissible partitions over which a union-type variety sums: all
/// proper bipartitions for `Bisep`, partitions into exactly `l` blocks for
/// `LSep`, partitions with all blocks of size at most `t` for `TProd`.
pub(crate) fn admissible_partitions(spec: &VarietySpec) -> Option<Vec<Vec<Vec<usize>>>> {
    match spec {
        VarietySpec::Bisep { dims } => Some(
            set_partitions(dims.len())
                .into_iter()
                .filter(|p| p.len() == 2)
                .collect(),
        ),
        VarietySpec::LSep { l, dims } => Some(
            set_partitions(dims.len())
                .into_iter()
                .filter(|p| p.len() == *l)
                .collect(),
        ),
        VarietySpec::TProd { t, dims } => Some(
            set_partitions(dims.len())
                .into_iter()
                .filter(|p| p.iter().all(|b| b.len() <= *t))
                .collect(),
        ),
        _ => None,
    }
}
