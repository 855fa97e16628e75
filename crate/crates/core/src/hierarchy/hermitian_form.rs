//! The Hermitian-form hierarchy: minimize a degree-`(d,d)` Hermitian form
//! over the variety through compressed eigencomputations, plus the
//! constructive decomposition that realizes a nonnegative level as a
//! difference `P - Q` of PSD blocks with `Q` supported on the ideal
//! coordinates.

use serde::{Deserialize, Serialize};

use super::{compress_form, Nu};
use crate::config::WITNESS_PSD_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, apply_on_positions, CMat, C64};
use crate::varieties::{BasisCache, VarietySpec};

/// `ν_k = λ_min(Π_{I,k} H_k Π_{I,k})` for the Hermitian form `Hform` given
/// on `S^d(H)` coordinates, where `H_k` multiplies the form by the
/// `(k-d)`-th power of the norm squared. Non-decreasing in `k`. For `d = 1`
/// this reduces exactly to `nu_min` (same compressed matrix).
pub fn hermitian_form_level(
    hform: &CMat,
    d: usize,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<Nu> {
    let c = compress_form(hform, d, spec, k, cache)?;
    if c.nrows() == 0 {
        return Ok(Nu {
            value: f64::INFINITY,
            empty_complement: true,
        });
    }
    let (vals, _) = linalg::hermitian_eigen_unchecked(&c)?;
    Ok(Nu {
        value: vals[0],
        empty_complement: false,
    })
}

/// A decomposition `H_k = P - Q` on `S^k(H)` coordinates with both blocks
/// PSD and `Im(Q)` inside the coordinate image of `I_k` (orthogonal to
/// `I_k^⊥` under the pairing).
#[derive(Debug, Clone)]
pub struct HsosDecomposition {
    pub p: CMat,
    pub q: CMat,
    /// `||H_k - (P - Q)||` (max-abs).
    pub residual: f64,
    pub level_value: f64,
}

/// Outcome of [`hsos_decompose`]: the decomposition, or a failure flag when
/// the level value is negative (no decomposition exists at this level).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum HsosOutcome {
    Decomposed {
        residual: f64,
        level_value: f64,
        p_min_eigenvalue: f64,
        q_min_eigenvalue: f64,
    },
    NegativeLevel {
        level_value: f64,
    },
}

/// Construct the decomposition from the eigenstructure split along `I_k^⊥`
/// versus its orthocomplement inside `S^k(H)`.
///
/// With `M` the form operator on `S^k` coordinates and blocks
/// `A = Π_c M Π_c`, `X = Π_c M Π_o`, `B = Π_o M Π_o` (c = complement
/// coordinates, o = ideal coordinates), the choice
/// `Q = Π_o clip(X†A⁺X - B) Π_o` makes `P = M + Q` PSD whenever the
/// compressed block `A` is PSD and the cross block is compatible with its
/// column space.
pub fn hsos_decompose(
    hform: &CMat,
    d: usize,
    spec: &VarietySpec,
    k: usize,
    cache: &BasisCache,
) -> Result<(HsosOutcome, Option<HsosDecomposition>)> {
    let n = spec.ambient_dim()?;
    let config = cache.config();
    let level = hermitian_form_level(hform, d, spec, k, cache)?;
    if !level.empty_complement && level.value < -WITNESS_PSD_TOL {
        return Ok((
            HsosOutcome::NegativeLevel {
                level_value: level.value,
            },
            None,
        ));
    }

    // The form operator on S^k coordinates.
    let sym_k = crate::symalg::sym_basis(n, k, &config.caps)?;
    let bs = sym_k.injection_matrix(&config.caps)?;
    let lifted = if d == 1 {
        hform.clone()
    } else {
        let sym_d = crate::symalg::sym_basis(n, d, &config.caps)?;
        let side = n.pow(d as u32);
        config.caps.ensure(side, side, "lifted Hermitian form")?;
        let inj = sym_d.injection_matrix(&config.caps)?;
        (&inj * hform) * inj.adjoint()
    };
    let op_side = lifted.nrows();
    let mut dims = vec![op_side];
    dims.extend(std::iter::repeat_n(n, k - d));
    let ds = sym_k.len();
    let mut applied = CMat::zeros(bs.nrows(), ds);
    for j in 0..ds {
        let col = bs.column(j).clone_owned();
        let (w, _) = apply_on_positions(&col, &dims, &[0], &lifted, &[op_side]);
        applied.set_column(j, &w);
    }
    let m = linalg::hermitize(&(bs.adjoint() * applied));

    let (mvals, _) = linalg::hermitian_eigen_unchecked(&m)?;
    if mvals[0] >= -WITNESS_PSD_TOL {
        // Already PSD: (H_k, 0).
        let dec = HsosDecomposition {
            p: m.clone(),
            q: CMat::zeros(ds, ds),
            residual: 0.0,
            level_value: level.value,
        };
        let outcome = HsosOutcome::Decomposed {
            residual: 0.0,
            level_value: level.value,
            p_min_eigenvalue: mvals[0],
            q_min_eigenvalue: 0.0,
        };
        return Ok((outcome, Some(dec)));
    }

    // Split basis: complement coordinates in S^k, then their
    // orthocomplement.
    let icb = cache.closed_form(spec, k)?;
    let c = bs.adjoint() * icb.basis();
    let c_o = linalg::null_space(&c.adjoint(), config.rank_rel_tol);
    let a = linalg::hermitize(&(c.adjoint() * &m * &c));
    let x = c.adjoint() * &m * &c_o;
    let b = linalg::hermitize(&(c_o.adjoint() * &m * &c_o));

    // Pseudo-inverse of A at a spectral threshold.
    let (avals, avecs) = linalg::hermitian_eigen_unchecked(&a)?;
    let amax = avals.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let thresh = (1e-9 * amax).max(1e-14);
    let mut a_pinv = CMat::zeros(a.nrows(), a.ncols());
    for (i, &v) in avals.iter().enumerate() {
        if v > thresh {
            let col = avecs.column(i);
            a_pinv += (col * col.adjoint()) * C64::new(1.0 / v, 0.0);
        }
    }
    // Cross-block compatibility: X must live in the column space of A.
    let incompat = linalg::max_abs(&(&x - &a * (&a_pinv * &x)));
    let scale = linalg::max_abs(&m).max(1.0);
    if incompat > 1e-7 * scale {
        return Err(Error::Inconsistency(format!(
            "hsos split: cross block escapes the compressed column space ({incompat:.3e})"
        )));
    }

    let t0 = linalg::hermitize(&(x.adjoint() * &a_pinv * &x - &b));
    let t = linalg::psd_clip(&t0)?;
    let q = &c_o * &t * c_o.adjoint();
    let p = &m + &q;
    let residual = linalg::max_abs(&(&m - (&p - &q)));
    let (pvals, _) = linalg::hermitian_eigen_unchecked(&p)?;
    let (qvals, _) = linalg::hermitian_eigen_unchecked(&q)?;
    if pvals[0] < -WITNESS_PSD_TOL || qvals[0] < -WITNESS_PSD_TOL {
        return Err(Error::Inconsistency(format!(
            "hsos split produced an indefinite block (min eigs {:.3e}, {:.3e})",
            pvals[0], qvals[0]
        )));
    }
    let outcome = HsosOutcome::Decomposed {
        residual,
        level_value: level.value,
        p_min_eigenvalue: pvals[0],
        q_min_eigenvalue: qvals[0],
    };
    Ok((
        outcome,
        Some(HsosDecomposition {
            p,
            q,
            residual,
            level_value: level.value,
        }),
    ))
}
