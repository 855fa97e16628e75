//! Membership tests for points of the catalog varieties.

use super::{BasisCache, VarietySpec};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, vec_power, CMat, CVec};

/// Decide whether the unit vector `ψ` lies on the variety, to tolerance.
///
/// Bounded-Schmidt-rank varieties (and their multi-cut relatives) are tested
/// directly through singular values: the `(r+1)`-th singular value of every
/// governing flattening must be at most `tol`. The degree-2-generated
/// varieties are tested through the complement of the generating degree:
/// `||Π_{I,d} ψ^{⊗d}|| ≥ 1 − tol` with `d = 2`.
pub fn membership_check(
    spec: &VarietySpec,
    psi: &CVec,
    tol: f64,
    cache: &BasisCache,
) -> Result<bool> {
    spec.validate()?;
    let n = spec.ambient_dim()?;
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            context: "membership input".into(),
            expected: n,
            got: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    match spec {
        VarietySpec::Schmidt { r, dims } => Ok(cut_rank_at_most(psi, dims[0], dims[1], *r, tol)),
        VarietySpec::Mps { r, dims } => {
            let total: usize = dims.iter().product();
            for j in 1..dims.len() {
                let left: usize = dims[..j].iter().product();
                if !cut_rank_at_most(psi, left, total / left, *r, tol) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        VarietySpec::SchmidtSurrogate {
            r,
            dims,
            bipartition,
        } => {
            let (a, b) = spec.surrogate_cut_dims();
            let side: Vec<usize> = bipartition.clone();
            let rest: Vec<usize> = (0..dims.len())
                .filter(|f| !bipartition.contains(f))
                .collect();
            let mut perm = side.clone();
            perm.extend_from_slice(&rest);
            let grouped = crate::linalg::permute_positions(psi, dims, &perm);
            Ok(cut_rank_at_most(&grouped, a, b, *r, tol))
        }
        _ => {
            let d = spec.generating_degree();
            debug_assert_eq!(d, 2);
            let icb = cache.closed_form(spec, d)?;
            let coords = icb.coords(&vec_power(psi, d))?;
            Ok(coords.norm() >= 1.0 - tol)
        }
    }
}

fn cut_rank_at_most(psi: &CVec, n1: usize, n2: usize, r: usize, tol: f64) -> bool {
    if r >= n1.min(n2) {
        return true;
    }
    let m = CMat::from_fn(n1, n2, |i, j| psi[i * n2 + j]);
    let s = singular_values(&m);
    s.get(r).map(|&x| x <= tol).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::linalg::{czero, C64};

    fn cache() -> BasisCache {
        BasisCache::new(Config::default())
    }

    #[test]
    fn singlet_is_not_rank_one() {
        let s = 1.0 / 2.0_f64.sqrt();
        let singlet = CVec::from_vec(vec![czero(), C64::new(s, 0.0), C64::new(-s, 0.0), czero()]);
        let spec = VarietySpec::Schmidt {
            r: 1,
            dims: vec![2, 2],
        };
        assert!(!membership_check(&spec, &singlet, 1e-8, &cache()).unwrap());
    }

    #[test]
    fn product_basis_state_is_separable() {
        let mut e00 = CVec::zeros(4);
        e00[0] = crate::linalg::cone();
        let spec = VarietySpec::Sep { dims: vec![2, 2] };
        assert!(membership_check(&spec, &e00, 1e-8, &cache()).unwrap());
    }

    #[test]
    fn double_wedge_is_fermionically_entangled() {
        // (e0∧e1 + e2∧e3)/√2 in the lexicographic pair basis of Λ²(C⁴):
        // pairs (0,1) and (2,3) are index 0 and 5.
        let s = 1.0 / 2.0_f64.sqrt();
        let mut v = CVec::zeros(6);
        v[0] = C64::new(s, 0.0);
        v[5] = C64::new(s, 0.0);
        let spec = VarietySpec::Fermionic { m: 2, n: 4 };
        assert!(!membership_check(&spec, &v, 1e-6, &cache()).unwrap());
        // A sampled point does pass.
        let p = super::super::sample_point(&spec, 5).unwrap();
        assert!(membership_check(&spec, &p, 1e-6, &cache()).unwrap());
    }

    #[test]
    fn unnormalized_input_rejected() {
        let v = CVec::from_vec(vec![C64::new(2.0, 0.0), czero(), czero(), czero()]);
        let spec = VarietySpec::Sep { dims: vec![2, 2] };
        assert!(matches!(
            membership_check(&spec, &v, 1e-8, &cache()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn sampled_points_pass_membership() {
        let cache = cache();
        let specs = vec![
            VarietySpec::Sep { dims: vec![2, 3] },
            VarietySpec::Bosonic { m: 2, n: 2 },
            VarietySpec::Bisep {
                dims: vec![2, 2, 2],
            },
            VarietySpec::Schmidt {
                r: 2,
                dims: vec![3, 3],
            },
            VarietySpec::Mps {
                r: 2,
                dims: vec![2, 2, 2],
            },
        ];
        for spec in specs {
            for seed in 0..5 {
                let p = super::super::sample_point(&spec, seed).unwrap();
                assert!(
                    membership_check(&spec, &p, 1e-6, &cache).unwrap(),
                    "sample of {} failed membership",
                    spec.name()
                );
            }
        }
    }
}
