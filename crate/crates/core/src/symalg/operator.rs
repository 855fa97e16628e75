//! Dense operators with optional tensor-factor annotation.

use crate::config::HERMITIAN_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// A dense complex operator. The optional factor annotation records a tensor
/// decomposition of the underlying space (the product of the factor
/// dimensions must equal the side length) and is required for partial
/// traces.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    mat: CMat,
    factors: Option<Vec<usize>>,
}

impl DenseOperator {
    pub fn new(mat: CMat) -> Self {
        DenseOperator { mat, factors: None }
    }

    pub fn with_factors(mat: CMat, factors: Vec<usize>) -> Result<Self> {
        let side: usize = factors.iter().product();
        if mat.nrows() != side || mat.ncols() != side {
            return Err(Error::DimensionMismatch {
                context: "factor annotation".into(),
                expected: side,
                got: mat.nrows(),
            });
        }
        Ok(DenseOperator {
            mat,
            factors: Some(factors),
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn factors(&self) -> Option<&[usize]> {
        self.factors.as_deref()
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        linalg::hermitian_deviation(&self.mat) <= HERMITIAN_TOL * (1.0 + linalg::max_abs(&self.mat))
    }

    /// Partial trace over the annotated factors listed in `traced`.
    /// Trace-preserving and positivity-preserving.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DenseOperator> {
        let factors = self
            .factors
            .as_ref()
            .ok_or_else(|| Error::MissingFactors("partial_trace".into()))?;
        for &t in traced {
            if t >= factors.len() {
                return Err(Error::InvalidInput(format!(
                    "traced factor {t} out of range (have {} factors)",
                    factors.len()
                )));
            }
        }
        let mut sorted = traced.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == factors.len() {
            // Full trace: a 1x1 operator.
            let tr = self.mat.trace();
            return Ok(DenseOperator {
                mat: CMat::from_element(1, 1, tr),
                factors: Some(vec![1]),
            });
        }
        let out = linalg::partial_trace_positions(&self.mat, factors, &sorted);
        let kept: Vec<usize> = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| !sorted.contains(i))
            .map(|(_, &d)| d)
            .collect();
        Ok(DenseOperator {
            mat: out,
            factors: Some(kept),
        })
    }
}

/// Extremal eigenpairs of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct EigExtremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub vec_min: CVec,
    pub vec_max: CVec,
}

/// Minimum and maximum eigenvalues with eigenvectors; rejects non-Hermitian
/// input and validates the eigenpair residuals against
/// `EIG_RESIDUAL_TOL * ||A||`.
pub fn eig_extremes(a: &DenseOperator) -> Result<EigExtremes> {
    let m = a.matrix();
    linalg::check_hermitian(m, HERMITIAN_TOL)?;
    let (vals, vecs) = linalg::hermitian_eigen_unchecked(m)?;
    if vals.is_empty() {
        return Err(Error::InvalidInput("empty operator".into()));
    }
    let vec_min = vecs.column(0).clone_owned();
    let vec_max = vecs.column(vals.len() - 1).clone_owned();
    let norm = linalg::max_abs(m).max(1e-300);
    for (lam, v) in [(vals[0], &vec_min), (vals[vals.len() - 1], &vec_max)] {
        let resid = (m * v - v * crate::linalg::C64::new(lam, 0.0)).norm();
        if resid > crate::config::EIG_RESIDUAL_TOL * norm * (a.side() as f64) {
            return Err(Error::Inconsistency(format!(
                "eigenpair residual {resid:.3e} too large"
            )));
        }
    }
    Ok(EigExtremes {
        lambda_min: vals[0],
        lambda_max: vals[vals.len() - 1],
        vec_min,
        vec_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cone, czero, C64};
    use nalgebra::dmatrix;

    #[test]
    fn eig_extremes_examples() {
        let id = DenseOperator::new(CMat::identity(3, 3));
        let e = eig_extremes(&id).unwrap();
        assert!((e.lambda_min - 1.0).abs() < 1e-12 && (e.lambda_max - 1.0).abs() < 1e-12);

        let d = DenseOperator::new(CMat::from_diagonal(&CVec::from_vec(vec![
            C64::new(-1.0, 0.0),
            czero(),
            C64::new(2.0, 0.0),
        ])));
        let e = eig_extremes(&d).unwrap();
        assert!((e.lambda_min + 1.0).abs() < 1e-12 && (e.lambda_max - 2.0).abs() < 1e-12);

        let mut p = CMat::zeros(4, 4);
        p[(2, 2)] = cone();
        let e = eig_extremes(&DenseOperator::new(p)).unwrap();
        assert!(e.lambda_min.abs() < 1e-12 && (e.lambda_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = dmatrix![czero(), cone(); czero(), czero()];
        assert!(eig_extremes(&DenseOperator::new(m)).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        // Full trace of a density operator is the scalar 1.
        let rho = CMat::identity(4, 4) * C64::new(0.25, 0.0);
        let op = DenseOperator::with_factors(rho, vec![2, 2]).unwrap();
        let tr = op.partial_trace(&[0, 1]).unwrap();
        assert!((tr.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);

        // Tr_B(rho_A ⊗ rho_B) = rho_A.
        let a = dmatrix![C64::new(0.7, 0.0), C64::new(0.1, 0.2); C64::new(0.1, -0.2), C64::new(0.3, 0.0)];
        let b = dmatrix![C64::new(0.5, 0.0), czero(); czero(), C64::new(0.5, 0.0)];
        let ab = DenseOperator::with_factors(a.kronecker(&b), vec![2, 2]).unwrap();
        let got = ab.partial_trace(&[1]).unwrap();
        assert!(crate::linalg::max_abs(&(got.matrix() - &a)) < 1e-14);

        // Tr_B of the two-qubit singlet is maximally mixed.
        let s = 1.0 / 2.0_f64.sqrt();
        let singlet = CVec::from_vec(vec![czero(), C64::new(s, 0.0), C64::new(-s, 0.0), czero()]);
        let dens = &singlet * singlet.adjoint();
        let op = DenseOperator::with_factors(dens, vec![2, 2]).unwrap();
        let red = op.partial_trace(&[1]).unwrap();
        let want = CMat::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(crate::linalg::max_abs(&(red.matrix() - want)) < 1e-14);
    }

    #[test]
    fn partial_trace_requires_annotation() {
        let op = DenseOperator::new(CMat::identity(4, 4));
        assert!(matches!(
            op.partial_trace(&[0]),
            Err(Error::MissingFactors(_))
        ));
    }

    #[test]
    fn partial_trace_preserves_positivity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let g = crate::linalg::random_hermitian(&mut rng, 6);
            let psd = &g * g.adjoint();
            let op = DenseOperator::with_factors(psd, vec![2, 3]).unwrap();
            let red = op.partial_trace(&[0]).unwrap();
            let (vals, _) = crate::linalg::hermitian_eigen(red.matrix()).unwrap();
            assert!(vals[0] >= -1e-10);
        }
    }
}
