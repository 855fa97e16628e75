//! Occupation bases of the symmetric subspace `S^k(C^N) ⊆ (C^N)^{⊗k}`.

use std::collections::HashMap;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};

/// Occupation numbers of a degree-`k` monomial over `N` basis letters.
///
/// The ordering is graded descending-lexicographic on the occupation vector,
/// so for `k = 1` the basis order coincides with `e_1, …, e_N`, and for
/// `N = k = 2` it reads `(2,0), (1,1), (0,2)`. The ordering is total and
/// reproducible across runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    occupations: Vec<u32>,
}

impl MultiIndex {
    pub fn new(occupations: Vec<u32>) -> Self {
        MultiIndex { occupations }
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn degree(&self) -> u32 {
        self.occupations.iter().sum()
    }

    /// Number of distinct arrangements, `k! / ∏ α_i!`.
    pub fn multiplicity(&self) -> u128 {
        let k = self.degree() as u128;
        let mut num: u128 = 1;
        for i in 2..=k {
            num *= i;
        }
        let mut den: u128 = 1;
        for &a in &self.occupations {
            for i in 2..=(a as u128) {
                den *= i;
            }
        }
        num / den
    }
}

/// All occupation vectors of length `n` summing to `k`, in descending
/// lexicographic order.
fn enumerate(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(k);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=k).rev() {
            prefix.push(c);
            rec(n - 1, k - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Occupation basis of `S^k(C^N)`, together with the normalization factors
/// that make the induced map into `(C^N)^{⊗k}` an isometry.
#[derive(Debug, Clone)]
pub struct SymBasis {
    n: usize,
    k: usize,
    indices: Vec<MultiIndex>,
    /// `sqrt(multiplicity)` per index.
    norms: Vec<f64>,
    lookup: HashMap<Vec<u32>, usize>,
}

/// Build the occupation basis of `S^k(C^N)`. The basis size is
/// `C(N+k-1, k)`.
pub fn sym_basis(n: usize, k: usize, caps: &Caps) -> Result<SymBasis> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidSpec(format!(
            "sym_basis requires N, k >= 1, got N={n}, k={k}"
        )));
    }
    let count = super::binomial((n + k - 1) as u64, k as u64)?;
    let count: usize = count
        .try_into()
        .map_err(|_| Error::Overflow(format!("dim S^{k}(C^{n}) does not fit in usize")))?;
    caps.ensure(count, 1, &format!("occupation basis of S^{k}(C^{n})"))?;
    let indices = enumerate(n, k as u32);
    debug_assert_eq!(indices.len(), count);
    let norms: Vec<f64> = indices
        .iter()
        .map(|m| (m.multiplicity() as f64).sqrt())
        .collect();
    let lookup = indices
        .iter()
        .enumerate()
        .map(|(i, m)| (m.occupations().to_vec(), i))
        .collect();
    Ok(SymBasis {
        n,
        k,
        indices,
        norms,
        lookup,
    })
}

impl SymBasis {
    pub fn letters(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, occupations: &[u32]) -> Option<usize> {
        self.lookup.get(occupations).copied()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    /// Visit every tuple `(i_1, …, i_k) ∈ [N]^k` as `(flat index, basis
    /// position of its occupation)`.
    fn for_each_tuple(&self, mut f: impl FnMut(usize, usize)) {
        let n = self.n;
        let k = self.k;
        let mut tuple = vec![0usize; k];
        let mut occ = vec![0u32; n];
        occ[0] = k as u32;
        let total = self.ambient_dim();
        for flat in 0..total {
            let pos = self.lookup[&occ[..]];
            f(flat, pos);
            for d in (0..k).rev() {
                occ[tuple[d]] -= 1;
                tuple[d] += 1;
                if tuple[d] < n {
                    occ[tuple[d]] += 1;
                    break;
                }
                tuple[d] = 0;
                occ[0] += 1;
            }
        }
    }

    /// Isometric injection `S^k(C^N) → (C^N)^{⊗k}` in coordinates.
    pub fn inject(&self, v: &CVec) -> Result<CVec> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "inject_symmetric".into(),
                expected: self.len(),
                got: v.len(),
            });
        }
        let mut out = CVec::zeros(self.ambient_dim());
        self.for_each_tuple(|flat, pos| {
            out[flat] = v[pos] / C64::new(self.norms[pos], 0.0);
        });
        Ok(out)
    }

    /// Adjoint of [`SymBasis::inject`]: orthogonal projection onto `S^k`
    /// followed by the coordinate chart.
    pub fn project(&self, w: &CVec) -> Result<CVec> {
        if w.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "project_symmetric".into(),
                expected: self.ambient_dim(),
                got: w.len(),
            });
        }
        let mut out = CVec::zeros(self.len());
        self.for_each_tuple(|flat, pos| {
            out[pos] += w[flat] / C64::new(self.norms[pos], 0.0);
        });
        Ok(out)
    }

    /// Orthogonal projection of `w ∈ (C^N)^{⊗k}` onto the symmetric
    /// subspace, staying in ambient coordinates.
    pub fn symmetrize(&self, w: &CVec) -> Result<CVec> {
        self.inject(&self.project(w)?)
    }

    /// The injection as an explicit `N^k x C(N+k-1,k)` matrix.
    pub fn injection_matrix(&self, caps: &Caps) -> Result<CMat> {
        caps.ensure(self.ambient_dim(), self.len(), "symmetric injection matrix")?;
        let mut b = CMat::zeros(self.ambient_dim(), self.len());
        self.for_each_tuple(|flat, pos| {
            b[(flat, pos)] = C64::new(1.0 / self.norms[pos], 0.0);
        });
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unit_vector, vec_power, CVec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_counts() {
        let caps = Caps::default();
        assert_eq!(sym_basis(2, 2, &caps).unwrap().len(), 3);
        assert_eq!(sym_basis(4, 2, &caps).unwrap().len(), 10);
        assert_eq!(sym_basis(3, 3, &caps).unwrap().len(), 10);
    }

    #[test]
    fn ordering_is_graded_descending_lex() {
        let caps = Caps::default();
        let b = sym_basis(2, 2, &caps).unwrap();
        let occs: Vec<&[u32]> = b.indices().iter().map(|m| m.occupations()).collect();
        assert_eq!(occs, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        // Degree 1 must reproduce the natural basis order.
        let b1 = sym_basis(3, 1, &caps).unwrap();
        let occs1: Vec<&[u32]> = b1.indices().iter().map(|m| m.occupations()).collect();
        assert_eq!(occs1, vec![&[1, 0, 0][..], &[0, 1, 0], &[0, 0, 1]]);
    }

    #[test]
    fn inject_pure_power() {
        let caps = Caps::default();
        let b = sym_basis(3, 2, &caps).unwrap();
        let mut v = CVec::zeros(b.len());
        let pos = b.position(&[2, 0, 0]).unwrap();
        v[pos] = crate::linalg::cone();
        let w = b.inject(&v).unwrap();
        let e0 = CVec::from_fn(3, |i, _| {
            if i == 0 {
                crate::linalg::cone()
            } else {
                crate::linalg::czero()
            }
        });
        let want = vec_power(&e0, 2);
        assert!((w - want).norm() < 1e-14);
    }

    #[test]
    fn inject_mixed_occupation() {
        let caps = Caps::default();
        let b = sym_basis(2, 2, &caps).unwrap();
        let mut v = CVec::zeros(3);
        v[b.position(&[1, 1]).unwrap()] = crate::linalg::cone();
        let w = b.inject(&v).unwrap();
        // (e0 ⊗ e1 + e1 ⊗ e0)/sqrt(2): flat indices 1 and 2.
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((w[1].re - s).abs() < 1e-15);
        assert!((w[2].re - s).abs() < 1e-15);
        assert!(w[0].norm() < 1e-15 && w[3].norm() < 1e-15);
    }

    #[test]
    fn injection_is_isometry() {
        let caps = Caps::default();
        let b = sym_basis(3, 3, &caps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let v = random_unit_vector(&mut rng, b.len());
            let w = b.inject(&v).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
            let back = b.project(&w).unwrap();
            assert!((back - v).norm() < 1e-12);
        }
    }

    #[test]
    fn injected_vectors_are_permutation_invariant() {
        let caps = Caps::default();
        let b = sym_basis(2, 3, &caps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_unit_vector(&mut rng, b.len());
        let w = b.inject(&v).unwrap();
        let dims = vec![2usize; 3];
        for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let pw = crate::linalg::permute_positions(&w, &dims, &perm);
            assert!((&pw - &w).norm() < 1e-13);
        }
    }
}
