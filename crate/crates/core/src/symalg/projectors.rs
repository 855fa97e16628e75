//! Antisymmetric projectors and tensor-position reshuffles.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{permute_positions, CMat, CVec, C64};

/// Visit every permutation of `0..k` together with its sign, via Heap's
/// algorithm.
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize], i32)) {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1i32;
    f(&perm, sign);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            f(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Orthogonal projector onto the antisymmetric subspace `Λ^k(C^n)` inside
/// `(C^n)^{⊗k}`, as a dense `n^k x n^k` matrix. The zero operator when
/// `k > n`.
pub fn antisym_projector(n: usize, k: usize, caps: &Caps) -> Result<CMat> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidSpec(format!(
            "antisym_projector requires n, k >= 1, got n={n}, k={k}"
        )));
    }
    let side = n
        .checked_pow(k as u32)
        .ok_or_else(|| Error::Overflow(format!("{n}^{k} overflows usize")))?;
    caps.ensure(
        side,
        side,
        &format!("antisymmetric projector on (C^{n})^⊗{k}"),
    )?;
    let mut proj = CMat::zeros(side, side);
    if k > n {
        return Ok(proj);
    }
    let strides = crate::linalg::strides(&vec![n; k]);
    let mut tuple = vec![0usize; k];
    let weight = 1.0 / factorial(k);
    for col in 0..side {
        // Columns with repeated letters are annihilated.
        let distinct = {
            let mut seen = vec![false; n];
            tuple.iter().all(|&t| {
                if seen[t] {
                    false
                } else {
                    seen[t] = true;
                    true
                }
            })
        };
        if distinct {
            for_each_permutation(k, |perm, sign| {
                let row: usize = (0..k).map(|p| tuple[perm[p]] * strides[p]).sum();
                proj[(row, col)] += C64::new(sign as f64 * weight, 0.0);
            });
        }
        for d in (0..k).rev() {
            tuple[d] += 1;
            if tuple[d] < n {
                break;
            }
            tuple[d] = 0;
        }
    }
    Ok(proj)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// A relabeling of tensor positions together with the position dimensions it
/// acts on. Produced by [`reshuffle`]; apply with
/// [`PositionPermutation::apply`] and undo with the [`inverse`].
///
/// [`inverse`]: PositionPermutation::inverse
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionPermutation {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// Dimensions in the *source* layout.
    dims: Vec<usize>,
}

impl PositionPermutation {
    pub fn new(perm: Vec<usize>, dims: Vec<usize>) -> Result<Self> {
        if perm.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                context: "position permutation".into(),
                expected: dims.len(),
                got: perm.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidInput("not a permutation of positions".into()));
            }
            seen[p] = true;
        }
        Ok(PositionPermutation { perm, dims })
    }

    pub fn positions(&self) -> &[usize] {
        &self.perm
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.perm.iter().map(|&q| self.dims[q]).collect()
    }

    pub fn apply(&self, v: &CVec) -> Result<CVec> {
        if v.len() != crate::linalg::total_dim(&self.dims) {
            return Err(Error::DimensionMismatch {
                context: "position permutation apply".into(),
                expected: crate::linalg::total_dim(&self.dims),
                got: v.len(),
            });
        }
        Ok(permute_positions(v, &self.dims, &self.perm))
    }

    pub fn inverse(&self) -> PositionPermutation {
        let mut inv = vec![0usize; self.perm.len()];
        for (new, &old) in self.perm.iter().enumerate() {
            inv[old] = new;
        }
        PositionPermutation {
            perm: inv,
            dims: self.target_dims(),
        }
    }
}

/// The copy-major → factor-major reshuffle realizing
/// `H^{⊗k} ≅ H_1^{⊗k} ⊗ … ⊗ H_m^{⊗k}` for `H = H_1 ⊗ … ⊗ H_m`.
///
/// Source layout: position `(copy j, factor i)` at index `j*m + i` with
/// dimension `dims[i]`. Target layout: position `(factor i, copy j)` at
/// index `i*k + j`.
pub fn reshuffle(dims: &[usize], k: usize) -> Result<PositionPermutation> {
    let m = dims.len();
    if m == 0 || k == 0 {
        return Err(Error::InvalidSpec("reshuffle requires m, k >= 1".into()));
    }
    let mut source_dims = Vec::with_capacity(m * k);
    for _ in 0..k {
        source_dims.extend_from_slice(dims);
    }
    let mut perm = Vec::with_capacity(m * k);
    for i in 0..m {
        for j in 0..k {
            perm.push(j * m + i);
        }
    }
    PositionPermutation::new(perm, source_dims)
}
