//! Random points of the catalog varieties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{admissible_partitions, VarietySpec};
use crate::config::Caps;
use crate::error::Result;
use crate::linalg::{
    kron_vec, random_gaussian_vector, random_unit_vector, vec_power, CMat, CVec, C64,
};
use crate::symalg::sym_basis;

/// Draw a unit vector `ψ ∈ H` with `ψψ* ∈ X`, from a distribution with full
/// support on the variety (products of Haar-random local vectors, wedge or
/// symmetric powers of Haar vectors, random bounded-rank sums, or a uniform
/// random admissible partition followed by local products).
pub fn sample_point(spec: &VarietySpec, seed: u64) -> Result<CVec> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_point_rng(spec, &mut rng)
}

/// Same as [`sample_point`] but drawing from a caller-owned RNG stream.
pub fn sample_point_rng<R: Rng>(spec: &VarietySpec, rng: &mut R) -> Result<CVec> {
    match spec {
        VarietySpec::Sep { dims } => {
            let mut v = random_unit_vector(rng, dims[0]);
            for &d in &dims[1..] {
                v = kron_vec(&v, &random_unit_vector(rng, d));
            }
            Ok(v)
        }
        VarietySpec::Schmidt { r, dims } => Ok(random_bounded_rank(rng, *r, dims[0], dims[1])),
        VarietySpec::Bosonic { m, n } => {
            let v = random_unit_vector(rng, *n);
            let basis = sym_basis(*n, *m, &Caps::default())?;
            basis.project(&vec_power(&v, *m))
        }
        VarietySpec::Fermionic { m, n } => Ok(random_wedge(rng, *m, *n)),
        VarietySpec::Bisep { dims }
        | VarietySpec::LSep { dims, .. }
        | VarietySpec::TProd { dims, .. } => {
            let parts = admissible_partitions(spec).expect("union-type spec");
            let choice = rng.random_range(0..parts.len());
            Ok(block_product(rng, dims, &parts[choice]))
        }
        VarietySpec::Mps { r, dims } => Ok(random_mps(rng, *r, dims)),
        VarietySpec::SchmidtSurrogate {
            r,
            dims,
            bipartition,
        } => {
            let (a, b) = spec.surrogate_cut_dims();
            let grouped = random_bounded_rank(rng, *r, a, b);
            // Undo the (bipartition side, complement side) grouping.
            let side: Vec<usize> = bipartition.clone();
            let rest: Vec<usize> = (0..dims.len())
                .filter(|f| !bipartition.contains(f))
                .collect();
            let blocks = vec![side, rest];
            Ok(ungroup_blocks(&grouped, dims, &blocks))
        }
    }
}

fn random_bounded_rank<R: Rng>(rng: &mut R, r: usize, n1: usize, n2: usize) -> CVec {
    let mut v = CVec::zeros(n1 * n2);
    for _ in 0..r {
        let a = random_gaussian_vector(rng, n1);
        let b = random_gaussian_vector(rng, n2);
        v += kron_vec(&a, &b);
    }
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Plücker coordinates of `v_1 ∧ … ∧ v_m` for Gaussian `v_i ∈ C^n`, in the
/// lexicographic m-subset basis of `Λ^m(C^n)`, normalized.
fn random_wedge<R: Rng>(rng: &mut R, m: usize, n: usize) -> CVec {
    let vs: Vec<CVec> = (0..m).map(|_| random_gaussian_vector(rng, n)).collect();
    let subsets = crate::varieties::ikperp::subsets_lex(n, m);
    let mut out = CVec::zeros(subsets.len());
    for (idx, s) in subsets.iter().enumerate() {
        let mut sub = CMat::zeros(m, m);
        for (i, &row) in s.iter().enumerate() {
            for (j, v) in vs.iter().enumerate() {
                sub[(i, j)] = v[row];
            }
        }
        out[idx] = sub.determinant();
    }
    let norm = out.norm();
    out / C64::new(norm, 0.0)
}

/// Product of Haar-random block states across the given partition, reordered
/// into the original factor layout.
fn block_product<R: Rng>(rng: &mut R, dims: &[usize], blocks: &[Vec<usize>]) -> CVec {
    let mut grouped: Option<CVec> = None;
    for block in blocks {
        let d: usize = block.iter().map(|&f| dims[f]).product();
        let v = random_unit_vector(rng, d);
        grouped = Some(match grouped {
            None => v,
            Some(g) => kron_vec(&g, &v),
        });
    }
    ungroup_blocks(&grouped.expect("at least one block"), dims, blocks)
}

/// Reinterpret a block-major product vector in the original copy layout: the
/// input layout lists the factors of each block consecutively (factors sorted
/// within blocks); the output layout is factor order `0..m`.
pub(crate) fn ungroup_blocks(v: &CVec, dims: &[usize], blocks: &[Vec<usize>]) -> CVec {
    let mut src_factors: Vec<usize> = Vec::with_capacity(dims.len());
    for block in blocks {
        src_factors.extend_from_slice(block);
    }
    let src_dims: Vec<usize> = src_factors.iter().map(|&f| dims[f]).collect();
    // perm[target position] = source position holding that factor.
    let perm: Vec<usize> = (0..dims.len())
        .map(|f| {
            src_factors
                .iter()
                .position(|&g| g == f)
                .expect("partition covers all factors")
        })
        .collect();
    crate::linalg::permute_positions(v, &src_dims, &perm)
}

fn random_mps<R: Rng>(rng: &mut R, r: usize, dims: &[usize]) -> CVec {
    let m = dims.len();
    let gauss = |rng: &mut R, rows: usize, cols: usize| {
        CMat::from_fn(rows, cols, |_, _| {
            C64::new(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            )
        })
    };
    // Running amplitude matrix: (prefix physical dim) x bond.
    let mut amp = gauss(rng, dims[0], r);
    for &d in &dims[1..m - 1] {
        // Site tensor as a (bond) x (physical * bond) matrix.
        let site = gauss(rng, r, d * r);
        let prev = amp;
        let mut next = CMat::zeros(prev.nrows() * d, r);
        for p in 0..prev.nrows() {
            for i in 0..d {
                for b2 in 0..r {
                    let mut acc = crate::linalg::czero();
                    for b in 0..r {
                        acc += prev[(p, b)] * site[(b, i * r + b2)];
                    }
                    next[(p * d + i, b2)] = acc;
                }
            }
        }
        amp = next;
    }
    let last = gauss(rng, r, dims[m - 1]);
    let full = amp * last;
    let mut v = CVec::zeros(full.nrows() * full.ncols());
    for p in 0..full.nrows() {
        for i in 0..full.ncols() {
            v[p * full.ncols() + i] = full[(p, i)];
        }
    }
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

#[cfg(test)]
pub(crate) fn ungroup_blocks_inverse_for_test(
    v: &CVec,
    dims: &[usize],
    blocks: &[Vec<usize>],
) -> CVec {
    // Regroup a copy-layout vector into block-major layout (test helper,
    // inverse of `ungroup_blocks`).
    let mut perm: Vec<usize> = Vec::with_capacity(dims.len());
    for block in blocks {
        perm.extend_from_slice(block);
    }
    crate::linalg::permute_positions(v, dims, &perm)
}
