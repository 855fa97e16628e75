//! Dense complex linear algebra helpers used by every module.
//!
//! Everything here is a thin layer over `nalgebra`: Hermitian
//! eigendecomposition with sorted output, SVD-based numerical rank and span
//! orthonormalization, Kronecker products, and index arithmetic for applying
//! operators to selected tensor positions without materializing the full
//! Kronecker matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

/// Maximum absolute deviation from Hermiticity, `max |A - A†|`.
pub fn hermitian_deviation(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn check_hermitian(a: &CMat, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            context: "hermitian check".into(),
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let dev = hermitian_deviation(a);
    if dev > tol * (1.0 + max_abs(a)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// `(A + A†)/2`.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    check_hermitian(a, crate::config::HERMITIAN_TOL)?;
    hermitian_eigen_unchecked(a)
}

/// Same as [`hermitian_eigen`] but assumes the input is Hermitian
/// (it is symmetrized first, so mild deviations are absorbed).
pub fn hermitian_eigen_unchecked(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let sym = hermitize(a)
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::Inconsistency("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sym.eigenvalues[i].partial_cmp(&sym.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &sym.eigenvectors.column(old));
    }
    Ok((vals, vecs))
}

/// Clip the spectrum of a Hermitian matrix at zero (nearest PSD matrix).
pub fn psd_clip(a: &CMat) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen_unchecked(a)?;
    let n = a.nrows();
    let mut out = CMat::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.0 {
            let col = vecs.column(i);
            out += (col * col.adjoint()) * C64::new(v, 0.0);
        }
    }
    Ok(out)
}

/// Singular values of a matrix, sorted descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank at the given relative threshold.
pub fn numerical_rank(a: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Output of [`span_orthonormalize`]: an orthonormal basis for the column
/// span at the given tolerance plus the singular-value data that justified
/// the rank decision.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    pub basis: CMat,
    pub rank: usize,
    pub sigma_max: f64,
    /// Smallest singular value kept (0 for an empty basis).
    pub smallest_kept: f64,
    /// Largest singular value discarded (0 if nothing was discarded).
    pub largest_dropped: f64,
}

/// Orthonormal basis of the span of the columns, with numerical rank
/// determined by `σ_i > rel_tol * σ_max`.
pub fn span_orthonormalize(cols: &CMat, rel_tol: f64) -> SpanBasis {
    if cols.ncols() == 0 || cols.nrows() == 0 {
        return SpanBasis {
            basis: CMat::zeros(cols.nrows(), 0),
            rank: 0,
            sigma_max: 0.0,
            smallest_kept: 0.0,
            largest_dropped: 0.0,
        };
    }
    let svd = cols.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let sigma_max = pairs.first().map(|p| p.0).unwrap_or(0.0);
    let mut kept = Vec::new();
    let mut largest_dropped = 0.0_f64;
    for &(s, i) in &pairs {
        if sigma_max > 0.0 && s > rel_tol * sigma_max {
            kept.push((s, i));
        } else {
            largest_dropped = largest_dropped.max(s);
        }
    }
    let rank = kept.len();
    let mut basis = CMat::zeros(cols.nrows(), rank);
    for (new, &(_, old)) in kept.iter().enumerate() {
        basis.set_column(new, &u.column(old));
    }
    SpanBasis {
        basis,
        rank,
        sigma_max,
        smallest_kept: kept.last().map(|p| p.0).unwrap_or(0.0),
        largest_dropped,
    }
}

/// Orthonormal basis of the null space of `a` (right singular vectors with
/// `σ ≤ rel_tol * σ_max`).
pub fn null_space(a: &CMat, rel_tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v_t requested");
    let svals = &svd.singular_values;
    let smax = svals.iter().cloned().fold(0.0_f64, f64::max);
    let mut cols: Vec<usize> = Vec::new();
    // v_t has min(nrows, ncols) rows; columns of V beyond that are free.
    for i in 0..vt.nrows() {
        if smax == 0.0 || svals[i] <= rel_tol * smax {
            cols.push(i);
        }
    }
    let extra = n - vt.nrows();
    let mut out = CMat::zeros(n, cols.len() + extra);
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &vt.row(i).adjoint());
    }
    if extra > 0 {
        // Complete V from the orthogonal complement of the V_t rows.
        let mut proj = CMat::identity(n, n) - vt.adjoint() * &vt;
        let comp = span_orthonormalize(&proj, 1e-10);
        for j in 0..extra {
            out.set_column(cols.len() + j, &comp.basis.column(j));
        }
        proj.fill(czero());
    }
    out
}

/// Row-major strides for a tensor position layout (position 0 most
/// significant, matching Kronecker-product flattening).
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        s[p] = s[p + 1] * dims[p + 1];
    }
    s
}

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Enumerate flat offsets contributed by the positions `pos` of a layout:
/// entry `i` of the result is the offset of the `i`-th row-major multi-index
/// over `pos` (in the order given).
fn offset_table(dims: &[usize], layout_strides: &[usize], pos: &[usize]) -> Vec<usize> {
    let sub_dims: Vec<usize> = pos.iter().map(|&p| dims[p]).collect();
    let count = total_dim(&sub_dims);
    let mut offsets = vec![0usize; count];
    let mut idx = vec![0usize; pos.len()];
    for entry in offsets.iter_mut() {
        *entry = idx
            .iter()
            .zip(pos)
            .map(|(&i, &p)| i * layout_strides[p])
            .sum();
        for d in (0..pos.len()).rev() {
            idx[d] += 1;
            if idx[d] < sub_dims[d] {
                break;
            }
            idx[d] = 0;
        }
    }
    offsets
}

/// Apply a linear map `m` to the tensor positions `targets` of `v`.
///
/// `v` lives in the tensor product with per-position dimensions `dims`. The
/// map consumes the positions listed in `targets` (its column index is the
/// row-major multi-index over those positions, in the order given) and
/// replaces them with positions of dimensions `new_target_dims` (row index,
/// same convention). Returns the new vector and its position layout.
pub fn apply_on_positions(
    v: &CVec,
    dims: &[usize],
    targets: &[usize],
    m: &CMat,
    new_target_dims: &[usize],
) -> (CVec, Vec<usize>) {
    let in_tdim: usize = targets.iter().map(|&p| dims[p]).product();
    let out_tdim: usize = total_dim(new_target_dims);
    assert_eq!(m.ncols(), in_tdim, "map input dimension mismatch");
    assert_eq!(m.nrows(), out_tdim, "map output dimension mismatch");
    assert_eq!(v.len(), total_dim(dims), "vector layout mismatch");

    let env: Vec<usize> = (0..dims.len()).filter(|p| !targets.contains(p)).collect();
    let in_strides = strides(dims);
    let t_off = offset_table(dims, &in_strides, targets);
    let e_off = offset_table(dims, &in_strides, &env);

    // Gather into (target x environment), multiply, scatter back.
    let env_dim = e_off.len();
    let mut g = CMat::zeros(in_tdim, env_dim);
    for (ti, &to) in t_off.iter().enumerate() {
        for (ei, &eo) in e_off.iter().enumerate() {
            g[(ti, ei)] = v[to + eo];
        }
    }
    let r = m * g;

    let mut out_dims: Vec<usize> = dims.to_vec();
    // Targets keep their slots; dimensions are replaced pointwise. This only
    // supports one new dimension per consumed position.
    assert_eq!(
        targets.len(),
        new_target_dims.len(),
        "per-position replacement expected"
    );
    for (slot, &p) in targets.iter().enumerate() {
        out_dims[p] = new_target_dims[slot];
    }
    let out_strides = strides(&out_dims);
    let t_off_out = offset_table(&out_dims, &out_strides, targets);
    let e_off_out = offset_table(&out_dims, &out_strides, &env);
    let mut out = CVec::zeros(total_dim(&out_dims));
    for (ti, &to) in t_off_out.iter().enumerate() {
        for (ei, &eo) in e_off_out.iter().enumerate() {
            out[to + eo] = r[(ti, ei)];
        }
    }
    (out, out_dims)
}

/// Reorder tensor positions: `perm[new] = old`, i.e. the component at new
/// position `p` is read from old position `perm[p]`.
pub fn permute_positions(v: &CVec, dims: &[usize], perm: &[usize]) -> CVec {
    let l = dims.len();
    assert_eq!(perm.len(), l);
    let new_dims: Vec<usize> = perm.iter().map(|&q| dims[q]).collect();
    let new_strides = strides(&new_dims);
    // For each old position q, its stride in the output layout.
    let mut out_stride_of_old = vec![0usize; l];
    for (p, &q) in perm.iter().enumerate() {
        out_stride_of_old[q] = new_strides[p];
    }
    let mut out = CVec::zeros(v.len());
    let mut tuple = vec![0usize; l];
    let mut out_flat = 0usize;
    for i in 0..v.len() {
        out[out_flat] = v[i];
        // Mixed-radix increment of the old-layout tuple, maintaining out_flat.
        for d in (0..l).rev() {
            tuple[d] += 1;
            out_flat += out_stride_of_old[d];
            if tuple[d] < dims[d] {
                break;
            }
            out_flat -= tuple[d] * out_stride_of_old[d];
            tuple[d] = 0;
        }
    }
    out
}

/// Partial trace of a square matrix over the tensor positions `traced`.
pub fn partial_trace_positions(a: &CMat, dims: &[usize], traced: &[usize]) -> CMat {
    let n = total_dim(dims);
    assert_eq!(a.nrows(), n);
    assert_eq!(a.ncols(), n);
    let kept: Vec<usize> = (0..dims.len()).filter(|p| !traced.contains(p)).collect();
    let st = strides(dims);
    let k_off = offset_table(dims, &st, &kept);
    let t_off = offset_table(dims, &st, traced);
    let m = k_off.len();
    let mut out = CMat::zeros(m, m);
    for (i, &io) in k_off.iter().enumerate() {
        for (j, &jo) in k_off.iter().enumerate() {
            let mut acc = czero();
            for &to in &t_off {
                acc += a[(io + to, jo + to)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Kronecker product of vectors (position 0 most significant).
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// `k`-fold tensor power of a vector.
pub fn vec_power(v: &CVec, k: usize) -> CVec {
    assert!(k >= 1);
    let mut out = v.clone();
    for _ in 1..k {
        out = kron_vec(&out, v);
    }
    out
}

/// Standard complex Gaussian vector, normalized to unit length.
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    loop {
        let v = random_gaussian_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-12 {
            return v / C64::new(norm, 0.0);
        }
    }
}

pub fn random_gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix with independent Gaussian entries (GUE-like,
/// unnormalized).
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    hermitize(&g)
}

/// `s` Haar-random orthonormal columns in dimension `n`.
pub fn haar_columns<R: Rng>(rng: &mut R, n: usize, s: usize) -> CMat {
    assert!(s <= n);
    let g = CMat::from_fn(n, s, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix phases so the distribution is Haar.
    let mut out = q.clone();
    for j in 0..s {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / C64::new(d.norm(), 0.0);
            for i in 0..n {
                out[(i, j)] *= phase;
            }
        }
    }
    out
}
