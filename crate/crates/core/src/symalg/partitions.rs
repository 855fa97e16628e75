//! Integer partitions and exact dimension formulas for unitary-group irreps.
//!
//! Dimensions are computed in exact integer arithmetic (big-integer
//! intermediates, exact division) so they can serve as certificates for the
//! numerically constructed bases.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// A non-increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidSpec(
                "partition parts must be positive".into(),
            ));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(
                "partition parts must be non-increasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    /// Rectangular partition `k^(m)` = (k, …, k) with `m` rows.
    pub fn rectangle(k: u32, m: usize) -> Self {
        Partition { parts: vec![k; m] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Conjugate partition (column lengths of the diagram).
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0) as usize;
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Hook length of the box in row `i`, column `j` (0-indexed).
    fn hook(&self, conj: &Partition, i: usize, j: usize) -> u64 {
        let arm = self.parts[i] as u64 - j as u64 - 1;
        let leg = conj.parts[j] as u64 - i as u64 - 1;
        arm + leg + 1
    }
}

/// All partitions of `k` with at most `max_rows` parts, in descending
/// lexicographic order.
pub fn partitions(k: u32, max_rows: usize) -> Vec<Partition> {
    fn rec(
        remaining: u32,
        largest: u32,
        rows_left: usize,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        if rows_left == 0 {
            return;
        }
        let hi = largest.min(remaining);
        for p in (1..=hi).rev() {
            prefix.push(p);
            rec(remaining - p, p, rows_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && max_rows > 0 {
        rec(k, k, max_rows, &mut Vec::new(), &mut out);
    }
    out
}

fn fit_u128(v: BigUint, what: &str) -> Result<u128> {
    v.to_u128()
        .ok_or_else(|| Error::Overflow(format!("{what} exceeds 128 bits")))
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    fit_u128(num / den, &format!("C({n},{k})"))
}

/// Dimension of the unitary-group irrep of `U(C^n)` labeled by `λ`,
/// by the hook-content product. Zero when the diagram has more than `n`
/// rows.
pub fn schur_dim(lambda: &Partition, n: u64) -> Result<u128> {
    if lambda.rows() as u64 > n {
        return Ok(0);
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..lambda.rows() {
        for j in 0..lambda.parts()[i] as usize {
            // Content j - i can be negative; n + content is positive when
            // the diagram fits in n rows.
            let content = j as i64 - i as i64;
            let factor = (n as i64 + content) as u64;
            num *= BigUint::from(factor);
            den *= BigUint::from(lambda.hook(&conj, i, j));
        }
    }
    fit_u128(num / den, "schur_dim")
}

/// Dimension of the symmetric-group irrep labeled by `λ ⊢ k`, by the hook
/// length formula `k! / ∏ h(x)`.
pub fn sym_group_dim(lambda: &Partition) -> Result<u128> {
    let k = lambda.weight() as u64;
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    for i in 2..=k {
        num *= BigUint::from(i);
    }
    let mut den = BigUint::one();
    for i in 0..lambda.rows() {
        for j in 0..lambda.parts()[i] as usize {
            den *= BigUint::from(lambda.hook(&conj, i, j));
        }
    }
    fit_u128(num / den, "sym_group_dim")
}

/// Dimension of the irrep labeled by the rectangular partition `k^(m)` of
/// `U(C^n)`, by the product formula
/// `∏_{i∈[m], j∈[k]} (n + j - i) / (m - i + k - j + 1)`.
///
/// This is an independent route from [`schur_dim`] applied to
/// [`Partition::rectangle`]; the two must agree.
pub fn rect_schur_dim(k: u32, m: usize, n: u64) -> Result<u128> {
    if m as u64 > n {
        return Err(Error::InvalidSpec(format!(
            "rect_schur_dim requires m <= n, got m={m}, n={n}"
        )));
    }
    if k == 0 {
        return Ok(1);
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=(m as i64) {
        for j in 1..=(k as i64) {
            let top = n as i64 + j - i;
            let bot = m as i64 - i + k as i64 - j + 1;
            debug_assert!(top > 0 && bot > 0);
            num *= BigUint::from(top as u64);
            den *= BigUint::from(bot as u64);
        }
    }
    fit_u128(num / den, "rect_schur_dim")
}
