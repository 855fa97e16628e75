//! Symmetric-algebra and linear-algebra substrate: occupation bases of
//! `S^k(H)`, symmetric/antisymmetric projectors, factor reshuffles, partition
//! enumeration, and irrep dimension formulas.

mod multi_index;
mod operator;
mod partitions;
mod projectors;

pub use multi_index::{sym_basis, MultiIndex, SymBasis};
pub use operator::{eig_extremes, DenseOperator, EigExtremes};
pub use partitions::{binomial, partitions, rect_schur_dim, schur_dim, sym_group_dim, Partition};
pub use projectors::{antisym_projector, for_each_permutation, reshuffle, PositionPermutation};
