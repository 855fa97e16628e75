//! Certification toolkit for X-arability of quantum states and subspaces.
//!
//! For an algebraic variety `X` of pure states (product states, bounded
//! Schmidt rank, bosonic/fermionic product states, biseparable, ℓ-separable,
//! t-producible, matrix product states), a mixed state is *X-arable* if it is
//! a convex mixture of pure states in `X`, and *X-tangled* otherwise. A
//! subspace is *X-tangled* if it avoids `X` entirely.
//!
//! The crate implements three complete hierarchies over a shared workhorse
//! object — an orthonormal basis of the degree-`k` ideal-complement space
//! `I_k^⊥ ⊆ S^k(H)`:
//!
//! - [`xtension`]: the level-`k` extension feasibility test for X-arability
//!   of states, with verified feasibility/infeasibility certificates and
//!   closed-form de Finetti distance bounds,
//! - [`hierarchy`]: eigenvalue hierarchies for optimizing Hermitian operators
//!   and Hermitian forms over `X`, with witness certification,
//! - [`subspace`]: the linear-system (Nullstellensatz) hierarchy for
//!   certifying X-tangled subspaces, geometric-measure bounds, witness
//!   construction, and worst-case/generic degree predictors.
//!
//! [`symalg`] provides the symmetric-algebra substrate (occupation bases,
//! projectors, partition combinatorics, irrep dimensions) and [`varieties`]
//! the catalog of supported varieties together with three independent
//! constructions of `I_k^⊥`.

pub mod config;
pub mod error;
pub mod hierarchy;
pub mod json;
pub mod linalg;
pub mod subspace;
pub mod symalg;
pub mod varieties;
pub mod xtension;

pub use config::Config;
pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};
pub use varieties::VarietySpec;
