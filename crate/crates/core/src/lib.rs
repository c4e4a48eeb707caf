//! Certifying the dimension of classical and quantum systems from
//! prepare-and-measure statistics with independent devices.
//!
//! Given the observed table `p(b=0|x,y)` of a two-device experiment — one
//! box prepares a system on input `x`, the other measures it on input `y`
//! and outputs a bit — the determinant witness
//!
//! ```text
//! W_k = |det W|,   W(i,j) = p(2j, i) - p(2j+1, i)
//! ```
//!
//! lower-bounds the dimension of the communicated system, provided the
//! devices share no randomness: classical systems of dimension `d <= k`
//! and quantum systems of dimension `d <= sqrt(k)` force `W_k = 0`. The
//! witness is unaffected by preparation-independent noise up to an overall
//! `eta^k` factor, and a nonzero `W_2` certifies outcome randomness.
//!
//! The crate provides:
//!
//! - [`linalg`]: Hermitian matrices, Gell-Mann bases, determinants and the
//!   generalised cross product.
//! - [`scenario`]: behaviors, quantum and classical strategies, noise.
//! - [`witness`]: the witness matrix, its value, and relabeling scans.
//! - [`constructions`]: BB84, mutually unbiased bases, and the named
//!   classical strategies.
//! - [`optimize`]: see-saw and brute-force maximisation of the witness,
//!   and constrained maximisation of the guessing probability.
//! - [`analysis`]: min-entropy, the randomness curve, and the classical
//!   bit-decomposition finder.
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! the `*64` aliases below fix `f64`, which every documented tolerance
//! assumes.

// Index-based loops are the clearer idiom for the matrix code here, where
// one index addresses several tables at once.
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod scalar;
pub mod scenario;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the main public types.
pub type Behavior64 = scenario::Behavior<f64>;
pub type QuantumStrategy64 = scenario::QuantumStrategy<f64>;
pub type ClassicalStrategy64 = scenario::ClassicalStrategy<f64>;
pub type HermitianMatrix64 = linalg::HermitianMatrix<f64>;
pub type GellMannBasis64 = linalg::GellMannBasis<f64>;
pub type RealVector64 = linalg::RealVector<f64>;
pub type WitnessReport64 = witness::WitnessReport<f64>;
pub type RandomnessPoint64 = analysis::RandomnessPoint<f64>;
pub type RandomnessCurve64 = analysis::RandomnessCurve<f64>;
pub type DecompositionResult64 = analysis::DecompositionResult<f64>;
