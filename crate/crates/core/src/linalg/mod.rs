//! Small dense linear algebra: Hermitian matrices, eigendecompositions,
//! Gell-Mann bases, determinants and the generalised cross product.
//!
//! Everything here targets dimensions up to 16; no attempt is made at
//! cache-blocked or sparse algorithms.

mod eigen;
mod gellmann;
mod hermitian;
mod real;

pub use eigen::{jacobi_eigh, EigenDecomposition};
pub use gellmann::{gellmann_basis, GellMannBasis};
pub use hermitian::{is_psd, HermitianMatrix};
pub use real::{cross_product, determinant, RealVector};
