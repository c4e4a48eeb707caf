//! Dense Hermitian matrices of small dimension.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigen::{jacobi_eigh, EigenDecomposition};
use crate::scalar::{c_re, c_zero, Scalar, C};

/// A `dim x dim` complex Hermitian matrix, stored row-major.
///
/// Construction symmetrises the entries (`(A + A^dag)/2`) after verifying
/// they are Hermitian within [`Scalar::tight_tol`], so downstream code can
/// rely on `entry(i, j) == entry(j, i).conj()` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Scalar> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Scalar> HermitianMatrix<T> {
    /// The zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![c_zero(); dim * dim],
        }
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c_re(T::one());
        }
        m
    }

    /// Builds from row-major entries, checking Hermiticity within
    /// [`Scalar::tight_tol`].
    pub fn from_entries(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let tol = T::tight_tol();
        for i in 0..dim {
            for j in i..dim {
                let delta = entries[i * dim + j] - entries[j * dim + i].conj();
                if delta.norm() > tol {
                    return Err(Error::Invariant(format!(
                        "entry ({i},{j}) is not the conjugate of ({j},{i})"
                    )));
                }
            }
        }
        let mut m = Self { dim, entries };
        m.symmetrize();
        Ok(m)
    }

    /// Builds from nested rows.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("matrix rows must form a square".into()));
        }
        Self::from_entries(dim, rows.iter().flatten().copied().collect())
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    ///
    /// The input need not be normalised but must be nonzero.
    pub fn projector(v: &[C<T>]) -> Self {
        let dim = v.len();
        let norm_sq: T = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm_sq > T::zero(), "projector of the zero vector");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(v[i] * v[j].conj() / c_re(norm_sq));
            }
        }
        Self { dim, entries }
    }

    fn symmetrize(&mut self) {
        let d = self.dim;
        let half = c_re(T::from_f64(0.5));
        for i in 0..d {
            self.entries[i * d + i] = c_re(self.entries[i * d + i].re);
            for j in (i + 1)..d {
                let avg = (self.entries[i * d + j] + self.entries[j * d + i].conj()) * half;
                self.entries[i * d + j] = avg;
                self.entries[j * d + i] = avg.conj();
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> C<T> {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// `Tr(A B)`, which is real for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let d = self.dim;
        let mut acc = T::zero();
        for i in 0..d {
            for j in 0..d {
                // re(a_ij * b_ji); the imaginary parts cancel in the sum.
                let a = self.entries[i * d + j];
                let b = other.entries[j * d + i];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a + *b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a - *b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        let f = c_re(factor);
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| *a * f).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: T, other: &Self) {
        assert_eq!(self.dim, other.dim);
        let f = c_re(factor);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += *b * f;
        }
    }

    /// Largest absolute entry, used as a cheap magnitude estimate.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.eigendecomposition().values
    }

    /// Full eigendecomposition (cyclic Jacobi).
    pub fn eigendecomposition(&self) -> EigenDecomposition<T> {
        jacobi_eigh(self.dim, &self.entries)
    }

    /// True iff the smallest eigenvalue is `>= -tol`.
    pub fn is_psd(&self, tol: T) -> bool {
        match self.eigenvalues().first() {
            Some(&min) => min >= -tol,
            None => true,
        }
    }
}

/// Free-function form of [`HermitianMatrix::is_psd`].
pub fn is_psd<T: Scalar>(matrix: &HermitianMatrix<T>, tol: T) -> bool {
    matrix.is_psd(tol)
}

// JSON wire format: row-major nested arrays of [re, im] pairs.
impl<T: Scalar + Serialize> Serialize for HermitianMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<[T; 2]> = (0..self.dim)
                .map(|j| {
                    let z = self.entry(i, j);
                    [z.re, z.im]
                })
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for HermitianMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[T; 2]>> = Vec::deserialize(deserializer)?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(de::Error::custom("matrix rows must form a square"));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&[re, im]| C::new(re, im))
            .collect();
        HermitianMatrix::from_entries(dim, entries).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gellmann::GellMannBasis;

    fn pauli_z() -> HermitianMatrix<f64> {
        HermitianMatrix::from_entries(2, vec![c_re(1.0), c_zero(), c_zero(), c_re(-1.0)]).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let err =
            HermitianMatrix::from_entries(2, vec![c_re(1.0), c_re(0.5), c_re(0.2), c_re(1.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn is_psd_examples() {
        let tol = 1e-9;
        assert!(HermitianMatrix::<f64>::identity(3).is_psd(tol));

        let indefinite =
            HermitianMatrix::from_entries(2, vec![c_re(1.0), c_zero(), c_zero(), c_re(-0.5)])
                .unwrap();
        assert!(!indefinite.is_psd(tol));

        // (I + sigma_z)/2 is a projector.
        let proj = HermitianMatrix::<f64>::identity(2)
            .add(&pauli_z())
            .scaled(0.5);
        assert!(proj.is_psd(tol));
    }

    #[test]
    fn trace_product_matches_naive() {
        let basis = GellMannBasis::<f64>::new(3).unwrap();
        let a = &basis.matrices()[2];
        let b = &basis.matrices()[5];
        assert!((a.trace_product(a) - 2.0).abs() < 1e-12);
        assert!(a.trace_product(b).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = HermitianMatrix::from_entries(
            2,
            vec![
                c_re(0.25),
                C::new(0.5, -0.125),
                C::new(0.5, 0.125),
                c_re(0.75),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, "[[[0.25,0.0],[0.5,-0.125]],[[0.5,0.125],[0.75,0.0]]]");
        let back: HermitianMatrix<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_non_hermitian_input() {
        let text = "[[[1.0,0.0],[0.5,0.0]],[[0.2,0.0],[1.0,0.0]]]";
        assert!(serde_json::from_str::<HermitianMatrix<f64>>(text).is_err());
    }
}
