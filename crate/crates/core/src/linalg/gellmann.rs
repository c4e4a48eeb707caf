//! Generalised Gell-Mann basis of traceless Hermitian matrices.

use crate::error::{Error, Result};
use crate::linalg::hermitian::HermitianMatrix;
use crate::linalg::real::RealVector;
use crate::scalar::{c_re, c_zero, Scalar, C};

/// The `d^2 - 1` generalised Gell-Mann matrices for dimension `d`,
/// normalised to `Tr(l_i l_j) = 2 delta_ij`.
///
/// Fixed ordering: symmetric pairs `(j,k)` with `j < k` in lexicographic
/// order, then the antisymmetric pairs in the same order, then the
/// diagonal matrices. For `d = 2` this is exactly `(sigma_x, sigma_y,
/// sigma_z)`.
#[derive(Debug, Clone)]
pub struct GellMannBasis<T: Scalar> {
    dim: usize,
    matrices: Vec<HermitianMatrix<T>>,
    phi: T,
}

impl<T: Scalar> GellMannBasis<T> {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!(
                "Gell-Mann basis needs dimension >= 2, got {dim}"
            )));
        }
        let d = dim;
        let mut matrices = Vec::with_capacity(d * d - 1);

        // Symmetric: E_jk + E_kj.
        for j in 0..d {
            for k in (j + 1)..d {
                let mut e = vec![c_zero(); d * d];
                e[j * d + k] = c_re(T::one());
                e[k * d + j] = c_re(T::one());
                matrices.push(HermitianMatrix::from_entries(d, e).expect("symmetric generator"));
            }
        }
        // Antisymmetric: -i E_jk + i E_kj.
        for j in 0..d {
            for k in (j + 1)..d {
                let mut e = vec![c_zero(); d * d];
                e[j * d + k] = C::new(T::zero(), -T::one());
                e[k * d + j] = C::new(T::zero(), T::one());
                matrices
                    .push(HermitianMatrix::from_entries(d, e).expect("antisymmetric generator"));
            }
        }
        // Diagonal: sqrt(2/(l(l+1))) (E_00 + ... + E_{l-1,l-1} - l E_ll).
        for l in 1..d {
            let norm = (T::from_f64(2.0) / T::from_f64((l * (l + 1)) as f64)).sqrt();
            let mut e = vec![c_zero(); d * d];
            for j in 0..l {
                e[j * d + j] = c_re(norm);
            }
            e[l * d + l] = c_re(-norm * T::from_f64(l as f64));
            matrices.push(HermitianMatrix::from_entries(d, e).expect("diagonal generator"));
        }

        let phi = (T::from_f64((d * (d - 1)) as f64) / T::from_f64(2.0)).sqrt();
        Ok(Self { dim, matrices, phi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis matrices, `d^2 - 1`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[HermitianMatrix<T>] {
        &self.matrices
    }

    /// Normalisation constant `sqrt(d(d-1)/2)`.
    pub fn phi(&self) -> T {
        self.phi
    }

    /// Linear combination `sum_i v_i l_i`.
    pub fn combine(&self, v: &RealVector<T>) -> HermitianMatrix<T> {
        assert_eq!(v.len(), self.len(), "coefficient count must be d^2 - 1");
        let mut acc = HermitianMatrix::zeros(self.dim);
        for (coef, m) in v.entries().iter().zip(&self.matrices) {
            if *coef != T::zero() {
                acc.add_scaled(*coef, m);
            }
        }
        acc
    }

    /// Coefficients `Tr(M l_i) / 2`, i.e. the expansion of the traceless
    /// part of `M` in this basis.
    pub fn coefficients(&self, m: &HermitianMatrix<T>) -> RealVector<T> {
        assert_eq!(m.dim(), self.dim, "matrix dimension mismatch");
        let half = T::from_f64(0.5);
        RealVector::new(
            self.matrices
                .iter()
                .map(|l| m.trace_product(l) * half)
                .collect(),
        )
    }
}

/// Convenience constructor mirroring [`GellMannBasis::new`].
pub fn gellmann_basis<T: Scalar>(dim: usize) -> Result<GellMannBasis<T>> {
    GellMannBasis::new(dim)
}
