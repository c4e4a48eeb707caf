//! Cyclic Jacobi eigendecomposition for small complex Hermitian matrices.
//!
//! Dimensions in this crate never exceed 16, where Jacobi is both accurate
//! (eigenvalues to a few ulps of the norm) and fast enough that no external
//! LAPACK binding is warranted.

use crate::scalar::{c_re, c_zero, Scalar, C};

/// Eigenvalues (ascending) with matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Scalar> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// `vectors[j]` is the unit eigenvector for `values[j]`.
    pub vectors: Vec<Vec<C<T>>>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn min(&self) -> T {
        *self.values.first().expect("empty eigendecomposition")
    }

    pub fn max(&self) -> T {
        *self.values.last().expect("empty eigendecomposition")
    }

    pub fn min_vector(&self) -> &[C<T>] {
        &self.vectors[0]
    }

    pub fn max_vector(&self) -> &[C<T>] {
        &self.vectors[self.vectors.len() - 1]
    }
}

fn off_diag_norm<T: Scalar>(d: usize, a: &[C<T>]) -> T {
    let mut acc = T::zero();
    for p in 0..d {
        for q in (p + 1)..d {
            acc += a[p * d + q].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Diagonalises the Hermitian matrix given by row-major `entries`.
pub fn jacobi_eigh<T: Scalar>(d: usize, entries: &[C<T>]) -> EigenDecomposition<T> {
    assert_eq!(entries.len(), d * d, "jacobi_eigh: not a square matrix");
    let mut a: Vec<C<T>> = entries.to_vec();
    // v holds the accumulated unitary, columns are eigenvectors.
    let mut v: Vec<C<T>> = vec![c_zero(); d * d];
    for i in 0..d {
        v[i * d + i] = c_re(T::one());
    }

    let scale = {
        let frob: T = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        frob.max(T::min_positive_value())
    };
    let stop = scale * T::epsilon() * T::from_f64(d as f64);
    let skip = stop * T::from_f64(1e-3);

    for _sweep in 0..60 {
        if off_diag_norm(d, &a) <= stop {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                // Phase that reduces the pivot to the real case, then the
                // classic symmetric rotation.
                let phase = apq / c_re(r);
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // Unitary U with U[p][p] = c*phase, U[p][q] = s*phase,
                // U[q][p] = -s, U[q][q] = c; apply A <- U^dag A U, V <- V U.
                let upp = phase * c_re(c);
                let upq = phase * c_re(s);
                let cs = c_re(c);
                let ns = c_re(s);

                // Columns p and q of A.
                for i in 0..d {
                    let aip = a[i * d + p];
                    let aiq = a[i * d + q];
                    a[i * d + p] = aip * upp - aiq * ns;
                    a[i * d + q] = aip * upq + aiq * cs;
                }
                // Rows p and q of A (A <- U^dag A).
                for j in 0..d {
                    let apj = a[p * d + j];
                    let aqj = a[q * d + j];
                    a[p * d + j] = apj * upp.conj() - aqj * ns;
                    a[q * d + j] = apj * upq.conj() + aqj * cs;
                }
                // Clean the pivot pair exactly.
                a[p * d + q] = c_zero();
                a[q * d + p] = c_zero();
                a[p * d + p] = c_re(a[p * d + p].re);
                a[q * d + q] = c_re(a[q * d + q].re);

                for i in 0..d {
                    let vip = v[i * d + p];
                    let viq = v[i * d + q];
                    v[i * d + p] = vip * upp - viq * ns;
                    v[i * d + q] = vip * upq + viq * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[i * d + i]
            .re
            .partial_cmp(&a[j * d + j].re)
            .expect("eigenvalues are finite")
    });

    let values = order.iter().map(|&i| a[i * d + i].re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..d).map(|row| v[row * d + col]).collect())
        .collect();
    EigenDecomposition { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(d: usize, rng: &mut ChaCha12Rng) -> Vec<C<f64>> {
        let mut a = vec![c_zero::<f64>(); d * d];
        for i in 0..d {
            a[i * d + i] = c_re(rng.gen_range(-1.0..1.0));
            for j in (i + 1)..d {
                let z = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a[i * d + j] = z;
                a[j * d + i] = z.conj();
            }
        }
        a
    }

    #[test]
    fn reconstructs_random_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for d in 1..=8 {
            for _ in 0..20 {
                let a = random_hermitian(d, &mut rng);
                let eig = jacobi_eigh(d, &a);
                // Residual ||A v - lambda v|| per eigenpair.
                for (lambda, vec) in eig.values.iter().zip(&eig.vectors) {
                    for i in 0..d {
                        let mut av = c_zero::<f64>();
                        for j in 0..d {
                            av += a[i * d + j] * vec[j];
                        }
                        let resid = (av - vec[i] * c_re(*lambda)).norm();
                        assert!(resid < 1e-12, "d={d} residual {resid}");
                    }
                }
                // Trace preserved.
                let tr: f64 = (0..d).map(|i| a[i * d + i].re).sum();
                let sum: f64 = eig.values.iter().sum();
                assert!((tr - sum).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvalues_sorted_and_orthonormal() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        let a = random_hermitian(6, &mut rng);
        let eig = jacobi_eigh(6, &a);
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for i in 0..6 {
            for j in 0..6 {
                let dot: C<f64> = (0..6)
                    .map(|r| eig.vectors[i][r].conj() * eig.vectors[j][r])
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-12);
            }
        }
    }
}
