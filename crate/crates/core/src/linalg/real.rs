//! Real vectors, determinants and the generalised cross product.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real coefficient vector (generalised Bloch vector components).
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector<T: Scalar> {
    entries: Vec<T>,
}

impl<T: Scalar> RealVector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        debug_assert!(entries.iter().all(|x| x.is_finite()));
        Self { entries }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![T::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.len(), other.len(), "dot length mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a * *b)
            .sum()
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            entries: self.entries.iter().map(|x| *x * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Scalar> From<Vec<T>> for RealVector<T> {
    fn from(entries: Vec<T>) -> Self {
        Self::new(entries)
    }
}

/// Determinant of a square real matrix via partially pivoted elimination.
///
/// Stable for the sizes used here (k <= 16); 1x1 and 2x2 short-circuit.
pub fn determinant<T: Scalar>(matrix: &[Vec<T>]) -> T {
    let k = matrix.len();
    assert!(k >= 1, "determinant of an empty matrix");
    assert!(
        matrix.iter().all(|row| row.len() == k),
        "determinant needs a square matrix"
    );
    match k {
        1 => return matrix[0][0],
        2 => return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0],
        _ => {}
    }

    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut det = T::one();
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .expect("finite entries")
            })
            .expect("non-empty pivot range");
        let pivot = a[pivot_row][col];
        if pivot == T::zero() {
            return T::zero();
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        det *= pivot;
        for row in (col + 1)..k {
            let factor = a[row][col] / pivot;
            if factor != T::zero() {
                for j in col..k {
                    let sub = factor * a[col][j];
                    a[row][j] -= sub;
                }
            }
        }
    }
    det
}

/// Generalised cross product of `k` vectors in `R^{k+1}`.
///
/// Returns the unique `u` with `v . u = det(s_0, ..., s_{k-1}, v)` for all
/// `v` (inputs stacked as rows, `v` appended last). Componentwise,
/// `u_i = (-1)^{k+i} det(inputs with column i deleted)`. The result is zero
/// iff the inputs are linearly dependent.
pub fn cross_product<T: Scalar>(vectors: &[RealVector<T>]) -> Result<RealVector<T>> {
    let k = vectors.len();
    if k == 0 {
        return Err(Error::Shape("cross product of no vectors".into()));
    }
    for v in vectors {
        if v.len() != k + 1 {
            return Err(Error::Shape(format!(
                "cross product of {k} vectors needs length {}, got {}",
                k + 1,
                v.len()
            )));
        }
    }
    let mut out = Vec::with_capacity(k + 1);
    let mut minor = vec![vec![T::zero(); k]; k];
    for drop_col in 0..=k {
        for (row, v) in vectors.iter().enumerate() {
            let mut c = 0;
            for (col, &x) in v.entries().iter().enumerate() {
                if col != drop_col {
                    minor[row][c] = x;
                    c += 1;
                }
            }
        }
        let sign = if (k + drop_col).is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        out.push(sign * determinant(&minor));
    }
    Ok(RealVector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn unit<T: Scalar>(len: usize, axis: usize) -> RealVector<T> {
        let mut v = vec![T::zero(); len];
        v[axis] = T::one();
        RealVector::new(v)
    }

    /// Cofactor-expansion determinant, the independent oracle.
    fn det_cofactor(m: &[Vec<f64>]) -> f64 {
        let k = m.len();
        if k == 1 {
            return m[0][0];
        }
        let mut acc = 0.0;
        for j in 0..k {
            let minor: Vec<Vec<f64>> = (1..k)
                .map(|r| (0..k).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m[0][j] * det_cofactor(&minor);
        }
        acc
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(determinant(&[vec![1.0, 0.0], vec![0.0, 1.0]]), 1.0);
        assert_eq!(determinant(&[vec![1.0, 0.0], vec![0.0, -1.0]]), -1.0);
        assert_eq!(determinant(&[vec![3.5]]), 3.5);
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let got = determinant(&m);
            let want = det_cofactor(&m);
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn cross_product_is_the_ordinary_one_for_k2() {
        let u = cross_product(&[unit::<f64>(3, 0), unit(3, 1)]).unwrap();
        // Sign fixed by v.u = det(s0, s1, v) with v = e3.
        assert_eq!(u.entries(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn cross_product_k3_sign_against_determinant() {
        let vecs = [unit::<f64>(4, 0), unit(4, 1), unit(4, 2)];
        let u = cross_product(&vecs).unwrap();
        for axis in 0..4 {
            let v = unit::<f64>(4, axis);
            let mut rows: Vec<Vec<f64>> = vecs.iter().map(|s| s.entries().to_vec()).collect();
            rows.push(v.entries().to_vec());
            assert!((v.dot(&u) - determinant(&rows)).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_product_of_dependent_vectors_vanishes() {
        let e1 = unit::<f64>(4, 0);
        let e2 = unit::<f64>(4, 1);
        let sum = RealVector::new(vec![1.0, 1.0, 0.0, 0.0]);
        let u = cross_product(&[e1, e2, sum]).unwrap();
        assert!(u.entries().iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn cross_product_rejects_bad_lengths() {
        let e1 = unit::<f64>(3, 0);
        let bad = RealVector::new(vec![1.0, 0.0]);
        assert!(cross_product(&[e1, bad]).is_err());
    }

    #[test]
    fn determinant_identity_property() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for k in 1..=5 {
            for _ in 0..40 {
                let vecs: Vec<RealVector<f64>> = (0..k)
                    .map(|_| RealVector::new((0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                    .collect();
                let u = cross_product(&vecs).unwrap();
                let v = RealVector::new((0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect());
                let mut rows: Vec<Vec<f64>> = vecs.iter().map(|s| s.entries().to_vec()).collect();
                rows.push(v.entries().to_vec());
                let det = determinant(&rows);
                let scale = 1.0f64.max(det.abs());
                assert!((v.dot(&u) - det).abs() / scale < 1e-9);
            }
        }
    }

    #[test]
    fn gram_determinant_equals_cross_dot_cross() {
        // det(W) with W(i,j) = S_j . T_i equals cross(S) . cross(T).
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        for k in 2..=4 {
            for _ in 0..50 {
                let svecs: Vec<RealVector<f64>> = (0..k)
                    .map(|_| RealVector::new((0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                    .collect();
                let tvecs: Vec<RealVector<f64>> = (0..k)
                    .map(|_| RealVector::new((0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                    .collect();
                let w: Vec<Vec<f64>> = (0..k)
                    .map(|i| (0..k).map(|j| svecs[j].dot(&tvecs[i])).collect())
                    .collect();
                let det = determinant(&w);
                let cross_dot = cross_product(&svecs)
                    .unwrap()
                    .dot(&cross_product(&tvecs).unwrap());
                let scale = 1.0f64.max(det.abs());
                assert!(
                    (det - cross_dot).abs() / scale < 1e-9,
                    "k={k}: {det} vs {cross_dot}"
                );
            }
        }
    }
}
