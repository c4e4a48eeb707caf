//! Canonical strategies and behaviors: BB84, the classical identity
//! strategy, the correlated-devices mixture, parallel Gell-Mann strategies,
//! mutually unbiased bases, and the d=4 classical strategy reaching the
//! algebraic maximum.

use crate::error::{Error, Result};
use crate::linalg::{GellMannBasis, HermitianMatrix, RealVector};
use crate::scalar::{c_re, Scalar, C};
use crate::scenario::{
    bloch_to_state, vector_to_effect, Behavior, ClassicalStrategy, QuantumStrategy,
};

/// Qubit state `(I + v . sigma) / 2` from a Bloch vector `(x, y, z)`.
pub fn qubit_state<T: Scalar>(bloch: [T; 3]) -> HermitianMatrix<T> {
    let [x, y, z] = bloch;
    let half = T::from_f64(0.5);
    HermitianMatrix::from_entries(
        2,
        vec![
            c_re((T::one() + z) * half),
            C::new(x * half, -y * half),
            C::new(x * half, y * half),
            c_re((T::one() - z) * half),
        ],
    )
    .expect("Bloch form is Hermitian")
}

/// Qubit effect `c I + v . sigma / 2` from an offset and a Bloch vector.
pub fn qubit_effect<T: Scalar>(c: T, bloch: [T; 3]) -> HermitianMatrix<T> {
    let [x, y, z] = bloch;
    let half = T::from_f64(0.5);
    HermitianMatrix::from_entries(
        2,
        vec![
            c_re(c + z * half),
            C::new(x * half, -y * half),
            C::new(x * half, y * half),
            c_re(c - z * half),
        ],
    )
    .expect("Bloch form is Hermitian")
}

/// The four-preparation qubit strategy saturating the 4x2 witness:
/// preparations along +-z and +-x, measurement vectors rotated by
/// `theta` in the x-z plane. Any `theta` gives witness value 1.
pub fn bb84_strategy<T: Scalar>(theta: T) -> QuantumStrategy<T> {
    let one = T::one();
    let half = T::from_f64(0.5);
    let states = vec![
        qubit_state([T::zero(), T::zero(), one]),
        qubit_state([T::zero(), T::zero(), -one]),
        qubit_state([one, T::zero(), T::zero()]),
        qubit_state([-one, T::zero(), T::zero()]),
    ];
    let effects = vec![
        qubit_effect(half, [theta.sin(), T::zero(), theta.cos()]),
        qubit_effect(half, [-theta.cos(), T::zero(), theta.sin()]),
    ];
    QuantumStrategy::new(2, states, effects).expect("BB84 operators are valid")
}

/// Classical strategy with `d = k + 1` messages whose witness matrix is
/// exactly the `k x k` identity: even preparations send `m = x/2`, odd
/// ones send the sink message `k`; the response is `b = 0` iff `y = m`.
pub fn classical_identity_strategy<T: Scalar>(k: usize) -> ClassicalStrategy<T> {
    assert!(k >= 1, "witness order must be positive");
    let d = k + 1;
    let mut s = vec![vec![T::zero(); 2 * k]; d];
    for x in 0..2 * k {
        let m = if x % 2 == 0 { x / 2 } else { k };
        s[m][x] = T::one();
    }
    let mut t0 = vec![vec![T::zero(); k]; d];
    for (m, row) in t0.iter_mut().enumerate() {
        for (y, v) in row.iter_mut().enumerate() {
            if y == m {
                *v = T::one();
            }
        }
    }
    ClassicalStrategy::new(d, s, t0).expect("identity strategy is valid")
}

/// Equal mixture of two correlated deterministic bit strategies reaching
/// witness value 1: the behavior a pair of devices sharing one random bit
/// can produce while communicating only a bit per round.
///
/// Component (i): send 0 iff `x` is 0 or 3, respond `t(0|m,y) = (m + y)
/// mod 2`. Component (ii): send 0 iff `x` is 0 or 2, respond
/// `t(0|m,y) = m`.
pub fn correlated_mixture_behavior<T: Scalar>() -> Behavior<T> {
    let one = T::one();
    let zero = T::zero();
    let first: ClassicalStrategy<T> = ClassicalStrategy::new(
        2,
        vec![vec![one, zero, zero, one], vec![zero, one, one, zero]],
        vec![vec![zero, one], vec![one, zero]],
    )
    .expect("component strategy (i)");
    let second: ClassicalStrategy<T> = ClassicalStrategy::new(
        2,
        vec![vec![one, zero, one, zero], vec![zero, one, zero, one]],
        vec![vec![zero, zero], vec![one, one]],
    )
    .expect("component strategy (ii)");
    let a = first.to_behavior().expect("valid component");
    let b = second.to_behavior().expect("valid component");
    let half = T::from_f64(0.5);
    let table = a
        .table()
        .iter()
        .zip(b.table())
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(&pa, &pb)| half * (pa + pb))
                .collect()
        })
        .collect();
    Behavior::new(table).expect("mixture of behaviors")
}

fn axis<T: Scalar>(len: usize, index: usize, radius: T) -> RealVector<T> {
    let mut v = vec![T::zero(); len];
    v[index] = radius;
    RealVector::new(v)
}

/// Quantum strategy with state pairs along `k` distinct Gell-Mann axes and
/// effects parallel to them, giving a diagonal witness matrix with strictly
/// positive determinant for any `k <= d^2 - 1`.
///
/// Radii start at `2/d` and are halved (at most 20 times per operator)
/// until the state is PSD / the effect admits a feasible offset; offsets
/// are the midpoint of the feasible interval.
pub fn parallel_gellmann_strategy<T: Scalar>(d: usize, k: usize) -> Result<QuantumStrategy<T>> {
    if d < 2 {
        return Err(Error::Domain("quantum dimension must be >= 2".into()));
    }
    if k < 1 || k > d * d - 1 {
        return Err(Error::Domain(format!(
            "need 1 <= k <= d^2 - 1 = {}, got k = {k}",
            d * d - 1
        )));
    }
    let basis = GellMannBasis::new(d)?;
    let n = basis.len();
    let psd_tol = T::tight_tol();
    let two_over_d = T::from_f64(2.0 / d as f64);

    let mut states = Vec::with_capacity(2 * k);
    for j in 0..k {
        let mut radius = two_over_d;
        let mut found = None;
        for _ in 0..=20 {
            let plus = bloch_to_state(&axis(n, j, radius), &basis)?;
            let minus = bloch_to_state(&axis(n, j, -radius), &basis)?;
            if plus.is_psd(psd_tol) && minus.is_psd(psd_tol) {
                found = Some((plus, minus));
                break;
            }
            radius *= T::from_f64(0.5);
        }
        let (plus, minus) = found
            .ok_or_else(|| Error::Infeasible(format!("no PSD state radius along axis {j}")))?;
        states.push(plus);
        states.push(minus);
    }

    let mut effects = Vec::with_capacity(k);
    for i in 0..k {
        let mut radius = two_over_d;
        let mut found = None;
        for _ in 0..=20 {
            // Eigenvalue range of the traceless part fixes the feasible
            // offsets: -mu_min <= c <= 1 - mu_max.
            let traceless = vector_to_effect(T::zero(), &axis(n, i, radius), &basis)?;
            let eigs = traceless.eigenvalues();
            let lo = -eigs[0];
            let hi = T::one() - eigs[eigs.len() - 1];
            if lo <= hi {
                let c = (lo + hi) * T::from_f64(0.5);
                found = Some(vector_to_effect(c, &axis(n, i, radius), &basis)?);
                break;
            }
            radius *= T::from_f64(0.5);
        }
        effects.push(found.ok_or_else(|| {
            Error::Infeasible(format!("no feasible effect offset along axis {i}"))
        })?);
    }

    QuantumStrategy::new(d, states, effects)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// The `d + 1` mutually unbiased bases of prime dimension `d`: the
/// computational basis plus `d` Fourier-type bases. Every pair of vectors
/// from different bases has squared overlap `1/d`.
///
/// Only prime `d` is supported; prime powers would need finite-field
/// arithmetic.
pub fn mub_bases<T: Scalar>(d: usize) -> Result<Vec<Vec<Vec<C<T>>>>> {
    if !is_prime(d) {
        return Err(Error::Domain(format!(
            "mutually unbiased bases require prime dimension, got {d}"
        )));
    }
    let inv_sqrt_d = T::one() / T::from_f64(d as f64).sqrt();
    let mut bases = Vec::with_capacity(d + 1);

    let computational: Vec<Vec<C<T>>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|j| {
                    if j == r {
                        c_re(T::one())
                    } else {
                        c_re(T::zero())
                    }
                })
                .collect()
        })
        .collect();
    bases.push(computational);

    for t in 0..d {
        let basis: Vec<Vec<C<T>>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|j| {
                        // d = 2 needs the quarter phase i^(t j); odd primes
                        // use exp(2 pi i (t j^2 + r j) / d).
                        let phase = if d == 2 {
                            T::FRAC_PI_2() * T::from_f64((t * j) as f64)
                                + T::PI() * T::from_f64((r * j) as f64)
                        } else {
                            T::from_f64(2.0) * T::PI() * T::from_f64((t * j * j + r * j) as f64)
                                / T::from_f64(d as f64)
                        };
                        C::new(phase.cos(), phase.sin()) * c_re(inv_sqrt_d)
                    })
                    .collect()
            })
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// Quantum strategy built from mutually unbiased bases whose witness
/// matrix is block bidiagonal with unit determinant: preparation pair `j`
/// is two adjacent states of basis `floor(j / (d-1))`, effect `i` projects
/// onto the first member of pair `i`. Cross-basis entries vanish because
/// unbiased overlaps are state-independent.
pub fn mub_strategy<T: Scalar>(d: usize, k: usize) -> Result<QuantumStrategy<T>> {
    if k < 1 || k > d * d - 1 {
        return Err(Error::Domain(format!(
            "need 1 <= k <= d^2 - 1 = {} pairs, got k = {k}",
            d.saturating_mul(d).saturating_sub(1)
        )));
    }
    let bases = mub_bases::<T>(d)?;
    let mut states = Vec::with_capacity(2 * k);
    let mut effects = Vec::with_capacity(k);
    for j in 0..k {
        let basis = &bases[j / (d - 1)];
        let r = j % (d - 1);
        states.push(HermitianMatrix::projector(&basis[r]));
        states.push(HermitianMatrix::projector(&basis[r + 1]));
        effects.push(HermitianMatrix::projector(&basis[r]));
    }
    QuantumStrategy::new(d, states, effects)
}

/// Deterministic 4-message strategy whose witness matrix is the 2x2
/// Hadamard matrix, reaching the algebraic maximum `|det| = 2`.
pub fn classical_hadamard_strategy<T: Scalar>() -> ClassicalStrategy<T> {
    let one = T::one();
    let zero = T::zero();
    let mut s = vec![vec![zero; 4]; 4];
    for x in 0..4 {
        s[x][x] = one;
    }
    let t0 = vec![
        vec![one, one],
        vec![zero, zero],
        vec![one, zero],
        vec![zero, one],
    ];
    ClassicalStrategy::new(4, s, t0).expect("Hadamard strategy is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{witness_matrix, witness_relabeling_scan, witness_value};

    #[test]
    fn bb84_theta0_behavior_table() {
        let b = bb84_strategy(0.0f64).to_behavior().unwrap();
        let expect = [[1.0, 0.5], [0.0, 0.5], [0.5, 0.0], [0.5, 1.0]];
        for x in 0..4 {
            for y in 0..2 {
                assert!((b.p0(x, y) - expect[x][y]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bb84_value_is_one_for_any_angle() {
        for step in 0..64 {
            let theta = step as f64 / 64.0 * std::f64::consts::TAU;
            let b = bb84_strategy(theta).to_behavior().unwrap();
            let v = witness_value(&b, 2).unwrap().value;
            assert!((v - 1.0).abs() <= 1e-9, "theta={theta}: {v}");
        }
    }

    #[test]
    fn classical_identity_matrix_is_the_identity() {
        for k in 1..=6 {
            let strat = classical_identity_strategy::<f64>(k);
            assert_eq!(strat.dim(), k + 1);
            let b = strat.to_behavior().unwrap();
            let m = witness_matrix(&b, k).unwrap();
            for i in 0..k {
                for j in 0..k {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_eq!(m[i][j], expect, "k={k} entry ({i},{j})");
                }
            }
            assert_eq!(witness_value(&b, k).unwrap().value, 1.0);
        }
    }

    #[test]
    fn correlated_mixture_reaches_one() {
        let b = correlated_mixture_behavior::<f64>();
        let report = witness_value(&b, 2).unwrap();
        assert!((report.value - 1.0).abs() < 1e-12);
        let scan = witness_relabeling_scan(&b).unwrap();
        assert!(scan.relabeling_max.unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn parallel_gellmann_is_valid_and_positive() {
        for (d, k) in [(2, 2), (2, 3), (3, 2), (3, 8), (4, 5)] {
            let strat = parallel_gellmann_strategy::<f64>(d, k).unwrap();
            strat.validate().unwrap();
            let b = strat.to_behavior().unwrap();
            let v = witness_value(&b, k).unwrap().value;
            assert!(v > 1e-6, "d={d} k={k}: witness {v}");
        }
    }

    #[test]
    fn parallel_gellmann_rejects_too_many_axes() {
        assert!(parallel_gellmann_strategy::<f64>(2, 4).is_err());
    }

    #[test]
    fn mub_bases_overlaps() {
        for d in [2usize, 3, 5, 7] {
            let bases = mub_bases::<f64>(d).unwrap();
            assert_eq!(bases.len(), d + 1);
            let overlap = |a: &[C<f64>], b: &[C<f64>]| -> f64 {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.conj() * y)
                    .sum::<C<f64>>()
                    .norm_sqr()
            };
            for (bi, basis_a) in bases.iter().enumerate() {
                for (r, va) in basis_a.iter().enumerate() {
                    for (s, vb) in basis_a.iter().enumerate() {
                        let expect = if r == s { 1.0 } else { 0.0 };
                        assert!(
                            (overlap(va, vb) - expect).abs() < 1e-10,
                            "d={d} basis {bi} not orthonormal"
                        );
                    }
                    for basis_b in bases.iter().skip(bi + 1) {
                        for vb in basis_b {
                            assert!(
                                (overlap(va, vb) - 1.0 / d as f64).abs() < 1e-10,
                                "d={d}: cross-basis overlap"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mub_bases_rejects_composite_dimension() {
        assert!(mub_bases::<f64>(4).is_err());
        assert!(mub_bases::<f64>(6).is_err());
        assert!(mub_bases::<f64>(1).is_err());
    }

    #[test]
    fn qubit_mubs_are_the_pauli_eigenbases() {
        let bases = mub_bases::<f64>(2).unwrap();
        // Computational = sigma_z eigenbasis.
        assert!((bases[0][0][0].re - 1.0).abs() < 1e-15);
        // t = 0 basis: (1, +-1)/sqrt(2), the sigma_x eigenbasis.
        assert!((bases[1][0][1].re - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((bases[1][1][1].re + 1.0 / 2f64.sqrt()).abs() < 1e-12);
        // t = 1 basis: (1, +-i)/sqrt(2), the sigma_y eigenbasis.
        assert!((bases[2][0][1].im - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((bases[2][1][1].im + 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mub_strategy_d2_k3_is_the_identity_witness() {
        let strat = mub_strategy::<f64>(2, 3).unwrap();
        let b = strat.to_behavior().unwrap();
        let m = witness_matrix(&b, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((m[i][j] - expect).abs() < 1e-12);
            }
        }
        assert!((witness_value(&b, 3).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mub_strategy_d3_k8_reaches_one() {
        let strat = mub_strategy::<f64>(3, 8).unwrap();
        strat.validate().unwrap();
        let b = strat.to_behavior().unwrap();
        let v = witness_value(&b, 8).unwrap().value;
        assert!((v - 1.0).abs() < 1e-9, "witness {v}");
    }

    #[test]
    fn mub_strategy_rejects_k_beyond_parameter_count() {
        assert!(mub_strategy::<f64>(2, 4).is_err());
    }

    #[test]
    fn hadamard_strategy_reaches_two() {
        let strat = classical_hadamard_strategy::<f64>();
        let b = strat.to_behavior().unwrap();
        assert!(b.table().iter().flatten().all(|&p| p == 0.0 || p == 1.0));
        let report = witness_value(&b, 2).unwrap();
        assert_eq!(report.matrix, vec![vec![1.0, 1.0], vec![1.0, -1.0]]);
        assert_eq!(report.value, 2.0);
    }
}
