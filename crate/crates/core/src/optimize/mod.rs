//! Nonconvex maximisation engines: see-saw ascent over quantum strategies,
//! vertex enumeration and see-saw over classical strategies, and penalised
//! maximisation of the guessing probability at a fixed witness value.
//!
//! All solvers are deterministic under a fixed seed: every restart derives
//! its own RNG stream from the master seed, so parallel and serial runs
//! produce identical results.

mod classical;
mod guessing;
mod quantum;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::scalar::{Scalar, C};
use crate::scenario::{ClassicalStrategy, QuantumStrategy};

pub use classical::{maximize_witness_classical_bruteforce, maximize_witness_classical_seesaw};
pub use guessing::{maximize_guessing_probability, RESIDUAL_TOL};
pub use quantum::{maximize_witness_quantum, polish_quantum_strategy};

/// Restart count, iteration budget, convergence threshold and master seed.
///
/// Fields are plain `f64`/integers rather than generic so one config can
/// drive solvers of any scalar precision.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 500,
            convergence_tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("need at least one restart".into()));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(Error::Domain(
                "convergence tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

/// Best value found, the strategy attaining it, and restart diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult<T: Scalar, S> {
    pub best_value: T,
    pub best_strategy: S,
    pub iterations_used: usize,
    pub converged: bool,
    /// Value reached by each restart, in restart order.
    pub restart_values: Vec<T>,
}

/// SplitMix64 finaliser; decorrelates per-restart streams from the master
/// seed so restarts can run in parallel yet stay reproducible.
pub(crate) fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn restart_rng(master: u64, index: usize) -> ChaCha12Rng {
    use rand::SeedableRng;
    ChaCha12Rng::seed_from_u64(derive_seed(master, index as u64))
}

/// Marsaglia polar standard normal; sampled in f64 and converted so f32
/// and f64 runs draw from the same stream.
pub(crate) fn standard_normal(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Haar-random pure state as a rank-one projector.
pub fn random_pure_state<T: Scalar>(d: usize, rng: &mut impl Rng) -> HermitianMatrix<T> {
    loop {
        let v: Vec<C<T>> = (0..d)
            .map(|_| {
                C::new(
                    T::from_f64(standard_normal(rng)),
                    T::from_f64(standard_normal(rng)),
                )
            })
            .collect();
        let norm_sq: T = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > T::from_f64(1e-12) {
            return HermitianMatrix::projector(&v);
        }
    }
}

/// Random valid binary effect: offset uniform in [0.25, 0.75], direction
/// uniform in the Bloch ball of radius min(1, 2c, 2(1-c)).
///
/// That radius guarantees validity only for qubits; for d >= 3 the
/// direction is halved until both `M` and `I - M` are PSD.
pub fn random_effect<T: Scalar>(d: usize, rng: &mut impl Rng) -> HermitianMatrix<T> {
    use crate::linalg::{GellMannBasis, RealVector};
    use crate::scenario::vector_to_effect;

    let basis = GellMannBasis::<T>::new(d).expect("d >= 2");
    let n = basis.len();
    let c: f64 = rng.gen_range(0.25..0.75);
    let radius_max = 1.0f64.min(2.0 * c.min(1.0 - c));
    let dir: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
    let norm: f64 = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut radius = radius_max * rng.gen_range(0.0f64..1.0).powf(1.0 / n as f64);
    let tol = T::tight_tol();
    let id = HermitianMatrix::identity(d);
    for _ in 0..60 {
        let v = RealVector::new(dir.iter().map(|x| T::from_f64(x / norm * radius)).collect());
        let m = vector_to_effect(T::from_f64(c), &v, &basis).expect("in-range parameters");
        if m.is_psd(tol) && id.sub(&m).is_psd(tol) {
            return m;
        }
        radius *= 0.5;
    }
    // radius ~ 0: c I is always valid for c in (0, 1).
    HermitianMatrix::identity(d).scaled(T::from_f64(c))
}

/// Random quantum strategy: Haar-random pure states and random valid
/// effects.
pub fn random_quantum_strategy<T: Scalar>(
    d: usize,
    preparations: usize,
    measurements: usize,
    rng: &mut impl Rng,
) -> QuantumStrategy<T> {
    let states = (0..preparations)
        .map(|_| random_pure_state(d, rng))
        .collect();
    let effects = (0..measurements).map(|_| random_effect(d, rng)).collect();
    QuantumStrategy::new(d, states, effects).expect("sampled operators are valid")
}

/// Random classical strategy: uniform message distributions (normalised
/// uniforms) and uniform response probabilities.
pub fn random_classical_strategy<T: Scalar>(
    d: usize,
    preparations: usize,
    measurements: usize,
    rng: &mut impl Rng,
) -> ClassicalStrategy<T> {
    let mut s = vec![vec![T::zero(); preparations]; d];
    for x in 0..preparations {
        let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(1e-6f64..1.0)).collect();
        let total: f64 = raw.iter().sum();
        for m in 0..d {
            s[m][x] = T::from_f64(raw[m] / total);
        }
    }
    let t0 = (0..d)
        .map(|_| {
            (0..measurements)
                .map(|_| T::from_f64(rng.gen_range(0.0..1.0)))
                .collect()
        })
        .collect();
    ClassicalStrategy::new(d, s, t0).expect("sampled tables are valid")
}

/// Cofactor `(-1)^{i+j} det(minor_{ij})` of a small real matrix.
pub(crate) fn cofactor<T: Scalar>(w: &[Vec<T>], i: usize, j: usize) -> T {
    use crate::linalg::determinant;
    let k = w.len();
    if k == 1 {
        return T::one();
    }
    let minor: Vec<Vec<T>> = (0..k)
        .filter(|&r| r != i)
        .map(|r| (0..k).filter(|&c| c != j).map(|c| w[r][c]).collect())
        .collect();
    let sign = if (i + j).is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    sign * determinant(&minor)
}
