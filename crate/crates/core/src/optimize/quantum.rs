//! See-saw ascent for the quantum witness maximum.
//!
//! `det W` is linear in each effect (one row of `W`) and in each state
//! (half of one column), so both block updates have closed-form optima:
//! the projector onto the positive eigenspace of the accumulated cofactor
//! operator for effects, and extremal eigenvectors for states. Each update
//! can only increase `|det W|`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{determinant, HermitianMatrix};
use crate::scalar::Scalar;
use crate::scenario::QuantumStrategy;

use super::{
    cofactor, random_effect, random_pure_state, restart_rng, OptimizationResult, OptimizerConfig,
};

struct SeeSaw<T: Scalar> {
    dim: usize,
    k: usize,
    states: Vec<HermitianMatrix<T>>,
    effects: Vec<HermitianMatrix<T>>,
    w: Vec<Vec<T>>,
}

impl<T: Scalar> SeeSaw<T> {
    fn new(dim: usize, states: Vec<HermitianMatrix<T>>, effects: Vec<HermitianMatrix<T>>) -> Self {
        let k = effects.len();
        let mut solver = Self {
            dim,
            k,
            states,
            effects,
            w: vec![vec![T::zero(); k]; k],
        };
        for i in 0..k {
            for j in 0..k {
                solver.w[i][j] = solver.entry(i, j);
            }
        }
        solver
    }

    fn entry(&self, i: usize, j: usize) -> T {
        self.states[2 * j].trace_product(&self.effects[i])
            - self.states[2 * j + 1].trace_product(&self.effects[i])
    }

    fn det(&self) -> T {
        determinant(&self.w)
    }

    fn sign(&self) -> T {
        if self.det() < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Best effect for row `i` with everything else fixed: the projector
    /// onto the positive eigenspace of `sign * sum_j C_ij (rho_2j - rho_2j+1)`.
    fn update_effect(&mut self, i: usize) {
        let sign = self.sign();
        let mut operator = HermitianMatrix::zeros(self.dim);
        for j in 0..self.k {
            let c = sign * cofactor(&self.w, i, j);
            if c != T::zero() {
                operator.add_scaled(c, &self.states[2 * j]);
                operator.add_scaled(-c, &self.states[2 * j + 1]);
            }
        }
        self.effects[i] = positive_eigenspace_projector(&operator);
        for j in 0..self.k {
            self.w[i][j] = self.entry(i, j);
        }
    }

    /// Best state pair for column `j`: extremal eigenvectors of
    /// `sign * sum_i C_ij M_i`, the maximal one for the even preparation.
    fn update_state_pair(&mut self, j: usize) {
        let sign = self.sign();
        let mut operator = HermitianMatrix::zeros(self.dim);
        for i in 0..self.k {
            let c = sign * cofactor(&self.w, i, j);
            if c != T::zero() {
                operator.add_scaled(c, &self.effects[i]);
            }
        }
        let eig = operator.eigendecomposition();
        self.states[2 * j] = HermitianMatrix::projector(eig.max_vector());
        self.states[2 * j + 1] = HermitianMatrix::projector(eig.min_vector());
        for i in 0..self.k {
            self.w[i][j] = self.entry(i, j);
        }
    }

    /// One full pass over all rows and columns. Returns `|det|` afterwards.
    fn pass(&mut self) -> T {
        for i in 0..self.k {
            let before = self.det().abs();
            self.update_effect(i);
            let after = self.det().abs();
            debug_assert!(
                after >= before - T::tight_tol(),
                "effect update decreased |det|"
            );
        }
        for j in 0..self.k {
            let before = self.det().abs();
            self.update_state_pair(j);
            let after = self.det().abs();
            debug_assert!(
                after >= before - T::tight_tol(),
                "state update decreased |det|"
            );
        }
        self.det().abs()
    }
}

/// Projector onto the strictly positive eigenspace.
fn positive_eigenspace_projector<T: Scalar>(operator: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    let d = operator.dim();
    let eig = operator.eigendecomposition();
    let mut proj = HermitianMatrix::zeros(d);
    for (value, vector) in eig.values.iter().zip(&eig.vectors) {
        if *value > T::zero() {
            proj.add_scaled(T::one(), &HermitianMatrix::projector(vector));
        }
    }
    proj
}

struct RunOutcome<T: Scalar> {
    value: T,
    states: Vec<HermitianMatrix<T>>,
    effects: Vec<HermitianMatrix<T>>,
    iterations: usize,
    converged: bool,
}

fn run_seesaw<T: Scalar>(
    dim: usize,
    states: Vec<HermitianMatrix<T>>,
    effects: Vec<HermitianMatrix<T>>,
    max_iterations: usize,
    tol: T,
) -> RunOutcome<T> {
    let mut solver = SeeSaw::new(dim, states, effects);
    let mut current = solver.det().abs();
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iterations {
        let next = solver.pass();
        iterations += 1;
        if next - current < tol {
            converged = true;
            current = current.max(next);
            break;
        }
        current = next;
    }
    RunOutcome {
        value: current,
        states: solver.states,
        effects: solver.effects,
        iterations,
        converged,
    }
}

fn collect<T: Scalar>(
    dim: usize,
    runs: Vec<RunOutcome<T>>,
) -> Result<OptimizationResult<T, QuantumStrategy<T>>> {
    let mut best = 0usize;
    for (idx, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = idx;
        }
    }
    let restart_values = runs.iter().map(|r| r.value).collect();
    let iterations_used = runs.iter().map(|r| r.iterations).sum();
    let converged = runs[best].converged;
    let best_value = runs[best].value;
    let winner = runs.into_iter().nth(best).expect("best index in range");
    let best_strategy = QuantumStrategy::new(dim, winner.states, winner.effects)?;
    Ok(OptimizationResult {
        best_value,
        best_strategy,
        iterations_used,
        converged,
        restart_values,
    })
}

/// Maximises the order-`k` witness over `d`-dimensional quantum strategies
/// by multistart see-saw ascent.
pub fn maximize_witness_quantum<T: Scalar>(
    d: usize,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T, QuantumStrategy<T>>> {
    if d < 2 {
        return Err(Error::Domain("quantum dimension must be >= 2".into()));
    }
    if k < 1 {
        return Err(Error::Domain("witness order must be positive".into()));
    }
    cfg.validate()?;
    let tol = T::from_f64(cfg.convergence_tol);
    let runs: Vec<RunOutcome<T>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = restart_rng(cfg.seed, restart);
            let states = (0..2 * k).map(|_| random_pure_state(d, &mut rng)).collect();
            let effects = (0..k).map(|_| random_effect(d, &mut rng)).collect();
            run_seesaw(d, states, effects, cfg.max_iterations, tol)
        })
        .collect();
    collect(d, runs)
}

/// See-saw ascent from a given strategy instead of random restarts; used
/// to polish hand-built constructions.
pub fn polish_quantum_strategy<T: Scalar>(
    strategy: &QuantumStrategy<T>,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T, QuantumStrategy<T>>> {
    let k = strategy.num_measurements();
    if strategy.num_preparations() != 2 * k {
        return Err(Error::Shape(format!(
            "see-saw needs 2k preparations for k = {k} measurements"
        )));
    }
    strategy.validate()?;
    let run = run_seesaw(
        strategy.dim(),
        strategy.states().to_vec(),
        strategy.effects().to_vec(),
        cfg.max_iterations,
        T::from_f64(cfg.convergence_tol),
    );
    collect(strategy.dim(), vec![run])
}
