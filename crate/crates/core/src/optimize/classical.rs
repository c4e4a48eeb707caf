//! Classical witness maximisation: exhaustive vertex enumeration for small
//! instances and vertex-jumping see-saw for larger ones.
//!
//! `det W` is multilinear in the message distribution of each preparation
//! and in each response row, so the maximum of `|det W|` over the product
//! of simplices is attained at deterministic strategies. Brute force
//! enumerates them; the see-saw walks between them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::scalar::Scalar;
use crate::scenario::ClassicalStrategy;

use super::{
    cofactor, random_classical_strategy, restart_rng, OptimizationResult, OptimizerConfig,
};

/// Enumeration guard: d^(2k) message assignments times 2^(dk) response
/// tables must not exceed this.
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

fn strategy_from_deterministic<T: Scalar>(
    d: usize,
    k: usize,
    messages: &[usize],
    responses: u64,
) -> ClassicalStrategy<T> {
    let mut s = vec![vec![T::zero(); 2 * k]; d];
    for (x, &m) in messages.iter().enumerate() {
        s[m][x] = T::one();
    }
    let mut t0 = vec![vec![T::zero(); k]; d];
    for m in 0..d {
        for y in 0..k {
            if responses >> (m * k + y) & 1 == 1 {
                t0[m][y] = T::one();
            }
        }
    }
    ClassicalStrategy::new(d, s, t0).expect("deterministic strategy is valid")
}

/// Exact maximum of the order-`k` witness over `d`-message classical
/// strategies, by exhausting all deterministic ones.
pub fn maximize_witness_classical_bruteforce<T: Scalar>(
    d: usize,
    k: usize,
) -> Result<OptimizationResult<T, ClassicalStrategy<T>>> {
    if d < 1 || k < 1 {
        return Err(Error::Domain("need d >= 1 and k >= 1".into()));
    }
    let assignments = (d as f64).powi(2 * k as i32);
    let tables = 2f64.powi((d * k) as i32);
    if assignments * tables > BRUTE_FORCE_LIMIT {
        return Err(Error::Infeasible(format!(
            "brute force would enumerate {:.3e} strategies (limit {:.0e})",
            assignments * tables,
            BRUTE_FORCE_LIMIT
        )));
    }

    let table_count = 1u64 << (d * k);
    let mut best_value = -T::one();
    let mut best: Option<(Vec<usize>, u64)> = None;
    let mut messages = vec![0usize; 2 * k];
    let mut enumerated = 0usize;
    let mut w = vec![vec![T::zero(); k]; k];

    loop {
        for responses in 0..table_count {
            for i in 0..k {
                for j in 0..k {
                    let hi = responses >> (messages[2 * j] * k + i) & 1;
                    let lo = responses >> (messages[2 * j + 1] * k + i) & 1;
                    w[i][j] = T::from_f64(hi as f64 - lo as f64);
                }
            }
            let value = determinant(&w).abs();
            enumerated += 1;
            if value > best_value {
                best_value = value;
                best = Some((messages.clone(), responses));
            }
        }
        // Next message assignment (base-d counter).
        let mut pos = 0;
        loop {
            if pos == messages.len() {
                let (m, r) = best.expect("at least one strategy enumerated");
                let best_strategy = strategy_from_deterministic(d, k, &m, r);
                return Ok(OptimizationResult {
                    best_value,
                    best_strategy,
                    iterations_used: enumerated,
                    converged: true,
                    restart_values: vec![best_value],
                });
            }
            messages[pos] += 1;
            if messages[pos] < d {
                break;
            }
            messages[pos] = 0;
            pos += 1;
        }
    }
}

struct ClassicalSeeSaw<T: Scalar> {
    d: usize,
    k: usize,
    s: Vec<Vec<T>>,
    t0: Vec<Vec<T>>,
    w: Vec<Vec<T>>,
}

impl<T: Scalar> ClassicalSeeSaw<T> {
    fn new(d: usize, k: usize, s: Vec<Vec<T>>, t0: Vec<Vec<T>>) -> Self {
        let mut solver = Self {
            d,
            k,
            s,
            t0,
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
        (0..self.d)
            .map(|m| (self.s[m][2 * j] - self.s[m][2 * j + 1]) * self.t0[m][i])
            .sum()
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

    /// Vertex update of one preparation's message distribution. The
    /// objective is linear in `s(.|x)`, so the best vertex is the message
    /// with the largest coefficient (lowest index on ties).
    fn update_preparation(&mut self, x: usize) {
        let j = x / 2;
        let parity = if x.is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        let sign = self.sign();
        let mut best_m = 0;
        let mut best_coef = T::neg_infinity();
        for m in 0..self.d {
            let coef: T = (0..self.k)
                .map(|i| cofactor(&self.w, i, j) * self.t0[m][i])
                .sum();
            let directed = sign * parity * coef;
            if directed > best_coef {
                best_coef = directed;
                best_m = m;
            }
        }
        for m in 0..self.d {
            self.s[m][x] = if m == best_m { T::one() } else { T::zero() };
        }
        for i in 0..self.k {
            self.w[i][j] = self.entry(i, j);
        }
    }

    /// Vertex update of one response row: each `t(0|m,y)` has a linear
    /// coefficient; set it to 1 exactly when that coefficient is positive.
    fn update_response(&mut self, y: usize) {
        let sign = self.sign();
        for m in 0..self.d {
            let coef: T = (0..self.k)
                .map(|j| cofactor(&self.w, y, j) * (self.s[m][2 * j] - self.s[m][2 * j + 1]))
                .sum();
            self.t0[m][y] = if sign * coef > T::zero() {
                T::one()
            } else {
                T::zero()
            };
        }
        for j in 0..self.k {
            self.w[y][j] = self.entry(y, j);
        }
    }

    fn pass(&mut self) -> T {
        for x in 0..2 * self.k {
            let before = self.det().abs();
            self.update_preparation(x);
            debug_assert!(self.det().abs() >= before - T::tight_tol());
        }
        for y in 0..self.k {
            let before = self.det().abs();
            self.update_response(y);
            debug_assert!(self.det().abs() >= before - T::tight_tol());
        }
        self.det().abs()
    }
}

/// Multistart vertex see-saw over classical strategies; scales past the
/// brute-force guard. Initial points are random mixed strategies, after
/// which every update lands on a vertex.
pub fn maximize_witness_classical_seesaw<T: Scalar>(
    d: usize,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T, ClassicalStrategy<T>>> {
    if d < 2 {
        return Err(Error::Domain("need at least two messages".into()));
    }
    if k < 1 {
        return Err(Error::Domain("witness order must be positive".into()));
    }
    cfg.validate()?;
    let tol = T::from_f64(cfg.convergence_tol);

    struct Run<T: Scalar> {
        value: T,
        s: Vec<Vec<T>>,
        t0: Vec<Vec<T>>,
        iterations: usize,
        converged: bool,
    }

    let runs: Vec<Run<T>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = restart_rng(cfg.seed, restart);
            let start = random_classical_strategy::<T>(d, 2 * k, k, &mut rng);
            let mut solver = ClassicalSeeSaw::new(d, k, start.s().to_vec(), start.t0().to_vec());
            let mut current = solver.det().abs();
            let mut converged = false;
            let mut iterations = 0;
            for _ in 0..cfg.max_iterations {
                let next = solver.pass();
                iterations += 1;
                if next - current < tol {
                    converged = true;
                    current = current.max(next);
                    break;
                }
                current = next;
            }
            Run {
                value: current,
                s: solver.s,
                t0: solver.t0,
                iterations,
                converged,
            }
        })
        .collect();

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
    let best_strategy = ClassicalStrategy::new(d, winner.s, winner.t0)?;
    Ok(OptimizationResult {
        best_value,
        best_strategy,
        iterations_used,
        converged,
        restart_values,
    })
}
