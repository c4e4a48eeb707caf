//! Maximal average guessing probability compatible with a fixed witness
//! value, over qubit strategies.
//!
//! The equality constraint `|det W_2| = Q` is handled by an exterior
//! quadratic penalty with escalating weight; the inner solver is a compass
//! (coordinate pattern) search over a bounded parametrisation: Bloch
//! angles for four pure preparations, and `(offset, radius, direction)`
//! per effect with the radius expressed as a fraction of the largest
//! valid one, so every visited point is a valid strategy.

use rayon::prelude::*;

use crate::constructions::{qubit_effect, qubit_state};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::QuantumStrategy;

use super::{restart_rng, OptimizationResult, OptimizerConfig};

/// Largest accepted violation of `| |det W_2| - Q |`.
pub const RESIDUAL_TOL: f64 = 1e-4;

// Near Q = 1 the feasible gain in p_bar grows like sqrt of the constraint
// violation, so the stationary violation of the penalised problem is
// (1/mu)^(2/3); weights up to 1e8 push it well under RESIDUAL_TOL.
const PENALTIES: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e6, 1e8];
const N_PARAMS: usize = 16;

/// Parameter vector layout: four states as (theta, phi), then two effects
/// as (offset c, radius fraction r, theta, phi).
#[derive(Clone)]
struct Params([f64; N_PARAMS]);

impl Params {
    fn state_bloch(&self, x: usize) -> [f64; 3] {
        let theta = self.0[2 * x];
        let phi = self.0[2 * x + 1];
        [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ]
    }

    fn effect(&self, y: usize) -> (f64, [f64; 3]) {
        let base = 8 + 4 * y;
        let c = self.0[base].clamp(0.0, 1.0);
        let frac = self.0[base + 1].clamp(0.0, 1.0);
        let theta = self.0[base + 2];
        let phi = self.0[base + 3];
        let radius = frac * 2.0 * c.min(1.0 - c);
        (
            c,
            [
                radius * theta.sin() * phi.cos(),
                radius * theta.sin() * phi.sin(),
                radius * theta.cos(),
            ],
        )
    }

    fn clamp_boxes(&mut self) {
        for y in 0..2 {
            let base = 8 + 4 * y;
            self.0[base] = self.0[base].clamp(0.0, 1.0);
            self.0[base + 1] = self.0[base + 1].clamp(0.0, 1.0);
        }
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `(p_bar, |det W_2|)` for the strategy the parameters encode.
fn evaluate(params: &Params) -> (f64, f64) {
    let states: Vec<[f64; 3]> = (0..4).map(|x| params.state_bloch(x)).collect();
    let effects: Vec<(f64, [f64; 3])> = (0..2).map(|y| params.effect(y)).collect();

    let p = |x: usize, y: usize| -> f64 {
        let (c, t) = effects[y];
        c + dot(states[x], t) / 2.0
    };

    let mut p_bar = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            let v = p(x, y);
            p_bar += v.max(1.0 - v);
        }
    }
    p_bar /= 4.0;

    let row0 = (p(0, 0) - p(1, 0), p(2, 0) - p(3, 0));
    let row1 = (p(0, 1) - p(1, 1), p(2, 1) - p(3, 1));
    let det = row0.0 * row1.1 - row0.1 * row1.0;
    (p_bar, det.abs())
}

fn penalised(params: &Params, q: f64, mu: f64) -> f64 {
    let (p_bar, witness) = evaluate(params);
    p_bar - mu * (witness - q) * (witness - q)
}

/// Greedy compass search; shrinks the step when a full sweep fails.
/// Returns the pass count.
fn compass_search(
    params: &mut Params,
    q: f64,
    mu: f64,
    mut step: f64,
    min_step: f64,
    max_passes: usize,
) -> usize {
    let mut current = penalised(params, q, mu);
    let mut passes = 0;
    while step >= min_step && passes < max_passes {
        passes += 1;
        let mut improved = false;
        for coord in 0..N_PARAMS {
            for delta in [step, -step] {
                let mut trial = params.clone();
                trial.0[coord] += delta;
                trial.clamp_boxes();
                let value = penalised(&trial, q, mu);
                if value > current {
                    *params = trial;
                    current = value;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    passes
}

/// Feasible start on the constraint manifold: preparations along +-z and
/// +-x, unit measurement vectors at angle asin(Q) of each other, symmetric
/// about z. Gives |det W_2| = Q exactly.
fn warm_start(q: f64) -> Params {
    let gamma = q.min(1.0).asin();
    let half = gamma / 2.0;
    let pi = std::f64::consts::PI;
    Params([
        0.0,
        0.0, // +z
        pi,
        0.0, // -z
        pi / 2.0,
        0.0, // +x
        pi / 2.0,
        pi, // -x
        0.5,
        1.0,
        half,
        0.0, // T_0 at +gamma/2 in the x-z plane
        0.5,
        1.0,
        half,
        pi, // T_1 mirrored
    ])
}

fn random_start(rng: &mut impl rand::Rng) -> Params {
    let pi = std::f64::consts::PI;
    let mut p = [0.0f64; N_PARAMS];
    for x in 0..4 {
        p[2 * x] = rng.gen_range(0.0..pi);
        p[2 * x + 1] = rng.gen_range(0.0..2.0 * pi);
    }
    for y in 0..2 {
        let base = 8 + 4 * y;
        p[base] = rng.gen_range(0.25..0.75);
        p[base + 1] = rng.gen_range(0.0..1.0);
        p[base + 2] = rng.gen_range(0.0..pi);
        p[base + 3] = rng.gen_range(0.0..2.0 * pi);
    }
    Params(p)
}

fn strategy_from<T: Scalar>(params: &Params) -> QuantumStrategy<T> {
    let states = (0..4)
        .map(|x| {
            let [bx, by, bz] = params.state_bloch(x);
            qubit_state([T::from_f64(bx), T::from_f64(by), T::from_f64(bz)])
        })
        .collect();
    let effects = (0..2)
        .map(|y| {
            let (c, [tx, ty, tz]) = params.effect(y);
            qubit_effect(
                T::from_f64(c),
                [T::from_f64(tx), T::from_f64(ty), T::from_f64(tz)],
            )
        })
        .collect();
    QuantumStrategy::new(2, states, effects).expect("parametrised operators are valid")
}

/// Maximises the average guessing probability over qubit strategies whose
/// order-2 witness value equals `q`, within [`RESIDUAL_TOL`].
///
/// Restart 0 starts from a known feasible point on the constraint
/// manifold; the remaining restarts are random.
pub fn maximize_guessing_probability<T: Scalar>(
    q: T,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T, QuantumStrategy<T>>> {
    let q = q.to_f64();
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!(
            "witness target must lie in (0, 1], got {q}"
        )));
    }
    cfg.validate()?;

    struct Run {
        p_bar: f64,
        witness: f64,
        params: Params,
        passes: usize,
    }

    let max_passes = cfg.max_iterations.max(50);
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut params = if restart == 0 {
                warm_start(q)
            } else {
                let mut rng = restart_rng(cfg.seed, restart);
                random_start(&mut rng)
            };
            let mut passes = 0;
            for (round, &mu) in PENALTIES.iter().enumerate() {
                let step = 0.3 / (1 << round) as f64;
                passes += compass_search(&mut params, q, mu, step, 1e-7, max_passes);
            }
            let (p_bar, witness) = evaluate(&params);
            Run {
                p_bar,
                witness,
                params,
                passes,
            }
        })
        .collect();

    let feasible = |run: &Run| (run.witness - q).abs() <= RESIDUAL_TOL;
    let mut best: Option<usize> = None;
    for (idx, run) in runs.iter().enumerate() {
        if feasible(run) && best.is_none_or(|b| run.p_bar > runs[b].p_bar) {
            best = Some(idx);
        }
    }
    let best = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no restart met the witness constraint |W_2| = {q} within {RESIDUAL_TOL}"
        ))
    })?;

    Ok(OptimizationResult {
        best_value: T::from_f64(runs[best].p_bar),
        best_strategy: strategy_from(&runs[best].params),
        iterations_used: runs.iter().map(|r| r.passes).sum(),
        converged: true,
        restart_values: runs.iter().map(|r| T::from_f64(r.p_bar)).collect(),
    })
}
