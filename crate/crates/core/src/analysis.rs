//! Randomness quantification and the classical-bit decomposition finder.
//!
//! [`guessing_probability`] and [`min_entropy`] turn a behavior into
//! certifiable random bits; [`randomness_curve`] traces the trade-off
//! between witness violation and guessing probability;
//! [`find_bit_decomposition`] decides constructively whether a behavior
//! admits an independent-devices model with a single bit of communication.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::optimize::{maximize_guessing_probability, OptimizerConfig};
use crate::scalar::{c_re, Scalar};
use crate::scenario::{Behavior, ClassicalStrategy};

/// Default rank tolerance for the decomposition finder.
pub const RANK_TOL: f64 = 1e-7;

/// One point of the certifiable-randomness curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomnessPoint<T: Scalar> {
    #[serde(rename = "Q")]
    pub q: T,
    pub p_bar: T,
    pub h_min: T,
}

/// Raw and monotonised curve points, plus any grid values whose
/// constrained optimisation failed.
#[derive(Debug, Clone, Serialize)]
pub struct RandomnessCurve<T: Scalar> {
    /// Monotonised points: `p_bar` nonincreasing, `h_min` nondecreasing.
    pub points: Vec<RandomnessPoint<T>>,
    /// Per-point optimiser output before monotonisation.
    pub raw: Vec<RandomnessPoint<T>>,
    /// Grid values where no restart satisfied the witness constraint.
    pub failed: Vec<T>,
}

/// Average guessing probability over the first two preparations and
/// measurements: `(1/4) sum_{x,y<2} max(p, 1-p)`.
pub fn guessing_probability<T: Scalar>(behavior: &Behavior<T>) -> Result<T> {
    if behavior.num_preparations() < 2 || behavior.num_measurements() < 2 {
        return Err(Error::Shape(
            "guessing probability needs at least 2 preparations and 2 measurements".into(),
        ));
    }
    let mut total = T::zero();
    for x in 0..2 {
        for y in 0..2 {
            let p = behavior.p0(x, y);
            total += p.max(T::one() - p);
        }
    }
    Ok(total / T::from_f64(4.0))
}

/// Min-entropy of a guessing probability: `-log2(p_bar)` bits.
pub fn min_entropy<T: Scalar>(p_bar: T) -> Result<T> {
    let slack = T::tight_tol();
    let half = T::from_f64(0.5);
    if p_bar < half - slack || p_bar > T::one() + slack {
        return Err(Error::Domain(format!(
            "guessing probability {} outside [1/2, 1]",
            p_bar.to_f64()
        )));
    }
    Ok(-p_bar.min(T::one()).max(half).log2())
}

/// Traces `H_min` against the witness value over an ascending grid in
/// `(0, 1]`.
///
/// Per-point failures are collected rather than fatal; the monotone curve
/// is computed over the successful points (the feasible set only shrinks
/// as the witness constraint grows, so `p_bar` must be nonincreasing — raw
/// values are kept alongside for transparency).
pub fn randomness_curve<T: Scalar>(
    q_grid: &[T],
    cfg: &OptimizerConfig,
) -> Result<RandomnessCurve<T>> {
    if q_grid.is_empty() {
        return Err(Error::Domain("empty witness grid".into()));
    }
    for pair in q_grid.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::Domain(
                "witness grid must be strictly ascending".into(),
            ));
        }
    }
    if q_grid.iter().any(|&q| q <= T::zero() || q > T::one()) {
        return Err(Error::Domain(
            "witness grid values must lie in (0, 1]".into(),
        ));
    }

    let outcomes: Vec<(T, Option<T>)> = q_grid
        .par_iter()
        .map(|&q| {
            let p_bar = maximize_guessing_probability::<T>(q, cfg)
                .ok()
                .map(|r| r.best_value);
            (q, p_bar)
        })
        .collect();

    let mut raw = Vec::new();
    let mut failed = Vec::new();
    for (q, p_bar) in &outcomes {
        match p_bar {
            Some(p) => raw.push(RandomnessPoint {
                q: *q,
                p_bar: *p,
                h_min: min_entropy(*p)?,
            }),
            None => failed.push(*q),
        }
    }

    let mut points = raw.clone();
    for i in (0..points.len().saturating_sub(1)).rev() {
        let successor = points[i + 1].p_bar;
        if points[i].p_bar < successor {
            points[i].p_bar = successor;
        }
        points[i].h_min = min_entropy(points[i].p_bar)?;
    }

    Ok(RandomnessCurve {
        points,
        raw,
        failed,
    })
}

/// Outcome of the bit-decomposition search.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionResult<T: Scalar> {
    pub found: bool,
    /// The explicit two-message model, when one exists.
    pub strategy: Option<ClassicalStrategy<T>>,
    /// Reconstruction error of the returned strategy; when no strategy is
    /// returned, the defect that blocked it (the second singular value of
    /// the difference matrix, or its scale when no valid probability
    /// assignment exists).
    pub residual: T,
}

/// Largest singular value, second singular value and top right-singular
/// vector of a small real matrix, via the eigendecomposition of `D^T D`.
fn singular_data<T: Scalar>(d_table: &[Vec<T>]) -> (T, T, Vec<T>) {
    let rows = d_table.len();
    let cols = d_table[0].len();
    let mut gram = vec![c_re(T::zero()); cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = T::zero();
            for row in d_table.iter().take(rows) {
                acc += row[i] * row[j];
            }
            gram[i * cols + j] = c_re(acc);
        }
    }
    let gram = HermitianMatrix::from_entries(cols, gram).expect("Gram matrix is symmetric");
    let eig = gram.eigendecomposition();
    let sigma1 = eig.max().max(T::zero()).sqrt();
    let sigma2 = if cols >= 2 {
        eig.values[cols - 2].max(T::zero()).sqrt()
    } else {
        T::zero()
    };
    let top: Vec<T> = eig.max_vector().iter().map(|z| z.re).collect();
    (sigma1, sigma2, top)
}

struct HalfPlane<T> {
    a: T,
    b: T,
    c: T,
}

impl<T: Scalar> HalfPlane<T> {
    fn holds(&self, alpha: T, beta: T, slack: T) -> bool {
        self.a * alpha + self.b * beta + self.c >= -slack
    }
}

/// Feasible point (vertex centroid) of `a alpha + b beta + c >= 0` for all
/// constraints, or None.
fn feasible_point<T: Scalar>(constraints: &[HalfPlane<T>]) -> Option<(T, T)> {
    let slack = T::operator_tol();
    let parallel_tol = T::from_f64(1e-13).max(T::epsilon() * T::from_f64(16.0));
    let mut sum_alpha = T::zero();
    let mut sum_beta = T::zero();
    let mut count = 0usize;
    for (i, ci) in constraints.iter().enumerate() {
        for cj in constraints.iter().skip(i + 1) {
            let det = ci.a * cj.b - cj.a * ci.b;
            if det.abs() <= parallel_tol {
                continue;
            }
            let alpha = (-ci.c * cj.b + cj.c * ci.b) / det;
            let beta = (-ci.a * cj.c + cj.a * ci.c) / det;
            if constraints.iter().all(|h| h.holds(alpha, beta, slack)) {
                sum_alpha += alpha;
                sum_beta += beta;
                count += 1;
            }
        }
    }
    if count == 0 {
        return None;
    }
    let n = T::from_f64(count as f64);
    Some((sum_alpha / n, sum_beta / n))
}

fn clamp01<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

fn reconstruction_residual<T: Scalar>(
    behavior: &Behavior<T>,
    strategy: &ClassicalStrategy<T>,
) -> T {
    let reconstructed = strategy
        .to_behavior()
        .expect("constructed strategy is valid");
    let mut worst = T::zero();
    for x in 0..behavior.num_preparations() {
        for y in 0..behavior.num_measurements() {
            worst = worst.max((behavior.p0(x, y) - reconstructed.p0(x, y)).abs());
        }
    }
    worst
}

/// Searches for an independent-devices model with two messages
/// reproducing `behavior` within `tol`.
///
/// For such a model `p(x,y) = s_x T_y + t_y`, so the row-difference matrix
/// `D(x,y) = p(x,y) - p(0,y)` must have rank one; the remaining freedom is
/// a two-parameter affine reparametrisation `(alpha, beta)` constrained to
/// keep all probabilities in `[0, 1]`, a half-plane intersection solved
/// exactly by vertex enumeration. Never errors: infeasibility is reported
/// through `found = false`.
pub fn find_bit_decomposition<T: Scalar>(behavior: &Behavior<T>, tol: T) -> DecompositionResult<T> {
    let x_count = behavior.num_preparations();
    let y_count = behavior.num_measurements();
    let d_table: Vec<Vec<T>> = (0..x_count)
        .map(|x| {
            (0..y_count)
                .map(|y| behavior.p0(x, y) - behavior.p0(0, y))
                .collect()
        })
        .collect();
    let (sigma1, sigma2, top) = singular_data(&d_table);

    if sigma2 > tol {
        return DecompositionResult {
            found: false,
            strategy: None,
            residual: sigma2,
        };
    }

    if sigma1 <= tol {
        // Preparation-independent behavior: any message distribution with
        // a constant response reproduces it.
        let half = T::from_f64(0.5);
        let s = vec![vec![half; x_count]; 2];
        let t_row: Vec<T> = (0..y_count).map(|y| behavior.p0(0, y)).collect();
        let strategy = ClassicalStrategy::new(2, s, vec![t_row.clone(), t_row])
            .expect("constant strategy is valid");
        let residual = reconstruction_residual(behavior, &strategy);
        return DecompositionResult {
            found: residual <= tol,
            strategy: Some(strategy),
            residual,
        };
    }

    // Rank-one factor D = a b^T with a_0 = 0 and max |a_x| = 1.
    let mut a: Vec<T> = d_table
        .iter()
        .map(|row| row.iter().zip(&top).map(|(&d, &v)| d * v).sum())
        .collect();
    let amax = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if amax <= T::from_f64(1e-300) {
        return DecompositionResult {
            found: false,
            strategy: None,
            residual: sigma1,
        };
    }
    for x in a.iter_mut() {
        *x /= amax;
    }
    let b: Vec<T> = top.iter().map(|&v| v * amax).collect();

    let mut best: Option<(ClassicalStrategy<T>, T)> = None;
    for flip in [T::one(), -T::one()] {
        let a_signed: Vec<T> = a.iter().map(|&x| x * flip).collect();
        let b_signed: Vec<T> = b.iter().map(|&x| x * flip).collect();

        let mut constraints = vec![HalfPlane {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
        }];
        for &ax in &a_signed {
            constraints.push(HalfPlane {
                a: ax,
                b: T::one(),
                c: T::zero(),
            });
            constraints.push(HalfPlane {
                a: -ax,
                b: -T::one(),
                c: T::one(),
            });
        }
        for y in 0..y_count {
            let p0y = behavior.p0(0, y);
            let by = b_signed[y];
            // 0 <= t(0|1,y) <= 1
            constraints.push(HalfPlane {
                a: p0y,
                b: -by,
                c: T::zero(),
            });
            constraints.push(HalfPlane {
                a: T::one() - p0y,
                b: by,
                c: T::zero(),
            });
            // 0 <= t(0|0,y) <= 1
            constraints.push(HalfPlane {
                a: p0y,
                b: -by,
                c: by,
            });
            constraints.push(HalfPlane {
                a: T::one() - p0y,
                b: by,
                c: -by,
            });
        }

        let Some((alpha, beta)) = feasible_point(&constraints) else {
            continue;
        };
        if alpha <= T::from_f64(1e-12) {
            continue;
        }

        let s_row: Vec<T> = a_signed
            .iter()
            .map(|&ax| clamp01(alpha * ax + beta))
            .collect();
        let s_complement: Vec<T> = s_row.iter().map(|&v| T::one() - v).collect();
        let mut t0_row = Vec::with_capacity(y_count);
        let mut t1_row = Vec::with_capacity(y_count);
        for y in 0..y_count {
            let t_step = b_signed[y] / alpha;
            let t1 = clamp01(behavior.p0(0, y) - beta * t_step);
            t0_row.push(clamp01(t1 + t_step));
            t1_row.push(t1);
        }
        let Ok(strategy) =
            ClassicalStrategy::new(2, vec![s_row, s_complement], vec![t0_row, t1_row])
        else {
            continue;
        };
        let residual = reconstruction_residual(behavior, &strategy);
        if best.as_ref().is_none_or(|(_, r)| residual < *r) {
            best = Some((strategy, residual));
        }
    }

    match best {
        Some((strategy, residual)) if residual <= tol => DecompositionResult {
            found: true,
            strategy: Some(strategy),
            residual,
        },
        Some((_, residual)) => DecompositionResult {
            found: false,
            strategy: None,
            residual,
        },
        None => DecompositionResult {
            found: false,
            strategy: None,
            residual: sigma1.min(T::one()),
        },
    }
}
