//! The determinant witness: build the difference matrix of a behavior,
//! take `|det|`, and optionally scan preparation pairings.
//!
//! For a behavior with `2k` preparations and `k` binary measurements the
//! witness matrix is `W(i,j) = p(2j, i) - p(2j+1, i)`; the witness value is
//! `|det W|`. It vanishes for classical strategies of dimension `d <= k`
//! and for quantum strategies of dimension `d <= sqrt(k)`, provided the
//! devices share no randomness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::scalar::Scalar;
use crate::scenario::Behavior;

/// Absolute threshold under which a witness value is treated as null.
pub const NULL_TOL: f64 = 1e-9;

/// Witness matrix, signed determinant, absolute value, and (for the 4x2
/// scenario) the maximum over preparation pairings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport<T: Scalar> {
    pub k: usize,
    pub matrix: Vec<Vec<T>>,
    #[serde(rename = "det")]
    pub signed_det: T,
    pub value: T,
    pub relabeling_max: Option<T>,
}

fn check_shape<T: Scalar>(behavior: &Behavior<T>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("witness order k must be positive".into()));
    }
    if behavior.num_preparations() != 2 * k || behavior.num_measurements() != k {
        return Err(Error::Shape(format!(
            "witness of order {k} needs {} preparations and {k} measurements, got {} and {}",
            2 * k,
            behavior.num_preparations(),
            behavior.num_measurements()
        )));
    }
    Ok(())
}

/// The `k x k` matrix `W(i,j) = p(2j, i) - p(2j+1, i)`.
pub fn witness_matrix<T: Scalar>(behavior: &Behavior<T>, k: usize) -> Result<Vec<Vec<T>>> {
    check_shape(behavior, k)?;
    Ok((0..k)
        .map(|i| {
            (0..k)
                .map(|j| behavior.p0(2 * j, i) - behavior.p0(2 * j + 1, i))
                .collect()
        })
        .collect())
}

/// Witness matrix plus its signed determinant and absolute value.
pub fn witness_value<T: Scalar>(behavior: &Behavior<T>, k: usize) -> Result<WitnessReport<T>> {
    let matrix = witness_matrix(behavior, k)?;
    let signed_det = determinant(&matrix);
    Ok(WitnessReport {
        k,
        matrix,
        signed_det,
        value: signed_det.abs(),
        relabeling_max: None,
    })
}

/// The three partitions of `{0,1,2,3}` into two ordered difference pairs.
///
/// Within-pair swaps and swapping the two pairs only flip the sign of the
/// determinant, so these partitions exhaust the distinct `|det|` values
/// over all 24 preparation permutations.
pub const PAIRINGS: [[(usize, usize); 2]; 3] =
    [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

fn paired_det<T: Scalar>(behavior: &Behavior<T>, pairing: &[(usize, usize); 2]) -> T {
    let m: Vec<Vec<T>> = (0..2)
        .map(|i| {
            pairing
                .iter()
                .map(|&(a, b)| behavior.p0(a, i) - behavior.p0(b, i))
                .collect()
        })
        .collect();
    determinant(&m)
}

/// Evaluates `|det W_2|` for all three preparation pairings of a 4x2
/// behavior and reports the maximum, keeping the canonical pairing's
/// matrix in the report.
pub fn witness_relabeling_scan<T: Scalar>(behavior: &Behavior<T>) -> Result<WitnessReport<T>> {
    if behavior.num_preparations() != 4 || behavior.num_measurements() != 2 {
        return Err(Error::Shape(format!(
            "relabeling scan needs a 4x2 behavior, got {}x{}",
            behavior.num_preparations(),
            behavior.num_measurements()
        )));
    }
    let mut report = witness_value(behavior, 2)?;
    let max = PAIRINGS
        .iter()
        .map(|pairing| paired_det(behavior, pairing).abs())
        .fold(T::zero(), T::max);
    report.relabeling_max = Some(max);
    Ok(report)
}
