//! Data model for prepare-and-measure experiments with binary outcomes.
//!
//! A [`Behavior`] is the observed table `p(b=0|x,y)`; strategies are the
//! models that may reproduce it: [`QuantumStrategy`] holds density matrices
//! and binary measurement effects, [`ClassicalStrategy`] holds message and
//! response distributions for devices without shared randomness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{GellMannBasis, HermitianMatrix, RealVector};
use crate::scalar::Scalar;

/// Observed table `p0[x][y] = p(b=0|x,y)` for `X` preparations and `Y`
/// binary measurements. `p(b=1|x,y)` is implied as `1 - p0[x][y]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Behavior<T: Scalar> {
    #[serde(rename = "preparations")]
    num_preparations: usize,
    #[serde(rename = "measurements")]
    num_measurements: usize,
    p0: Vec<Vec<T>>,
}

impl<T: Scalar> Behavior<T> {
    /// Builds from the `X x Y` table, validating entries lie in `[0, 1]`
    /// (tiny float drift is clamped).
    pub fn new(p0: Vec<Vec<T>>) -> Result<Self> {
        let x = p0.len();
        if x == 0 {
            return Err(Error::Shape(
                "behavior needs at least one preparation".into(),
            ));
        }
        let y = p0[0].len();
        if y == 0 || p0.iter().any(|row| row.len() != y) {
            return Err(Error::Shape("behavior rows must share one length".into()));
        }
        let slack = T::tight_tol();
        let mut table = p0;
        for row in &mut table {
            for v in row.iter_mut() {
                if *v < -slack || *v > T::one() + slack {
                    return Err(Error::Invariant(format!(
                        "probability {} outside [0, 1]",
                        v.to_f64()
                    )));
                }
                *v = v.max(T::zero()).min(T::one());
            }
        }
        Ok(Self {
            num_preparations: x,
            num_measurements: y,
            p0: table,
        })
    }

    pub fn num_preparations(&self) -> usize {
        self.num_preparations
    }

    pub fn num_measurements(&self) -> usize {
        self.num_measurements
    }

    pub fn p0(&self, x: usize, y: usize) -> T {
        self.p0[x][y]
    }

    pub fn table(&self) -> &[Vec<T>] {
        &self.p0
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Behavior<T> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw<T> {
            preparations: usize,
            measurements: usize,
            p0: Vec<Vec<T>>,
        }
        let raw = Raw::<T>::deserialize(deserializer)?;
        let behavior = Behavior::new(raw.p0).map_err(serde::de::Error::custom)?;
        if behavior.num_preparations != raw.preparations
            || behavior.num_measurements != raw.measurements
        {
            return Err(serde::de::Error::custom(
                "declared preparations/measurements do not match the p0 table",
            ));
        }
        Ok(behavior)
    }
}

/// `d`-dimensional quantum model: states `rho_x` and effects `M_{0|y}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumStrategy<T: Scalar> {
    dim: usize,
    states: Vec<HermitianMatrix<T>>,
    effects: Vec<HermitianMatrix<T>>,
}

impl<T: Scalar> QuantumStrategy<T> {
    /// Builds and validates: every state PSD with unit trace, every effect
    /// `M` with both `M` and `I - M` PSD, all on `C^dim`.
    pub fn new(
        dim: usize,
        states: Vec<HermitianMatrix<T>>,
        effects: Vec<HermitianMatrix<T>>,
    ) -> Result<Self> {
        let s = Self {
            dim,
            states,
            effects,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::operator_tol();
        if self.states.is_empty() || self.effects.is_empty() {
            return Err(Error::Shape("strategy needs states and effects".into()));
        }
        for (x, rho) in self.states.iter().enumerate() {
            if rho.dim() != self.dim {
                return Err(Error::Shape(format!("state {x} is not {0}x{0}", self.dim)));
            }
            if !rho.is_psd(tol) {
                return Err(Error::Invariant(format!("state {x} is not PSD")));
            }
            if (rho.trace() - T::one()).abs() > tol {
                return Err(Error::Invariant(format!("state {x} has trace != 1")));
            }
        }
        let id = HermitianMatrix::identity(self.dim);
        for (y, m) in self.effects.iter().enumerate() {
            if m.dim() != self.dim {
                return Err(Error::Shape(format!("effect {y} is not {0}x{0}", self.dim)));
            }
            if !m.is_psd(tol) {
                return Err(Error::Invariant(format!("effect {y} is not PSD")));
            }
            if !id.sub(m).is_psd(tol) {
                return Err(Error::Invariant(format!("effect {y} exceeds identity")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_preparations(&self) -> usize {
        self.states.len()
    }

    pub fn num_measurements(&self) -> usize {
        self.effects.len()
    }

    pub fn states(&self) -> &[HermitianMatrix<T>] {
        &self.states
    }

    pub fn effects(&self) -> &[HermitianMatrix<T>] {
        &self.effects
    }

    /// Evaluates `p(0|x,y) = Tr(rho_x M_{0|y})`.
    ///
    /// Values are clamped into `[0, 1]`; drift beyond [`Scalar::clamp_limit`]
    /// is an error rather than silently absorbed.
    pub fn to_behavior(&self) -> Result<Behavior<T>> {
        self.validate()?;
        let limit = T::clamp_limit();
        let mut table = Vec::with_capacity(self.states.len());
        for rho in &self.states {
            let mut row = Vec::with_capacity(self.effects.len());
            for m in &self.effects {
                let p = rho.trace_product(m);
                if p < -limit || p > T::one() + limit {
                    return Err(Error::Invariant(format!(
                        "Tr(rho M) = {} drifted past the clamp limit",
                        p.to_f64()
                    )));
                }
                row.push(p.max(T::zero()).min(T::one()));
            }
            table.push(row);
        }
        Behavior::new(table)
    }
}

/// `d`-message classical model without shared randomness:
/// `s[m][x] = s(m|x)` and `t0[m][y] = t(b=0|m,y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalStrategy<T: Scalar> {
    dim: usize,
    s: Vec<Vec<T>>,
    t0: Vec<Vec<T>>,
}

impl<T: Scalar> ClassicalStrategy<T> {
    pub fn new(dim: usize, s: Vec<Vec<T>>, t0: Vec<Vec<T>>) -> Result<Self> {
        let out = Self { dim, s, t0 };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::tight_tol();
        if self.s.len() != self.dim || self.t0.len() != self.dim {
            return Err(Error::Shape(format!(
                "message tables must have {} rows",
                self.dim
            )));
        }
        let x = self.s.first().map_or(0, Vec::len);
        let y = self.t0.first().map_or(0, Vec::len);
        if x == 0 || y == 0 {
            return Err(Error::Shape("empty strategy tables".into()));
        }
        if self.s.iter().any(|r| r.len() != x) || self.t0.iter().any(|r| r.len() != y) {
            return Err(Error::Shape("ragged strategy tables".into()));
        }
        for col in 0..x {
            let mut total = T::zero();
            for row in &self.s {
                let v = row[col];
                if v < -tol || v > T::one() + tol {
                    return Err(Error::Invariant("s(m|x) outside [0, 1]".into()));
                }
                total += v;
            }
            if (total - T::one()).abs() > tol {
                return Err(Error::Invariant(format!(
                    "message distribution for x={col} sums to {}",
                    total.to_f64()
                )));
            }
        }
        for row in &self.t0 {
            for &v in row {
                if v < -tol || v > T::one() + tol {
                    return Err(Error::Invariant("t(0|m,y) outside [0, 1]".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_preparations(&self) -> usize {
        self.s.first().map_or(0, Vec::len)
    }

    pub fn num_measurements(&self) -> usize {
        self.t0.first().map_or(0, Vec::len)
    }

    pub fn s(&self) -> &[Vec<T>] {
        &self.s
    }

    pub fn t0(&self) -> &[Vec<T>] {
        &self.t0
    }

    /// Evaluates `p(0|x,y) = sum_m s(m|x) t(0|m,y)`.
    pub fn to_behavior(&self) -> Result<Behavior<T>> {
        self.validate()?;
        let x_count = self.num_preparations();
        let y_count = self.num_measurements();
        let mut table = vec![vec![T::zero(); y_count]; x_count];
        for m in 0..self.dim {
            for x in 0..x_count {
                let weight = self.s[m][x];
                if weight == T::zero() {
                    continue;
                }
                for y in 0..y_count {
                    table[x][y] += weight * self.t0[m][y];
                }
            }
        }
        Behavior::new(table)
    }
}

/// State from a generalised Bloch vector: `(I + phi_d v.lambda) / d`.
///
/// Requires `|v| <= 1`. Positivity is guaranteed only well inside the unit
/// ball; callers must check PSD themselves for large `|v|`.
pub fn bloch_to_state<T: Scalar>(
    v: &RealVector<T>,
    basis: &GellMannBasis<T>,
) -> Result<HermitianMatrix<T>> {
    if v.len() != basis.len() {
        return Err(Error::Shape(format!(
            "Bloch vector length {} != d^2 - 1 = {}",
            v.len(),
            basis.len()
        )));
    }
    let norm = v.norm();
    if norm > T::one() + T::tight_tol() {
        return Err(Error::Domain(format!(
            "Bloch vector norm {} exceeds 1",
            norm.to_f64()
        )));
    }
    let d = T::from_f64(basis.dim() as f64);
    let mut m = HermitianMatrix::identity(basis.dim()).scaled(T::one() / d);
    m.add_scaled(basis.phi() / d, &basis.combine(v));
    Ok(m)
}

/// Effect from an offset and a direction: `c I + (phi_d / d) v.lambda`.
///
/// Requires `|c| <= 1` and `|v| <= 1`; validity `0 <= M <= I` is a separate
/// PSD check.
pub fn vector_to_effect<T: Scalar>(
    c: T,
    v: &RealVector<T>,
    basis: &GellMannBasis<T>,
) -> Result<HermitianMatrix<T>> {
    if v.len() != basis.len() {
        return Err(Error::Shape(format!(
            "direction length {} != d^2 - 1 = {}",
            v.len(),
            basis.len()
        )));
    }
    let slack = T::tight_tol();
    if c.abs() > T::one() + slack {
        return Err(Error::Domain(format!(
            "offset |c| = {} exceeds 1",
            c.to_f64()
        )));
    }
    let norm = v.norm();
    if norm > T::one() + slack {
        return Err(Error::Domain(format!(
            "direction norm {} exceeds 1",
            norm.to_f64()
        )));
    }
    let d = T::from_f64(basis.dim() as f64);
    let mut m = HermitianMatrix::identity(basis.dim()).scaled(c);
    m.add_scaled(basis.phi() / d, &basis.combine(v));
    Ok(m)
}

/// Mixes preparation-independent noise into a behavior:
/// `p(x,y) = eta p_Q(x,y) + (1 - eta) p_N(y)`.
pub fn apply_noise<T: Scalar>(
    behavior: &Behavior<T>,
    eta: T,
    p_noise: &[T],
) -> Result<Behavior<T>> {
    if eta < T::zero() || eta > T::one() {
        return Err(Error::Domain(format!(
            "eta = {} outside [0, 1]",
            eta.to_f64()
        )));
    }
    if p_noise.len() != behavior.num_measurements() {
        return Err(Error::Shape(format!(
            "noise vector length {} != {} measurements",
            p_noise.len(),
            behavior.num_measurements()
        )));
    }
    if p_noise.iter().any(|&p| p < T::zero() || p > T::one()) {
        return Err(Error::Domain("noise probabilities outside [0, 1]".into()));
    }
    let one_minus = T::one() - eta;
    let table = behavior
        .table()
        .iter()
        .map(|row| {
            row.iter()
                .zip(p_noise)
                .map(|(&p, &n)| eta * p + one_minus * n)
                .collect()
        })
        .collect();
    Behavior::new(table)
}
