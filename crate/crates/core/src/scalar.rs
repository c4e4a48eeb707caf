//! Floating-point abstraction used by every numeric type in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign, NumCast};

/// Real scalar the whole crate is generic over.
///
/// `f64` is the type every tolerance in this crate was calibrated for;
/// `f32` works for exploratory runs but the documented tolerances do not
/// all hold there.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Conversion from `f64`, used for constants, tolerances and RNG output.
    fn from_f64(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("finite f64 converts into any Scalar")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("Scalar converts into f64")
    }

    /// Tolerance for exact structural identities (Hermiticity, column
    /// stochasticity, Bloch-norm bounds): 1e-12 in f64.
    fn tight_tol() -> Self;

    /// Tolerance for operator validity (PSD checks, unit traces, effect
    /// bounds): 1e-9 in f64.
    fn operator_tol() -> Self;

    /// Largest out-of-range drift the quantum evaluation clamps away
    /// before declaring a strategy broken: 1e-6 in f64.
    fn clamp_limit() -> Self;
}

impl Scalar for f32 {
    fn tight_tol() -> Self {
        1e-5
    }

    fn operator_tol() -> Self {
        1e-4
    }

    fn clamp_limit() -> Self {
        3e-3
    }
}

impl Scalar for f64 {
    fn tight_tol() -> Self {
        1e-12
    }

    fn operator_tol() -> Self {
        1e-9
    }

    fn clamp_limit() -> Self {
        1e-6
    }
}

/// Complex number over the crate scalar.
pub type C<T> = Complex<T>;

/// `0 + 0i`.
pub fn c_zero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// `1 + 0i`.
pub fn c_one<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Real number promoted to the complex plane.
pub fn c_re<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
