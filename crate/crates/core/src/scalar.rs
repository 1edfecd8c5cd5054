//! Scalar abstraction so the simulator core can run on `f32` or `f64`.
//!
//! All physics code is generic over [`Scalar`]; the crate root exports `f64`
//! aliases which are what the CLI and the verification suite use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable for state amplitudes and Hamiltonian entries.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Convert a configuration-level `f64` into the working precision.
    fn of(v: f64) -> Self;

    /// Widen back to `f64` for reporting and serialization.
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn of(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        f64::from(self)
    }
}

impl Scalar for f64 {
    #[inline]
    fn of(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Complex number over the working scalar.
pub type C<S> = Complex<S>;

/// `2π`, used wherever cyclic frequencies (Hz) are converted to angular ones (rad/s).
#[inline]
pub fn tau<S: Scalar>() -> S {
    S::TAU()
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle<S: Scalar>(a: S) -> S {
    let tau = tau::<S>();
    let mut x = a % tau;
    if x <= -S::PI() {
        x += tau;
    } else if x > S::PI() {
        x -= tau;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(-3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25f64), 0.25);
        // f32 path compiles and behaves
        assert!((wrap_angle(7.0f32) - (7.0f32 - std::f32::consts::TAU)).abs() < 1e-6);
    }
}
