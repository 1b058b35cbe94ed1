//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point type the linear algebra is generic over.
///
/// All tolerances in the crate are calibrated for `f64`. [`Real::tol`] maps such a
/// tolerance to the working precision, never going below a small multiple of the
/// type's machine epsilon, so the same code runs (with looser certificates) in `f32`.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self;

    /// Conversion to `f64` for reporting.
    fn as_f64(self) -> f64;

    /// An `f64`-calibrated tolerance expressed in this precision.
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::of(64.0);
        Self::of(x).max(floor)
    }
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// Complex scalar over a [`Real`] field.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> C<T> {
    Complex::new(phase.cos(), phase.sin())
}
