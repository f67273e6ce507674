//! Real scalar abstraction: the whole crate is generic over `f32`/`f64`
//! through this trait, with complex arithmetic via `num_complex::Complex<T>`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable throughout the toolkit.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` literal into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion back to `f64` (exact for `f64` itself).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// The imaginary unit as `Complex<T>`.
#[inline]
pub fn imag<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// A purely real complex number.
#[inline]
pub fn re<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Complex number from real and imaginary parts.
#[inline]
pub fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}
