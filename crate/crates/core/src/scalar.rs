//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating point type the automaton is evaluated over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// `i * x` for real `x`.
#[inline]
pub(crate) fn im<T: Real>(im: T) -> Cx<T> {
    Complex::new(T::zero(), im)
}

/// `e^{i phi}`.
#[inline]
pub(crate) fn phase<T: Real>(phi: T) -> Cx<T> {
    Complex::new(phi.cos(), phi.sin())
}
