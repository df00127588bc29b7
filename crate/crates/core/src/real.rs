use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type for the deterministic kernels: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts a literal constant; every `Real` can represent an `f64` approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A value that may be infinite, with the infinity made explicit.
///
/// `value` is the platform infinity when `infinite` is set, so it can still
/// feed arithmetic, but callers that must tell "huge" from "undefined" check
/// the flag instead of comparing against a magic number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaybeInfinite<T> {
    pub value: T,
    pub infinite: bool,
}

impl<T: Real> MaybeInfinite<T> {
    pub fn finite(value: T) -> Self {
        Self { value, infinite: false }
    }

    pub fn infinity() -> Self {
        Self {
            value: T::infinity(),
            infinite: true,
        }
    }

    /// `Some(value)` when finite.
    pub fn get(self) -> Option<T> {
        (!self.infinite).then_some(self.value)
    }
}
