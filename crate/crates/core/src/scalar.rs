//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the geometry is generic over: `f32` or `f64`.
///
/// All tolerances quoted by the test-suite assume `f64`; `f32` builds and
/// runs but only meets single-precision versions of them.
pub trait Real:
    Float + FloatConst + FromPrimitive + rustfft::FftNum + Sum + Default + Debug + Display + Send + Sync
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// `π` as this scalar type.
    #[inline]
    fn pi() -> Self {
        <Self as FloatConst>::PI()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Deterministic pairwise (cascade) summation in a fixed split order.
///
/// The split points depend only on the slice length, so the result is
/// bit-identical no matter how the values were produced.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    let scale = a.abs().max(b.abs()).max(floor);
    (a - b).abs() / scale
}
