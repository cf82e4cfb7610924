//! Scalar abstraction shared by every module.
//!
//! All geometry, quadrature and constant computations are written against
//! [`Real`], so the same code runs in `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion from a count.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Lebesgue measure of the unit ball in `R^n`.
pub fn unit_ball_volume<T: Real>(n: usize) -> T {
    // ω_n = ω_{n-2} · 2π / n, seeded by ω_0 = 1 and ω_1 = 2.
    let two_pi = T::PI() + T::PI();
    let mut w = if n % 2 == 0 { T::one() } else { T::lit(2.0) };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        w = w * two_pi / T::count(k);
        k += 2;
    }
    w
}

/// Surface measure of the unit sphere `S^{n-1}`, equal to `n·ω_n`.
pub fn unit_sphere_area<T: Real>(n: usize) -> T {
    T::count(n) * unit_ball_volume::<T>(n)
}
