use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry is written against: `f32` or `f64`.
///
/// Every tolerance in the crate is stated for `f64`; `f32` builds work but
/// the tighter invariants (1e-9 and below) are out of its reach.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::c(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Closed interval on the r-axis.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// `n` evenly spaced points including both ends (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<T> {
        let n = n.max(2);
        let step = self.width() / T::from_usize_lossy(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + step * T::from_usize_lossy(i)
                }
            })
            .collect()
    }
}

/// A point `(r, θ)` of the cylinder, θ unwrapped.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Point<T> {
    pub r: T,
    pub theta: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(r: T, theta: T) -> Self {
        Self { r, theta }
    }

    /// θ reduced to `[0, 2π)` together with the winding number.
    pub fn wrapped_theta(&self) -> (T, i64) {
        wrap_angle(self.theta)
    }
}

/// Reduce an unwrapped angle to `[0, 2π)`; returns the reduced angle and the winding number.
pub fn wrap_angle<T: Scalar>(theta: T) -> (T, i64) {
    let tau = T::TAU();
    let k = (theta / tau).floor();
    let mut w = theta - k * tau;
    let mut k = k.to_i64().unwrap_or(0);
    if w >= tau {
        w = w - tau;
        k += 1;
    }
    if w < T::zero() {
        w = T::zero();
    }
    (w, k)
}

/// Reduce an angle difference to `(-π, π]`.
pub fn wrap_signed<T: Scalar>(dtheta: T) -> T {
    let tau = T::TAU();
    let pi = T::PI();
    let mut d = dtheta - (dtheta / tau).round() * tau;
    if d <= -pi {
        d = d + tau;
    }
    if d > pi {
        d = d - tau;
    }
    d
}
