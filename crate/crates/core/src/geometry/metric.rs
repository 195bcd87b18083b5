use crate::error::Result;
use crate::geometry::warp::WarpFunction;
use crate::scalar::{Interval, Scalar};

/// A θ-independent diagonal metric `E(r) dr² + G(r) dθ²` on the cylinder.
///
/// The warped cylinder is the case `E = 1, G = m²`; the Riemannian part of a
/// navigation metric with radial wind is another.
pub trait RotationalMetric<T: Scalar>: Send + Sync {
    fn e(&self, r: T) -> T;
    fn de(&self, r: T) -> T;
    fn g(&self, r: T) -> T;
    fn dg(&self, r: T) -> T;
    fn d2g(&self, r: T) -> T;
    fn window(&self) -> Interval<T>;

    fn gauss_curvature(&self, r: T) -> T {
        diagonal_gauss_curvature(self.e(r), self.de(r), self.g(r), self.dg(r), self.d2g(r))
    }

    /// Squared norm of a tangent vector `(y_r, y_θ)` at radius `r`.
    fn norm2(&self, r: T, yr: T, ytheta: T) -> T {
        self.e(r) * yr * yr + self.g(r) * ytheta * ytheta
    }
}

/// Gaussian curvature of `E dr² + G dθ²` with `E, G` depending on `r` only:
/// `K = -(1/√(EG)) ∂_r(∂_r√G / √E)`.
pub fn diagonal_gauss_curvature<T: Scalar>(e: T, de: T, g: T, dg: T, d2g: T) -> T {
    let eg = e * g;
    -d2g / (T::two() * eg) + dg * (de * g + e * dg) / (T::c(4.0) * eg * eg)
}

impl<T: Scalar> RotationalMetric<T> for WarpFunction<T> {
    #[inline]
    fn e(&self, _r: T) -> T {
        T::one()
    }
    #[inline]
    fn de(&self, _r: T) -> T {
        T::zero()
    }
    #[inline]
    fn g(&self, r: T) -> T {
        let m = self.m(r);
        m * m
    }
    #[inline]
    fn dg(&self, r: T) -> T {
        T::two() * self.m(r) * self.dm(r)
    }
    #[inline]
    fn d2g(&self, r: T) -> T {
        let dm = self.dm(r);
        T::two() * (dm * dm + self.m(r) * self.d2m(r))
    }
    fn window(&self) -> Interval<T> {
        WarpFunction::window(self)
    }
    fn gauss_curvature(&self, r: T) -> T {
        -self.d2m(r) / self.m(r)
    }
}

/// `G_h(r) = -m''(r)/m(r)`.
pub fn gauss_curvature_h<T: Scalar>(warp: &WarpFunction<T>, r: T) -> Result<T> {
    warp.check_domain(r)?;
    Ok(-warp.d2m(r) / warp.m(r))
}
