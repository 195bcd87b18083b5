use crate::error::Result;
use crate::geometry::{gauss_curvature_h, RiemannState, RotationalMetric, WarpFunction};
use crate::projective::AlphaMetric;
use crate::scalar::Scalar;
use crate::zermelo::{Vec2, WindSpec};

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CurvatureRatio<T> {
    /// Mean of `G_α / G_h` over the used grid points.
    pub ratio: T,
    pub max_dev: T,
    pub lambda: T,
    /// Grid points with `|G_h| < 1e-12`.
    pub excluded: Vec<T>,
}

impl<T: Scalar> CurvatureRatio<T> {
    /// Distance of the measured constant from `λ²` and from `1/λ²`.
    pub fn candidate_gaps(&self) -> (T, T) {
        let l2 = self.lambda * self.lambda;
        ((self.ratio - l2).abs(), (self.ratio - T::one() / l2).abs())
    }
}

/// `G_α / G_h` on `r_grid` for the constant radial wind `A`, with `G_α`
/// from the diagonal-metric curvature formula applied to
/// `α = dr²/λ² + (m²/λ) dθ²`.
pub fn curvature_ratio<T: Scalar>(warp: &WarpFunction<T>, a: T, r_grid: &[T]) -> Result<CurvatureRatio<T>> {
    let wind = WindSpec::constant(a, T::zero());
    let lambda = wind.lambda(T::zero());
    wind.check_admissible(warp, warp.window(), 2)?;
    let alpha = AlphaMetric::new(warp.clone(), &wind);
    let mut ratios = Vec::with_capacity(r_grid.len());
    let mut excluded = Vec::new();
    for &r in r_grid {
        let gh = gauss_curvature_h(warp, r)?;
        if gh.abs() < T::c(1e-12) {
            excluded.push(r);
            continue;
        }
        ratios.push(alpha.gauss_curvature(r) / gh);
    }
    let n = T::from_usize_lossy(ratios.len().max(1));
    let mean = ratios.iter().fold(T::zero(), |acc, &x| acc + x) / n;
    let max_dev = ratios.iter().fold(T::zero(), |acc, &x| acc.max((x - mean).abs()));
    Ok(CurvatureRatio {
        ratio: mean,
        max_dev,
        lambda,
        excluded,
    })
}

/// `Γ^i_jk y^j y^k` for `E dr² + G dθ²`.
pub fn spray<T: Scalar, M: RotationalMetric<T> + ?Sized>(metric: &M, st: &RiemannState<T>) -> Vec2<T> {
    let (e, g) = (metric.e(st.r), metric.g(st.r));
    let (de, dg) = (metric.de(st.r), metric.dg(st.r));
    let (yr, yt) = (st.vr, st.vtheta);
    [
        de / (T::two() * e) * yr * yr - dg / (T::two() * e) * yt * yt,
        dg / g * yr * yt,
    ]
}

/// `S_h − S_α` at a state, for constant radial wind `A`.
pub fn spray_difference<T: Scalar>(warp: &WarpFunction<T>, a: T, st: &RiemannState<T>) -> Vec2<T> {
    let alpha = AlphaMetric::new(warp.clone(), &WindSpec::constant(a, T::zero()));
    let sh = spray(warp, st);
    let sa = spray(&alpha, st);
    [sh[0] - sa[0], sh[1] - sa[1]]
}

/// `−A² m m' (y²)²`, the r-component from the Christoffel symbols.
pub fn spray_difference_christoffel<T: Scalar>(warp: &WarpFunction<T>, a: T, st: &RiemannState<T>) -> T {
    -a * a * warp.m(st.r) * warp.dm(st.r) * st.vtheta * st.vtheta
}

/// `−2A² m m'' (y²)²`, a competing closed form; disagrees with the Christoffel one.
pub fn spray_difference_alt<T: Scalar>(warp: &WarpFunction<T>, a: T, st: &RiemannState<T>) -> T {
    -T::two() * a * a * warp.m(st.r) * warp.d2m(st.r) * st.vtheta * st.vtheta
}
