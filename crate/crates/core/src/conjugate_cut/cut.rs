use super::turning::{phi, r0_sup, Supremum};
use crate::error::Result;
use crate::geometry::WarpFunction;
use crate::projective::alpha_warp;
use crate::scalar::{Interval, Point, Scalar};
use crate::zermelo::WindSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CutVariant {
    MeridianOnly,
    MeridianPlusParallel,
}

/// Grid check of the cut-locus hypotheses on the half meridian `[0, r_max]`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HypothesisReport<T> {
    pub evenness_defect: T,
    pub curvature_at_zero: T,
    /// Curvature `≤ 0` on the whole grid.
    pub curvature_nonpositive: bool,
    /// Curvature non-increasing on the grid.
    pub curvature_decreasing: bool,
    /// Largest increase of the curvature between neighbouring grid points, and where.
    pub worst_increase: T,
    pub worst_r: Option<T>,
    pub ok: bool,
    pub note: String,
}

pub fn check_hypothesis<T: Scalar>(warp: &WarpFunction<T>, n: usize) -> HypothesisReport<T> {
    let hi = warp.window().hi.min(-warp.window().lo);
    let grid = Interval::new(T::zero(), hi).grid(n);
    let k: Vec<T> = grid.iter().map(|&r| -warp.d2m(r) / warp.m(r)).collect();
    let slack = T::c(1e-12);
    let mut worst = T::zero();
    let mut worst_r = None;
    for i in 1..k.len() {
        let inc = k[i] - k[i - 1];
        if inc > worst {
            worst = inc;
            worst_r = Some(grid[i]);
        }
    }
    let nonpos = k.iter().all(|&v| v <= slack);
    let decreasing = worst <= slack * (T::one() + k[0].abs());
    let defect = warp.evenness_defect(n);
    let even = defect <= T::c(1e-12);
    let (ok, note) = if !even {
        (false, "warp is not even".to_string())
    } else if nonpos {
        (true, "curvature is nonpositive: the cut locus is the opposite meridian".to_string())
    } else if decreasing && k[0] > T::zero() {
        (true, "curvature decreasing along the half meridian with positive value at r = 0".to_string())
    } else if k[0] <= T::zero() {
        (false, "curvature at r = 0 is not positive".to_string())
    } else {
        (
            false,
            format!(
                "curvature increases by {:e} near r = {}",
                worst.as_f64(),
                worst_r.map(|r| r.as_f64()).unwrap_or(f64::NAN)
            ),
        )
    };
    HypothesisReport {
        evenness_defect: defect,
        curvature_at_zero: k[0],
        curvature_nonpositive: nonpos,
        curvature_decreasing: decreasing,
        worst_increase: worst,
        worst_r,
        ok,
        note,
    }
}

/// A point of the deformed cut locus with the flow time that produced it.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeformedCutPoint<T> {
    pub source: Point<T>,
    pub point: Point<T>,
    pub flow_time: T,
}

/// Cut locus of a point: the opposite meridian, possibly with a subarc of the
/// mirror parallel `r = −r(q)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CutLocusDescription<T> {
    pub variant: CutVariant,
    pub q: Point<T>,
    pub theta_opp: T,
    pub parallel_r: Option<T>,
    pub theta_interval: Option<[T; 2]>,
    pub phi_value: Option<T>,
    pub r0: Supremum<T>,
    pub hypothesis: HypothesisReport<T>,
    pub deformed: Option<Vec<DeformedCutPoint<T>>>,
    /// Samples whose deformation failed, with the reason.
    pub skipped: Vec<(Point<T>, String)>,
}

impl<T: Scalar> CutLocusDescription<T> {
    /// `n_meridian` points on the opposite meridian over `window` (the point `r = r(q)`
    /// excluded) and `n_parallel` interior points of the parallel subarc.
    pub fn sample_points(&self, window: Interval<T>, n_meridian: usize, n_parallel: usize) -> Vec<Point<T>> {
        let mut out: Vec<Point<T>> = window
            .grid(n_meridian)
            .into_iter()
            .map(|r| Point::new(r, self.theta_opp))
            .collect();
        if let (Some(r), Some([a, b])) = (self.parallel_r, self.theta_interval) {
            let step = (b - a) / T::from_usize_lossy(n_parallel + 1);
            out.extend((1..=n_parallel).map(|i| Point::new(r, a + step * T::from_usize_lossy(i))));
        }
        out
    }

    pub fn parallel_points(&self, n: usize) -> Vec<Point<T>> {
        match (self.parallel_r, self.theta_interval) {
            (Some(r), Some([a, b])) => {
                let step = (b - a) / T::from_usize_lossy(n + 1);
                (1..=n).map(|i| Point::new(r, a + step * T::from_usize_lossy(i))).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Cut locus of `q` for the warped metric `dr² + m² dθ²`.
///
/// The hypotheses are checked on a grid and reported in the result rather than
/// enforced; callers decide what a violation means.
pub fn cut_locus_h<T: Scalar>(warp: &WarpFunction<T>, q: Point<T>, quad_tol: T) -> Result<CutLocusDescription<T>> {
    let hypothesis = check_hypothesis(warp, 2001);
    let r0 = r0_sup(warp);
    let theta_opp = q.theta + T::PI();
    let mut desc = CutLocusDescription {
        variant: CutVariant::MeridianOnly,
        q,
        theta_opp,
        parallel_r: None,
        theta_interval: None,
        phi_value: None,
        r0,
        hypothesis,
        deformed: None,
        skipped: Vec::new(),
    };
    if desc.hypothesis.curvature_nonpositive {
        return Ok(desc);
    }
    if q.r.abs() < r0.value() {
        let ph = phi(warp, warp.m(q.r), quad_tol)?;
        desc.phi_value = Some(ph);
        if ph < T::PI() {
            desc.variant = CutVariant::MeridianPlusParallel;
            desc.parallel_r = Some(-q.r);
            desc.theta_interval = Some([q.theta + ph, q.theta + T::TAU() - ph]);
        }
    }
    Ok(desc)
}

/// Cut locus of `q` for `α`, the Riemannian part of the radial-wind metric,
/// computed on its arclength warp and mapped back to `r`.
pub fn cut_locus_alpha<T: Scalar>(
    warp: &WarpFunction<T>,
    wind: &WindSpec<T>,
    q: Point<T>,
    quad_tol: T,
) -> Result<CutLocusDescription<T>> {
    let aw = alpha_warp(warp, wind)?;
    let mut desc = cut_locus_h(&aw.warp, aw.point_to_rho(q), quad_tol)?;
    desc.q = q;
    desc.parallel_r = desc.parallel_r.map(|rho| aw.to_r(rho));
    desc.r0 = match desc.r0 {
        Supremum::Finite(rho) => Supremum::Finite(aw.to_r(rho)),
        s => s,
    };
    Ok(desc)
}
