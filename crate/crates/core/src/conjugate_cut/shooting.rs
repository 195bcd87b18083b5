use rayon::prelude::*;

use super::jacobi::first_conjugate_point;
use crate::error::{Error, Result};
use crate::geometry::{
    integrate_geodesic, integrate_geodesic_with, GeodesicOptions, RiemannState, RotationalMetric, Termination,
    Trajectory,
};
use crate::numerics::{illinois, integrate};
use crate::scalar::{wrap_signed, Point, Scalar};

#[derive(Clone, Copy, Debug)]
pub struct ShootingOptions<T> {
    /// Launch angles per half turn in the coarse scan.
    pub grid: usize,
    /// Integration tolerance during the scan.
    pub scan_tol: T,
    /// Integration tolerance while refining a bracket.
    pub tol: T,
    pub max_winding: i64,
    /// Largest accepted endpoint mismatch `|r(end) − r(q)|`.
    pub accept: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for ShootingOptions<T> {
    fn default() -> Self {
        Self {
            grid: 256,
            scan_tol: T::c(1e-9),
            tol: T::c(1e-12),
            max_winding: 2,
            accept: T::c(1e-9),
            max_iter: 200,
        }
    }
}

/// A geodesic from `p` to `q` found by shooting.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Connection<T> {
    pub length: T,
    /// Launch angle at `p` measured from `∂r`.
    pub angle: T,
    /// Number of extra turns around the cylinder relative to the short way.
    pub winding: i64,
    /// `|r(end) − r(q)|`
    pub mismatch: T,
    /// No conjugate point strictly inside.
    pub conjugate_free: bool,
    pub traj: Trajectory<T>,
}

/// Where the geodesic launched at `angle` first reaches `θ = θ(p) + delta`,
/// as `(r, s)`; `None` if it leaves the window or runs past `max_len`.
fn arrival<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    p: Point<T>,
    angle: T,
    delta: T,
    max_len: T,
    tol: T,
) -> Option<(T, T)> {
    let init = RiemannState::launch(metric, p.r, T::zero(), angle);
    let event = move |s: &RiemannState<T>| s.theta - delta;
    let opts = GeodesicOptions::new(tol);
    let tr = integrate_geodesic_with(metric, init, max_len, &opts, Some(&event)).ok()?;
    match tr.termination {
        Termination::Event => Some((tr.last().state.r, tr.length)),
        _ => None,
    }
}

fn launch_angles<T: Scalar>(n: usize) -> Vec<T> {
    let pi = T::PI();
    let mut v: Vec<T> = (0..n)
        .map(|i| pi * (T::from_usize_lossy(i) + T::half()) / T::from_usize_lossy(n))
        .collect();
    // geometric refinement towards the meridian directions
    let first = pi * T::half() / T::from_usize_lossy(n);
    let mut e = first;
    for _ in 0..40 {
        e = e * T::c(0.6);
        v.push(e);
        v.push(pi - e);
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// α-length of the meridian segment between two radii.
fn meridian_length<T: Scalar, M: RotationalMetric<T> + ?Sized>(metric: &M, a: T, b: T) -> Result<T> {
    Ok(integrate(|r| metric.e(r).sqrt(), a, b, T::c(1e-13))?.value.abs())
}

/// Every geodesic from `p` to `q` no longer than the meridian-plus-parallel
/// bound (up to a relative slack of 1e−3), found by shooting over the launch angle for each winding; sorted by length.
pub fn connecting_geodesics<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    p: Point<T>,
    q: Point<T>,
    opts: &ShootingOptions<T>,
) -> Result<Vec<Connection<T>>> {
    let win = metric.window();
    if !win.contains(p.r) || !win.contains(q.r) {
        return Err(Error::InvalidInput("endpoints must lie in the window".into()));
    }
    let d0 = wrap_signed(q.theta - p.theta);
    if d0 == T::zero() && p.r == q.r {
        return Err(Error::InvalidInput("p and q coincide".into()));
    }
    let d_mer = meridian_length(metric, p.r, q.r)?;
    let g_min = metric.g(p.r).min(metric.g(q.r)).sqrt();
    let ub = d_mer + g_min * d0.abs();
    let max_len = ub * (T::one() + T::c(1e-3)) + T::c(1e-6);
    // brackets need both ends defined, so the scan runs well past the bound
    let scan_len = T::two() * ub + T::one();

    let mut found: Vec<(T, T, i64)> = Vec::new(); // (angle, length, winding)
    let fine = |a: T, delta: T| arrival(metric, p, a, delta, scan_len, opts.tol);

    if d0.abs() <= T::c(1e-15) {
        let angle = if q.r >= p.r { T::zero() } else { T::PI() };
        found.push((angle, d_mer, 0));
    }

    let angles = launch_angles::<T>(opts.grid);
    for k in -opts.max_winding..=opts.max_winding {
        let delta = d0 + T::TAU() * T::c(k as f64);
        if delta.abs() <= T::c(1e-15) {
            continue;
        }
        let sign = delta.signum();
        let scan: Vec<Option<(T, T)>> = angles
            .par_iter()
            .map(|&a| arrival(metric, p, a * sign, delta, scan_len, opts.scan_tol))
            .collect();
        let brackets: Vec<(T, T, T, T)> = (1..angles.len())
            .filter_map(|i| match (scan[i - 1], scan[i]) {
                (Some((ra, _)), Some((rb, _))) => {
                    let (fa, fb) = (ra - q.r, rb - q.r);
                    (fa.signum() != fb.signum() || fa == T::zero()).then_some((angles[i - 1], fa, angles[i], fb))
                }
                _ => None,
            })
            .collect();
        let roots: Vec<Option<(T, T, T)>> = brackets
            .par_iter()
            .map(|&(a, _, b, _)| {
                // refine fa, fb at the fine tolerance before bracketing
                let fa = fine(a * sign, delta)?.0 - q.r;
                let fb = fine(b * sign, delta)?.0 - q.r;
                if fa.signum() == fb.signum() && fa != T::zero() && fb != T::zero() {
                    return None;
                }
                let (x, fx) = illinois(
                    |x| fine(x * sign, delta).map(|(r, _)| r - q.r),
                    a,
                    fa,
                    b,
                    fb,
                    T::c(1e-15),
                    T::c(1e-13),
                    opts.max_iter,
                )?;
                if fx.abs() > opts.accept {
                    return None;
                }
                let (_, len) = fine(x * sign, delta)?;
                (len <= max_len).then_some((x * sign, len, fx.abs()))
            })
            .collect();
        for (a, len, _) in roots.into_iter().flatten() {
            if !found.iter().any(|(b, _, _)| (a - *b).abs() < T::c(1e-9)) {
                found.push((a, len, k));
            }
        }
    }

    if found.is_empty() {
        return Err(Error::NoConvergence {
            detail: format!(
                "no geodesic from ({}, {}) to ({}, {}) within length {}",
                p.r.as_f64(),
                p.theta.as_f64(),
                q.r.as_f64(),
                q.theta.as_f64(),
                ub.as_f64()
            ),
            best: Some(ub.as_f64()),
        });
    }
    found.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    found
        .into_iter()
        .map(|(angle, length, winding)| {
            let init = RiemannState::launch(metric, p.r, p.theta, angle);
            let traj = integrate_geodesic(metric, init, length, opts.tol)?;
            let end = traj.last().state;
            let conj = first_conjugate_point(metric, init, length * (T::one() - T::c(1e-7)), T::c(1e-10))?;
            Ok(Connection {
                length,
                angle,
                winding,
                mismatch: (end.r - q.r).abs(),
                conjugate_free: conj.is_none(),
                traj,
            })
        })
        .collect()
}

/// Shortest geodesic from `p` to `q` and its length.
pub fn minimizing_distance<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    p: Point<T>,
    q: Point<T>,
    opts: &ShootingOptions<T>,
) -> Result<Connection<T>> {
    let mut all = connecting_geodesics(metric, p, q, opts)?;
    Ok(all.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::WarpFunction;
    use crate::projective::AlphaMetric;
    use crate::zermelo::WindSpec;

    #[test]
    fn same_meridian() {
        let w = WarpFunction::<f64>::exp_gauss();
        let c = minimizing_distance(&w, Point::new(-0.5, 1.0), Point::new(1.0, 1.0), &ShootingOptions::default())
            .unwrap();
        assert!((c.length - 1.5).abs() < 1e-12);
        assert_eq!(c.angle, 0.0);
        assert!(c.conjugate_free);
    }

    #[test]
    fn alpha_meridian_factor() {
        let w = WarpFunction::<f64>::sech();
        let alpha = AlphaMetric::new(w, &WindSpec::constant(0.5, 0.0));
        let c = minimizing_distance(&alpha, Point::new(0.0, 0.0), Point::new(1.0, 0.0), &ShootingOptions::default())
            .unwrap();
        assert!((c.length - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn short_equator_arc() {
        let w = WarpFunction::<f64>::exp_gauss();
        let c = minimizing_distance(&w, Point::new(0.0, 0.0), Point::new(0.0, 0.5), &ShootingOptions::default())
            .unwrap();
        assert!((c.length - 0.5).abs() < 1e-9, "{}", c.length);
        assert!(c.mismatch < 1e-9);
        let end = c.traj.last().state;
        assert!((end.theta - 0.5).abs() < 1e-9);
    }

    #[test]
    fn endpoint_is_hit() {
        let w = WarpFunction::<f64>::sech();
        let (p, q) = (Point::new(0.3, 0.2), Point::new(-0.8, 1.9));
        let c = minimizing_distance(&w, p, q, &ShootingOptions::default()).unwrap();
        let end = c.traj.last().state;
        assert!((end.r - q.r).abs() < 1e-9);
        assert!((wrap_signed(end.theta - q.theta)).abs() < 1e-9);
        assert!(c.conjugate_free);
    }

    #[test]
    fn coincident_points_rejected() {
        let w = WarpFunction::<f64>::sech();
        let p = Point::new(0.1, 0.0);
        assert!(minimizing_distance(&w, p, p, &ShootingOptions::default()).is_err());
    }
}
