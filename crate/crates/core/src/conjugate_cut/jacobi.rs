use crate::error::Result;
use crate::geometry::{geodesic_rhs_array, RiemannState, RotationalMetric};
use crate::numerics::{Dopri5, Flow};
use crate::scalar::Scalar;

/// First `s* ∈ (0, length]` with `y(s*) = 0` for `y'' + K(s) y = 0`,
/// `y(0) = 0`, `y'(0) = 1`.
pub fn jacobi_first_zero<T: Scalar>(curvature_along: &dyn Fn(T) -> T, length: T, tol: T) -> Option<T> {
    let f = |s: T, y: &[T; 2]| [y[1], -curvature_along(s) * y[0]];
    let solver = Dopri5::new(T::c(1e-12)).with_h_max(T::c(0.05));
    let mut hit = None;
    solver
        .solve(&f, T::zero(), [T::zero(), T::one()], length, |s0, y0, s1, y1| {
            if y0[0] != T::zero() && y1[0].signum() != y0[0].signum() {
                hit = Some(solver.locate(&f, s0, y0, s1 - s0, |y| y[0], tol).0);
                return Flow::Stop;
            }
            Flow::Continue
        })
        .ok()?;
    hit
}

/// Conjugate point along a geodesic: where the normal Jacobi field vanishing
/// at the start vanishes again.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConjugatePoint<T> {
    pub s: T,
    pub state: RiemannState<T>,
}

/// First conjugate point within `length` of the unit-speed geodesic from `init`,
/// integrating the geodesic and `y'' + K(r(s)) y = 0` together.
///
/// Returns `None` when there is none, including when the geodesic leaves the window first.
pub fn first_conjugate_point<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    init: RiemannState<T>,
    length: T,
    tol: T,
) -> Result<Option<ConjugatePoint<T>>> {
    let f = |_s: T, y: &[T; 6]| {
        let g = geodesic_rhs_array(metric, &[y[0], y[1], y[2], y[3]]);
        [g[0], g[1], g[2], g[3], y[5], -metric.gauss_curvature(y[0]) * y[4]]
    };
    let win = metric.window();
    let solver = Dopri5::new(T::c(1e-11)).with_h_max(T::c(0.05));
    let y0 = [init.r, init.theta, init.vr, init.vtheta, T::zero(), T::one()];
    let mut hit = None;
    solver.solve(&f, T::zero(), y0, length, |s0, ya, s1, yb| {
        if !win.contains(yb[0]) {
            return Flow::Stop;
        }
        if ya[4] != T::zero() && yb[4].signum() != ya[4].signum() {
            let (s, y) = solver.locate(&f, s0, ya, s1 - s0, |y| y[4], tol);
            hit = Some(ConjugatePoint {
                s,
                state: RiemannState::new(y[0], y[1], y[2], y[3]),
            });
            return Flow::Stop;
        }
        Flow::Continue
    })?;
    Ok(hit)
}
