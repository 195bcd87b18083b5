//! The closed one-form `β = b₁(r) dr` of the radial wind and what it buys:
//! a potential `f` with `β = df`, Finslerian lengths by `L_F = L_α + f(q) − f(p)`
//! and the change of parameter between α- and F-arclength.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{RiemannState, RotationalMetric, Trajectory, WarpFunction};
use crate::numerics::{integrate, kronrod, richardson_diff, Dopri5};
use crate::scalar::{Interval, Point, Scalar};
use crate::zermelo::{Vec2, WindKind, WindSpec};

/// `|∂_r b_θ − ∂_θ b_r|` for `b_i = −V_i/λ` (`V_i = h_ij V^j`, `λ = 1 − ‖V‖²_h`).
pub fn closedness_residual<T: Scalar>(
    warp: &WarpFunction<T>,
    v: &dyn Fn(T, T) -> Vec2<T>,
    r: T,
    theta: T,
) -> T {
    let b = |r: T, th: T| -> Vec2<T> {
        let vv = v(r, th);
        let m = warp.m(r);
        let low = [vv[0], m * m * vv[1]];
        let lam = T::one() - (low[0] * vv[0] + low[1] * vv[1]);
        [-low[0] / lam, -low[1] / lam]
    };
    let h = T::c(1e-3);
    let dr_bt = richardson_diff(|x| b(x, theta)[1], r, h);
    let dt_br = richardson_diff(|x| b(r, x)[0], theta, h);
    (dr_bt - dt_br).abs()
}

/// `f(r) = ∫₀^r b₁`, `b₁ = −A/(1 − A²)`; anchored at `f(0) = 0`.
#[derive(Clone, Debug)]
pub struct PotentialFunction<T> {
    wind: WindSpec<T>,
    quad_tol: T,
}

impl<T: Scalar> PotentialFunction<T> {
    /// `b₁(r) = f'(r)`
    pub fn b1(&self, r: T) -> T {
        let a = self.wind.a(r);
        -a / (T::one() - a * a)
    }

    pub fn eval(&self, r: T) -> Result<T> {
        if self.wind.kind() == WindKind::Constant {
            return Ok(self.b1(T::zero()) * r);
        }
        Ok(integrate(|x| self.b1(x), T::zero(), r, self.quad_tol)?.value)
    }

    /// `f(q) − f(p)`
    pub fn increment(&self, p: T, q: T) -> Result<T> {
        if self.wind.kind() == WindKind::Constant {
            return Ok(self.b1(T::zero()) * (q - p));
        }
        Ok(integrate(|x| self.b1(x), p, q, self.quad_tol)?.value)
    }
}

/// Potential of the radial part of `wind`. Requires `A² < 1` on `window`.
pub fn beta_potential<T: Scalar>(wind: &WindSpec<T>, window: Interval<T>, quad_tol: T) -> Result<PotentialFunction<T>> {
    for r in window.grid(512) {
        if !(wind.lambda(r) > T::c(1e-10)) {
            return Err(Error::Quadrature {
                a: 0.0,
                b: r.as_f64(),
                detail: format!("A^2 reaches 1 at r = {}", r.as_f64()),
            });
        }
    }
    Ok(PotentialFunction {
        wind: wind.radial(),
        quad_tol,
    })
}

/// `L_F = L_α + f(r_end) − f(r_start)` for an α-parameterized trajectory.
pub fn finsler_length<T: Scalar>(traj: &Trajectory<T>, potential: &PotentialFunction<T>) -> Result<T> {
    let r0 = traj.first().state.r;
    let r1 = traj.last().state.r;
    Ok(traj.length + potential.increment(r0, r1)?)
}

/// `d_F(p, q) = d_α(p, q) + f(q) − f(p)`.
pub fn finsler_distance<T: Scalar>(
    d_alpha: T,
    potential: &PotentialFunction<T>,
    p: Point<T>,
    q: Point<T>,
) -> Result<T> {
    Ok(d_alpha + potential.increment(p.r, q.r)?)
}

/// Fill the `t` field with `∫ F(ρ, ρ') ds` along the trajectory.
///
/// Each sample interval is re-integrated once with `t` appended to the
/// geodesic state, so `t` carries the integrator's accuracy rather than a
/// quadrature over the samples.
pub fn reparam_alpha_to_f<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    traj: &Trajectory<T>,
    randers_along: &dyn Fn(&RiemannState<T>) -> T,
) -> Result<Trajectory<T>> {
    let f = |_s: T, y: &[T; 5]| {
        let g = crate::geometry::geodesic_rhs_array(metric, &[y[0], y[1], y[2], y[3]]);
        let st = RiemannState::new(y[0], y[1], y[2], y[3]);
        [g[0], g[1], g[2], g[3], randers_along(&st)]
    };
    let solver = Dopri5::new(T::c(1e-10));
    let mut out = traj.clone();
    out.samples[0].t = Some(T::zero());
    let mut t = T::zero();
    for i in 1..traj.samples.len() {
        let a = &traj.samples[i - 1];
        let b = &traj.samples[i];
        let h = b.s - a.s;
        let pieces = (h.abs() / T::c(0.02)).ceil().max(T::one());
        let dh = h / pieces;
        let st = a.state;
        let mut y = [st.r, st.theta, st.vr, st.vtheta, T::zero()];
        let mut at = a.s;
        for _ in 0..pieces.to_usize().unwrap_or(1) {
            y = solver.advance(&f, at, &y, dh);
            at = at + dh;
        }
        if !(y[4] > T::zero()) {
            return Err(Error::NonMonotone { s: b.s.as_f64() });
        }
        t = t + y[4];
        out.samples[i].t = Some(t);
    }
    Ok(out)
}

/// The Riemannian part `α = dr²/λ² + (m²/λ) dθ²` of the radial-wind solution.
#[derive(Clone, Debug)]
pub struct AlphaMetric<T> {
    pub warp: WarpFunction<T>,
    pub wind: WindSpec<T>,
}

impl<T: Scalar> AlphaMetric<T> {
    pub fn new(warp: WarpFunction<T>, wind: &WindSpec<T>) -> Self {
        Self {
            warp,
            wind: wind.radial(),
        }
    }

    /// `(λ, λ', λ'')`
    fn lam(&self, r: T) -> (T, T, T) {
        let a = self.wind.a(r);
        let da = self.wind.da(r);
        let d2a = self.wind.d2a(r);
        (
            T::one() - a * a,
            -T::two() * a * da,
            -T::two() * (da * da + a * d2a),
        )
    }

    /// `F₁(y) = α(y) + b₁ y_r` at a state.
    pub fn randers(&self, st: &RiemannState<T>) -> T {
        let a = self.wind.a(st.r);
        let lam = T::one() - a * a;
        self.norm2(st.r, st.vr, st.vtheta).sqrt() - a / lam * st.vr
    }
}

impl<T: Scalar> RotationalMetric<T> for AlphaMetric<T> {
    fn e(&self, r: T) -> T {
        let (l, _, _) = self.lam(r);
        T::one() / (l * l)
    }
    fn de(&self, r: T) -> T {
        let (l, dl, _) = self.lam(r);
        -T::two() * dl / (l * l * l)
    }
    fn g(&self, r: T) -> T {
        let m = self.warp.m(r);
        m * m / self.lam(r).0
    }
    fn dg(&self, r: T) -> T {
        let (l, dl, _) = self.lam(r);
        let m = self.warp.m(r);
        let dm = self.warp.dm(r);
        T::two() * m * dm / l - m * m * dl / (l * l)
    }
    fn d2g(&self, r: T) -> T {
        let (l, dl, d2l) = self.lam(r);
        let m = self.warp.m(r);
        let dm = self.warp.dm(r);
        let d2m = self.warp.d2m(r);
        T::two() * (dm * dm + m * d2m) / l - T::c(4.0) * m * dm * dl / (l * l) - m * m * d2l / (l * l)
            + T::two() * m * m * dl * dl / (l * l * l)
    }
    fn window(&self) -> Interval<T> {
        self.warp.window()
    }
}

/// α written as a warped product `dρ² + m_α(ρ)² dθ²` in its own arclength
/// coordinate `ρ = ∫₀^r dr/λ`.
#[derive(Clone)]
pub struct AlphaWarp<T> {
    pub warp: WarpFunction<T>,
    map: Arc<dyn RadialMap<T>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for AlphaWarp<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlphaWarp").field("warp", &self.warp).finish()
    }
}

trait RadialMap<T>: Send + Sync {
    fn to_rho(&self, r: T) -> T;
    fn to_r(&self, rho: T) -> T;
}

struct Linear<T> {
    lambda: T,
}

impl<T: Scalar> RadialMap<T> for Linear<T> {
    fn to_rho(&self, r: T) -> T {
        r / self.lambda
    }
    fn to_r(&self, rho: T) -> T {
        rho * self.lambda
    }
}

struct Tabulated<T> {
    wind: WindSpec<T>,
    r: Vec<T>,
    rho: Vec<T>,
}

impl<T: Scalar> Tabulated<T> {
    fn inv_lambda(&self, r: T) -> T {
        T::one() / self.wind.lambda(r)
    }

    fn build(wind: WindSpec<T>, window: Interval<T>, cells: usize) -> Self {
        let r = window.grid(cells + 1);
        let mut me = Self { wind, r, rho: Vec::new() };
        let mut rho = Vec::with_capacity(cells + 1);
        let mut acc = T::zero();
        rho.push(acc);
        for k in 0..cells {
            acc = acc + kronrod(&|x| me.inv_lambda(x), me.r[k], me.r[k + 1]).0;
            rho.push(acc);
        }
        me.rho = rho;
        // anchor ρ(0) = 0
        let zero = me.to_rho(T::zero());
        for v in me.rho.iter_mut() {
            *v = *v - zero;
        }
        me
    }

    fn cell_of(values: &[T], x: T) -> usize {
        let i = values.partition_point(|v| *v <= x);
        i.saturating_sub(1).min(values.len() - 2)
    }
}

impl<T: Scalar> RadialMap<T> for Tabulated<T> {
    fn to_rho(&self, r: T) -> T {
        let k = Self::cell_of(&self.r, r);
        self.rho[k] + kronrod(&|x| self.inv_lambda(x), self.r[k], r).0
    }

    fn to_r(&self, rho: T) -> T {
        let k = Self::cell_of(&self.rho, rho);
        let w = (rho - self.rho[k]) / (self.rho[k + 1] - self.rho[k]);
        let mut r = self.r[k] + w * (self.r[k + 1] - self.r[k]);
        for _ in 0..8 {
            let step = (self.to_rho(r) - rho) * self.wind.lambda(r);
            r = r - step;
            if step.abs() <= T::epsilon() * (T::one() + r.abs()) {
                break;
            }
        }
        r
    }
}

impl<T: Scalar> AlphaWarp<T> {
    pub fn to_rho(&self, r: T) -> T {
        self.map.to_rho(r)
    }

    pub fn to_r(&self, rho: T) -> T {
        self.map.to_r(rho)
    }

    pub fn point_to_rho(&self, p: Point<T>) -> Point<T> {
        Point::new(self.to_rho(p.r), p.theta)
    }

    pub fn point_to_r(&self, p: Point<T>) -> Point<T> {
        Point::new(self.to_r(p.r), p.theta)
    }
}

/// Rewrite α in arclength form. For constant `A` this is
/// `m_α(ρ) = m(λρ)/√λ` with `ρ = r/λ`.
pub fn alpha_warp<T: Scalar>(warp: &WarpFunction<T>, wind: &WindSpec<T>) -> Result<AlphaWarp<T>> {
    let win = warp.window();
    for r in win.grid(512) {
        if !(wind.lambda(r) > T::c(1e-10)) {
            return Err(Error::WindTooStrong {
                r: r.as_f64(),
                detail: "A^2 >= 1".into(),
            });
        }
    }
    let wind = wind.radial();
    let map: Arc<dyn RadialMap<T>> = if wind.kind() == WindKind::Constant {
        Arc::new(Linear { lambda: wind.lambda(T::zero()) })
    } else {
        Arc::new(Tabulated::build(wind.clone(), win, 4096))
    };
    let (w1, w2, w3) = (warp.clone(), warp.clone(), warp.clone());
    let (a1, a2, a3) = (wind.clone(), wind.clone(), wind.clone());
    let (p1, p2, p3) = (map.clone(), map.clone(), map.clone());
    let lam3 = |wind: &WindSpec<T>, r: T| {
        let a = wind.a(r);
        let da = wind.da(r);
        (
            T::one() - a * a,
            -T::two() * a * da,
            -T::two() * (da * da + a * wind.d2a(r)),
        )
    };
    let m = Arc::new(move |rho: T| {
        let r = p1.to_r(rho);
        w1.m(r) / a1.lambda(r).sqrt()
    });
    let dm = Arc::new(move |rho: T| {
        let r = p2.to_r(rho);
        let (l, dl, _) = lam3(&a2, r);
        let sl = l.sqrt();
        sl * w2.dm(r) - w2.m(r) * dl / (T::two() * sl)
    });
    let d2m = Arc::new(move |rho: T| {
        let r = p3.to_r(rho);
        let (l, dl, d2l) = lam3(&a3, r);
        let sl = l.sqrt();
        let mm = w3.m(r);
        l * sl * w3.d2m(r) - T::half() * sl * mm * d2l + mm * dl * dl / (T::c(4.0) * sl)
    });
    let window = Interval::new(map.to_rho(win.lo), map.to_rho(win.hi));
    Ok(AlphaWarp {
        warp: WarpFunction::custom(m, dm, d2m, window),
        map,
    })
}
