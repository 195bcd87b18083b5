use crate::error::{Error, Result};
use crate::geometry::metric::RotationalMetric;
use crate::numerics::{Dopri5, Flow};
use crate::scalar::Scalar;

/// Position and velocity `(r, θ, dr/ds, dθ/ds)`; θ unwrapped.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct RiemannState<T> {
    pub r: T,
    pub theta: T,
    pub vr: T,
    pub vtheta: T,
}

impl<T: Scalar> RiemannState<T> {
    pub fn new(r: T, theta: T, vr: T, vtheta: T) -> Self {
        Self { r, theta, vr, vtheta }
    }

    /// Unit-speed state at `(r, θ)` leaving at `angle` from the meridian
    /// direction `∂r` (positive towards `∂θ`).
    pub fn launch<M: RotationalMetric<T> + ?Sized>(metric: &M, r: T, theta: T, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            r,
            theta,
            vr: c / metric.e(r).sqrt(),
            vtheta: s / metric.g(r).sqrt(),
        }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.r, self.theta, self.vr, self.vtheta]
    }

    pub fn from_array(y: [T; 4]) -> Self {
        Self::new(y[0], y[1], y[2], y[3])
    }

    /// Same point, velocity reversed.
    pub fn reversed(self) -> Self {
        Self::new(self.r, self.theta, -self.vr, -self.vtheta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrajectorySample<T> {
    pub s: T,
    pub state: RiemannState<T>,
    /// Finsler arclength, once filled in by a reparameterization.
    pub t: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// r reached the edge of the metric's window.
    Boundary,
    /// a user event function changed sign.
    Event,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Trajectory<T> {
    pub samples: Vec<TrajectorySample<T>>,
    pub nu: T,
    pub length: T,
    pub termination: Termination,
}

impl<T: Scalar> Trajectory<T> {
    pub fn first(&self) -> &TrajectorySample<T> {
        &self.samples[0]
    }

    pub fn last(&self) -> &TrajectorySample<T> {
        self.samples.last().expect("trajectory has at least one sample")
    }

    pub fn is_complete(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Largest `|ν(s) − ν(0)|` over the samples.
    pub fn clairaut_drift<M: RotationalMetric<T> + ?Sized>(&self, metric: &M) -> T {
        self.samples
            .iter()
            .map(|p| (clairaut(metric, &p.state) - self.nu).abs())
            .fold(T::zero(), T::max)
    }

    pub fn max_unit_defect<M: RotationalMetric<T> + ?Sized>(&self, metric: &M) -> T {
        self.samples
            .iter()
            .map(|p| unit_speed_defect(metric, &p.state))
            .fold(T::zero(), T::max)
    }

    /// Index `i` with `samples[i].s <= s < samples[i+1].s` (clamped).
    pub fn segment_index(&self, s: T) -> usize {
        let n = self.samples.len();
        if n < 2 {
            return 0;
        }
        let idx = self.samples.partition_point(|p| p.s <= s);
        idx.saturating_sub(1).min(n - 2)
    }

    /// State at arclength `s` by one Dormand–Prince step from the preceding
    /// sample. Accurate to the integration tolerance because consecutive
    /// samples are at most one accepted step apart.
    pub fn state_at<M: RotationalMetric<T> + ?Sized>(&self, metric: &M, s: T) -> RiemannState<T> {
        let i = self.segment_index(s);
        let base = &self.samples[i];
        let h = s - base.s;
        if h == T::zero() {
            return base.state;
        }
        let f = |_s: T, y: &[T; 4]| geodesic_rhs_array(metric, y);
        let solver = Dopri5::new(T::c(1e-10));
        // split long gaps so the single steps stay small
        let pieces = (h.abs() / T::c(0.05)).ceil().max(T::one());
        let dh = h / pieces;
        let mut y = base.state.to_array();
        let mut at = base.s;
        for _ in 0..pieces.to_usize().unwrap_or(1) {
            y = solver.advance(&f, at, &y, dh);
            at = at + dh;
        }
        RiemannState::from_array(y)
    }
}

/// Geodesic right-hand side on a raw `[r, θ, v_r, v_θ]` array, no domain check.
#[inline]
pub fn geodesic_rhs_array<T: Scalar, M: RotationalMetric<T> + ?Sized>(metric: &M, y: &[T; 4]) -> [T; 4] {
    let (r, vr, vt) = (y[0], y[2], y[3]);
    let e = metric.e(r);
    let de = metric.de(r);
    let g = metric.g(r);
    let dg = metric.dg(r);
    let two_e = T::two() * e;
    [
        vr,
        vt,
        (-de * vr * vr + dg * vt * vt) / two_e,
        -(dg / g) * vr * vt,
    ]
}

/// Right-hand side of the geodesic equations in `(r, θ, v_r, v_θ)`.
///
/// For a warp this is `(v_r, v_θ, m m' v_θ², −2 (m'/m) v_r v_θ)`.
pub fn geodesic_rhs<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    state: &RiemannState<T>,
) -> Result<[T; 4]> {
    let w = metric.window();
    if !w.contains(state.r) {
        return Err(Error::Domain {
            r: state.r.as_f64(),
            lo: w.lo.as_f64(),
            hi: w.hi.as_f64(),
        });
    }
    Ok(geodesic_rhs_array(metric, &state.to_array()))
}

/// Clairaut constant `G(r) dθ/ds`, i.e. `m² dθ/ds` on a warp.
pub fn clairaut<T: Scalar, M: RotationalMetric<T> + ?Sized>(metric: &M, state: &RiemannState<T>) -> T {
    metric.g(state.r) * state.vtheta
}

pub fn unit_speed_defect<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    state: &RiemannState<T>,
) -> T {
    (metric.norm2(state.r, state.vr, state.vtheta) - T::one()).abs()
}

#[derive(Clone, Copy, Debug)]
pub struct GeodesicOptions<T> {
    pub tol: T,
    pub h_max: T,
    /// Record a sample every `spacing` of arclength instead of every accepted step.
    pub spacing: Option<T>,
    pub unit_speed_tol: T,
}

impl<T: Scalar> GeodesicOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            h_max: T::c(0.1),
            spacing: None,
            unit_speed_tol: T::c(1e-9),
        }
    }

    pub fn with_spacing(mut self, ds: T) -> Self {
        self.spacing = Some(ds);
        self
    }

    pub fn with_h_max(mut self, h: T) -> Self {
        self.h_max = h;
        self
    }
}

/// Integrate a unit-speed geodesic for arclength `length`.
pub fn integrate_geodesic<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    init: RiemannState<T>,
    length: T,
    tol: T,
) -> Result<Trajectory<T>> {
    integrate_geodesic_with(metric, init, length, &GeodesicOptions::new(tol), None)
}

/// As [`integrate_geodesic`], stopping early where `event(state)` changes sign.
pub fn integrate_geodesic_with<T: Scalar, M: RotationalMetric<T> + ?Sized>(
    metric: &M,
    init: RiemannState<T>,
    length: T,
    opts: &GeodesicOptions<T>,
    event: Option<&dyn Fn(&RiemannState<T>) -> T>,
) -> Result<Trajectory<T>> {
    if !(length > T::zero()) || !(opts.tol > T::zero()) {
        return Err(Error::InvalidInput("length and tol must be positive".into()));
    }
    let defect = unit_speed_defect(metric, &init);
    if !(defect <= opts.unit_speed_tol) {
        return Err(Error::InvalidInput(format!(
            "initial state is not unit speed (defect {:e})",
            defect.as_f64()
        )));
    }
    let win = metric.window();
    if !win.contains(init.r) {
        return Err(Error::Domain {
            r: init.r.as_f64(),
            lo: win.lo.as_f64(),
            hi: win.hi.as_f64(),
        });
    }

    let f = |_s: T, y: &[T; 4]| geodesic_rhs_array(metric, y);
    let solver = Dopri5::new(opts.tol).with_h_max(opts.h_max);
    let boundary = |y: &[T; 4]| (y[0] - win.lo).min(win.hi - y[0]);

    let mut samples = vec![TrajectorySample { s: T::zero(), state: init, t: None }];
    let mut termination = Termination::Completed;
    let mut s = T::zero();
    let mut y = init.to_array();

    let ev_val = |y: &[T; 4]| event.map(|e| e(&RiemannState::from_array(*y)));
    let mut last_ev = ev_val(&y);

    while s < length && termination == Termination::Completed {
        let seg_end = match opts.spacing {
            Some(ds) => (s + ds).min(length),
            None => length,
        };
        let mut hit: Option<(T, [T; 4], T, Termination)> = None;
        let record_all = opts.spacing.is_none();
        let (s_new, y_new, _) = solver.solve(&f, s, y, seg_end, |s0, y0, s1, y1| {
            if boundary(y1) < T::zero() {
                hit = Some((s0, *y0, s1 - s0, Termination::Boundary));
                return Flow::Stop;
            }
            if let (Some(prev), Some(e)) = (last_ev, event) {
                let cur = e(&RiemannState::from_array(*y1));
                if prev != T::zero() && prev.signum() != cur.signum() {
                    hit = Some((s0, *y0, s1 - s0, Termination::Event));
                    return Flow::Stop;
                }
                last_ev = Some(cur);
            }
            if record_all {
                samples.push(TrajectorySample { s: s1, state: RiemannState::from_array(*y1), t: None });
            }
            Flow::Continue
        })?;
        match hit {
            Some((s0, y0, h, kind)) => {
                let tol_s = T::c(1e-13) * (T::one() + s0.abs());
                let (sl, yl) = match kind {
                    Termination::Boundary => solver.locate(&f, s0, &y0, h, boundary, tol_s),
                    _ => {
                        let e = event.expect("event hit implies event");
                        solver.locate(&f, s0, &y0, h, |y| e(&RiemannState::from_array(*y)), tol_s)
                    }
                };
                let mut st = RiemannState::from_array(yl);
                if kind == Termination::Boundary {
                    st.r = st.r.max(win.lo).min(win.hi);
                }
                if sl > samples.last().map(|p| p.s).unwrap_or(T::zero()) {
                    samples.push(TrajectorySample { s: sl, state: st, t: None });
                }
                s = sl;
                termination = kind;
            }
            None => {
                s = s_new;
                y = y_new;
                if !record_all {
                    samples.push(TrajectorySample { s, state: RiemannState::from_array(y), t: None });
                }
            }
        }
    }

    Ok(Trajectory {
        nu: clairaut(metric, &init),
        length: s,
        samples,
        termination,
    })
}
