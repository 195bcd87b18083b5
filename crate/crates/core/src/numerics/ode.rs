//! Dormand–Prince 5(4) embedded pair with local extrapolation.
//!
//! The state is a fixed-size array so the solver stays allocation free in the
//! inner loop. Error control is per step in a mixed absolute/relative max norm:
//! `|e_i| <= tol * (1 + |y_i|)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Returned by the step observer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// How `solve` ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ended {
    Reached,
    Stopped,
}

#[derive(Clone, Debug)]
pub struct Dopri5<T> {
    pub tol: T,
    pub h_init: Option<T>,
    pub h_min: T,
    pub h_max: T,
    pub max_steps: usize,
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    e: [T; 7],
}

fn tableau<T: Scalar>() -> Tableau<T> {
    let f = |n: f64, d: f64| T::c(n / d);
    let z = T::zero();
    Tableau {
        c: [z, f(1., 5.), f(3., 10.), f(4., 5.), f(8., 9.), T::one(), T::one()],
        a: [
            [z; 6],
            [f(1., 5.), z, z, z, z, z],
            [f(3., 40.), f(9., 40.), z, z, z, z],
            [f(44., 45.), f(-56., 15.), f(32., 9.), z, z, z],
            [f(19372., 6561.), f(-25360., 2187.), f(64448., 6561.), f(-212., 729.), z, z],
            [f(9017., 3168.), f(-355., 33.), f(46732., 5247.), f(49., 176.), f(-5103., 18656.), z],
            [f(35., 384.), z, f(500., 1113.), f(125., 192.), f(-2187., 6784.), f(11., 84.)],
        ],
        e: [
            f(71., 57600.),
            z,
            f(-71., 16695.),
            f(71., 1920.),
            f(-17253., 339200.),
            f(22., 525.),
            f(-1., 40.),
        ],
    }
}

impl<T: Scalar> Dopri5<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            h_init: None,
            h_min: T::c(1e-14),
            h_max: T::infinity(),
            max_steps: 2_000_000,
        }
    }

    pub fn with_h_max(mut self, h_max: T) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    /// One trial step; returns `(y_new, error_estimate, f(s+h, y_new))`.
    fn trial<F, const N: usize>(
        tab: &Tableau<T>,
        f: &F,
        s: T,
        y: &[T; N],
        k1: &[T; N],
        h: T,
    ) -> ([T; N], [T; N], [T; N])
    where
        F: Fn(T, &[T; N]) -> [T; N],
    {
        let mut k = [[T::zero(); N]; 7];
        k[0] = *k1;
        for stage in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = tab.a[stage][j];
                if a != T::zero() {
                    for i in 0..N {
                        ys[i] = ys[i] + h * a * kj[i];
                    }
                }
            }
            if stage == 6 {
                // FSAL: the last stage state is the 5th order solution
                let k7 = f(s + h, &ys);
                k[6] = k7;
                let mut err = [T::zero(); N];
                for i in 0..N {
                    let mut acc = T::zero();
                    for (j, kj) in k.iter().enumerate() {
                        acc = acc + tab.e[j] * kj[i];
                    }
                    err[i] = h * acc;
                }
                return (ys, err, k7);
            }
            k[stage] = f(s + tab.c[stage] * h, &ys);
        }
        unreachable!()
    }

    /// Single 5th order step of size `h` from `(s, y)` without error control.
    pub fn advance<F, const N: usize>(&self, f: &F, s: T, y: &[T; N], h: T) -> [T; N]
    where
        F: Fn(T, &[T; N]) -> [T; N],
    {
        let tab = tableau::<T>();
        let k1 = f(s, y);
        Self::trial(&tab, f, s, y, &k1, h).0
    }

    fn error_norm<const N: usize>(&self, y: &[T; N], y_new: &[T; N], err: &[T; N]) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            let scale = self.tol * (T::one() + y[i].abs().max(y_new[i].abs()));
            let e = err[i].abs() / scale;
            if e.is_nan() {
                return T::infinity();
            }
            worst = worst.max(e);
        }
        worst
    }

    /// Integrate from `s0` to `s_end` (either direction).
    ///
    /// `on_step(s_prev, y_prev, s, y)` is called after every accepted step and
    /// may stop the integration. Returns the final `(s, y)` and how it ended.
    pub fn solve<F, O, const N: usize>(
        &self,
        f: &F,
        s0: T,
        y0: [T; N],
        s_end: T,
        mut on_step: O,
    ) -> Result<(T, [T; N], Ended)>
    where
        F: Fn(T, &[T; N]) -> [T; N],
        O: FnMut(T, &[T; N], T, &[T; N]) -> Flow,
    {
        let tab = tableau::<T>();
        let span = s_end - s0;
        if span == T::zero() {
            return Ok((s0, y0, Ended::Reached));
        }
        let dir = span.signum();
        let mut h = self
            .h_init
            .unwrap_or_else(|| T::c(0.01).min(span.abs()))
            .min(self.h_max)
            .abs();
        let mut s = s0;
        let mut y = y0;
        let mut k1 = f(s, &y);
        let mut steps = 0usize;
        let mut rejected_last = false;
        loop {
            let remaining = (s_end - s) * dir;
            if remaining <= T::zero() {
                return Ok((s, y, Ended::Reached));
            }
            let last = h >= remaining;
            let hh = if last { remaining } else { h };
            let (y_new, err, k7) = Self::trial(&tab, f, s, &y, &k1, hh * dir);
            let en = self.error_norm(&y, &y_new, &err);
            if en <= T::one() {
                let s_new = if last { s_end } else { s + hh * dir };
                let flow = on_step(s, &y, s_new, &y_new);
                s = s_new;
                y = y_new;
                k1 = k7;
                steps += 1;
                if flow == Flow::Stop {
                    return Ok((s, y, Ended::Stopped));
                }
                if last {
                    return Ok((s, y, Ended::Reached));
                }
                if steps >= self.max_steps {
                    return Err(Error::TooManySteps {
                        max_steps: self.max_steps,
                        s: s.as_f64(),
                    });
                }
                let mut fac = if en == T::zero() {
                    T::c(5.0)
                } else {
                    (T::c(0.9) * en.powf(T::c(-0.2))).min(T::c(5.0)).max(T::c(0.2))
                };
                if rejected_last {
                    fac = fac.min(T::one());
                }
                rejected_last = false;
                h = (hh * fac).min(self.h_max);
            } else {
                rejected_last = true;
                let fac = if en.is_finite() {
                    (T::c(0.9) * en.powf(T::c(-0.2))).max(T::c(0.1))
                } else {
                    T::c(0.1)
                };
                h = hh * fac;
                if h < self.h_min {
                    return Err(Error::StepUnderflow { s: s.as_f64() });
                }
            }
        }
    }

    /// Locate `g(y(s)) = 0` inside an accepted step `[s0, s0 + h]` by re-stepping
    /// from `(s0, y0)` (Illinois regula falsi on the sub-step length).
    ///
    /// `g(y0)` and `g(y(s0 + h))` must bracket a root.
    pub fn locate<F, G, const N: usize>(
        &self,
        f: &F,
        s0: T,
        y0: &[T; N],
        h: T,
        g: G,
        tol_s: T,
    ) -> (T, [T; N])
    where
        F: Fn(T, &[T; N]) -> [T; N],
        G: Fn(&[T; N]) -> T,
    {
        let tab = tableau::<T>();
        let k1 = f(s0, y0);
        let at = |tau: T| -> [T; N] {
            if tau == T::zero() {
                *y0
            } else {
                Self::trial(&tab, f, s0, y0, &k1, tau).0
            }
        };
        let (mut a, mut ga) = (T::zero(), g(y0));
        let yb = at(h);
        let (mut b, mut gb) = (h, g(&yb));
        if ga == T::zero() {
            return (s0, *y0);
        }
        if gb == T::zero() {
            return (s0 + h, yb);
        }
        let mut side = 0i8;
        let mut best = (b, yb);
        for _ in 0..200 {
            if (b - a).abs() <= tol_s {
                break;
            }
            let mut c = (a * gb - b * ga) / (gb - ga);
            if !c.is_finite() || (c - a) * (c - b) >= T::zero() {
                c = T::half() * (a + b);
            }
            let yc = at(c);
            let gc = g(&yc);
            best = (c, yc);
            if gc == T::zero() {
                break;
            }
            if gc.signum() == gb.signum() {
                b = c;
                gb = gc;
                if side == 1 {
                    ga = ga * T::half();
                }
                side = 1;
            } else {
                a = c;
                ga = gc;
                if side == -1 {
                    gb = gb * T::half();
                }
                side = -1;
            }
        }
        (s0 + best.0, best.1)
    }
}
