use crate::numerics::{richardson_diff, richardson_diff2};
use crate::scalar::Scalar;
use crate::zermelo::Vec2;

/// Geodesics of `L(x, y) = ½ F(x, y)²` from the Euler–Lagrange equations,
/// with every derivative of `L` taken by finite differences.
///
/// Knows nothing about the structure of `F`; used as an oracle for curves
/// produced by other means.
pub struct EulerLagrange<T, L> {
    lagrangian: L,
    fd_step: T,
}

/// `(t, x, ẋ)`
pub type ElSample<T> = (T, Vec2<T>, Vec2<T>);

impl<T: Scalar, L: Fn(Vec2<T>, Vec2<T>) -> T> EulerLagrange<T, L> {
    pub fn new(lagrangian: L) -> Self {
        Self {
            lagrangian,
            fd_step: T::c(1e-3),
        }
    }

    pub fn with_fd_step(mut self, h: T) -> Self {
        self.fd_step = h;
        self
    }

    fn l(&self, x: Vec2<T>, y: Vec2<T>) -> T {
        (self.lagrangian)(x, y)
    }

    fn mixed(&self, f: impl Fn(T, T) -> T, a: T, b: T) -> T {
        let d = |h: T| (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (T::c(4.0) * h * h);
        let h = self.fd_step;
        (T::c(4.0) * d(h * T::half()) - d(h)) / T::c(3.0)
    }

    /// `ẍ` solving `L_{y^i y^j} ẍ^j = L_{x^i} − L_{y^i x^j} ẏ^j`.
    pub fn accel(&self, x: Vec2<T>, y: Vec2<T>) -> Vec2<T> {
        let h = self.fd_step;
        let set = |v: Vec2<T>, i: usize, s: T| {
            let mut w = v;
            w[i] = s;
            w
        };
        let mut g = [[T::zero(); 2]; 2];
        for i in 0..2 {
            g[i][i] = richardson_diff2(|s| self.l(x, set(y, i, s)), y[i], h);
        }
        g[0][1] = self.mixed(|a, b| self.l(x, [a, b]), y[0], y[1]);
        g[1][0] = g[0][1];
        let mut rhs = [T::zero(); 2];
        for i in 0..2 {
            let lx = richardson_diff(|s| self.l(set(x, i, s), y), x[i], h);
            let mut cross = T::zero();
            for j in 0..2 {
                let m = self.mixed(|a, b| self.l(set(x, j, b), set(y, i, a)), y[i], x[j]);
                cross = cross + m * y[j];
            }
            rhs[i] = lx - cross;
        }
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        [
            (g[1][1] * rhs[0] - g[0][1] * rhs[1]) / det,
            (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det,
        ]
    }

    fn deriv(&self, s: &[T; 4]) -> [T; 4] {
        let a = self.accel([s[0], s[1]], [s[2], s[3]]);
        [s[2], s[3], a[0], a[1]]
    }

    fn rk4(&self, s: &mut [T; 4], h: T) {
        let add = |s: &[T; 4], k: &[T; 4], c: T| [s[0] + c * k[0], s[1] + c * k[1], s[2] + c * k[2], s[3] + c * k[3]];
        let k1 = self.deriv(s);
        let k2 = self.deriv(&add(s, &k1, h * T::half()));
        let k3 = self.deriv(&add(s, &k2, h * T::half()));
        let k4 = self.deriv(&add(s, &k3, h));
        let six = h / T::c(6.0);
        for j in 0..4 {
            s[j] = s[j] + six * (k1[j] + T::two() * (k2[j] + k3[j]) + k4[j]);
        }
    }

    /// Classical RK4 with step `dt` up to `t_end`; one sample per step.
    pub fn integrate(&self, x0: Vec2<T>, y0: Vec2<T>, t_end: T, dt: T) -> Vec<ElSample<T>> {
        let n = (t_end / dt).ceil().to_usize().unwrap_or(0).max(1);
        let h = t_end / T::from_usize_lossy(n);
        let times: Vec<T> = (0..=n).map(|i| h * T::from_usize_lossy(i)).collect();
        self.at_times(x0, y0, &times, dt)
    }

    /// States at increasing `times` (starting at 0), with RK4 steps of at most `max_dt` between them.
    pub fn at_times(&self, x0: Vec2<T>, y0: Vec2<T>, times: &[T], max_dt: T) -> Vec<ElSample<T>> {
        let mut s = [x0[0], x0[1], y0[0], y0[1]];
        let mut at = T::zero();
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let span = t - at;
            if span > T::zero() {
                let n = (span / max_dt).ceil().to_usize().unwrap_or(1).max(1);
                let h = span / T::from_usize_lossy(n);
                for _ in 0..n {
                    self.rk4(&mut s, h);
                }
                at = t;
            }
            out.push((t, [s[0], s[1]], [s[2], s[3]]));
        }
        out
    }

    /// First zero of `det(ẋ, J)` where `J` is the central difference of the
    /// geodesics launched at `y0 ± ε n`, `n` the coordinate normal of `y0`.
    /// Linear interpolation between RK4 samples.
    pub fn first_conjugate_time(&self, x0: Vec2<T>, y0: Vec2<T>, t_end: T, dt: T, eps: T) -> Option<T> {
        let n = [-y0[1], y0[0]];
        let plus = self.integrate(x0, [y0[0] + eps * n[0], y0[1] + eps * n[1]], t_end, dt);
        let minus = self.integrate(x0, [y0[0] - eps * n[0], y0[1] - eps * n[1]], t_end, dt);
        let base = self.integrate(x0, y0, t_end, dt);
        let w = |i: usize| {
            let j = [plus[i].1[0] - minus[i].1[0], plus[i].1[1] - minus[i].1[1]];
            let v = base[i].2;
            v[0] * j[1] - v[1] * j[0]
        };
        let mut prev = w(1);
        for i in 2..base.len() {
            let cur = w(i);
            if cur.signum() != prev.signum() {
                let (t0, t1) = (base[i - 1].0, base[i].0);
                return Some(t0 + (t1 - t0) * prev / (prev - cur));
            }
            prev = cur;
        }
        None
    }
}
