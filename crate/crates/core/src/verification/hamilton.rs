use crate::geometry::WarpFunction;
use crate::numerics::richardson_diff;
use crate::scalar::{Point, Scalar};
use crate::zermelo::{RandersPointData, Vec2};

/// `(r, θ; p_r, p_θ)`
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct CotangentPoint<T> {
    pub r: T,
    pub theta: T,
    pub pr: T,
    pub ptheta: T,
}

impl<T: Scalar> CotangentPoint<T> {
    pub fn new(r: T, theta: T, pr: T, ptheta: T) -> Self {
        Self { r, theta, pr, ptheta }
    }

    fn get(&self, i: usize) -> T {
        [self.r, self.theta, self.pr, self.ptheta][i]
    }

    fn with(mut self, i: usize, v: T) -> Self {
        match i {
            0 => self.r = v,
            1 => self.theta = v,
            2 => self.pr = v,
            _ => self.ptheta = v,
        }
        self
    }
}

/// Vector field `(r, θ) ↦ (V^r, V^θ)`.
pub type Field<'a, T> = &'a (dyn Fn(T, T) -> Vec2<T> + Sync);

/// Function on the cotangent bundle.
pub type Hamiltonian<'a, T> = &'a (dyn Fn(&CotangentPoint<T>) -> T + Sync);

/// `F* = √(h^{ij} p_i p_j) + V^i p_i`: the co-metric of the navigation metric of `(h, V)`.
pub fn legendre_dual_norm<T: Scalar>(warp: &WarpFunction<T>, v: Field<'_, T>, cp: &CotangentPoint<T>) -> T {
    let m = warp.m(cp.r);
    let w = v(cp.r, cp.theta);
    (cp.pr * cp.pr + cp.ptheta * cp.ptheta / (m * m)).sqrt() + w[0] * cp.pr + w[1] * cp.ptheta
}

/// `max { p(y) : F(y) = 1 }` over `n` directions of the indicatrix, then
/// golden-section refinement around the best one.
pub fn dual_norm_by_indicatrix<T: Scalar>(f: &RandersPointData<T>, p: Vec2<T>, n: usize) -> T {
    let tau = T::TAU();
    let value = |phi: T| {
        let (s, c) = phi.sin_cos();
        let u = [c, s];
        (p[0] * u[0] + p[1] * u[1]) / f.norm(u)
    };
    let step = tau / T::from_usize_lossy(n);
    let (mut best, mut at) = (T::neg_infinity(), T::zero());
    for i in 0..n {
        let phi = step * T::from_usize_lossy(i);
        let v = value(phi);
        if v > best {
            best = v;
            at = phi;
        }
    }
    let g = T::c(0.618_033_988_749_894_9);
    let (mut a, mut b) = (at - step, at + step);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (value(x1), value(x2));
    for _ in 0..100 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = value(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = value(x1);
        }
    }
    best.max(f1).max(f2)
}

/// Momentum function `W* = W^i p_i` of a vector field.
pub fn momentum<T: Scalar>(w: Field<'_, T>, cp: &CotangentPoint<T>) -> T {
    let v = w(cp.r, cp.theta);
    v[0] * cp.pr + v[1] * cp.ptheta
}

/// `{f, g} = ∂f/∂p_k ∂g/∂x^k − ∂f/∂x^k ∂g/∂p_k` by centered differences with
/// one Richardson extrapolation.
pub fn poisson_bracket<T: Scalar>(f: Hamiltonian<'_, T>, g: Hamiltonian<'_, T>, cp: &CotangentPoint<T>, fd_step: T) -> T {
    let d = |h: Hamiltonian<'_, T>, i: usize| richardson_diff(|v| h(&cp.with(i, v)), cp.get(i), fd_step);
    let mut acc = T::zero();
    for k in 0..2 {
        acc = acc + d(f, k + 2) * d(g, k) - d(f, k) * d(g, k + 2);
    }
    acc
}

/// `[V, W]^k = V^i ∂_i W^k − W^i ∂_i V^k`.
pub fn lie_bracket<T: Scalar>(v: Field<'_, T>, w: Field<'_, T>, point: Point<T>, fd_step: T) -> Vec2<T> {
    let (r, th) = (point.r, point.theta);
    let jac = |f: Field<'_, T>| -> [[T; 2]; 2] {
        // jac[k][i] = ∂_i f^k
        let mut j = [[T::zero(); 2]; 2];
        for k in 0..2 {
            j[k][0] = richardson_diff(|x| f(x, th)[k], r, fd_step);
            j[k][1] = richardson_diff(|x| f(r, x)[k], th, fd_step);
        }
        j
    };
    let (jv, jw) = (jac(v), jac(w));
    let (vv, ww) = (v(r, th), w(r, th));
    let mut out = [T::zero(); 2];
    for k in 0..2 {
        out[k] = vv[0] * jw[k][0] + vv[1] * jw[k][1] - ww[0] * jv[k][0] - ww[1] * jv[k][1];
    }
    out
}

/// Max-norm of `W_{i:j} + W_{j:i}` for `h = dr² + m² dθ²`.
pub fn killing_residual_h<T: Scalar>(warp: &WarpFunction<T>, w: Field<'_, T>, point: Point<T>, fd_step: T) -> T {
    let (r, th) = (point.r, point.theta);
    let lower = |r: T, th: T| -> Vec2<T> {
        let v = w(r, th);
        let m = warp.m(r);
        [v[0], m * m * v[1]]
    };
    // ∂_j W_i
    let mut dw = [[T::zero(); 2]; 2];
    for i in 0..2 {
        dw[i][0] = richardson_diff(|x| lower(x, th)[i], r, fd_step);
        dw[i][1] = richardson_diff(|x| lower(r, x)[i], th, fd_step);
    }
    let wl = lower(r, th);
    let m = warp.m(r);
    let dm = warp.dm(r);
    // Γ^r_θθ = −m m', Γ^θ_rθ = m'/m
    let g_r_tt = -m * dm;
    let g_t_rt = dm / m;
    // ∇_j W_i = ∂_j W_i − Γ^k_{ij} W_k
    let nabla = |i: usize, j: usize| -> T {
        let gamma_k = match (i, j) {
            (1, 1) => [g_r_tt, T::zero()],
            (0, 1) | (1, 0) => [T::zero(), g_t_rt],
            _ => [T::zero(), T::zero()],
        };
        dw[i][j] - gamma_k[0] * wl[0] - gamma_k[1] * wl[1]
    };
    let mut worst = T::zero();
    for i in 0..2 {
        for j in i..2 {
            worst = worst.max((nabla(i, j) + nabla(j, i)).abs());
        }
    }
    worst
}
