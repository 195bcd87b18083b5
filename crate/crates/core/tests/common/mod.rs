//! Reference computations written without the library's machinery: closed
//! formulas, fixed-step RK4 and a graph shortest path.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub type F1 = fn(f64) -> f64;

/// Profile `m` with `m'` and `m''`.
#[derive(Clone, Copy)]
pub struct Profile {
    pub name: &'static str,
    pub m: F1,
    pub dm: F1,
    pub d2m: F1,
}

pub const EXP_GAUSS: Profile = Profile {
    name: "exp_gauss",
    m: |r| (-r * r).exp(),
    dm: |r| -2.0 * r * (-r * r).exp(),
    d2m: |r| (4.0 * r * r - 2.0) * (-r * r).exp(),
};

pub const SECH: Profile = Profile {
    name: "sech",
    m: |r| 1.0 / r.cosh(),
    dm: |r| -r.sinh() / r.cosh().powi(2),
    d2m: |r| (r.sinh().powi(2) - 1.0) / r.cosh().powi(3),
};

pub const SQRT_POLY: Profile = Profile {
    name: "sqrt_poly",
    m: |r| (1.0 + r * r).sqrt(),
    dm: |r| r / (1.0 + r * r).sqrt(),
    d2m: |r| 1.0 / (1.0 + r * r).powf(1.5),
};

pub const CATALOG: [Profile; 3] = [EXP_GAUSS, SECH, SQRT_POLY];

/// The catalog wind profile `A(r) = r / √(2(r² + 1))`.
pub fn catalog_a(r: f64) -> f64 {
    r / (2.0 * (r * r + 1.0)).sqrt()
}

pub fn catalog_da(r: f64) -> f64 {
    1.0 / (2.0_f64.sqrt() * (r * r + 1.0).powf(1.5))
}

/// Navigation norm of `h = dr² + m² dθ²` with wind `(A, B)`, from the
/// quadratic `|y/F − W|_h = 1`.
pub fn zermelo_norm(m: f64, a: f64, b: f64, y: [f64; 2]) -> f64 {
    let lam = 1.0 - a * a - m * m * b * b;
    let hy = y[0] * y[0] + m * m * y[1] * y[1];
    let wy = a * y[0] + m * m * b * y[1];
    ((lam * hy + wy * wy).sqrt() - wy) / lam
}

/// Gradient of `zermelo_norm` in `y`.
pub fn zermelo_norm_dy(m: f64, a: f64, b: f64, y: [f64; 2]) -> [f64; 2] {
    let lam = 1.0 - a * a - m * m * b * b;
    let hy = y[0] * y[0] + m * m * y[1] * y[1];
    let wy = a * y[0] + m * m * b * y[1];
    let s = (lam * hy + wy * wy).sqrt();
    let wl = [a, m * m * b];
    let hl = [y[0], m * m * y[1]];
    [
        ((lam * hl[0] + wy * wl[0]) / s - wl[0]) / lam,
        ((lam * hl[1] + wy * wl[1]) / s - wl[1]) / lam,
    ]
}

/// Euler–Lagrange flow of `L = ½ F²` for a rotational navigation norm:
/// `∂L/∂y` analytic, its `x`-derivatives and `∂L/∂x` by central differences.
pub struct ElOracle {
    pub profile: Profile,
    pub a: fn(f64) -> f64,
    pub b: f64,
    pub h: f64,
}

impl ElOracle {
    fn f(&self, r: f64, y: [f64; 2]) -> f64 {
        zermelo_norm((self.profile.m)(r), (self.a)(r), self.b, y)
    }

    fn ly(&self, r: f64, y: [f64; 2]) -> [f64; 2] {
        let m = (self.profile.m)(r);
        let a = (self.a)(r);
        let f = zermelo_norm(m, a, self.b, y);
        let g = zermelo_norm_dy(m, a, self.b, y);
        [f * g[0], f * g[1]]
    }

    pub fn norm(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        self.f(x[0], y)
    }

    pub fn accel(&self, x: [f64; 2], y: [f64; 2]) -> [f64; 2] {
        let h = self.h;
        let r = x[0];
        let l = |r: f64| 0.5 * self.f(r, y).powi(2);
        let lr = (l(r + h) - l(r - h)) / (2.0 * h);
        let mut g = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut yp = y;
            let mut ym = y;
            yp[j] += h;
            ym[j] -= h;
            let (p, q) = (self.ly(r, yp), self.ly(r, ym));
            for i in 0..2 {
                g[i][j] = (p[i] - q[i]) / (2.0 * h);
            }
        }
        let (p, q) = (self.ly(r + h, y), self.ly(r - h, y));
        let mixed = [(p[0] - q[0]) / (2.0 * h), (p[1] - q[1]) / (2.0 * h)];
        // L is θ-independent: only the r-column of the mixed block survives
        let rhs = [lr - mixed[0] * y[0], -mixed[1] * y[0]];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        [
            (g[1][1] * rhs[0] - g[0][1] * rhs[1]) / det,
            (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det,
        ]
    }

    fn rk4(&self, s: &mut [f64; 4], dt: f64) {
        let d = |s: &[f64; 4]| {
            let a = self.accel([s[0], s[1]], [s[2], s[3]]);
            [s[2], s[3], a[0], a[1]]
        };
        let add = |s: &[f64; 4], k: &[f64; 4], c: f64| std::array::from_fn::<f64, 4, _>(|i| s[i] + c * k[i]);
        let k1 = d(s);
        let k2 = d(&add(s, &k1, dt / 2.0));
        let k3 = d(&add(s, &k2, dt / 2.0));
        let k4 = d(&add(s, &k3, dt));
        for i in 0..4 {
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    /// `(x, ẋ)` at each of the increasing `times`, RK4 steps of at most `dt`.
    pub fn at_times(&self, x0: [f64; 2], y0: [f64; 2], times: &[f64], dt: f64) -> Vec<[f64; 4]> {
        let mut s = [x0[0], x0[1], y0[0], y0[1]];
        let mut at = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t > at {
                let n = ((t - at) / dt).ceil().max(1.0) as usize;
                let h = (t - at) / n as f64;
                for _ in 0..n {
                    self.rk4(&mut s, h);
                }
                at = t;
            }
            out.push(s);
        }
        out
    }

    /// Uniform samples `k·dt`, `k = 0..=n`.
    pub fn path(&self, x0: [f64; 2], y0: [f64; 2], n: usize, dt: f64) -> Vec<[f64; 4]> {
        let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
        self.at_times(x0, y0, &times, dt)
    }

    /// First sign change of `det(ẋ, J)` with `J` the variation in the normal
    /// launch direction, linearly interpolated.
    pub fn first_conjugate_time(&self, x0: [f64; 2], y0: [f64; 2], t_end: f64, dt: f64) -> Option<f64> {
        let eps = 1e-5;
        let n = (t_end / dt).ceil() as usize;
        let nrm = [-y0[1], y0[0]];
        let p = self.path(x0, [y0[0] + eps * nrm[0], y0[1] + eps * nrm[1]], n, dt);
        let q = self.path(x0, [y0[0] - eps * nrm[0], y0[1] - eps * nrm[1]], n, dt);
        let c = self.path(x0, y0, n, dt);
        let w = |k: usize| (c[k][2] * (p[k][1] - q[k][1]) - c[k][3] * (p[k][0] - q[k][0])) / (2.0 * eps);
        let mut prev = w(1);
        for k in 2..=n {
            let cur = w(k);
            if cur.signum() != prev.signum() {
                let t0 = (k - 1) as f64 * dt;
                return Some(t0 + dt * prev / (prev - cur));
            }
            prev = cur;
        }
        None
    }
}

/// Warped-product geodesic right-hand side for `(r, θ, r', θ')`.
fn geo_rhs(p: &Profile, s: &[f64; 4]) -> [f64; 4] {
    let m = (p.m)(s[0]);
    let dm = (p.dm)(s[0]);
    [s[2], s[3], m * dm * s[3] * s[3], -2.0 * dm / m * s[2] * s[3]]
}

pub fn rk4_geo(p: &Profile, s: &[f64; 4], h: f64) -> [f64; 4] {
    let add = |s: &[f64; 4], k: &[f64; 4], c: f64| std::array::from_fn::<f64, 4, _>(|i| s[i] + c * k[i]);
    let k1 = geo_rhs(p, s);
    let k2 = geo_rhs(p, &add(s, &k1, h / 2.0));
    let k3 = geo_rhs(p, &add(s, &k2, h / 2.0));
    let k4 = geo_rhs(p, &add(s, &k3, h));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Turning radius by bisection on `m(r) = ν`, r > 0, for profiles decreasing in `r > 0`.
pub fn turning_radius(p: &Profile, nu: f64) -> f64 {
    let (mut a, mut b) = (0.0, 1.0);
    while (p.m)(b) > nu {
        b *= 2.0;
    }
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if (p.m)(c) > nu {
            a = c
        } else {
            b = c
        }
    }
    0.5 * (a + b)
}

/// θ-advance between the tangential launch at `r = ξ(ν)` and the next zero of `r'`.
pub fn phi_by_rk4(p: &Profile, nu: f64, h: f64) -> f64 {
    let xi = turning_radius(p, nu);
    let m = (p.m)(xi);
    let mut s = [xi, 0.0, 0.0, nu / (m * m)];
    // leave the turning point first (r' < 0 from here)
    let mut moved = false;
    loop {
        let next = rk4_geo(p, &s, h);
        if moved && next[2] >= 0.0 {
            // Newton on the step length for r'(τ) = 0
            let mut tau = h * s[2] / (s[2] - next[2]);
            for _ in 0..30 {
                let y = rk4_geo(p, &s, tau);
                let f = geo_rhs(p, &y)[2];
                let dtau = y[2] / f;
                tau -= dtau;
                if dtau.abs() < 1e-16 {
                    break;
                }
            }
            return rk4_geo(p, &s, tau)[1];
        }
        if next[2] < 0.0 {
            moved = true;
        }
        s = next;
    }
}

/// `y'' + K(r(s)) y = 0`, `y(0) = 0`, `y'(0) = 1` along the warped geodesic:
/// first `s ≤ length` with `y = 0`, or `None`.
pub fn jacobi_zero_rk4(p: &Profile, r0: f64, angle: f64, length: f64, h: f64) -> Option<f64> {
    let m0 = (p.m)(r0);
    let mut s = [r0, 0.0, angle.cos(), angle.sin() / m0, 0.0, 1.0];
    let rhs = |s: &[f64; 6]| {
        let g = geo_rhs(p, &[s[0], s[1], s[2], s[3]]);
        let k = -(p.d2m)(s[0]) / (p.m)(s[0]);
        [g[0], g[1], g[2], g[3], s[5], -k * s[4]]
    };
    let n = (length / h).ceil() as usize;
    let h = length / n as f64;
    for i in 0..n {
        let add = |s: &[f64; 6], k: &[f64; 6], c: f64| std::array::from_fn::<f64, 6, _>(|j| s[j] + c * k[j]);
        let k1 = rhs(&s);
        let k2 = rhs(&add(&s, &k1, h / 2.0));
        let k3 = rhs(&add(&s, &k2, h / 2.0));
        let k4 = rhs(&add(&s, &k3, h));
        let next: [f64; 6] = std::array::from_fn(|j| s[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        if i > 0 && next[4] <= 0.0 {
            return Some((i + 1) as f64 * h);
        }
        s = next;
    }
    None
}

#[derive(PartialEq)]
struct Node(f64, usize);

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Shortest paths in an `n × n` lattice over `[r_lo, r_hi] × [θ_lo, θ_hi]`
/// with edges to every primitive offset `|di| ≤ 4, |dj| ≤ 12`, weighted by
/// `√(Δr² + m(r_mid)² Δθ²)`.
pub struct Lattice {
    pub n: usize,
    pub r: [f64; 2],
    pub theta: [f64; 2],
    m_half: Vec<f64>,
    stencil: Vec<(i64, i64)>,
}

impl Lattice {
    pub fn new(p: &Profile, n: usize, r: [f64; 2], theta: [f64; 2]) -> Self {
        let dr = (r[1] - r[0]) / (n - 1) as f64;
        // m at every half-index r_lo + k dr / 2
        let m_half = (0..2 * n).map(|k| (p.m)(r[0] + 0.5 * k as f64 * dr)).collect();
        let mut stencil = Vec::new();
        for di in -4_i64..=4 {
            for dj in -12_i64..=12 {
                if (di, dj) != (0, 0) && gcd(di, dj) == 1 {
                    stencil.push((di, dj));
                }
            }
        }
        Self {
            n,
            r,
            theta,
            m_half,
            stencil,
        }
    }

    pub fn node_r(&self, i: usize) -> f64 {
        self.r[0] + (self.r[1] - self.r[0]) * i as f64 / (self.n - 1) as f64
    }

    pub fn node_theta(&self, j: usize) -> f64 {
        self.theta[0] + (self.theta[1] - self.theta[0]) * j as f64 / (self.n - 1) as f64
    }

    pub fn distance(&self, from: (usize, usize), to: (usize, usize)) -> f64 {
        let n = self.n;
        let dr = (self.r[1] - self.r[0]) / (n - 1) as f64;
        let dth = (self.theta[1] - self.theta[0]) / (n - 1) as f64;
        let idx = |i: usize, j: usize| i * n + j;
        let mut dist = vec![f64::INFINITY; n * n];
        let mut heap = BinaryHeap::new();
        let target = idx(to.0, to.1);
        dist[idx(from.0, from.1)] = 0.0;
        heap.push(Node(0.0, idx(from.0, from.1)));
        while let Some(Node(d, k)) = heap.pop() {
            if k == target {
                return d;
            }
            if d > dist[k] {
                continue;
            }
            let (i, j) = ((k / n) as i64, (k % n) as i64);
            for &(di, dj) in &self.stencil {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                    continue;
                }
                let m = self.m_half[(i + a) as usize];
                let w = ((di as f64 * dr).powi(2) + (m * dj as f64 * dth).powi(2)).sqrt();
                let kk = a as usize * n + b as usize;
                if d + w < dist[kk] {
                    dist[kk] = d + w;
                    heap.push(Node(d + w, kk));
                }
            }
        }
        f64::INFINITY
    }
}

/// Travel time along a meridian against or with a constant radial wind `A`,
/// `h`-speed 1 relative to the medium.
pub fn meridian_travel_time(r_from: f64, r_to: f64, a: f64) -> f64 {
    let dr = r_to - r_from;
    if dr >= 0.0 {
        dr / (1.0 + a)
    } else {
        -dr / (1.0 - a)
    }
}
