//! Navigation solvers: the Randers metric whose indicatrix is the base
//! indicatrix translated by a wind.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Fn1, WarpFunction};
use crate::scalar::{Interval, Point, Scalar};

pub type Vec2<T> = [T; 2];

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Sym2<T> {
    pub xx: T,
    pub xy: T,
    pub yy: T,
}

impl<T: Scalar> Sym2<T> {
    pub fn new(xx: T, xy: T, yy: T) -> Self {
        Self { xx, xy, yy }
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one())
    }

    pub fn diag(xx: T, yy: T) -> Self {
        Self::new(xx, T::zero(), yy)
    }

    pub fn det(&self) -> T {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self::new(self.yy / d, -self.xy / d, self.xx / d)
    }

    pub fn apply(&self, v: Vec2<T>) -> Vec2<T> {
        [self.xx * v[0] + self.xy * v[1], self.xy * v[0] + self.yy * v[1]]
    }

    /// `vᵀ M v`
    pub fn quad(&self, v: Vec2<T>) -> T {
        let w = self.apply(v);
        w[0] * v[0] + w[1] * v[1]
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.xx * k, self.xy * k, self.yy * k)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    /// `u ⊗ u`
    pub fn outer(u: Vec2<T>) -> Self {
        Self::new(u[0] * u[0], u[0] * u[1], u[1] * u[1])
    }

    /// Both eigenvalues above `tol` (2×2 criterion: `xx > tol` and `det > tol`).
    pub fn is_spd(&self, tol: T) -> bool {
        self.xx > tol && self.det() > tol
    }

    pub fn eigenvalues(&self) -> (T, T) {
        let m = T::half() * (self.xx + self.yy);
        let d = (T::half() * (self.xx - self.yy)).hypot(self.xy);
        (m - d, m + d)
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.xx - o.xx)
            .abs()
            .max((self.xy - o.xy).abs())
            .max((self.yy - o.yy).abs())
    }
}

#[inline]
pub fn dot<T: Scalar>(u: Vec2<T>, v: Vec2<T>) -> T {
    u[0] * v[0] + u[1] * v[1]
}

/// Pointwise Randers data `F(y) = √(yᵀ a y) + b·y`.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct RandersPointData<T> {
    pub a: Sym2<T>,
    pub b: Vec2<T>,
    pub point: Point<T>,
}

pub(crate) const SPD_TOL: f64 = 1e-14;
pub(crate) const MIN_LAMBDA: f64 = 1e-10;

impl<T: Scalar> RandersPointData<T> {
    pub fn riemannian(a: Sym2<T>) -> Self {
        Self {
            a,
            b: [T::zero(); 2],
            point: Point::default(),
        }
    }

    pub fn at(mut self, point: Point<T>) -> Self {
        self.point = point;
        self
    }

    pub fn alpha(&self, y: Vec2<T>) -> T {
        self.a.quad(y).max(T::zero()).sqrt()
    }

    pub fn beta(&self, y: Vec2<T>) -> T {
        dot(self.b, y)
    }

    pub fn norm(&self, y: Vec2<T>) -> T {
        self.alpha(y) + self.beta(y)
    }

    /// `‖b‖²_a = a^{ij} b_i b_j`
    pub fn b_norm2(&self) -> T {
        self.a.inverse().quad(self.b)
    }

    pub fn is_valid(&self) -> bool {
        self.a.is_spd(T::c(SPD_TOL)) && self.b_norm2() < T::one()
    }

    pub fn check(self) -> Result<Self> {
        if !self.a.is_spd(T::c(SPD_TOL)) {
            return Err(Error::InvalidInput(format!(
                "a is not positive definite (a11 = {:e}, det = {:e})",
                self.a.xx.as_f64(),
                self.a.det().as_f64()
            )));
        }
        let bb = self.b_norm2();
        if !(bb < T::one()) {
            return Err(Error::InvalidInput(format!("|b|_a^2 = {} >= 1", bb.as_f64())));
        }
        Ok(self)
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.a
            .max_abs_diff(&o.a)
            .max((self.b[0] - o.b[0]).abs())
            .max((self.b[1] - o.b[1]).abs())
    }
}

pub fn randers_norm<T: Scalar>(data: &RandersPointData<T>, y: Vec2<T>) -> T {
    data.norm(y)
}

/// `F(−W) < 1`: the indicatrix of `F` contains `W`, so the translated one contains the origin.
pub fn validate_wind<T: Scalar, F: Fn(Vec2<T>) -> T>(f_eval: F, w: Vec2<T>) -> bool {
    f_eval([-w[0], -w[1]]) < T::one()
}

fn too_strong<T: Scalar>(r: T, detail: String) -> Error {
    Error::WindTooStrong { r: r.as_f64(), detail }
}

/// Randers metric of the navigation problem with Riemannian data `h` and wind `W`:
/// `ã = h/Λ + W♭⊗W♭/Λ²`, `b̃ = −W♭/Λ`, `Λ = 1 − ‖W‖²_h`.
pub fn solve_nav_riemannian<T: Scalar>(h: &Sym2<T>, w: Vec2<T>) -> Result<RandersPointData<T>> {
    let wl = h.apply(w);
    let lam = T::one() - dot(wl, w);
    if !(lam >= T::c(MIN_LAMBDA)) {
        return Err(too_strong(
            T::nan(),
            format!("|W|_h^2 = {} (need < 1)", (T::one() - lam).as_f64()),
        ));
    }
    let a = h.scale(T::one() / lam).add(&Sym2::outer(wl).scale(T::one() / (lam * lam)));
    let b = [-wl[0] / lam, -wl[1] / lam];
    RandersPointData { a, b, point: Point::default() }.check()
}

/// Navigation with a Randers base `F₁ = α + β` and wind `W` (the base `F₁`
/// must satisfy `F₁(−W) < 1`).
pub fn solve_nav_randers<T: Scalar>(f1: &RandersPointData<T>, w: Vec2<T>) -> Result<RandersPointData<T>> {
    if !validate_wind(|y| f1.norm(y), w) {
        return Err(too_strong(
            f1.point.r,
            format!("F(-W) = {} (need < 1)", f1.norm([-w[0], -w[1]]).as_f64()),
        ));
    }
    let wl = f1.a.apply(w);
    let bw = T::one() + f1.beta(w);
    let eta = bw * bw - dot(wl, w);
    if !(eta >= T::c(MIN_LAMBDA)) {
        return Err(too_strong(f1.point.r, format!("eta = {:e}", eta.as_f64())));
    }
    let u = [wl[0] - f1.b[0] * bw, wl[1] - f1.b[1] * bw];
    let a = f1
        .a
        .add(&Sym2::outer(f1.b).scale(-T::one()))
        .scale(T::one() / eta)
        .add(&Sym2::outer(u).scale(T::one() / (eta * eta)));
    let b = [-u[0] / eta, -u[1] / eta];
    RandersPointData { a, b, point: f1.point }.check()
}

/// `η = [1 + β(W)]² − α²(W)` of a Randers base and wind.
pub fn eta<T: Scalar>(f1: &RandersPointData<T>, w: Vec2<T>) -> T {
    let bw = T::one() + f1.beta(w);
    bw * bw - f1.a.quad(w)
}

/// Fold of [`solve_nav_randers`] over `winds`, starting from `h` itself.
pub fn compose_k_step<T: Scalar>(h: &Sym2<T>, winds: &[Vec2<T>]) -> Result<RandersPointData<T>> {
    let mut f = solve_nav_riemannian(h, [T::zero(); 2])?;
    for (step, w) in winds.iter().enumerate() {
        f = solve_nav_randers(&f, *w).map_err(|e| Error::WindStep {
            step,
            detail: e.to_string(),
        })?;
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindKind {
    /// `A` constant
    Constant,
    /// `A(r) = amp · r / √(r² + 1)`
    BoundedOdd,
    Custom,
}

/// Wind `W̃ = A(r) ∂r + B ∂θ`.
#[derive(Clone)]
pub struct WindSpec<T> {
    kind: WindKind,
    a: Fn1<T>,
    da: Fn1<T>,
    d2a: Fn1<T>,
    b: T,
}

impl<T: std::fmt::Debug> std::fmt::Debug for WindSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WindSpec")
            .field("kind", &self.kind)
            .field("B", &self.b)
            .finish()
    }
}

impl<T: Scalar> WindSpec<T> {
    pub fn calm() -> Self {
        Self::constant(T::zero(), T::zero())
    }

    pub fn constant(a: T, b: T) -> Self {
        Self {
            kind: WindKind::Constant,
            a: Arc::new(move |_| a),
            da: Arc::new(|_| T::zero()),
            d2a: Arc::new(|_| T::zero()),
            b,
        }
    }

    /// `A(r) = amp · r/√(r²+1)`; `amp = 1/√2` is the catalog wind.
    pub fn bounded_odd(amp: T, b: T) -> Self {
        Self {
            kind: WindKind::BoundedOdd,
            a: Arc::new(move |r: T| amp * r / (r * r + T::one()).sqrt()),
            da: Arc::new(move |r: T| amp / (r * r + T::one()).powf(T::c(1.5))),
            d2a: Arc::new(move |r: T| -T::c(3.0) * amp * r / (r * r + T::one()).powf(T::c(2.5))),
            b,
        }
    }

    pub fn catalog_amp() -> T {
        T::FRAC_1_SQRT_2()
    }

    pub fn custom(a: Fn1<T>, da: Fn1<T>, d2a: Fn1<T>, b: T) -> Self {
        Self {
            kind: WindKind::Custom,
            a,
            da,
            d2a,
            b,
        }
    }

    pub fn with_b(mut self, b: T) -> Self {
        self.b = b;
        self
    }

    pub fn kind(&self) -> WindKind {
        self.kind
    }

    #[inline]
    pub fn a(&self, r: T) -> T {
        (self.a)(r)
    }

    #[inline]
    pub fn da(&self, r: T) -> T {
        (self.da)(r)
    }

    #[inline]
    pub fn d2a(&self, r: T) -> T {
        (self.d2a)(r)
    }

    #[inline]
    pub fn b(&self) -> T {
        self.b
    }

    /// Radial part `V = A ∂r` only.
    pub fn radial(&self) -> Self {
        let mut w = self.clone();
        w.b = T::zero();
        w
    }

    pub fn vector(&self, r: T) -> Vec2<T> {
        [self.a(r), self.b]
    }

    /// `λ = 1 − A²`
    pub fn lambda(&self, r: T) -> T {
        let a = self.a(r);
        T::one() - a * a
    }

    /// `Λ = 1 − A² − B² m²`
    pub fn big_lambda(&self, warp: &WarpFunction<T>, r: T) -> T {
        let bm = self.b * warp.m(r);
        self.lambda(r) - bm * bm
    }

    /// Λ on an `n`-point grid of `window`; errors at the first `r` with `Λ < 1e−10`.
    pub fn check_admissible(&self, warp: &WarpFunction<T>, window: Interval<T>, n: usize) -> Result<T> {
        let mut least = T::infinity();
        for r in window.grid(n) {
            let l = self.big_lambda(warp, r);
            if !(l >= T::c(MIN_LAMBDA)) {
                return Err(too_strong(
                    r,
                    format!("Lambda = 1 - A^2 - B^2 m^2 = {:e}", l.as_f64()),
                ));
            }
            least = least.min(l);
        }
        Ok(least)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NavScalars<T> {
    pub lambda: T,
    #[serde(rename = "Lambda")]
    pub big_lambda: T,
    pub eta: T,
}

impl<T: Scalar> NavScalars<T> {
    /// `|η λ − Λ|`
    pub fn identity_residual(&self) -> T {
        (self.eta * self.lambda - self.big_lambda).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RotationalNav<T> {
    /// Solution for `(h, A ∂r + B ∂θ)`.
    pub ftilde: RandersPointData<T>,
    /// Solution for `(h, A ∂r)`; closed β.
    pub f: RandersPointData<T>,
    pub scalars: NavScalars<T>,
}

/// `h = diag(1, m²)` at `r`.
pub fn h_matrix<T: Scalar>(warp: &WarpFunction<T>, r: T) -> Sym2<T> {
    let m = warp.m(r);
    Sym2::diag(T::one(), m * m)
}

/// Closed forms of both navigation metrics at radius `r`.
pub fn rotational_closed_form<T: Scalar>(
    warp: &WarpFunction<T>,
    wind: &WindSpec<T>,
    r: T,
) -> Result<RotationalNav<T>> {
    let m = warp.m(r);
    let m2 = m * m;
    let a = wind.a(r);
    let b = wind.b();
    let lam = T::one() - a * a;
    let big = lam - b * b * m2;
    if !(big >= T::c(MIN_LAMBDA)) || !(lam >= T::c(MIN_LAMBDA)) {
        return Err(too_strong(r, format!("Lambda = {:e}", big.as_f64())));
    }
    let point = Point::new(r, T::zero());
    let l2 = big * big;
    let ftilde = RandersPointData {
        a: Sym2::new((T::one() - b * b * m2) / l2, b * a * m2 / l2, m2 * lam / l2),
        b: [-a / big, -b * m2 / big],
        point,
    };
    let f = RandersPointData {
        a: Sym2::diag(T::one() / (lam * lam), m2 / lam),
        b: [-a / lam, T::zero()],
        point,
    };
    let scalars = NavScalars {
        lambda: lam,
        big_lambda: big,
        eta: eta(&f, [T::zero(), b]),
    };
    Ok(RotationalNav { ftilde, f, scalars })
}

/// `F̃` at `r` from the closed form.
pub fn ftilde_at<T: Scalar>(warp: &WarpFunction<T>, wind: &WindSpec<T>, r: T) -> Result<RandersPointData<T>> {
    rotational_closed_form(warp, wind, r).map(|n| n.ftilde)
}
