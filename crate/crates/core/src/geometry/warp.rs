use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::NaturalSpline;
use crate::scalar::{Interval, Scalar};

/// Shared scalar callable `r -> value`.
pub type Fn1<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarpKind {
    /// `m = exp(-r²)`
    ExpGauss,
    /// `m = 1 / cosh r`
    Sech,
    /// `m = sqrt(1 + r²)`
    SqrtPoly,
    /// natural cubic spline through samples
    Table,
    Custom,
}

/// Warp profile `m(r) > 0` with its first two derivatives.
#[derive(Clone)]
pub struct WarpFunction<T> {
    kind: WarpKind,
    m: Fn1<T>,
    dm: Fn1<T>,
    d2m: Fn1<T>,
    window: Interval<T>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for WarpFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WarpFunction")
            .field("kind", &self.kind)
            .field("window", &self.window)
            .finish()
    }
}

pub(crate) fn default_window<T: Scalar>() -> Interval<T> {
    Interval::new(T::c(-10.0), T::c(10.0))
}

impl<T: Scalar> WarpFunction<T> {
    pub fn exp_gauss() -> Self {
        Self {
            kind: WarpKind::ExpGauss,
            m: Arc::new(|r: T| (-r * r).exp()),
            dm: Arc::new(|r: T| -T::two() * r * (-r * r).exp()),
            d2m: Arc::new(|r: T| (T::c(4.0) * r * r - T::two()) * (-r * r).exp()),
            window: default_window(),
        }
    }

    pub fn sech() -> Self {
        Self {
            kind: WarpKind::Sech,
            m: Arc::new(|r: T| T::one() / r.cosh()),
            dm: Arc::new(|r: T| -r.tanh() / r.cosh()),
            d2m: Arc::new(|r: T| {
                let s = T::one() / r.cosh();
                let t = r.tanh();
                s * (t * t - s * s)
            }),
            window: default_window(),
        }
    }

    pub fn sqrt_poly() -> Self {
        Self {
            kind: WarpKind::SqrtPoly,
            m: Arc::new(|r: T| (T::one() + r * r).sqrt()),
            dm: Arc::new(|r: T| r / (T::one() + r * r).sqrt()),
            d2m: Arc::new(|r: T| (T::one() + r * r).powf(T::c(-1.5))),
            window: default_window(),
        }
    }

    /// Cubic-spline warp through `(r_i, m_i)`; the window is the sample range.
    pub fn table(r: Vec<T>, m: Vec<T>) -> Result<Self> {
        if let Some(bad) = m.iter().position(|v| *v <= T::zero()) {
            return Err(Error::InvalidInput(format!(
                "table warp sample {bad} is not positive"
            )));
        }
        let spline = Arc::new(NaturalSpline::new(r, m)?);
        let (lo, hi) = spline.domain();
        let (s0, s1, s2) = (spline.clone(), spline.clone(), spline);
        Ok(Self {
            kind: WarpKind::Table,
            m: Arc::new(move |r| s0.eval(r).0),
            dm: Arc::new(move |r| s1.eval(r).1),
            d2m: Arc::new(move |r| s2.eval(r).2),
            window: Interval::new(lo, hi),
        })
    }

    pub fn custom(m: Fn1<T>, dm: Fn1<T>, d2m: Fn1<T>, window: Interval<T>) -> Self {
        Self {
            kind: WarpKind::Custom,
            m,
            dm,
            d2m,
            window,
        }
    }

    pub fn with_window(mut self, window: Interval<T>) -> Self {
        self.window = window;
        self
    }

    pub fn kind(&self) -> WarpKind {
        self.kind
    }

    pub fn window(&self) -> Interval<T> {
        self.window
    }

    #[inline]
    pub fn m(&self, r: T) -> T {
        (self.m)(r)
    }

    #[inline]
    pub fn dm(&self, r: T) -> T {
        (self.dm)(r)
    }

    #[inline]
    pub fn d2m(&self, r: T) -> T {
        (self.d2m)(r)
    }

    pub fn check_domain(&self, r: T) -> Result<()> {
        if self.window.contains(r) {
            Ok(())
        } else {
            Err(Error::Domain {
                r: r.as_f64(),
                lo: self.window.lo.as_f64(),
                hi: self.window.hi.as_f64(),
            })
        }
    }

    /// Smallest sampled `m` on an `n`-point grid of the window; errors on the
    /// first non-positive sample.
    pub fn check_positive(&self, n: usize) -> Result<T> {
        let mut lo = T::infinity();
        for r in self.window.grid(n) {
            let v = self.m(r);
            if !(v > T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "warp not positive at r = {}",
                    r.as_f64()
                )));
            }
            lo = lo.min(v);
        }
        Ok(lo)
    }

    /// Largest `|m(r) - m(-r)|` over `n` points of `[0, min(|lo|, hi)]`.
    pub fn evenness_defect(&self, n: usize) -> T {
        let reach = self.window.hi.min(-self.window.lo);
        if reach <= T::zero() {
            return T::infinity();
        }
        Interval::new(T::zero(), reach)
            .grid(n)
            .into_iter()
            .map(|r| (self.m(r) - self.m(-r)).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_even(&self, tol: T) -> bool {
        self.evenness_defect(201) <= tol
    }
}
