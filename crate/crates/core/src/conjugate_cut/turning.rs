use crate::error::{Error, Result};
use crate::geometry::{integrate_geodesic_with, GeodesicOptions, RiemannState, Termination, WarpFunction};
use crate::numerics::{bisect, first_sign_change, integrate, kronrod};
use crate::scalar::{Interval, Scalar};

/// `sup { r > 0 : m'(r) < 0 }`, possibly unbounded.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Supremum<T> {
    Finite(T),
    /// `m' < 0` up to the edge of the window.
    Unbounded,
}

impl<T: Scalar> Supremum<T> {
    pub fn value(&self) -> T {
        match *self {
            Supremum::Finite(v) => v,
            Supremum::Unbounded => T::infinity(),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Supremum::Unbounded)
    }
}

const SCAN: usize = 8001;

/// `r₀ = sup { r > 0 : m'(r) < 0 }` by a sign scan of `m'` on `(0, r_max]`
/// refined by bisection; `sup ∅ = 0`.
pub fn r0_sup<T: Scalar>(warp: &WarpFunction<T>) -> Supremum<T> {
    let hi = warp.window().hi;
    if !(hi > T::zero()) {
        return Supremum::Finite(T::zero());
    }
    let grid = Interval::new(T::zero(), hi).grid(SCAN);
    let last_neg = (1..grid.len()).rev().find(|&i| warp.dm(grid[i]) < T::zero());
    match last_neg {
        None => Supremum::Finite(T::zero()),
        Some(i) if i == grid.len() - 1 => Supremum::Unbounded,
        Some(i) => {
            // m' < 0 at grid[i], >= 0 at grid[i+1]
            let root = bisect(
                |r| if warp.dm(r) < T::zero() { -T::one() } else { T::one() },
                grid[i],
                grid[i + 1],
                T::c(1e-14),
            )
            .unwrap_or(grid[i]);
            Supremum::Finite(root)
        }
    }
}

/// `ξ(ν) = min { r > 0 : m(r) = ν }`.
pub fn xi<T: Scalar>(warp: &WarpFunction<T>, nu: T) -> Result<T> {
    let m0 = warp.m(T::zero());
    if nu == m0 {
        return Ok(T::zero());
    }
    if !(nu > T::zero() && nu < m0) {
        return Err(Error::NoRoot(format!(
            "nu = {} outside (0, m(0) = {})",
            nu.as_f64(),
            m0.as_f64()
        )));
    }
    let hi = warp.window().hi;
    let grid = Interval::new(T::zero(), hi).grid(4 * SCAN);
    let (a, b) = first_sign_change(|r| warp.m(r) - nu, &grid).ok_or_else(|| {
        Error::NoRoot(format!("m(r) = {} has no root in (0, {}]", nu.as_f64(), hi.as_f64()))
    })?;
    bisect(|r| warp.m(r) - nu, a, b, T::c(1e-15))
}

/// `φ(m(0))`: the limit of `φ(ν)` as the geodesic flattens onto the equator,
/// `π / (m(0) √G(0))`.
fn equatorial_limit<T: Scalar>(warp: &WarpFunction<T>) -> Result<T> {
    let m0 = warp.m(T::zero());
    let k0 = -warp.d2m(T::zero()) / m0;
    if !(k0 > T::zero()) {
        return Err(Error::SingularTurningPoint {
            xi: 0.0,
            dm: warp.dm(T::zero()).as_f64(),
        });
    }
    Ok(T::PI() / (m0 * k0.sqrt()))
}

/// `φ(ν) = 2 ∫₀^ξ ν / (m √(m² − ν²)) dr`, evaluated after `r = ξ − u²`.
pub fn phi<T: Scalar>(warp: &WarpFunction<T>, nu: T, quad_tol: T) -> Result<T> {
    let x = xi(warp, nu)?;
    if x == T::zero() {
        return equatorial_limit(warp);
    }
    let dm = warp.dm(x);
    if dm.abs() < T::c(1e-10) {
        return Err(Error::SingularTurningPoint {
            xi: x.as_f64(),
            dm: dm.abs().as_f64(),
        });
    }
    let nu_e = warp.m(x);
    let integrand = |u: T| {
        let d = u * u;
        let m = warp.m(x - d);
        // (m − ν)/u² without cancellation: −∫₀¹ m'(ξ − σ u²) dσ while m is close to ν
        let gap = if (m - nu_e).abs() > T::c(1e-3) * nu_e {
            (m - nu_e) / d
        } else {
            -kronrod(&|sg: T| warp.dm(x - sg * d), T::zero(), T::one()).0
        };
        T::two() * nu_e / (m * (gap * (m + nu_e)).sqrt())
    };
    Ok(T::two() * integrate(integrand, T::zero(), x.sqrt(), quad_tol)?.value)
}

/// `φ(ν)` as the θ-advance of the geodesic launched tangentially at the
/// turning radius `ξ`, measured until `dr/ds` vanishes again at `−ξ`.
pub fn phi_by_shooting<T: Scalar>(warp: &WarpFunction<T>, nu: T, tol: T) -> Result<T> {
    let x = xi(warp, nu)?;
    if x == T::zero() {
        return equatorial_limit(warp);
    }
    let init = RiemannState::new(x, T::zero(), T::zero(), T::one() / warp.m(x));
    let event = |s: &RiemannState<T>| s.vr;
    let opts = GeodesicOptions::new(tol).with_h_max(T::c(0.05));
    let span = T::c(1e4);
    let tr = integrate_geodesic_with(warp, init, span, &opts, Some(&event))?;
    if tr.termination != Termination::Event {
        return Err(Error::NoRoot(format!(
            "no second turning point within length {}",
            span.as_f64()
        )));
    }
    Ok(tr.last().state.theta)
}

/// Clairaut constant, turning radius and angular advance of one geodesic family.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TurningData<T> {
    pub nu: T,
    pub xi: T,
    pub phi: T,
}

pub fn turning_data<T: Scalar>(warp: &WarpFunction<T>, nu: T, quad_tol: T) -> Result<TurningData<T>> {
    Ok(TurningData {
        nu,
        xi: xi(warp, nu)?,
        phi: phi(warp, nu, quad_tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn r0_of_catalog() {
        assert!(r0_sup(&WarpFunction::<f64>::exp_gauss()).is_unbounded());
        assert!(r0_sup(&WarpFunction::<f64>::sech()).is_unbounded());
        assert_eq!(r0_sup(&WarpFunction::<f64>::sqrt_poly()), Supremum::Finite(0.0));
    }

    #[test]
    fn r0_finite_for_a_neck() {
        // m' = r (r² − 1) changes sign at r = 1
        let w = WarpFunction::<f64>::custom(
            Arc::new(|r: f64| 2.0 - r * r / 2.0 + r.powi(4) / 4.0),
            Arc::new(|r: f64| -r + r.powi(3)),
            Arc::new(|r: f64| -1.0 + 3.0 * r * r),
            Interval::new(-2.0, 2.0),
        );
        match r0_sup(&w) {
            Supremum::Finite(v) => assert!((v - 1.0).abs() < 1e-12),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn xi_inverts_gaussian() {
        let w = WarpFunction::<f64>::exp_gauss();
        assert!((xi(&w, (-1.0_f64).exp()).unwrap() - 1.0).abs() < 1e-13);
        assert!((xi(&w, 0.9).unwrap() - (-0.9_f64.ln()).sqrt()).abs() < 1e-13);
        assert_eq!(xi(&w, 1.0).unwrap(), 0.0);
        assert!(xi(&w, 1.2).is_err());
        assert!(xi(&w, 0.0).is_err());
    }

    #[test]
    fn phi_matches_shooting() {
        let w = WarpFunction::<f64>::exp_gauss();
        for nu in [0.2, 0.6, 0.9, 0.99] {
            let q = phi(&w, nu, 1e-13).unwrap();
            let s = phi_by_shooting(&w, nu, 1e-12).unwrap();
            assert!((q - s).abs() < 1e-8, "{nu}: {q} vs {s}");
        }
    }

    #[test]
    fn phi_equatorial_limit() {
        let w = WarpFunction::<f64>::exp_gauss();
        let lim = phi(&w, 1.0, 1e-12).unwrap();
        assert!((lim - std::f64::consts::PI / 2.0_f64.sqrt()).abs() < 1e-15);
        let near = phi(&w, 0.9999, 1e-13).unwrap();
        assert!((near - lim).abs() < 1e-3);
    }

    #[test]
    fn phi_rejects_flat_turning_point() {
        // m = 1/2 − (r² − 1)³/4 crosses 1/2 at r = 1 with m'(1) = 0
        let w = WarpFunction::<f64>::custom(
            Arc::new(|r: f64| 0.5 - 0.25 * (r * r - 1.0).powi(3)),
            Arc::new(|r: f64| -1.5 * r * (r * r - 1.0).powi(2)),
            Arc::new(|r: f64| -1.5 * (r * r - 1.0).powi(2) - 6.0 * r * r * (r * r - 1.0)),
            Interval::new(-1.4, 1.4),
        );
        assert!(matches!(phi(&w, 0.5, 1e-10), Err(Error::SingularTurningPoint { .. })));
    }
}
