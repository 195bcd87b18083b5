use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bisection on a sign change of `f` in `[a, b]`, to interval width `tol` or
/// until the midpoint no longer moves.
pub fn bisect<T: Scalar, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<T> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{}, {}]",
            a.as_f64(),
            b.as_f64()
        )));
    }
    for _ in 0..400 {
        let mid = T::half() * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(T::half() * (lo + hi))
}

/// First grid cell of `grid` on which `f` changes sign (or hits zero).
pub fn first_sign_change<T: Scalar, F: Fn(T) -> T>(f: F, grid: &[T]) -> Option<(T, T)> {
    let mut prev: Option<(T, T)> = None;
    for &x in grid {
        let fx = f(x);
        if let Some((xp, fp)) = prev {
            if fp == T::zero() {
                return Some((xp, xp));
            }
            if fx == T::zero() || fx.signum() != fp.signum() {
                return Some((xp, x));
            }
        }
        prev = Some((x, fx));
    }
    None
}

/// Illinois regula falsi on a bracket `[a, b]` with known values `fa`, `fb`
/// of opposite sign. `f` may fail (`None`), which aborts the search.
///
/// Stops when the bracket is narrower than `xtol` or `|f| <= ftol`; returns
/// `(x, f(x))` of the best iterate.
pub fn illinois<T: Scalar, F: FnMut(T) -> Option<T>>(
    mut f: F,
    mut a: T,
    mut fa: T,
    mut b: T,
    mut fb: T,
    xtol: T,
    ftol: T,
    max_iter: usize,
) -> Option<(T, T)> {
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let mut side = 0i8;
    for _ in 0..max_iter {
        if best.1.abs() <= ftol || (b - a).abs() <= xtol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || (c - a) * (c - b) >= T::zero() {
            c = T::half() * (a + b);
        }
        let fc = f(c)?;
        if fc.abs() < best.1.abs() {
            best = (c, fc);
        }
        if fc == T::zero() {
            break;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == 1 {
                fa = fa * T::half();
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb = fb * T::half();
            }
            side = -1;
        }
    }
    Some(best)
}
