use crate::scalar::Scalar;

/// Centered difference of `f` at `x` with one Richardson extrapolation
/// (`(4 D(h/2) − D(h)) / 3`, fourth order in `h`).
pub fn richardson_diff<T: Scalar, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    let d = |h: T| (f(x + h) - f(x - h)) / (T::two() * h);
    let h2 = h * T::half();
    (T::c(4.0) * d(h2) - d(h)) / T::c(3.0)
}

/// Second derivative by centered differences, Richardson-extrapolated once.
pub fn richardson_diff2<T: Scalar, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    let fx = f(x);
    let d = |h: T| (f(x + h) - T::two() * fx + f(x - h)) / (h * h);
    let h2 = h * T::half();
    (T::c(4.0) * d(h2) - d(h)) / T::c(3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_derivatives() {
        let d1 = richardson_diff(f64::sin, 0.7, 1e-3);
        let d2 = richardson_diff2(f64::sin, 0.7, 1e-2);
        assert!((d1 - 0.7_f64.cos()).abs() < 1e-12);
        assert!((d2 + 0.7_f64.sin()).abs() < 1e-9);
    }
}
