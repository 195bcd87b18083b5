use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Natural cubic spline through `(x_i, y_i)`; derivatives are those of the
/// piecewise cubic itself.
#[derive(Clone, Debug)]
pub struct NaturalSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    m: Vec<T>,
}

impl<T: Scalar> NaturalSpline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::InvalidInput(
                "spline needs at least 3 samples and matching lengths".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("spline abscissae must increase strictly".into()));
        }
        // tridiagonal system for the interior second derivatives
        let mut m = vec![T::zero(); n];
        let mut c_prime = vec![T::zero(); n];
        let mut d_prime = vec![T::zero(); n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0;
            let b = T::two() * (h0 + h1);
            let c = h1;
            let d = T::c(6.0) * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (d - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { x, y, m })
    }

    pub fn domain(&self) -> (T, T) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: T) -> usize {
        let n = self.x.len();
        match self
            .x
            .binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value, first and second derivative at `t` (end cubics extend outside).
    pub fn eval(&self, t: T) -> (T, T, T) {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let six = T::c(6.0);
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / six;
        let d1 = (self.y[i + 1] - self.y[i]) / h
            - (T::c(3.0) * a * a - T::one()) * h * mi / six
            + (T::c(3.0) * b * b - T::one()) * h * mj / six;
        let d2 = a * mi + b * mj;
        (v, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let x: Vec<f64> = (0..=200).map(|i| -2.0 + 4.0 * i as f64 / 200.0).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = NaturalSpline::new(x, y).unwrap();
        for t in [-1.3, 0.0, 0.77, 1.5] {
            let (v, d1, d2) = s.eval(t);
            assert!((v - f64::sin(t)).abs() < 1e-7);
            assert!((d1 - f64::cos(t)).abs() < 1e-5);
            assert!((d2 + f64::sin(t)).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_unsorted() {
        assert!(NaturalSpline::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).is_err());
    }
}
