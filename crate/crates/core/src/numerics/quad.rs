//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Piece<T> {}
impl<T: Scalar> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Single 15-point Kronrod rule on `[a, b]`; returns the value and `|K15 − G7|`.
pub fn kronrod<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let center = T::half() * (a + b);
    let half = T::half() * (b - a);
    let fc = f(center);
    let mut k = fc * T::c(WGK[7]);
    let mut g = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        let sum = f(center - dx) + f(center + dx);
        k = k + T::c(WGK[j]) * sum;
        if j % 2 == 1 {
            g = g + T::c(WG[j / 2]) * sum;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// `∫_a^b f` to `error <= tol * max(1, |value|)`.
///
/// The error estimate is the raw Kronrod–Gauss difference, which overstates
/// the true error of the 15-point rule for smooth integrands.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    if b < a {
        let q = integrate(f, b, a, tol)?;
        return Ok(Quadrature {
            value: -q.value,
            ..q
        });
    }
    const MAX_PIECES: usize = 4000;
    let (v, e) = kronrod(&f, a, b);
    if !v.is_finite() {
        return Err(Error::Quadrature {
            a: a.as_f64(),
            b: b.as_f64(),
            detail: "non-finite integrand".into(),
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    while err > tol * total.abs().max(T::one()) {
        if heap.len() >= MAX_PIECES {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                detail: format!("error {err:e} above tolerance after {MAX_PIECES} pieces"),
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = T::half() * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable in this precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod(&f, worst.a, mid);
        let (v2, e2) = kronrod(&f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                detail: "non-finite integrand".into(),
            });
        }
        total = total - worst.value + v1 + v2;
        err = err - worst.error + e1 + e2;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift from incremental updates
    let value = heap.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error = heap.iter().fold(T::zero(), |acc, p| acc + p.error);
    Ok(Quadrature {
        value,
        error,
        intervals: heap.len(),
    })
}
