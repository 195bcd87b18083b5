//! Numerical plumbing: embedded Runge–Kutta integration, adaptive quadrature,
//! bracketed root finding and natural cubic splines.

pub mod diff;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod spline;

pub use diff::{richardson_diff, richardson_diff2};
pub use ode::{Dopri5, Ended, Flow};
pub use quad::{integrate, kronrod, Quadrature};
pub use roots::{bisect, first_sign_change, illinois};
pub use spline::NaturalSpline;
