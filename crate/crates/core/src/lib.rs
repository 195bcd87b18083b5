//! Zermelo navigation on cylinders of revolution.
//!
//! The base surface is `M = ℝ × S¹` with a rotational Riemannian metric
//! `h = dr² + m(r)² dθ²`. A wind `W̃ = A(r) ∂r + B ∂θ` turns it into a Randers
//! metric `F̃ = α̃ + β̃` whose geodesics are the time-optimal paths. The crate
//! computes the navigation data, integrates geodesics, finds conjugate points
//! and cut loci, and deforms them along the rotation flow of `B ∂θ`.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

// `!(x > y)` guards are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjugate_cut;
pub mod error;
pub mod flow_deform;
pub mod geometry;
pub mod numerics;
pub mod projective;
pub mod scalar;
pub mod scene;
pub mod verification;
pub mod zermelo;

pub use error::{Error, Result};
pub use scalar::{wrap_angle, wrap_signed, Interval, Point, Scalar};

pub type Warp = geometry::WarpFunction<f64>;
pub type State = geometry::RiemannState<f64>;
pub type Path = geometry::Trajectory<f64>;
