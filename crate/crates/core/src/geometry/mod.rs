//! The Riemannian cylinder `h = dr² + m²(r) dθ²` and, more generally, any
//! rotational metric `E(r) dr² + G(r) dθ²`.

mod geodesic;
mod metric;
mod warp;

pub use geodesic::{
    clairaut, geodesic_rhs, geodesic_rhs_array, integrate_geodesic, integrate_geodesic_with, unit_speed_defect,
    GeodesicOptions, RiemannState, Termination, Trajectory, TrajectorySample,
};
pub use metric::{diagonal_gauss_curvature, gauss_curvature_h, RotationalMetric};
pub use warp::{Fn1, WarpFunction, WarpKind};
