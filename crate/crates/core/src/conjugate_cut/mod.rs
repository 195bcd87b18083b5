//! Conjugate points and cut loci of rotational metrics: turning data of the
//! geodesic families, Jacobi fields, shooting for minimizing geodesics and the
//! meridian/parallel structure of the cut locus.

mod cut;
mod jacobi;
mod shooting;
mod turning;

pub use cut::{
    check_hypothesis, cut_locus_alpha, cut_locus_h, CutLocusDescription, CutVariant, DeformedCutPoint,
    HypothesisReport,
};
pub use jacobi::{first_conjugate_point, jacobi_first_zero, ConjugatePoint};
pub use shooting::{connecting_geodesics, minimizing_distance, Connection, ShootingOptions};
pub use turning::{phi, phi_by_shooting, r0_sup, turning_data, xi, Supremum, TurningData};
