//! Deformation along the rotation flow `φ_t(r, θ) = (r, θ + B t)` of the
//! Killing field `B ∂θ`: geodesics of `F₁ = α + β` become geodesics of `F̃`,
//! and the α-cut locus becomes the `F̃`-cut locus.

use rayon::prelude::*;

use crate::conjugate_cut::{minimizing_distance, CutLocusDescription, DeformedCutPoint, ShootingOptions};
use crate::error::{Error, Result};
use crate::geometry::{Trajectory, WarpFunction};
use crate::projective::{AlphaMetric, PotentialFunction};
use crate::scalar::{Interval, Point, Scalar};
use crate::zermelo::{ftilde_at, Vec2, WindSpec};

pub fn rotation_flow<T: Scalar>(point: Point<T>, t: T, b: T) -> Point<T> {
    Point::new(point.r, point.theta + b * t)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeformedSample<T> {
    /// `F̃`-arclength.
    pub t: T,
    pub point: Point<T>,
    /// `d/dt` of the deformed curve.
    pub velocity: Vec2<T>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeformedTrajectory<T> {
    /// `(r(s(t)), θ(s(t)) + B t)`
    pub samples: Vec<DeformedSample<T>>,
    /// `(r(s(t)), θ(s(t)) + B s(t))`, kept for comparison.
    pub variant_bs: Vec<DeformedSample<T>>,
    pub source: Trajectory<T>,
    pub b: T,
}

impl<T: Scalar> DeformedTrajectory<T> {
    /// Largest `|F̃(𝒫, 𝒫̇) − 1|` over the canonical samples.
    pub fn unit_speed_defect(&self, warp: &WarpFunction<T>, wind: &WindSpec<T>) -> Result<T> {
        max_defect(&self.samples, warp, wind)
    }

    pub fn variant_unit_speed_defect(&self, warp: &WarpFunction<T>, wind: &WindSpec<T>) -> Result<T> {
        max_defect(&self.variant_bs, warp, wind)
    }
}

fn max_defect<T: Scalar>(samples: &[DeformedSample<T>], warp: &WarpFunction<T>, wind: &WindSpec<T>) -> Result<T> {
    let mut worst = T::zero();
    for p in samples {
        let f = ftilde_at(warp, wind, p.point.r)?;
        worst = worst.max((f.norm(p.velocity) - T::one()).abs());
    }
    Ok(worst)
}

/// Deform an α-geodesic whose `t` field holds its `F₁`-arclength.
pub fn deform_geodesic<T: Scalar>(
    alpha: &AlphaMetric<T>,
    traj: &Trajectory<T>,
    wind: &WindSpec<T>,
) -> Result<DeformedTrajectory<T>> {
    let b = wind.b();
    let mut samples = Vec::with_capacity(traj.samples.len());
    let mut variant = Vec::with_capacity(traj.samples.len());
    for smp in &traj.samples {
        let t = smp.t.ok_or(Error::MissingArclength)?;
        let st = smp.state;
        let f1 = alpha.randers(&st);
        let (dr, dth) = (st.vr / f1, st.vtheta / f1);
        samples.push(DeformedSample {
            t,
            point: Point::new(st.r, st.theta + b * t),
            velocity: [dr, dth + b],
        });
        variant.push(DeformedSample {
            t,
            point: Point::new(st.r, st.theta + b * smp.s),
            velocity: [dr, dth + b / f1],
        });
    }
    Ok(DeformedTrajectory {
        samples,
        variant_bs: variant,
        source: traj.clone(),
        b,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct DeformOptions<T> {
    /// Radii covered by meridian samples.
    pub meridian_range: Interval<T>,
    pub n_meridian: usize,
    pub n_parallel: usize,
    pub shooting: ShootingOptions<T>,
}

impl<T: Scalar> DeformOptions<T> {
    pub fn new(meridian_range: Interval<T>) -> Self {
        Self {
            meridian_range,
            n_meridian: 256,
            n_parallel: 256,
            shooting: ShootingOptions::default(),
        }
    }
}

/// Flow each sample `q̂` of the α-cut locus of `p` by `l = d_α(p, q̂) + f(q̂) − f(p)`.
///
/// Samples whose distance solve fails are listed in `skipped` instead.
pub fn deform_cut_locus<T: Scalar>(
    cut: &CutLocusDescription<T>,
    warp: &WarpFunction<T>,
    wind: &WindSpec<T>,
    potential: &PotentialFunction<T>,
    p: Point<T>,
    opts: &DeformOptions<T>,
) -> Result<CutLocusDescription<T>> {
    let alpha = AlphaMetric::new(warp.clone(), wind);
    let b = wind.b();
    let pts = cut.sample_points(opts.meridian_range, opts.n_meridian, opts.n_parallel);
    let solved: Vec<std::result::Result<DeformedCutPoint<T>, (Point<T>, String)>> = pts
        .par_iter()
        .map(|&q| {
            let run = || -> Result<DeformedCutPoint<T>> {
                let d = minimizing_distance(&alpha, p, q, &opts.shooting)?.length;
                let l = d + potential.increment(p.r, q.r)?;
                Ok(DeformedCutPoint {
                    source: q,
                    point: rotation_flow(q, l, b),
                    flow_time: l,
                })
            };
            run().map_err(|e| (q, e.to_string()))
        })
        .collect();
    let mut out = cut.clone();
    let mut deformed = Vec::new();
    out.skipped.clear();
    for r in solved {
        match r {
            Ok(d) => deformed.push(d),
            Err(s) => out.skipped.push(s),
        }
    }
    out.deformed = Some(deformed);
    Ok(out)
}
