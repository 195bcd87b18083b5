use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    curvature_ratio, dual_norm_by_indicatrix, killing_residual_h, legendre_dual_norm, lie_bracket, momentum,
    poisson_bracket, spray_difference, spray_difference_christoffel, spray_difference_alt, Check, CotangentPoint,
    EulerLagrange, Report, Suite,
};
use crate::conjugate_cut::first_conjugate_point;
use crate::error::Result;
use crate::flow_deform::{deform_geodesic, DeformedSample};
use crate::geometry::{
    gauss_curvature_h, integrate_geodesic, integrate_geodesic_with, GeodesicOptions, RiemannState, Trajectory,
    WarpFunction,
};
use crate::projective::{closedness_residual, reparam_alpha_to_f, AlphaMetric};
use crate::scalar::{Interval, Point};
use crate::scene::{KillingField, Scene};
use crate::zermelo::{
    compose_k_step, eta, ftilde_at, h_matrix, rotational_closed_form, solve_nav_randers, solve_nav_riemannian,
    validate_wind, RandersPointData, Sym2, Vec2, WindKind, WindSpec,
};

const FD_STEP: f64 = 1e-5;

/// Run one suite (or all of them, in a fixed order) on a scene.
pub fn run_suite(scene: &Scene, suite: Suite) -> Report {
    let checks = match suite {
        Suite::All => Suite::EACH
            .par_iter()
            .map(|&s| run_one(scene, s))
            .collect::<Vec<_>>()
            .concat(),
        s => run_one(scene, s),
    };
    Report { suite, checks }
}

fn run_one(scene: &Scene, suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Zermelo => zermelo(scene),
        Suite::Killing => killing(scene),
        Suite::Curvature => curvature(scene),
        Suite::Clairaut => clairaut(scene),
        Suite::Deform => deform(scene),
        Suite::All => unreachable!(),
    }
}

/// Radii away from the far ends of the window, where probes are drawn.
fn probe_range(scene: &Scene, half_width: f64) -> Interval<f64> {
    let w = scene.window();
    Interval::new(w.lo.max(-half_width), w.hi.min(half_width))
}

fn zermelo(scene: &Scene) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);

    let mut two = 0.0_f64;
    let mut ident = 0.0_f64;
    let mut kstep = 0.0_f64;
    let mut err = None;
    for _ in 0..200 {
        let m: f64 = rng.gen_range(0.2..1.5);
        let a: f64 = rng.gen_range(-0.9..0.9);
        let bmax = 0.95 * (1.0 - a * a).sqrt() / m;
        let b: f64 = rng.gen_range(-bmax..bmax);
        let cut: f64 = rng.gen_range(0.0..1.0);
        let h = Sym2::diag(1.0, m * m);
        let run = || -> Result<(f64, f64, f64)> {
            let direct = solve_nav_riemannian(&h, [a, b])?;
            let f1 = solve_nav_riemannian(&h, [a, 0.0])?;
            let stepped = solve_nav_randers(&f1, [0.0, b])?;
            let lam = 1.0 - a * a;
            let big = lam - b * b * m * m;
            let split = compose_k_step(&h, &[[a * cut, 0.0], [a * (1.0 - cut), b * cut], [0.0, b * (1.0 - cut)]])?;
            Ok((
                stepped.max_abs_diff(&direct),
                (eta(&f1, [0.0, b]) * lam - big).abs(),
                split.max_abs_diff(&direct),
            ))
        };
        match run() {
            Ok((x, y, z)) => {
                two = two.max(x);
                ident = ident.max(y);
                kstep = kstep.max(z);
            }
            Err(e) => err = Some(e),
        }
    }
    if let Some(e) = err {
        out.push(Check::error("two_step_equivalence", "navigating (h, V) then (F, W) solves (h, V + W)", e));
    } else {
        out.push(Check::bound(
            "two_step_equivalence",
            "navigating (h, V) then (F, W) solves (h, V + W)",
            two,
            1e-9,
        ));
        out.push(Check::bound("eta_lambda_identity", "eta * lambda = Lambda", ident, 1e-12));
        out.push(Check::bound(
            "k_step_composition",
            "successive navigation composes the winds additively",
            kstep,
            1e-9,
        ));
    }

    let mut closed = 0.0_f64;
    let range = probe_range(scene, 3.0);
    let mut err = None;
    for _ in 0..100 {
        let r = rng.gen_range(range.lo..=range.hi);
        let a: f64 = rng.gen_range(-0.8..0.8);
        let m = scene.warp.m(r);
        let bmax = 0.95 * (1.0 - a * a).sqrt() / m;
        let b: f64 = rng.gen_range(-bmax..bmax);
        let wind = WindSpec::constant(a, b);
        let run = || -> Result<f64> {
            let nav = rotational_closed_form(&scene.warp, &wind, r)?;
            let h = h_matrix(&scene.warp, r);
            let ft = solve_nav_riemannian(&h, [a, b])?;
            let f = solve_nav_riemannian(&h, [a, 0.0])?;
            Ok(scaled_diff(&nav.ftilde, &ft).max(scaled_diff(&nav.f, &f)))
        };
        match run() {
            Ok(x) => closed = closed.max(x),
            Err(e) => err = Some(e),
        }
    }
    let label = "rotational closed forms agree with the general solution";
    out.push(match err {
        Some(e) => Check::error("closed_form_agreement", label, e),
        None => Check::bound("closed_form_agreement", label, closed, 1e-12),
    });

    // scene wind along the probe range
    let mut translation = 0.0_f64;
    let mut min_big = f64::INFINITY;
    let mut closedness = 0.0_f64;
    let mut consistent = true;
    let mut err = None;
    let v = |r: f64, _t: f64| scene.wind.radial().vector(r);
    for r in range.grid(64) {
        let run = || -> Result<(f64, f64, bool)> {
            let nav = rotational_closed_form(&scene.warp, &scene.wind, r)?;
            let w = scene.wind.vector(r);
            let m = scene.warp.m(r);
            let mut worst = 0.0_f64;
            for k in 0..32 {
                let (s, c) = (TAU * k as f64 / 32.0).sin_cos();
                let y = [c + w[0], s / m + w[1]];
                worst = worst.max((nav.ftilde.norm(y) - 1.0).abs());
            }
            let h = h_matrix(&scene.warp, r);
            let ok = validate_wind(|y| h.quad(y).sqrt(), w) == (nav.scalars.big_lambda > 0.0);
            Ok((worst, nav.scalars.big_lambda, ok))
        };
        match run() {
            Ok((x, big, ok)) => {
                translation = translation.max(x);
                min_big = min_big.min(big);
                consistent &= ok;
            }
            Err(e) => err = Some(e),
        }
        closedness = closedness.max(closedness_residual(&scene.warp, &v, r, 0.3));
    }
    if let Some(e) = err {
        out.push(Check::error("scene_wind", "scene wind admissible on the probe range", e));
    } else {
        out.push(Check::bound(
            "indicatrix_translation",
            "the F~ indicatrix is the h indicatrix translated by W",
            translation,
            1e-12,
        ));
        out.push(
            Check::exceeds("admissibility", "Lambda > 0, equivalently F(-W) < 1", min_big, 0.0).with_detail(format!(
                "criteria agree at every probe: {consistent}"
            )),
        );
        if !consistent {
            out.push(Check::error(
                "admissibility_criteria",
                "Lambda > 0 iff F(-W) < 1",
                "the two criteria disagree at some probe",
            ));
        }
    }
    out.push(
        Check::bound(
            "beta_closed_exact",
            "beta = b1(r) dr is closed, hence exact with potential f(r) = int_0^r b1",
            closedness,
            1e-6,
        )
        .with_detail("the cylinder is not simply connected; exactness holds because b1 depends on r only".into()),
    );
    out
}

/// Largest componentwise `|x − y| / max(1, |y|)`.
fn scaled_diff(x: &RandersPointData<f64>, y: &RandersPointData<f64>) -> f64 {
    let xs = [x.a.xx, x.a.xy, x.a.yy, x.b[0], x.b[1]];
    let ys = [y.a.xx, y.a.xy, y.a.yy, y.b[0], y.b[1]];
    xs.iter().zip(ys).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max)
}

fn cotangent_probes(scene: &Scene, n: usize, seed: u64) -> Vec<CotangentPoint<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = probe_range(scene, 3.0);
    (0..n)
        .map(|_| {
            CotangentPoint::new(
                rng.gen_range(range.lo..=range.hi),
                rng.gen_range(0.0..TAU),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect()
}

fn killing(scene: &Scene) -> Vec<Check> {
    let mut out = Vec::new();
    let warp = &scene.warp;
    let wind = &scene.wind;
    let v = |r: f64, _t: f64| wind.vector(r);
    let fstar = |cp: &CotangentPoint<f64>| legendre_dual_norm(warp, &v, cp);

    let probes = cotangent_probes(scene, 100, 0x5eed_0002);
    let dual = probes[..20]
        .par_iter()
        .map(|cp| -> Result<f64> {
            let f = ftilde_at(warp, wind, cp.r)?;
            Ok((fstar(cp) - dual_norm_by_indicatrix(&f, [cp.pr, cp.ptheta], 2000)).abs())
        })
        .collect::<Result<Vec<_>>>();
    let label = "the Legendre dual of F~ is |p|_h + p(W)";
    out.push(match dual {
        Ok(d) => Check::bound("legendre_dual", label, d.into_iter().fold(0.0, f64::max), 1e-4),
        Err(e) => Check::error("legendre_dual", label, e),
    });

    let b = if wind.b() != 0.0 { wind.b() } else { 1.0 };
    let (field, field_name): (Box<dyn Fn(f64, f64) -> Vec2<f64> + Sync>, String) = match scene.killing_field {
        KillingField::Rotation => (Box::new(move |_r, _t| [0.0, b]), format!("{b} d/dtheta")),
        KillingField::SinThetaRadial { c } => (Box::new(move |_r, t: f64| [c * t.sin(), 0.0]), format!("{c} sin(theta) d/dr")),
    };
    let wstar = |cp: &CotangentPoint<f64>| momentum(&*field, cp);
    let worst = probes
        .par_iter()
        .map(|cp| poisson_bracket(&fstar, &wstar, cp, FD_STEP).abs())
        .reduce(|| 0.0, f64::max);
    out.push(
        Check::bound(
            "poisson_bracket",
            "W is Killing for F~ iff {F~*, W*} = 0",
            worst,
            1e-6,
        )
        .with_detail(format!("W = {field_name}, 100 cotangent probes")),
    );

    let radial = |r: f64, _t: f64| [wind.a(r), 0.0];
    let (mut lie, mut res) = (0.0_f64, 0.0_f64);
    for cp in &probes[..40] {
        let p = Point::new(cp.r, cp.theta);
        let l = lie_bracket(&radial, &*field, p, 1e-4);
        lie = lie.max(l[0].abs()).max(l[1].abs());
        res = res.max(killing_residual_h(warp, &*field, p, 1e-4));
    }
    out.push(
        Check::bound("lie_bracket", "[A d/dr, W] = 0", lie, 1e-6).with_detail(format!("W = {field_name}")),
    );
    out.push(
        Check::bound("killing_residual_h", "W_{i:j} + W_{j:i} = 0 for h", res, 1e-6)
            .with_detail(format!("W = {field_name}")),
    );

    let witness = |_r: f64, t: f64| [0.5 * t.sin(), 0.0];
    let ws = |cp: &CotangentPoint<f64>| momentum(&witness, cp);
    let ew = WarpFunction::exp_gauss();
    let fe = |cp: &CotangentPoint<f64>| legendre_dual_norm(&ew, &v, cp);
    let seen = probes
        .iter()
        .map(|cp| poisson_bracket(&fe, &ws, cp, FD_STEP).abs())
        .fold(0.0, f64::max);
    out.push(Check::exceeds(
        "non_killing_witness",
        "0.5 sin(theta) d/dr on exp_gauss is detected as non-Killing",
        seen,
        1e-3,
    ));
    out
}

fn curvature(scene: &Scene) -> Vec<Check> {
    let mut out = Vec::new();
    let warp = &scene.warp;
    let a = if scene.wind.kind() == WindKind::Constant && scene.wind.a(0.0) != 0.0 {
        scene.wind.a(0.0)
    } else {
        0.5
    };
    let grid = probe_range(scene, 2.0).grid(401);
    let label = "for constant A the curvatures of h and alpha are proportional";
    match curvature_ratio(warp, a, &grid) {
        Ok(c) => {
            let l2 = c.lambda * c.lambda;
            let (to_l2, to_inv) = c.candidate_gaps();
            out.push(Check::bound("curvature_ratio_constant", label, c.max_dev, 1e-8).with_detail(format!(
                "A = {a}, {} grid points excluded",
                c.excluded.len()
            )));
            let nearer = if to_l2 <= to_inv { "lambda^2" } else { "1/lambda^2" };
            out.push(Check::info(
                "curvature_constant",
                "value of the constant G_alpha / G_h",
                c.ratio,
                format!(
                    "lambda^2 = {l2}, 1/lambda^2 = {}, |ratio - lambda^2| = {to_l2:e}, |ratio - 1/lambda^2| = {to_inv:e}; matches {nearer}",
                    1.0 / l2
                ),
            ));
        }
        Err(e) => out.push(Check::error("curvature_ratio_constant", label, e)),
    }

    let mut meridian = 0.0_f64;
    for &r in &grid {
        let d = spray_difference(warp, a, &RiemannState::new(r, 0.0, 1.0, 0.0));
        meridian = meridian.max(d[0].abs()).max(d[1].abs());
    }
    out.push(Check::bound(
        "spray_difference_meridian",
        "the spray difference of h and alpha vanishes on meridians",
        meridian,
        1e-12,
    ));
    let r0 = 0.7_f64.min(grid[grid.len() - 1]);
    let st = RiemannState::launch(warp, r0, 0.0, 0.9);
    let d = spray_difference(warp, a, &st);
    let chr = spray_difference_christoffel(warp, a, &st);
    let alt = spray_difference_alt(warp, a, &st);
    out.push(Check::info(
        "spray_difference",
        "r-component of S_h - S_alpha at a unit-speed state with y^2 != 0",
        d[0],
        format!(
            "r = {r0}, A = {a}; theta-component {:e}; -A^2 m m' (y^2)^2 = {chr} (gap {:e}); -2 A^2 m m'' (y^2)^2 = {alt} (gap {:e})",
            d[1],
            (d[0] - chr).abs(),
            (d[0] - alt).abs()
        ),
    ));

    let eg = WarpFunction::<f64>::exp_gauss();
    let g0 = gauss_curvature_h(&eg, 0.0).unwrap_or(f64::NAN);
    let g1 = gauss_curvature_h(&eg, 1.0).unwrap_or(f64::NAN);
    out.push(Check::info(
        "example_curvature_exp_gauss",
        "G_h(0) for m = exp(-r^2)",
        g0,
        format!(
            "G_h = -m''/m = 2 - 4 r^2: G_h(0) = {g0}, G_h(1) = {g1}; the form -4 r^2 - 2 would give G_h(0) = -2 and contradicts G_h(0) = 2 > 0"
        ),
    ));
    out
}

fn launches(scene: &Scene, n: usize, seed: u64, half_width: f64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = probe_range(scene, half_width);
    (0..n)
        .map(|_| {
            (
                rng.gen_range(range.lo..=range.hi),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
            )
        })
        .collect()
}

fn clairaut(scene: &Scene) -> Vec<Check> {
    let tol = scene.tolerances.ode_tol;
    let alpha = AlphaMetric::new(scene.warp.clone(), &scene.wind);
    let mut out = Vec::new();
    for (which, metric) in [("h", &scene.warp as &dyn crate::geometry::RotationalMetric<f64>), ("alpha", &alpha)] {
        let runs = launches(scene, 50, 0x5eed_0003, 2.0)
            .par_iter()
            .map(|&(r, th, ang)| -> Result<(f64, f64)> {
                let init = RiemannState::launch(metric, r, th, ang);
                let tr = integrate_geodesic(metric, init, 20.0, tol)?;
                Ok((tr.clairaut_drift(metric), tr.max_unit_defect(metric)))
            })
            .collect::<Result<Vec<_>>>();
        let label_c = format!("the Clairaut integral G dtheta/ds is conserved along {which}-geodesics");
        let label_u = format!("{which}-geodesics stay unit speed");
        match runs {
            Ok(v) => {
                let drift = v.iter().map(|x| x.0).fold(0.0, f64::max);
                let defect = v.iter().map(|x| x.1).fold(0.0, f64::max);
                out.push(Check::bound(&format!("clairaut_drift_{which}"), &label_c, drift, 1e-7));
                out.push(Check::bound(&format!("unit_speed_{which}"), &label_u, defect, 1e-8));
            }
            Err(e) => out.push(Check::error(&format!("clairaut_drift_{which}"), &label_c, e)),
        }
    }
    out
}

/// α-geodesic from a launch, carrying its `F₁`-arclength.
fn alpha_geodesic(alpha: &AlphaMetric<f64>, init: RiemannState<f64>, length: f64, tol: f64) -> Result<Trajectory<f64>> {
    let opts = GeodesicOptions::new(tol).with_spacing(0.05);
    let tr = integrate_geodesic_with(alpha, init, length, &opts, None)?;
    reparam_alpha_to_f(alpha, &tr, &|st| alpha.randers(st))
}

/// Largest coordinate gap between deformed samples with `t <= t_max` and the
/// Euler–Lagrange curve with the same initial data.
fn el_gap<L: Fn(Vec2<f64>, Vec2<f64>) -> f64>(el: &EulerLagrange<f64, L>, samples: &[DeformedSample<f64>], t_max: f64) -> f64 {
    let used: Vec<&DeformedSample<f64>> = samples.iter().filter(|s| s.t <= t_max + 1e-12).collect();
    let times: Vec<f64> = used.iter().map(|s| s.t).collect();
    let x0 = [used[0].point.r, used[0].point.theta];
    let path = el.at_times(x0, used[0].velocity, &times, 5e-3);
    used.iter()
        .zip(&path)
        .map(|(s, (_, x, _))| (s.point.r - x[0]).abs().max((s.point.theta - x[1]).abs()))
        .fold(0.0, f64::max)
}

fn deform(scene: &Scene) -> Vec<Check> {
    let mut out = Vec::new();
    let tol = scene.tolerances.ode_tol;
    let warp = &scene.warp;
    let wind = &scene.wind;
    let alpha = AlphaMetric::new(warp.clone(), wind);
    let lagr = |x: Vec2<f64>, y: Vec2<f64>| {
        let f = ftilde_at(warp, wind, x[0]).map(|d| d.norm(y)).unwrap_or(f64::NAN);
        0.5 * f * f
    };
    let el = EulerLagrange::new(lagr);

    let runs = launches(scene, 20, 0x5eed_0004, 2.0)
        .par_iter()
        .map(|&(r, th, ang)| -> Result<(f64, f64, f64, f64)> {
            let init = RiemannState::launch(&alpha, r, th, ang);
            let tr = alpha_geodesic(&alpha, init, 10.0, tol)?;
            let d = deform_geodesic(&alpha, &tr, wind)?;
            Ok((
                d.unit_speed_defect(warp, wind)?,
                d.variant_unit_speed_defect(warp, wind)?,
                el_gap(&el, &d.samples, 5.0),
                el_gap(&el, &d.variant_bs, 5.0),
            ))
        })
        .collect::<Result<Vec<_>>>();
    let label = "deformed alpha-geodesics are F~-unit-speed F~-geodesics";
    match runs {
        Ok(v) => {
            let col = |k: usize| {
                v.iter()
                    .map(|x| [x.0, x.1, x.2, x.3][k])
                    .fold(0.0, f64::max)
            };
            out.push(Check::bound("deformed_unit_speed", label, col(0), 1e-7).with_detail(
                "canonical form (r(s(t)), theta(s(t)) + B t), 20 launches, length 10".into(),
            ));
            out.push(Check::bound(
                "deformed_vs_euler_lagrange",
                "deformed geodesics solve the Euler-Lagrange equations of F~^2/2",
                col(2),
                1e-5,
            ));
            out.push(Check::info(
                "deformation_bt_vs_bs",
                "theta shift B t against B s(t)",
                col(1),
                format!(
                    "B t: unit-speed defect {:e}, Euler-Lagrange gap {:e}; B s(t): unit-speed defect {:e}, Euler-Lagrange gap {:e}",
                    col(0),
                    col(2),
                    col(1),
                    col(3)
                ),
            ));
        }
        Err(e) => out.push(Check::error("deformed_unit_speed", label, e)),
    }

    let label = "conjugate points of F1-geodesics flow to conjugate points of F~-geodesics at the same t";
    let conj = || -> Result<Check> {
        let init = RiemannState::launch(&alpha, 0.0, 0.0, 1.2);
        let Some(cp) = first_conjugate_point(&alpha, init, 8.0, 1e-12)? else {
            let d = deform_geodesic(&alpha, &alpha_geodesic(&alpha, init, 8.0, tol)?, wind)?;
            let s0 = d.samples[0];
            let t_end = d.samples.last().map(|s| s.t).unwrap_or(0.0);
            let found = el.first_conjugate_time([s0.point.r, s0.point.theta], s0.velocity, t_end, 2e-3, 1e-4);
            return Ok(Check::bound(
                "conjugate_transfer",
                label,
                if found.is_some() { 1.0 } else { 0.0 },
                0.0,
            )
            .with_detail("no alpha-conjugate point within length 8; the oracle must find none either".into()));
        };
        let tr = reparam_alpha_to_f(
            &alpha,
            &integrate_geodesic(&alpha, init, cp.s, tol * 0.01)?,
            &|st| alpha.randers(st),
        )?;
        let t_star = tr.last().t.unwrap_or(f64::NAN);
        let d = deform_geodesic(&alpha, &tr, wind)?;
        let s0 = d.samples[0];
        let found = el.first_conjugate_time([s0.point.r, s0.point.theta], s0.velocity, t_star + 2.0, 2e-3, 1e-4);
        Ok(match found {
            Some(t_el) => Check::bound("conjugate_transfer", label, (t_el - t_star).abs(), 1e-5)
                .with_detail(format!("t(alpha) = {t_star}, t(oracle) = {t_el}")),
            None => Check::error("conjugate_transfer", label, format!("oracle found no conjugate point near t = {t_star}")),
        })
    };
    out.push(conj().unwrap_or_else(|e| Check::error("conjugate_transfer", label, e)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::SceneConfig;
    use crate::verification::Status;

    #[test]
    fn example_scene_zermelo_passes() {
        let scene = SceneConfig::example().build().unwrap();
        let rep = run_suite(&scene, Suite::Zermelo);
        for c in &rep.checks {
            assert_ne!(c.status, Status::Fail, "{c:?}");
        }
    }

    #[test]
    fn witness_field_fails_killing_suite() {
        let mut cfg = SceneConfig::example();
        cfg.killing_field = Some(KillingField::SinThetaRadial { c: 0.5 });
        let rep = run_suite(&cfg.build().unwrap(), Suite::Killing);
        assert!(!rep.passed());
        assert_eq!(rep.get("poisson_bracket").unwrap().status, Status::Fail);
        assert_eq!(rep.get("non_killing_witness").unwrap().status, Status::Pass);
    }
}
