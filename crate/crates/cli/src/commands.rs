use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use cylnav::conjugate_cut::{self, cut_locus_alpha, phi_by_shooting, xi, CutLocusDescription, CutVariant, HypothesisReport, Supremum};
use cylnav::flow_deform::{deform_cut_locus, deform_geodesic, DeformOptions};
use cylnav::geometry::{clairaut, integrate_geodesic_with, unit_speed_defect, GeodesicOptions, RiemannState};
use cylnav::projective::{beta_potential, reparam_alpha_to_f, AlphaMetric};
use cylnav::scene::Scene;
use cylnav::verification::{run_suite, Report, Suite};
use cylnav::zermelo::{h_matrix, rotational_closed_form, solve_nav_riemannian, RandersPointData};
use cylnav::{wrap_angle, Interval, Point};

use crate::exit::{Code, Failure};

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: Option<&Path>, content: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, content)?,
        None => std::io::stdout().write_all(content)?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, s.as_bytes())
}

pub fn metric(scene: &Scene, r: f64, out: Option<&Path>) -> Result<Code, Failure> {
    scene.warp.check_domain(r)?;
    let nav = rotational_closed_form(&scene.warp, &scene.wind, r)?;
    let h = h_matrix(&scene.warp, r);
    let w = scene.wind.vector(r);
    let generic = solve_nav_riemannian(&h, w)?
        .max_abs_diff(&nav.ftilde)
        .max(solve_nav_riemannian(&h, [w[0], 0.0])?.max_abs_diff(&nav.f));

    let mut s = String::new();
    let mut row = |k: &str, v: f64| writeln!(s, "{k:<20}{}", num(v)).expect("write to string");
    row("r", r);
    row("m", scene.warp.m(r));
    row("A", w[0]);
    row("B", w[1]);
    let mut data = |prefix: &str, d: &RandersPointData<f64>| {
        row(&format!("{prefix}a11"), d.a.xx);
        row(&format!("{prefix}a12"), d.a.xy);
        row(&format!("{prefix}a22"), d.a.yy);
        row(&format!("{prefix}b1"), d.b[0]);
        row(&format!("{prefix}b2"), d.b[1]);
    };
    data("tilde_", &nav.ftilde);
    data("", &nav.f);
    row("lambda", nav.scalars.lambda);
    row("Lambda", nav.scalars.big_lambda);
    row("eta", nav.scalars.eta);
    row("identity_residual", nav.scalars.identity_residual());
    row("generic_residual", generic);
    emit(out, s.as_bytes())?;
    Ok(Code::Ok)
}

pub fn geodesic(
    scene: &Scene,
    r: f64,
    theta: f64,
    angle: f64,
    length: f64,
    spacing: f64,
    out: Option<&Path>,
) -> Result<Code, Failure> {
    if !(spacing > 0.0) {
        return Err(Failure::new(Code::Admissibility, format!("--spacing must be positive, got {spacing}")));
    }
    let alpha = AlphaMetric::new(scene.warp.clone(), &scene.wind);
    scene.warp.check_domain(r)?;
    let init = RiemannState::launch(&alpha, r, theta, angle);
    let opts = GeodesicOptions::new(scene.tolerances.ode_tol).with_spacing(spacing);
    let tr = integrate_geodesic_with(&alpha, init, length, &opts, None)?;
    let tr = reparam_alpha_to_f(&alpha, &tr, &|st| alpha.randers(st))?;
    let deformed = deform_geodesic(&alpha, &tr, &scene.wind)?;

    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record([
        "s",
        "t",
        "r",
        "theta",
        "theta_winding",
        "vr",
        "vtheta",
        "nu",
        "unit_defect",
        "r_deformed",
        "theta_deformed",
        "theta_deformed_winding",
    ])?;
    for (smp, d) in tr.samples.iter().zip(&deformed.samples) {
        let st = smp.state;
        let (th, k) = wrap_angle(st.theta);
        let (thd, kd) = wrap_angle(d.point.theta);
        w.write_record([
            num(smp.s),
            num(d.t),
            num(st.r),
            num(th),
            k.to_string(),
            num(st.vr),
            num(st.vtheta),
            num(clairaut(&alpha, &st)),
            num(unit_speed_defect(&alpha, &st)),
            num(d.point.r),
            num(thd),
            kd.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(Code::Integration, e.to_string()))?;
    emit(out, &bytes)?;
    Ok(Code::Ok)
}

#[derive(Serialize)]
struct CutSample {
    r: f64,
    theta: f64,
    winding: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<Point<f64>>,
}

impl CutSample {
    fn new(p: Point<f64>, flow_time: Option<f64>, source: Option<Point<f64>>) -> Self {
        let (theta, winding) = wrap_angle(p.theta);
        Self {
            r: p.r,
            theta,
            winding,
            flow_time,
            source,
        }
    }
}

#[derive(Serialize)]
struct CutLocusJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    variant: CutVariant,
    q: Point<f64>,
    theta_opp: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    parallel_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_value: Option<f64>,
    r0: Supremum<f64>,
    hypothesis: HypothesisReport<f64>,
    deformed: bool,
    samples: Vec<CutSample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    skipped: Vec<(Point<f64>, String)>,
}

pub fn cutlocus(
    scene: &Scene,
    r: f64,
    theta: f64,
    deform: bool,
    samples: usize,
    half_width: f64,
    out: Option<&Path>,
) -> Result<Code, Failure> {
    scene.warp.check_domain(r)?;
    let q = Point::new(r, theta);
    let win = scene.window();
    let range = Interval::new(win.lo.max(-half_width), win.hi.min(half_width));
    let cut = cut_locus_alpha(&scene.warp, &scene.wind, q, scene.tolerances.quad_tol)?;
    let ok = cut.hypothesis.ok;

    let (result, skipped): (CutLocusDescription<f64>, _) = if deform && ok {
        let pot = beta_potential(&scene.wind, win, scene.tolerances.quad_tol)?;
        let mut opts = DeformOptions::new(range);
        opts.n_meridian = samples;
        opts.n_parallel = samples;
        let d = deform_cut_locus(&cut, &scene.warp, &scene.wind, &pot, q, &opts)?;
        let skipped = d.skipped.clone();
        (d, skipped)
    } else {
        (cut, Vec::new())
    };
    let pts: Vec<CutSample> = match (&result.deformed, ok) {
        (Some(d), true) => d
            .iter()
            .map(|p| CutSample::new(p.point, Some(p.flow_time), Some(p.source)))
            .collect(),
        (_, true) => result
            .sample_points(range, samples, samples)
            .into_iter()
            .map(|p| CutSample::new(p, None, None))
            .collect(),
        (_, false) => Vec::new(),
    };
    let interval = result.theta_interval.map(|[a, b]| {
        let (a0, _) = wrap_angle(a);
        [a0, a0 + (b - a)]
    });
    let json = CutLocusJson {
        error: (!ok).then(|| format!("hypothesis violated: {}", result.hypothesis.note)),
        variant: result.variant,
        q,
        theta_opp: wrap_angle(result.theta_opp).0,
        parallel_r: result.parallel_r,
        theta_interval: interval,
        phi_value: result.phi_value,
        r0: result.r0,
        hypothesis: result.hypothesis.clone(),
        deformed: deform && ok,
        samples: pts,
        skipped,
    };
    emit_json(out, &json)?;
    Ok(if ok { Code::Ok } else { Code::Hypothesis })
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::new(Code::Admissibility, format!("--grid expects a:b:n, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok(Interval::new(a, b).grid(n)),
    }
}

pub fn phi(scene: &Scene, grid: &str, out: Option<&Path>) -> Result<Code, Failure> {
    let nus = parse_grid(grid)?;
    let warp = &scene.warp;
    let m0 = warp.m(0.0);
    let tol = scene.tolerances;
    let rows: Vec<(f64, Result<[f64; 3], String>, &str)> = nus
        .par_iter()
        .map(|&nu| {
            if !(nu > 0.0 && nu <= m0) {
                return (nu, Err(format!("nu outside (0, {m0}]")), "out_of_range");
            }
            let run = || -> cylnav::Result<[f64; 3]> {
                Ok([xi(warp, nu)?, conjugate_cut::phi(warp, nu, tol.quad_tol)?, phi_by_shooting(warp, nu, tol.ode_tol)?])
            };
            match run() {
                Ok(v) => (nu, Ok(v), "ok"),
                Err(e) => (nu, Err(e.to_string()), "error"),
            }
        })
        .collect();
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["nu", "xi", "phi", "phi_shooting", "abs_diff", "status"])?;
    let mut failed = None;
    for (nu, res, status) in &rows {
        match res {
            Ok([x, p, s]) => w.write_record([num(*nu), num(*x), num(*p), num(*s), num((p - s).abs()), status.to_string()])?,
            Err(msg) => {
                if *status == "error" && failed.is_none() {
                    failed = Some(format!("nu = {nu}: {msg}"));
                }
                let nan = num(f64::NAN);
                w.write_record([num(*nu), nan.clone(), nan.clone(), nan.clone(), nan, status.to_string()])?
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(Code::Integration, e.to_string()))?;
    emit(out, &bytes)?;
    match failed {
        Some(msg) => Err(Failure::new(Code::RootFinding, msg)),
        None => Ok(Code::Ok),
    }
}

pub fn verify(scene: &Scene, suite: Suite, out: Option<&Path>) -> Result<Code, Failure> {
    let report: Report = run_suite(scene, suite);
    emit_json(out, &report)?;
    for c in report.failures() {
        eprintln!("FAIL {}: measured {:e}, tolerance {:?}", c.name, c.measured, c.tolerance);
    }
    Ok(if report.passed() { Code::Ok } else { Code::Verification })
}
