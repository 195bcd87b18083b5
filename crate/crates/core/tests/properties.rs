mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use common::{catalog_a, phi_by_rk4, zermelo_norm, ElOracle, Profile, CATALOG, EXP_GAUSS, SECH};
use cylnav::conjugate_cut::{cut_locus_h, first_conjugate_point, phi, phi_by_shooting};
use cylnav::flow_deform::deform_geodesic;
use cylnav::geometry::{integrate_geodesic, integrate_geodesic_with, GeodesicOptions, RiemannState, Trajectory, WarpFunction};
use cylnav::projective::{beta_potential, finsler_length, reparam_alpha_to_f, AlphaMetric};
use cylnav::verification::{dual_norm_by_indicatrix, legendre_dual_norm, lie_bracket, momentum, poisson_bracket, CotangentPoint};
use cylnav::zermelo::{
    compose_k_step, eta, ftilde_at, randers_norm, rotational_closed_form, solve_nav_randers, solve_nav_riemannian,
    validate_wind, RandersPointData, Sym2, WindSpec,
};
use cylnav::{wrap_angle, wrap_signed, Point};

fn warp_of(p: &Profile) -> WarpFunction<f64> {
    match p.name {
        "exp_gauss" => WarpFunction::exp_gauss(),
        "sech" => WarpFunction::sech(),
        _ => WarpFunction::sqrt_poly(),
    }
}

fn catalog_wind(b: f64) -> WindSpec<f64> {
    WindSpec::bounded_odd(WindSpec::<f64>::catalog_amp(), b)
}

/// Random SPD matrix `[[p, q], [q, s]]` with `|q| < 0.8 √(ps)`.
fn spd() -> impl Strategy<Value = Sym2<f64>> {
    (0.3..2.0_f64, 0.3..2.0_f64, -0.8..0.8_f64).prop_map(|(p, s, k)| Sym2::new(p, k * (p * s).sqrt(), s))
}

/// Vector of `h`-length `len` in direction `phi`.
fn with_norm(h: &Sym2<f64>, phi: f64, len: f64) -> [f64; 2] {
    let u = [phi.cos(), phi.sin()];
    let n = h.quad(u).sqrt();
    [len * u[0] / n, len * u[1] / n]
}

fn valid(f: &RandersPointData<f64>) -> bool {
    f.is_valid() && f.a.is_spd(1e-14) && f.b_norm2() < 1.0
}

fn scaled_diff(x: &RandersPointData<f64>, y: &RandersPointData<f64>) -> f64 {
    x.max_abs_diff(y) / y.a.xx.abs().max(y.a.yy.abs()).max(1.0)
}

// navigation data

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_step_matches_direct(h in spd(), pv in 0.0..TAU, v in 0.0..0.9_f64, pt in 0.0..TAU, t in 0.0..0.95_f64) {
        let vv = with_norm(&h, pv, v);
        let total = with_norm(&h, pt, t);
        let w = [total[0] - vv[0], total[1] - vv[1]];
        let f1 = solve_nav_riemannian(&h, vv).unwrap();
        let two = solve_nav_randers(&f1, w).unwrap();
        let direct = solve_nav_riemannian(&h, total).unwrap();
        prop_assert!(scaled_diff(&two, &direct) < 1e-9, "{:e}", scaled_diff(&two, &direct));
        prop_assert!((eta(&f1, w) * (1.0 - v * v) - (1.0 - t * t)).abs() < 1e-12);
        prop_assert!(valid(&f1) && valid(&two) && valid(&direct));
    }

    #[test]
    fn admissibility_matches_combined_norm(h in spd(), pv in 0.0..TAU, v in 0.0..0.9_f64, pt in 0.0..TAU, t in 0.99..1.01_f64) {
        prop_assume!((t - 1.0).abs() > 1e-6);
        let vv = with_norm(&h, pv, v);
        let total = with_norm(&h, pt, t);
        let w = [total[0] - vv[0], total[1] - vv[1]];
        let f1 = solve_nav_riemannian(&h, vv).unwrap();
        prop_assert_eq!(validate_wind(|y| f1.norm(y), w), t < 1.0);
        prop_assert_eq!(solve_nav_randers(&f1, w).is_ok(), t < 1.0);
    }

    #[test]
    fn indicatrix_is_translated_unit_circle(h in spd(), pw in 0.0..TAU, wl in 0.0..0.95_f64, pu in 0.0..TAU) {
        let w = with_norm(&h, pw, wl);
        let f = solve_nav_riemannian(&h, w).unwrap();
        let u = with_norm(&h, pu, 1.0);
        let y = [u[0] + w[0], u[1] + w[1]];
        prop_assert!((randers_norm(&f, y) - 1.0).abs() < 1e-10);
        prop_assert!(valid(&f));
    }

    #[test]
    fn randers_norm_is_positively_homogeneous(h in spd(), pw in 0.0..TAU, wl in 0.0..0.95_f64, py in 0.0..TAU, c in 0.01..100.0_f64) {
        let f = solve_nav_riemannian(&h, with_norm(&h, pw, wl)).unwrap();
        let y = [py.cos(), py.sin()];
        let fy = randers_norm(&f, y);
        prop_assert!(fy > 0.0);
        prop_assert!((randers_norm(&f, [c * y[0], c * y[1]]) - c * fy).abs() < 1e-12 * c * fy.max(1.0));
    }

    #[test]
    fn k_step_composition(h in spd(), parts in prop::collection::vec((0.0..TAU, 0.0..0.9_f64), 1..6)) {
        // partial sums with h-norm below 0.9; the winds are their differences
        let sums: Vec<[f64; 2]> = parts.iter().map(|&(p, l)| with_norm(&h, p, l)).collect();
        let mut winds = Vec::new();
        let mut prev = [0.0, 0.0];
        for s in &sums {
            winds.push([s[0] - prev[0], s[1] - prev[1]]);
            prev = *s;
        }
        let composed = compose_k_step(&h, &winds).unwrap();
        let direct = solve_nav_riemannian(&h, prev).unwrap();
        prop_assert!(scaled_diff(&composed, &direct) < 1e-9);
        prop_assert!(valid(&composed));
    }

    #[test]
    fn wrap_angle_reduces(theta in -1e3..1e3_f64) {
        let (w, k) = wrap_angle(theta);
        prop_assert!((0.0..TAU).contains(&w));
        prop_assert!((w + TAU * k as f64 - theta).abs() < 1e-9);
        let d = wrap_signed(theta);
        prop_assert!(d > -PI && d <= PI);
        prop_assert!(((theta - d) / TAU - ((theta - d) / TAU).round()).abs() < 1e-9);
    }
}

// geodesics

fn launch_strategy() -> impl Strategy<Value = (usize, f64, f64, f64)> {
    (0..3_usize, -2.0..2.0_f64, 0.0..TAU, 0.0..TAU)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn clairaut_and_unit_speed((k, r, th, ang) in launch_strategy()) {
        let warp = warp_of(&CATALOG[k]);
        let tr = integrate_geodesic(&warp, RiemannState::launch(&warp, r, th, ang), 20.0, 1e-10).unwrap();
        prop_assert!(tr.clairaut_drift(&warp) < 1e-7);
        prop_assert!(tr.max_unit_defect(&warp) < 1e-8);
    }

    #[test]
    fn reversible((k, r, th, ang) in launch_strategy()) {
        let warp = warp_of(&CATALOG[k]);
        let init = RiemannState::launch(&warp, r, th, ang);
        // errors grow like exp(√|K| s) where the tube is thin, so run tighter than the default
        let fwd = integrate_geodesic(&warp, init, 10.0, 1e-12).unwrap();
        prop_assume!(fwd.is_complete());
        let back = integrate_geodesic(&warp, fwd.last().state.reversed(), 10.0, 1e-12).unwrap();
        let end = back.last().state.reversed();
        let gap = [end.r - init.r, end.theta - init.theta, end.vr - init.vr, end.vtheta - init.vtheta]
            .iter()
            .fold(0.0_f64, |a, x| a.max(x.abs()));
        prop_assert!(gap < 1e-6, "{gap:e}");
    }

    #[test]
    fn radial_velocity_turns_only_where_m_equals_nu((k, r, th, ang) in launch_strategy()) {
        prop_assume!(ang.cos().abs() > 0.05);
        let warp = warp_of(&CATALOG[k]);
        let init = RiemannState::launch(&warp, r, th, ang);
        let tr = integrate_geodesic_with(&warp, init, 15.0, &GeodesicOptions::new(1e-10).with_spacing(0.05), None).unwrap();
        let nu = tr.nu.abs();
        prop_assert!(nu < warp.m(r));
        for pair in tr.samples.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.state.vr.signum() == b.state.vr.signum() {
                continue;
            }
            let (mut lo, mut hi) = (a.s, b.s);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if tr.state_at(&warp, mid).vr.signum() == a.state.vr.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let st = tr.state_at(&warp, 0.5 * (lo + hi));
            prop_assert!((warp.m(st.r) - nu).abs() < 1e-6, "m = {}, nu = {nu}", warp.m(st.r));
        }
    }
}

// potentials and reparameterization

/// Composite Simpson on `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn alpha_trajectory(alpha: &AlphaMetric<f64>, r: f64, th: f64, ang: f64, len: f64) -> Trajectory<f64> {
    let init = RiemannState::launch(alpha, r, th, ang);
    integrate_geodesic_with(alpha, init, len, &GeodesicOptions::new(1e-11).with_spacing(1.0 / 128.0), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn beta_is_exact_on_closed_polylines(k in 0..3_usize, pts in prop::collection::vec((-1.5..1.5_f64, -3.0..3.0_f64), 3..8)) {
        let warp = warp_of(&CATALOG[k]);
        let wind = catalog_wind(0.0);
        let pot = beta_potential(&wind, warp.window(), 1e-12).unwrap();
        let mut total = 0.0;
        for i in 0..pts.len() {
            let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
            let d = [q.0 - p.0, q.1 - p.1];
            let seg = simpson(
                |s| {
                    let nav = rotational_closed_form(&warp, &wind, p.0 + s * d[0]).unwrap();
                    nav.f.b[0] * d[0] + nav.f.b[1] * d[1]
                },
                0.0,
                1.0,
                200,
            );
            prop_assert!((seg - pot.increment(p.0, q.0).unwrap()).abs() < 1e-8);
            total += seg;
        }
        prop_assert!(total.abs() < 1e-8, "{total:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn finsler_length_equals_direct_quadrature((k, r, th, ang) in launch_strategy()) {
        let warp = warp_of(&CATALOG[k]);
        let wind = catalog_wind(0.0);
        let alpha = AlphaMetric::new(warp.clone(), &wind);
        let pot = beta_potential(&wind, warp.window(), 1e-12).unwrap();
        let tr = alpha_trajectory(&alpha, r, th, ang, 4.0);
        // F₁ = α + β at unit α-speed, β = −A/(1 − A²) dr
        let f1 = |i: usize| {
            let st = tr.samples[i].state;
            let a = catalog_a(st.r);
            1.0 - a / (1.0 - a * a) * st.vr
        };
        let n = tr.samples.len() - 1;
        prop_assert!(n % 2 == 0);
        let h = tr.length / n as f64;
        let mut direct = f1(0) + f1(n);
        for i in 1..n {
            direct += f1(i) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        direct *= h / 3.0;
        let lf = finsler_length(&tr, &pot).unwrap();
        prop_assert!((lf - direct).abs() < 1e-8, "{:e}", (lf - direct).abs());
        let t = reparam_alpha_to_f(&alpha, &tr, &|st| alpha.randers(st)).unwrap();
        prop_assert!((t.last().t.unwrap() - lf).abs() < 1e-8);
    }

    #[test]
    fn finsler_time_strictly_increases((k, r, th, ang) in launch_strategy(), b in -0.3..0.3_f64) {
        let warp = warp_of(&CATALOG[k]);
        let alpha = AlphaMetric::new(warp.clone(), &catalog_wind(b));
        let tr = alpha_trajectory(&alpha, r, th, ang, 4.0);
        let t = reparam_alpha_to_f(&alpha, &tr, &|st| alpha.randers(st)).unwrap();
        for pair in t.samples.windows(2) {
            prop_assert!(pair[1].t.unwrap() > pair[0].t.unwrap());
        }
    }
}

// cut locus

/// First arclength at which the geodesic from `q` meets its cut locus.
fn first_cut_hit(warp: &WarpFunction<f64>, q: Point<f64>, ang: f64, len: f64) -> Option<f64> {
    let cut = cut_locus_h(warp, q, 1e-12).unwrap();
    let init = RiemannState::launch(warp, q.r, q.theta, ang);
    let tr = integrate_geodesic_with(warp, init, len, &GeodesicOptions::new(1e-11).with_spacing(0.01), None).unwrap();
    let meridian = |st: &RiemannState<f64>| (st.theta - q.theta).abs() - PI;
    let on_subarc = |st: &RiemannState<f64>| match cut.theta_interval {
        Some([a, b]) => wrap_signed(st.theta - 0.5 * (a + b)).abs() <= 0.5 * (b - a),
        None => false,
    };
    let refine = |lo: f64, hi: f64, g: &dyn Fn(&RiemannState<f64>) -> f64| {
        let (mut lo, mut hi) = (lo, hi);
        let sign = g(&tr.state_at(warp, lo)).signum();
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(&tr.state_at(warp, mid)).signum() == sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    for pair in tr.samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mut hits = Vec::new();
        if meridian(&a.state) < 0.0 && meridian(&b.state) >= 0.0 {
            hits.push(refine(a.s, b.s, &meridian));
        }
        if let Some(pr) = cut.parallel_r {
            let g = |st: &RiemannState<f64>| st.r - pr;
            if g(&a.state).signum() != g(&b.state).signum() {
                let s = refine(a.s, b.s, &g);
                if on_subarc(&tr.state_at(warp, s)) {
                    hits.push(s);
                }
            }
        }
        if let Some(s) = hits.into_iter().reduce(f64::min) {
            return Some(s);
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cut_locus_is_rotation_equivariant(k in 0..2_usize, r in -1.5..1.5_f64, th in 0.0..TAU, c in -10.0..10.0_f64) {
        let warp = warp_of(&[EXP_GAUSS, SECH][k]);
        let a = cut_locus_h(&warp, Point::new(r, th), 1e-12).unwrap();
        let b = cut_locus_h(&warp, Point::new(r, th + c), 1e-12).unwrap();
        prop_assert_eq!(a.variant, b.variant);
        prop_assert!(wrap_signed(b.theta_opp - a.theta_opp - c).abs() < 1e-9);
        prop_assert_eq!(a.parallel_r, b.parallel_r);
        prop_assert_eq!(a.phi_value, b.phi_value);
        if let (Some([a0, a1]), Some([b0, b1])) = (a.theta_interval, b.theta_interval) {
            prop_assert!(wrap_signed(b0 - a0 - c).abs() < 1e-9);
            prop_assert!(((b1 - b0) - (a1 - a0)).abs() < 1e-9);
        } else {
            prop_assert!(a.theta_interval.is_none() && b.theta_interval.is_none());
        }
    }

    #[test]
    fn cut_time_precedes_first_conjugate_time(ang in 0.0..TAU) {
        let warp = WarpFunction::exp_gauss();
        let q = Point::new(0.5, 0.0);
        let cut = first_cut_hit(&warp, q, ang, 12.0);
        let init = RiemannState::launch(&warp, q.r, q.theta, ang);
        let conj = first_conjugate_point(&warp, init, 12.0, 1e-12).unwrap().map(|c| c.s);
        if let Some(c) = conj {
            let t = cut.expect("a geodesic with a conjugate point meets the cut locus first");
            prop_assert!(t <= c + 1e-6, "cut {t}, conjugate {c}");
        }
    }

    #[test]
    fn phi_quadrature_matches_shooting(k in 0..2_usize, nu in 0.05..0.99_f64) {
        let prof = [EXP_GAUSS, SECH][k];
        let warp = warp_of(&prof);
        let q = phi(&warp, nu, 1e-12).unwrap();
        prop_assert!((q - phi_by_shooting(&warp, nu, 1e-12).unwrap()).abs() < 1e-6);
        prop_assert!((q - phi_by_rk4(&prof, nu, 1e-3)).abs() < 1e-6);
    }
}

// deformation

fn example_oracle(b: f64) -> ElOracle {
    ElOracle { profile: EXP_GAUSS, a: catalog_a, b, h: 1e-5 }
}

fn deformed(r: f64, th: f64, ang: f64, len: f64, b: f64) -> cylnav::flow_deform::DeformedTrajectory<f64> {
    let warp = WarpFunction::exp_gauss();
    let wind = catalog_wind(b);
    let alpha = AlphaMetric::new(warp.clone(), &wind);
    let init = RiemannState::launch(&alpha, r, th, ang);
    let tr = integrate_geodesic_with(&alpha, init, len, &GeodesicOptions::new(1e-11).with_spacing(0.05), None).unwrap();
    let tr = reparam_alpha_to_f(&alpha, &tr, &|st| alpha.randers(st)).unwrap();
    deform_geodesic(&alpha, &tr, &wind).unwrap()
}

/// `d_F̃(p, x)` by shooting the Euler–Lagrange flow from `p`: a scan over
/// F̃-unit launches `u + W` followed by Newton on `(launch angle, time)`.
fn oracle_distance(el: &ElOracle, p: [f64; 2], x: [f64; 2], t_max: f64) -> Option<f64> {
    let m = (el.profile.m)(p[0]);
    let launch = |psi: f64| [psi.cos() + (el.a)(p[0]), psi.sin() / m + el.b];
    let dt = 2e-3;
    let steps = (t_max / dt).ceil() as usize;
    let n = 120;
    let miss = |y: &[f64; 4]| ((y[0] - x[0]).powi(2) + wrap_signed(y[1] - x[1]).powi(2)).sqrt();
    let mut scan = Vec::with_capacity(n);
    for i in 0..n {
        let psi = TAU * i as f64 / n as f64;
        let path = el.path(p, launch(psi), steps, dt);
        let (k, d) = path
            .iter()
            .enumerate()
            .map(|(k, y)| (k, miss(y)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        scan.push((psi, k as f64 * dt, d));
    }
    let mut best: Option<f64> = None;
    for i in 0..n {
        let (prev, cur, next) = (scan[(i + n - 1) % n].2, scan[i], scan[(i + 1) % n].2);
        if cur.2 > prev || cur.2 > next || cur.2 > 0.1 {
            continue;
        }
        let (mut psi, mut tau) = (cur.0, cur.1.max(dt));
        let end = |psi: f64, tau: f64| {
            let y = el.at_times(p, launch(psi), &[tau], dt)[0];
            [y[0] - x[0], wrap_signed(y[1] - x[1])]
        };
        let mut converged = false;
        for _ in 0..30 {
            let f = end(psi, tau);
            if f[0].hypot(f[1]) < 1e-11 {
                converged = true;
                break;
            }
            let e = 1e-6;
            let fp = end(psi + e, tau);
            let ft = end(psi, tau + e);
            let j = [[(fp[0] - f[0]) / e, (ft[0] - f[0]) / e], [(fp[1] - f[1]) / e, (ft[1] - f[1]) / e]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            psi -= (j[1][1] * f[0] - j[0][1] * f[1]) / det;
            tau -= (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        }
        if converged && tau > 0.0 {
            best = Some(best.map_or(tau, |b: f64| b.min(tau)));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn deformed_geodesics_have_unit_speed(r in -1.5..1.5_f64, th in 0.0..TAU, ang in 0.0..TAU, b in -0.3..0.3_f64) {
        let d = deformed(r, th, ang, 6.0, b);
        let warp = WarpFunction::exp_gauss();
        prop_assert!(d.unit_speed_defect(&warp, &catalog_wind(b)).unwrap() < 1e-7);
        for s in &d.samples {
            let m = warp.m(s.point.r);
            prop_assert!((zermelo_norm(m, catalog_a(s.point.r), b, s.velocity) - 1.0).abs() < 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn conjugate_points_transfer(ang in 0.6..2.5_f64) {
        let b = 0.3;
        let warp = WarpFunction::exp_gauss();
        let wind = catalog_wind(b);
        let alpha = AlphaMetric::new(warp, &wind);
        let init = RiemannState::launch(&alpha, 0.0, 0.0, ang);
        let cp = first_conjugate_point(&alpha, init, 8.0, 1e-12).unwrap();
        prop_assume!(cp.is_some());
        let s_star = cp.unwrap().s;
        let tr = integrate_geodesic_with(&alpha, init, s_star, &GeodesicOptions::new(1e-12).with_spacing(0.05), None).unwrap();
        let tr = reparam_alpha_to_f(&alpha, &tr, &|st| alpha.randers(st)).unwrap();
        let t_star = tr.last().t.unwrap();
        let d = deform_geodesic(&alpha, &tr, &wind).unwrap();
        let s0 = d.samples[0];
        let t_el = example_oracle(b).first_conjugate_time([s0.point.r, s0.point.theta], s0.velocity, t_star + 2.0, 2e-3);
        prop_assert!(t_el.is_some());
        prop_assert!((t_el.unwrap() - t_star).abs() < 1e-5, "alpha {t_star}, oracle {:?}", t_el);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn deformed_geodesics_realize_distance(r in -0.2..0.2_f64, ang in 0.0..TAU) {
        let b = 0.3;
        let d = deformed(r, 0.0, ang, 2.0, b);
        let target = d.samples.iter().min_by(|x, y| (x.t - 1.0).abs().total_cmp(&(y.t - 1.0).abs())).unwrap();
        let p = d.samples[0].point;
        let dist = oracle_distance(&example_oracle(b), [p.r, p.theta], [target.point.r, target.point.theta], target.t + 0.3);
        prop_assert!(dist.is_some());
        prop_assert!((dist.unwrap() - target.t).abs() < 1e-5, "t = {}, distance {:?}", target.t, dist);
    }
}

// cotangent checks

/// `v(r, θ) = (c₀ + c₁ r + c₂ sin θ + c₃ r θ, c₄ + c₅ cos r + c₆ θ² + c₇ r sin θ)`.
fn field(c: [f64; 8]) -> impl Fn(f64, f64) -> [f64; 2] + Sync {
    move |r, t| {
        [
            c[0] + c[1] * r + c[2] * t.sin() + c[3] * r * t,
            c[4] + c[5] * r.cos() + c[6] * t * t + c[7] * r * t.sin(),
        ]
    }
}

fn coeffs() -> impl Strategy<Value = [f64; 8]> {
    prop::array::uniform8(-1.0..1.0_f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rotation_commutes_with_dual_norm(k in 0..3_usize, r in -2.0..2.0_f64, th in 0.0..TAU, pr in -1.0..1.0_f64, pt in -1.0..1.0_f64) {
        let b = [0.3, 0.3, 0.05][k];
        let warp = warp_of(&CATALOG[k]);
        let wind = catalog_wind(b);
        let wv = |r: f64, _: f64| wind.vector(r);
        let rot = |_: f64, _: f64| [0.0, b];
        let fstar = |cp: &CotangentPoint<f64>| legendre_dual_norm(&warp, &wv, cp);
        let wstar = |cp: &CotangentPoint<f64>| momentum(&rot, cp);
        let cp = CotangentPoint::new(r, th, pr, pt);
        prop_assert!(poisson_bracket(&fstar, &wstar, &cp, 1e-4).abs() < 1e-6);
    }

    #[test]
    fn dual_norm_is_support_function(k in 0..3_usize, r in -2.0..2.0_f64, th in 0.0..TAU, pr in -1.0..1.0_f64, pt in -1.0..1.0_f64) {
        prop_assume!(pr.hypot(pt) > 1e-3);
        let b = [0.3, 0.3, 0.05][k];
        let warp = warp_of(&CATALOG[k]);
        let wind = catalog_wind(b);
        let wv = |r: f64, _: f64| wind.vector(r);
        let cp = CotangentPoint::new(r, th, pr, pt);
        let closed = legendre_dual_norm(&warp, &wv, &cp);
        let support = dual_norm_by_indicatrix(&ftilde_at(&warp, &wind, r).unwrap(), [pr, pt], 720);
        prop_assert!((closed - support).abs() < 1e-4 * closed);
    }

    #[test]
    fn lie_bracket_is_antisymmetric_and_bilinear(c1 in coeffs(), c2 in coeffs(), c3 in coeffs(), x in -1.0..1.0_f64, y in -1.0..1.0_f64, r in -2.0..2.0_f64, th in -3.0..3.0_f64) {
        let (v1, v2, w) = (field(c1), field(c2), field(c3));
        let combo = |r: f64, t: f64| {
            let (a, b) = (v1(r, t), v2(r, t));
            [x * a[0] + y * b[0], x * a[1] + y * b[1]]
        };
        let p = Point::new(r, th);
        let vw = lie_bracket(&v1, &w, p, 1e-4);
        let wv = lie_bracket(&w, &v1, p, 1e-4);
        prop_assert!((vw[0] + wv[0]).abs() < 1e-6 && (vw[1] + wv[1]).abs() < 1e-6);
        let lhs = lie_bracket(&combo, &w, p, 1e-4);
        let v2w = lie_bracket(&v2, &w, p, 1e-4);
        for i in 0..2 {
            prop_assert!((lhs[i] - x * vw[i] - y * v2w[i]).abs() < 1e-6);
        }
    }
}

#[test]
fn witness_field_is_not_killing() {
    let warp = WarpFunction::exp_gauss();
    let wind = catalog_wind(0.3);
    let wv = |r: f64, _: f64| wind.vector(r);
    let witness = |_: f64, t: f64| [0.5 * t.sin(), 0.0];
    let fstar = |cp: &CotangentPoint<f64>| legendre_dual_norm(&warp, &wv, cp);
    let wstar = |cp: &CotangentPoint<f64>| momentum(&witness, cp);
    let cp = CotangentPoint::new(0.4, 0.3, 0.8, 0.2);
    assert!(poisson_bracket(&fstar, &wstar, &cp, 1e-4).abs() > 1e-3);
}
