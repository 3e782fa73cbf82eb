//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use gmink::continuity::{run_measure_continuity, run_p_continuity, ExperimentRecord};
use gmink::convex::hausdorff_distance;
use gmink::gaussian::{gauss_surface_measure, lp_surface_measure, minkowski_gap, variational_check};
use gmink::solver::{solve_ball, solve_discrete, Initialization, JacobianKind, SolverConfig};
use gmink::{Ball, ConvexBody, GaussianBody, GaussianContext, Polytope, SphericalGrid, Vec3};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    let pass = parts.iter().all(|o| o.pass);
    let detail = parts
        .iter()
        .map(|o| if o.pass { o.detail.clone() } else { format!("[failed] {}", o.detail) })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

#[derive(Default)]
struct Families {
    records: Vec<(String, Vec<ExperimentRecord<f64>>)>,
}

fn ctx2() -> GaussianContext<f64> {
    GaussianContext::new(2).unwrap()
}

fn square(s: f64) -> Polytope<f64> {
    Polytope::cube(2, s).unwrap()
}

fn half_space(dim: usize, offset: f64, box_half: f64) -> Polytope<f64> {
    let mut normals = Vec::new();
    let mut h = Vec::new();
    for axis in 0..dim {
        for sign in [1.0, -1.0] {
            let mut c = [0.0; 3];
            c[axis] = sign;
            normals.push(Vec3::new(c[0], c[1], c[2]));
            h.push(if axis == 0 && sign > 0.0 { offset } else { box_half });
        }
    }
    Polytope::wulff(dim, normals, h).unwrap()
}

fn criterion_1() -> Outcome {
    let c2 = ctx2();
    let c3 = GaussianContext::<f64>::new(3).unwrap();
    let b2 = Ball::unit(2).unwrap().gaussian_volume(&c2).unwrap();
    let oracle = simpson(|t| t * (-t * t / 2.0).exp(), 0.0, 1.0, 2000);
    let mut parts = vec![check((b2 - oracle).abs() <= 1e-8, format!("γ(B2)={b2:.12} oracle={oracle:.12}"))];
    for (n, ctx) in [(2usize, &c2), (3, &c3)] {
        let g = Ball::new(n, 8.0).unwrap().gaussian_volume(ctx).unwrap();
        parts.push(check((g - 1.0).abs() <= 1e-6, format!("γ(8B{n})={g:.12}")));
        let hs = half_space(n, 1e-6, 8.0).gaussian_volume(ctx).unwrap();
        parts.push(check((hs - 0.5).abs() <= 1e-4, format!("half-space n={n}: {hs:.8}")));
    }
    merge(parts)
}

fn criterion_2() -> Outcome {
    let c = ctx2();
    let oracle = phi(1.0) * normal_mass(-1.0, 1.0);
    let mu = gauss_surface_measure(&c, &square(1.0)).unwrap();
    let worst = mu.atoms().iter().map(|a| (a.mass - oracle).abs()).fold(0.0, f64::max);
    let grid = SphericalGrid::new(2, 720).unwrap();
    let ball = Polytope::ball_approximation(&grid, 1.0).unwrap();
    let total = gauss_surface_measure(&c, &ball).unwrap().total_mass();
    let target = (-0.5f64).exp();
    merge(vec![
        check(worst <= 1e-8, format!("square atom error {worst:.2e} (oracle {oracle:.10})")),
        check((total - target).abs() <= 1e-3, format!("720-gon total {total:.8} vs {target:.8}")),
    ])
}

type Case<'a> = dyn Fn() -> gmink::Result<gmink::gaussian::VariationalReport<f64>> + 'a;

fn criterion_3() -> Outcome {
    let c = ctx2();
    let b2 = Ball::unit(2).unwrap();
    let sq = square(1.0);
    let half = square(0.5);
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for p in [1.0, 2.0, 3.0] {
        let cases: [(&str, &Case); 3] = [
            ("B2,B2", &|| variational_check(&c, &b2, &b2, p, &[1e-4])),
            ("square,B2", &|| variational_check(&c, &sq, &b2, p, &[1e-4])),
            ("square,square/2", &|| variational_check(&c, &sq, &half, p, &[1e-4])),
        ];
        for (name, run) in cases {
            match run() {
                Ok(rep) => {
                    let rel = rep.estimates[0].rel_error;
                    worst = worst.max(rel);
                    if rel > 1e-3 {
                        parts.push(check(false, format!("{name} p={p}: rel {rel:.2e}")));
                    }
                }
                Err(e) => parts.push(check(false, format!("{name} p={p}: {e}"))),
            }
        }
    }
    parts.push(check(true, format!("9 cases, worst relative error {worst:.2e}")));
    merge(parts)
}

fn criterion_4() -> Outcome {
    let c = ctx2();
    let mut r = rng(4);
    let mut min_gap = f64::INFINITY;
    let mut max_self = 0.0f64;
    let mut errors = Vec::new();
    for _ in 0..200 {
        let k = random_polygon(&mut r, 0.3, 2.5);
        let l = random_polygon(&mut r, 0.3, 2.5);
        for p in [1.0, 1.5, 2.0, 3.0] {
            match (minkowski_gap(&c, &k, &l, p), minkowski_gap(&c, &k, &k, p)) {
                (Ok(g), Ok(s)) => {
                    min_gap = min_gap.min(g);
                    max_self = max_self.max(s.abs());
                }
                (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
            }
        }
    }
    merge(vec![
        check(errors.is_empty(), format!("{} evaluation errors", errors.len())),
        check(min_gap >= -1e-7, format!("min gap {min_gap:.3e} over 800 evaluations")),
        check(max_self <= 1e-8, format!("max |gap(K,K)| {max_self:.2e}")),
    ])
}

fn criterion_5(families: &mut Families) -> Outcome {
    let c = ctx2();
    let mut r = rng(5);
    let mut bodies = Vec::new();
    while bodies.len() < 20 {
        let k = random_polygon(&mut r, 0.9, 2.5);
        if k.gaussian_volume(&c).unwrap() >= 0.5 {
            bodies.push(k);
        }
    }
    let mut worst_round_trip = 0.0f64;
    let mut worst_agreement = 0.0f64;
    let mut failures = Vec::new();
    let mut records = Vec::new();
    for (i, k) in bodies.iter().enumerate() {
        for p in [1.0, 2.0] {
            let mu = lp_surface_measure(&c, k, p).unwrap();
            let from_ball = SolverConfig::default();
            let from_body = SolverConfig {
                initialization: Initialization::GivenBody(k.scaled(1.3).unwrap()),
                jacobian: JacobianKind::N2Analytic,
                ..SolverConfig::default()
            };
            match (solve_discrete(&c, &mu, p, &from_ball), solve_discrete(&c, &mu, p, &from_body)) {
                (Ok(a), Ok(b)) => {
                    let da = hausdorff_distance(&a.solution, k, c.grid()).unwrap();
                    let db = hausdorff_distance(&b.solution, k, c.grid()).unwrap();
                    let dab = hausdorff_distance(&a.solution, &b.solution, c.grid()).unwrap();
                    worst_round_trip = worst_round_trip.max(da).max(db);
                    worst_agreement = worst_agreement.max(dab);
                    for rep in [&a, &b] {
                        records.push(ExperimentRecord {
                            index: i,
                            parameter: p,
                            weak_distance: 0.0,
                            hausdorff_distance: da,
                            gauss_volume: rep.gauss_volume,
                            max_radial: rep.trace.last().unwrap().max_radial,
                            min_support: c.grid().nodes().iter().map(|u| rep.solution.support(*u)).fold(f64::INFINITY, f64::min),
                            iterations: rep.iterations,
                        });
                    }
                }
                (Err(e), _) | (_, Err(e)) => failures.push(format!("body {i} p={p}: {e}")),
            }
        }
    }
    families.records.push(("round trip".into(), records));
    merge(vec![
        check(failures.is_empty(), format!("{} solver failures {:?}", failures.len(), failures.first())),
        check(worst_round_trip <= 1e-6, format!("worst round-trip d_H {worst_round_trip:.2e}")),
        check(worst_agreement <= 1e-6, format!("worst disagreement between starts {worst_agreement:.2e}")),
    ])
}

fn criterion_6() -> Outcome {
    let c = ctx2();
    let oracle = planar_ball_radius(0.5, 1.0);
    let small = bisect(|r| planar_ball_mass(1.0, r) - 0.5, 1e-9, 1.0);
    match solve_ball(&c, 0.5, 1.0, 2) {
        Ok(s) => merge(vec![
            check((s.radius - oracle).abs() <= 1e-4, format!("r={:.8} oracle={oracle:.8}", s.radius)),
            check((s.radius - small).abs() > 0.5, format!("small root {small:.6} rejected")),
            check(s.gauss_volume >= 0.5, format!("γ={:.6}", s.gauss_volume)),
        ]),
        Err(e) => check(false, e.to_string()),
    }
}

fn delta_schedule() -> Vec<f64> {
    (0..=10).map(|i| 0.1 * 1e-3f64.powf(i as f64 / 10.0)).collect()
}

fn criterion_7(families: &mut Families) -> Outcome {
    let c = ctx2();
    let k0 = square(1.4);
    let cfg = SolverConfig::default();
    let run = run_measure_continuity(&c, &k0, 1.0, &delta_schedule(), &cfg, 7);
    let control = run_measure_continuity(&c, &k0, 1.0, &[0.1; 11], &cfg, 7);
    let (Ok(run), Ok(control)) = (run, control) else {
        return check(false, "experiment failed");
    };
    let d: Vec<f64> = run.iter().map(|r| r.hausdorff_distance).collect();
    let last = *d.last().unwrap();
    let worst_growth = d.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let control_min = control.iter().map(|r| r.hausdorff_distance).fold(f64::INFINITY, f64::min);
    families.records.push(("measure continuity".into(), run));
    families.records.push(("negative control".into(), control));
    merge(vec![
        check(last <= 1e-3, format!("final d_H {last:.3e}")),
        check(worst_growth <= 1.1, format!("largest step ratio {worst_growth:.3}")),
        check(control_min > 1e-2, format!("control min d_H {control_min:.3e}")),
    ])
}

fn criterion_8(families: &mut Families) -> Outcome {
    let mut parts = Vec::new();

    let grid = SphericalGrid::new(2, 720).unwrap();
    let c = GaussianContext::with_grid(grid.clone()).unwrap();
    let r0 = 2f64.sqrt();
    let k0 = Polytope::ball_approximation(&grid, r0).unwrap();
    let total = lp_surface_measure(&c, &k0, 2.0).unwrap().total_mass();
    let schedule: Vec<f64> = (1..=12).map(|i| 2.0 + (-1f64).powi(i + 1) * 2f64.powi(-i)).collect();
    let cfg = SolverConfig { residual_tol: 1e-12, jacobian: JacobianKind::N2Analytic, ..SolverConfig::default() };
    match run_p_continuity(&c, &k0, 2.0, &schedule, &cfg) {
        Ok(recs) => {
            // each solution is a regular 720-gon whose inradius is its minimum support
            let mut worst = 0.0f64;
            for (rec, p) in recs.iter().zip(&schedule) {
                let oracle = regular_polygon_radius(720, total, *p);
                worst = worst.max((rec.min_support - oracle).abs());
            }
            let last = recs.last().unwrap().hausdorff_distance;
            parts.push(check(worst <= 1e-6, format!("ball family worst radius error {worst:.2e}")));
            parts.push(check(last <= 1e-5, format!("ball family final d_H {last:.3e}")));
            families.records.push(("ball p-family".into(), recs));
        }
        Err(e) => parts.push(check(false, format!("ball family: {e}"))),
    }

    let c = ctx2();
    let k0 = square(1.4);
    let schedule: Vec<f64> = (2..=32).map(|i| 1.0 + 1.0 / i as f64).collect();
    match run_p_continuity(&c, &k0, 1.0, &schedule, &SolverConfig::default()) {
        Ok(recs) => {
            let last = recs.last().unwrap().hausdorff_distance;
            parts.push(check(last <= 1e-3, format!("square family final d_H {last:.3e}")));
            families.records.push(("square p-family".into(), recs));
        }
        Err(e) => parts.push(check(false, format!("square family: {e}"))),
    }
    merge(parts)
}

fn criterion_9(families: &Families) -> Outcome {
    let mut parts = Vec::new();
    for (name, recs) in &families.records {
        if recs.is_empty() {
            parts.push(check(false, format!("{name}: no records")));
            continue;
        }
        let g = recs.iter().map(|r| r.gauss_volume).fold(f64::INFINITY, f64::min);
        let h = recs.iter().map(|r| r.min_support).fold(f64::INFINITY, f64::min);
        let big_r = recs.iter().map(|r| r.max_radial).fold(0.0, f64::max);
        parts.push(check(
            g >= 0.5 - 1e-9 && h >= 0.1 && big_r <= 10.0,
            format!("{name}: min γ {g:.6}, min h {h:.4}, max R {big_r:.4}"),
        ));
    }
    merge(parts)
}

fn report(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = outcome.pass && in_time;
    let time_note = if in_time { String::new() } else { format!(" [over time limit {limit:?}]") };
    println!(
        "{} criterion {n}: {} ({:.2}s){time_note}",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn main() {
    let mut families = Families::default();
    let secs = Duration::from_secs;
    let results = [
        report(1, secs(1), criterion_1),
        report(2, secs(1), criterion_2),
        report(3, secs(5), criterion_3),
        report(4, secs(30), criterion_4),
        report(5, secs(60), || criterion_5(&mut families)),
        report(6, secs(1), criterion_6),
        report(7, secs(60), || criterion_7(&mut families)),
        report(8, secs(60), || criterion_8(&mut families)),
        report(9, secs(1), || criterion_9(&families)),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
