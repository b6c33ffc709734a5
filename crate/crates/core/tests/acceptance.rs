//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use common::bessel::worst_table_errors;
use common::galerkin_oracle::certify_all;
use hbie::dense::{norm2, Matrix};
use hbie::disk_oracle::{exact_density, inverse_norm_scan, multipliers};
use hbie::galerkin::pollution_sweep;
use hbie::geometry::{make_circle, make_four_diamonds, make_star, Curve, MultiCurve, Point};
use hbie::nystrom::{assemble_dirichlet, assemble_neumann, assemble_system, modes_for_ppw, Formulation, NystromSystem};
use hbie::quadrature::kress_weights;
use hbie::scattering::{point_source_run, ring_points, Incident, PlaneWave, PointSource};
use hbie::solver::{gmres_solve, lu_solve, GmresOptions, Method};
use hbie::specfun::{cyl_ik, cyl_jy};
use hbie::trig::Lattice;
use num_complex::Complex64 as C;
use std::f64::consts::{PI, SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    if elapsed.as_secs_f64() > limit_s as f64 {
        Err(format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn bessel_certification() -> Outcome {
    let start = Instant::now();
    let mut worst_inv: f64 = 0.0;
    for &x in &[0.5, 1.0, 5.0, 20.0, 100.0] {
        for n in 0..=50u32 {
            let a = cyl_jy(n, x).unwrap();
            let w = (a.j * a.yp - a.jp * a.y - 2.0 / (PI * x)).abs() / ((a.j * a.yp).abs() + (a.jp * a.y).abs() + 1.0);
            let b = cyl_ik(n, x).unwrap();
            let v = (b.i * b.kp - b.ip * b.kk + 1.0 / x).abs() / ((b.i * b.kp).abs() + (b.ip * b.kk).abs() + 1.0);
            worst_inv = worst_inv.max(w).max(v);
            if n >= 1 && n < 50 {
                let (lo, hi) = (cyl_jy(n - 1, x).unwrap(), cyl_jy(n + 1, x).unwrap());
                let f = 2.0 * n as f64 / x;
                let mj = lo.j.abs().max(hi.j.abs()).max((f * a.j).abs());
                let my = lo.y.abs().max(hi.y.abs()).max((f * a.y).abs());
                worst_inv = worst_inv.max((lo.j + hi.j - f * a.j).abs() / mj).max((lo.y + hi.y - f * a.y).abs() / my);
                let (lo, hi) = (cyl_ik(n - 1, x).unwrap(), cyl_ik(n + 1, x).unwrap());
                let mi = lo.i.abs().max((f * b.i).abs());
                let mk = hi.kk.abs().max((f * b.kk).abs());
                worst_inv = worst_inv.max((lo.i - hi.i - f * b.i).abs() / mi).max((hi.kk - lo.kk - f * b.kk).abs() / mk);
            }
        }
    }
    let worst_oracle = worst_table_errors().iter().map(|w| w.1).fold(0.0, f64::max);
    within(start.elapsed(), 10)?;
    check(
        worst_inv <= 1e-10 && worst_oracle <= 1e-12,
        format!("invariants {worst_inv:.1e}, oracle table {worst_oracle:.1e}, {:.2}s", start.elapsed().as_secs_f64()),
    )
}

fn kress_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for n in [1usize, 4, 16, 64] {
        let w = kress_weights(n);
        let nodes = Lattice::new(n).unwrap().nodes();
        worst_sum = worst_sum.max(w.r.iter().sum::<f64>().abs());
        for m in 1..=n {
            let got: f64 = (0..nodes.len()).map(|j| w.at(0, j) * (m as f64 * nodes[j]).cos()).sum();
            worst = worst.max((got + TAU / m as f64).abs());
        }
    }
    check(worst <= 1e-12 && worst_sum <= 1e-12, format!("moment error {worst:.1e}, weight sums {worst_sum:.1e}"))
}

fn mode(n: usize, m: i64) -> Vec<C> {
    Lattice::new(n).unwrap().nodes().iter().map(|&t| C::from_polar(1.0, m as f64 * t)).collect()
}

fn mode_error(mat: &Matrix, n: usize, m: i64, mult: C) -> f64 {
    let v = mode(n, m);
    let w = mat.matvec(&v);
    w.iter().zip(&v).map(|(a, b)| (a - mult * b).norm()).fold(0.0, f64::max) / mult.norm()
}

fn disk_systems(k: f64) -> (NystromSystem, NystromSystem, NystromSystem, NystromSystem) {
    let circle = make_circle(1.0).unwrap();
    let n = (4.0 * k).ceil() as usize + 17;
    let multi = MultiCurve::single(circle.clone());
    (
        assemble_dirichlet(&multi, k, k, Formulation::A, n).unwrap(),
        assemble_dirichlet(&multi, k, k, Formulation::APrime, n).unwrap(),
        assemble_neumann(&circle, k, 1.0, Formulation::BReg, n).unwrap(),
        assemble_neumann(&circle, k, 1.0, Formulation::BPrimeReg, n).unwrap(),
    )
}

fn disk_diagonalization() -> Outcome {
    let start = Instant::now();
    let (mut ed, mut en): (f64, f64) = (0.0, 0.0);
    for k in [1.0, 5.0, 20.0] {
        let (a, ap, b, bp) = disk_systems(k);
        let n = a.disc.components[0].lattice.n_modes();
        for m in -(n as i64) / 2..=(n as i64) / 2 {
            let t = multipliers(k, k, 1.0, m).unwrap();
            ed = ed.max(mode_error(&a.matrix, n, m, t.lambda)).max(mode_error(&ap.matrix, n, m, t.lambda));
            en = en.max(mode_error(&b.matrix, n, m, t.mu)).max(mode_error(&bp.matrix, n, m, t.mu));
        }
    }
    within(start.elapsed(), 120)?;
    check(ed <= 1e-8 && en <= 1e-6, format!("Dirichlet {ed:.1e}, Neumann {en:.1e}"))
}

const SOURCE: Point = Point { x: 0.1, y: 0.2 };

fn test_points() -> Vec<Point> {
    ring_points(Point::new(0.0, 0.0), 2.5, 20)
}

fn point_source_curves() -> Vec<Curve> {
    vec![make_circle(1.0).unwrap(), make_star()]
}

fn point_source_exactness() -> Outcome {
    let start = Instant::now();
    let pts = test_points();
    let mut lines = Vec::new();
    let mut ok = true;
    for curve in point_source_curves() {
        let c_max = curve.c_max();
        for k in [5.0, 20.0] {
            let run = |n: usize| point_source_run(&curve, k, k, SOURCE, n, &pts, Method::Lu, &GmresOptions::default()).unwrap().0;
            let n10 = modes_for_ppw(10.0, k, c_max);
            let e10 = run(n10);
            let m = (c_max * k).ceil() as usize;
            let (e1, e2) = (run(m), run(2 * m));
            let gain = e1 / e2;
            ok &= e10 <= 1e-8 && gain >= 100.0;
            lines.push(format!("{} k={k}: {e10:.1e} at N={n10}, x{gain:.0e} from N={m}", curve.name()));
        }
    }
    within(start.elapsed(), 120)?;
    check(ok, lines.join("; "))
}

fn projection_decay() -> Outcome {
    let k = 40.0;
    let v = exact_density(Formulation::APrime, k, k, 0.0, 160).unwrap();
    let total = v.l2_norm();
    let tail = |n: i64| v.iter().filter(|(m, _)| m.abs() > n).map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt() / total;
    let (n1, n2) = ((1.5 * k).ceil() as i64, (2.0 * k).ceil() as i64);
    let (r1, r2) = (tail(n1), tail(n2));
    check(r1 <= 1e-6 && r2 <= 1e-10, format!("N={n1}: {r1:.1e}, N={n2}: {r2:.1e}"))
}

fn neumann_scan() -> Outcome {
    let start = Instant::now();
    let ks = [10.0f64, 40.0, 160.0];
    let mins: Vec<f64> = ks
        .iter()
        .map(|&k| inverse_norm_scan(Formulation::BReg, k, 1.0, 0, (2.0 * k).ceil() as i64 + 50).unwrap().min_abs)
        .collect();
    // least-squares slope of log(min) against log(k)
    let xs: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let ys: Vec<f64> = mins.iter().map(|m| m.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    within(start.elapsed(), 60)?;
    let decreasing = mins.windows(2).all(|w| w[1] < w[0]);
    check(
        decreasing && (-0.6..=-0.15).contains(&slope),
        format!("min|mu| {:.3e} {:.3e} {:.3e}, slope {slope:.3}", mins[0], mins[1], mins[2]),
    )
}

fn diamond_pollution() -> Outcome {
    let start = Instant::now();
    let multi = make_four_diamonds(0.1).unwrap();
    let ppws = [2.4, 3.6, 6.0, 12.0];
    let mut peaks = Vec::new();
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [10.0, 20.0] {
        let k = n * SQRT_2;
        let wave = PlaneWave::from_angle(k, 5.0 * PI / 180.0).unwrap();
        let rows = pollution_sweep(&multi, k, k, Formulation::APrime, &wave, 0, &ppws, 12.0).map_err(|e| e.to_string())?;
        let consts: Vec<f64> = rows.iter().map(|r| r.constant).collect();
        let (imax, peak) = consts.iter().enumerate().fold((0, 0.0), |a, (i, &c)| if c > a.1 { (i, c) } else { a });
        let interior = imax > 0 && imax + 1 < consts.len();
        ok &= interior && peak >= 2.0 * consts[consts.len() - 1];
        peaks.push(peak);
        lines.push(format!("{n}sqrt2: Cqo {consts:.3?}"));
    }
    ok &= peaks[1] > peaks[0];
    within(start.elapsed(), 1800)?;
    check(ok, format!("{} ({:.0}s)", lines.join("; "), start.elapsed().as_secs_f64()))
}

fn rel_diff(a: &[C], b: &[C]) -> f64 {
    let d: Vec<C> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&d) / norm2(b)
}

fn solver_cross_check() -> Outcome {
    let opts = GmresOptions::default();
    let mut worst: f64 = 0.0;
    let mut iters = Vec::new();
    let mut ok = true;
    let mut compare = |sys: &NystromSystem, rhs: &[C]| {
        let (x_lu, _) = lu_solve(&sys.matrix, rhs).unwrap();
        let (x_g, rep) = gmres_solve(&sys.matrix, rhs, &opts).unwrap();
        worst = worst.max(rel_diff(&x_g, &x_lu));
        ok &= rep.iterations < sys.dim();
        iters.push(rep.iterations);
    };
    for k in [1.0, 5.0, 20.0] {
        let (a, ap, b, bp) = disk_systems(k);
        let wave = PlaneWave::from_angle(k, 0.3).unwrap();
        for sys in [&a, &ap, &b, &bp] {
            let rhs = sys.disc.sample(|p| wave.normal_derivative(p) + wave.value(p.pos));
            compare(sys, &rhs);
        }
    }
    for curve in point_source_curves() {
        let multi = MultiCurve::single(curve.clone());
        for k in [5.0, 20.0] {
            let src = PointSource { k, source: SOURCE };
            let m = (curve.c_max() * k).ceil() as usize;
            for n in [modes_for_ppw(10.0, k, curve.c_max()), m, 2 * m] {
                let sys = assemble_system(&multi, k, k, Formulation::A, n).unwrap();
                let rhs = sys.disc.sample(|p| src.value(p.pos));
                compare(&sys, &rhs);
            }
        }
    }
    ok &= worst <= 1e-6;
    check(ok, format!("worst GMRES/LU difference {worst:.1e}, iterations {iters:?}"))
}

fn galerkin_certification() -> Outcome {
    let results = certify_all(false);
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let detail = results.iter().map(|(n, e)| format!("{n} {e:.1e}")).collect::<Vec<_>>().join(", ");
    check(worst <= 1e-9, detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("special functions", bessel_certification),
        ("log-rule exactness", kress_exactness),
        ("disk diagonalization", disk_diagonalization),
        ("point-source exactness", point_source_exactness),
        ("projection decay", projection_decay),
        ("Neumann disk pollution", neumann_scan),
        ("four-diamond pollution", diamond_pollution),
        ("GMRES vs LU", solver_cross_check),
        ("Galerkin quadrature", galerkin_certification),
    ];
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(d) => println!("criterion {id} PASS {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {id} FAIL {name}: {d}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
