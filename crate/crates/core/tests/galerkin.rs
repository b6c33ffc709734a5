mod common;

use common::adaptive::integrate;
use common::galerkin_oracle::certify_all;
use hbie::dense::Matrix;
use hbie::disk_oracle::{exact_density, multipliers};
use hbie::galerkin::{l2_distance, l2_project, make_space, nystrom_reference, pairing_matrix, quasiopt_constant, PairKernel, Reference};
use hbie::geometry::{make_circle, make_star, MultiCurve};
use hbie::kernels::KernelKind;
use hbie::nystrom::Formulation;
use hbie::scattering::PlaneWave;
use hbie::trig::{to_grid, DensityGrid, Lattice};
use num_complex::Complex64;
use std::f64::consts::TAU;

type C = Complex64;

#[test]
fn adaptive_oracle_sanity() {
    let v = integrate(|x| C::new(x.ln(), x * x), 0.0, 2.0, 1e-14, 1e-18);
    assert!((v.re - (2.0 * 2f64.ln() - 2.0)).abs() < 1e-13);
    assert!((v.im - 8.0 / 3.0).abs() < 1e-14);
}

#[test]
fn single_curve_entries_match_adaptive_oracle() {
    for (name, worst) in certify_all(true) {
        assert!(worst < 1e-9, "{name}: worst scaled error {worst:e}");
    }
}

#[test]
fn single_layer_block_is_symmetric() {
    let star = MultiCurve::single(make_star());
    let space = make_space(&star, 20, 1).unwrap();
    let m = pairing_matrix(&space, 3.0, PairKernel::Operator(KernelKind::Single { eta: 1.0 })).unwrap();
    let n = space.dim();
    for i in 0..n {
        for j in 0..i {
            assert!((m.row(i)[j] - m.row(j)[i]).norm() < 1e-10 * m.max_abs(), "({i},{j})");
        }
    }
}

fn constant_pairing(m: &Matrix) -> C {
    m.as_slice().iter().sum()
}

#[test]
fn constant_density_matches_zero_mode_multiplier() {
    // <A 1, 1> = 2 pi lambda_0 on the unit circle
    let circle = MultiCurve::single(make_circle(1.0).unwrap());
    let space = make_space(&circle, 256, 0).unwrap();
    let k = 1.0;
    let mut m = pairing_matrix(&space, k, PairKernel::Combined { eta: k, adjoint: false }).unwrap();
    m.add_scaled(&space.gram_matrix(), C::new(0.5, 0.0));
    let want = TAU * multipliers(k, k, 1.0, 0).unwrap().lambda;
    let got = constant_pairing(&m);
    assert!((got - want).norm() / want.norm() < 1e-4, "{got} vs {want}");
    // exactly representable, so in fact far tighter
    assert!((got - want).norm() / want.norm() < 1e-9, "{got} vs {want}");
}

#[test]
fn gram_on_star_is_positive() {
    let star = MultiCurve::single(make_star());
    let space = make_space(&star, 12, 1).unwrap();
    for j in 0..12 {
        let g = space.gram_block(0, j);
        assert!(g[0] > 0.0 && g[0] * g[3] - g[1] * g[2] > 0.0);
        let arc = integrate(|t| C::new(star.components[0].frame(t).speed, 0.0), space.panel_interval(j).0, space.panel_interval(j).1, 1e-14, 0.0);
        assert!((g[0] - arc.re).abs() < 1e-13);
    }
}

fn grid_of(f: impl Fn(f64) -> C, n: usize) -> DensityGrid {
    DensityGrid::from_fn(Lattice::new(n).unwrap(), f)
}

#[test]
fn projection_keeps_constants_on_star() {
    let star = MultiCurve::single(make_star());
    let space = make_space(&star, 10, 1).unwrap();
    let reference = Reference::new(&[grid_of(|_| C::new(2.0, -1.0), 40)]);
    let c = l2_project(&reference, &space, 1.0).unwrap();
    for j in 0..10 {
        assert!((c[2 * j] - C::new(2.0, -1.0)).norm() < 1e-13);
        assert!(c[2 * j + 1].norm() < 1e-13);
    }
}

#[test]
fn projection_residual_is_orthogonal_to_the_space() {
    let star = MultiCurve::single(make_star());
    let f = |t: f64| C::new((3.0 * t).cos(), (2.0 * t).sin() + 0.3);
    let reference = Reference::new(&[grid_of(f, 24)]);
    let curve = &star.components[0];
    for p in [0, 1] {
        let space = make_space(&star, 8, p).unwrap();
        let c = l2_project(&reference, &space, 1.0).unwrap();
        for j in 0..8 {
            let (a, b) = space.panel_interval(j);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for l in 0..=p {
                let basis = |t: f64| if l == 0 { 1.0 } else { (t - mid) / half };
                let inner = integrate(
                    |t| (reference.eval(0, t) - space.eval(&c, 0, t)) * (basis(t) * curve.frame(t).speed),
                    a,
                    b,
                    1e-13,
                    1e-15,
                );
                assert!(inner.norm() < 1e-12, "p={p} panel {j} l={l}: {inner}");
            }
        }
    }
}

#[test]
fn best_approximation_rates() {
    let star = MultiCurve::single(make_star());
    let reference = Reference::new(&[grid_of(|t| C::from_polar(1.0, 2.0 * t) + 0.5 * t.sin(), 130)]);
    for (p, want) in [(0usize, 1.0), (1, 2.0)] {
        let errs: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| {
                let space = make_space(&star, n, p).unwrap();
                let c = l2_project(&reference, &space, 1.0).unwrap();
                l2_distance(&space, 1.0, &c, &reference).unwrap().0
            })
            .collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - want).abs() < 0.1, "p={p}: rate {rate}");
        }
    }
}

fn circle_reference(k: f64, angle: f64) -> Reference {
    let coeffs = exact_density(Formulation::APrime, k, k, angle, 40).unwrap();
    Reference::new(&[to_grid(&coeffs, Lattice::new(40).unwrap()).unwrap()])
}

#[test]
fn circle_first_order_convergence() {
    let k = 2.0;
    let circle = MultiCurve::single(make_circle(1.0).unwrap());
    let wave = PlaneWave::from_angle(k, 0.3).unwrap();
    let reference = circle_reference(k, 0.3);
    let errs: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let space = make_space(&circle, n, 0).unwrap();
            let q = quasiopt_constant(&space, k, k, Formulation::APrime, &wave, &reference).unwrap();
            assert!(q.constant >= 1.0 - 1e-12, "{}", q.constant);
            q.relative_error
        })
        .collect();
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!((0.8..=1.2).contains(&rate), "rate {rate} from {errs:?}");
    }
}

#[test]
fn quasioptimality_is_rotation_invariant() {
    let k = 4.0;
    let angle = 0.9;
    let star = MultiCurve::single(make_star());
    let run = |multi: &MultiCurve, dir: f64| {
        let wave = PlaneWave::from_angle(k, dir).unwrap();
        let (grids, _) = nystrom_reference(multi, k, k, Formulation::A, &wave, 16.0).unwrap();
        let space = make_space(multi, 24, 1).unwrap();
        quasiopt_constant(&space, k, k, Formulation::A, &wave, &Reference::new(&grids)).unwrap().constant
    };
    let a = run(&star, 0.2);
    let b = run(&star.rotated(angle), 0.2 + angle);
    assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
}
