//! Brute-force Galerkin entries from nested adaptive quadrature, and the
//! random-entry certification built on it.

use super::adaptive::{integrate, integrate_pieces};
use hbie::galerkin::{make_space, pairing_matrix, PairKernel, PanelSpace};
use hbie::geometry::{make_circle, make_four_diamonds, make_star, MultiCurve, Point};
use hbie::kernels::KernelKind;
use hbie::specfun::hankel01;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{SQRT_2, TAU};

type C = Complex64;

/// Kernel written out from the Hankel functions: the combined operator
/// K - i eta S (or K' - i eta S), or the bare single layer when `single`.
#[derive(Clone, Copy)]
pub struct OracleKernel {
    k: f64,
    eta: f64,
    adjoint: bool,
    single: bool,
}

impl OracleKernel {
    fn eval(&self, d: Point, nx: Point, ny: Point) -> C {
        let r = d.norm();
        let (h0, h1) = hankel01(self.k * r);
        let i4 = C::new(0.0, 0.25);
        let s = i4 * h0;
        if self.single {
            return s * self.eta;
        }
        let proj = if self.adjoint { -d.dot(nx) } else { d.dot(ny) };
        i4 * self.k * h1 * (proj / r) - C::new(0.0, self.eta) * s
    }
}

/// Brute-force pairing of basis functions i and j (without the identity part).
/// `abs` is the absolute accuracy asked of the outer integral.
pub fn oracle_entry(space: &PanelSpace, kernel: OracleKernel, i: usize, j: usize, abs: f64) -> C {
    let (ci, pi, li) = space.locate(i);
    let (cj, pj, lj) = space.locate(j);
    let panels = space.panels_per_component();
    let (a0, a1) = space.panel_interval(pi);
    let (mut b0, mut b1) = space.panel_interval(pj);
    // move the column panel next to the row panel across the period seam
    if ci == cj {
        if pi == 0 && pj == panels - 1 {
            b0 -= TAU;
            b1 -= TAU;
        } else if pi == panels - 1 && pj == 0 {
            b0 += TAU;
            b1 += TAU;
        }
    }
    let cx = &space.multi().components[ci];
    let cy = &space.multi().components[cj];
    let legendre = |l: usize, t: f64, lo: f64, hi: f64| if l == 0 { 1.0 } else { 2.0 * (t - lo) / (hi - lo) - 1.0 };
    let rel = 1e-11;
    let inner_abs = 1e-2 * abs / (a1 - a0);
    let outer = |t: f64| {
        let fx = cx.frame(t);
        let inner = |s: f64| {
            if ci == cj && s == t {
                return C::new(0.0, 0.0);
            }
            let fy = cy.frame(s);
            let d = if ci == cj { cx.chord(t, s) } else { fx.pos - fy.pos };
            kernel.eval(d, fx.normal, fy.normal) * (fy.speed * legendre(lj, s, b0, b1))
        };
        let mut breaks = vec![b0, b1];
        if ci == cj && t > b0 && t < b1 {
            breaks.insert(1, t);
        }
        integrate_pieces(inner, &breaks, 0.1 * rel, inner_abs) * (fx.speed * legendre(li, t, a0, a1))
    };
    integrate(outer, a0, a1, rel, abs)
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum PairClass {
    SelfPair,
    Adjacent,
    Far,
}

fn classify(space: &PanelSpace, i: usize, j: usize) -> PairClass {
    let (ci, pi, _) = space.locate(i);
    let (cj, pj, _) = space.locate(j);
    let n = space.panels_per_component();
    if ci != cj {
        return PairClass::Far;
    }
    if pi == pj {
        PairClass::SelfPair
    } else if (pi + 1) % n == pj || (pj + 1) % n == pi {
        PairClass::Adjacent
    } else {
        PairClass::Far
    }
}

/// 20 entries: 7 self, 7 adjacent, 6 far; returns the worst scaled error.
pub fn certify(space: &PanelSpace, k: f64, kernel: PairKernel, oracle: OracleKernel, seed: u64) -> f64 {
    let m = pairing_matrix(space, k, kernel).unwrap();
    let scale = m.max_abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = space.dim();
    let mut wanted = vec![(PairClass::SelfPair, 7), (PairClass::Adjacent, 7), (PairClass::Far, 6)];
    let mut worst: f64 = 0.0;
    while wanted.iter().any(|w| w.1 > 0) {
        let (i, j) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
        let class = classify(space, i, j);
        let slot = wanted.iter_mut().find(|w| w.0 == class).unwrap();
        if slot.1 == 0 {
            continue;
        }
        slot.1 -= 1;
        let exact = oracle_entry(space, oracle, i, j, 1e-15 * scale);
        let got = m.row(i)[j];
        let err = (got - exact).norm() / exact.norm().max(1e-3 * scale);
        worst = worst.max(err);
    }
    worst
}

pub struct Config {
    pub name: &'static str,
    pub multi: MultiCurve,
    pub panels: usize,
    pub p: usize,
    pub k: f64,
    pub kernel: PairKernel,
}

pub fn certification_configs() -> Vec<Config> {
    let circle = MultiCurve::single(make_circle(1.0).unwrap());
    let star = MultiCurve::single(make_star());
    let circle2 = MultiCurve::single(make_circle(1.5).unwrap());
    let diamonds = make_four_diamonds(0.1).unwrap();
    let comb = |eta: f64, adjoint: bool| PairKernel::Combined { eta, adjoint };
    vec![
        Config { name: "circle S p0", multi: circle.clone(), panels: 16, p: 0, k: 1.0, kernel: PairKernel::Operator(KernelKind::Single { eta: 1.0 }) },
        Config { name: "circle A p1", multi: circle, panels: 16, p: 1, k: 1.0, kernel: comb(1.0, false) },
        Config { name: "star A' p1", multi: star.clone(), panels: 24, p: 1, k: 5.0, kernel: comb(5.0, true) },
        Config { name: "star A p0 k20", multi: star, panels: 24, p: 0, k: 20.0, kernel: comb(20.0, false) },
        Config { name: "circle A' p1 k8", multi: circle2, panels: 20, p: 1, k: 8.0, kernel: comb(8.0, true) },
        Config { name: "diamonds A' p1", multi: diamonds.clone(), panels: 60, p: 1, k: 10.0 * SQRT_2, kernel: comb(10.0 * SQRT_2, true) },
        Config { name: "diamonds A' p0", multi: diamonds, panels: 100, p: 0, k: 20.0 * SQRT_2, kernel: comb(20.0 * SQRT_2, true) },
    ]
}

pub fn oracle_for(kernel: PairKernel, k: f64) -> OracleKernel {
    match kernel {
        PairKernel::Operator(KernelKind::Single { eta }) => OracleKernel { k, eta, adjoint: false, single: true },
        PairKernel::Combined { eta, adjoint } => OracleKernel { k, eta, adjoint, single: false },
        _ => unreachable!(),
    }
}

/// Worst scaled error per configuration; `light` keeps the single-curve ones.
pub fn certify_all(light: bool) -> Vec<(&'static str, f64)> {
    certification_configs()
        .iter()
        .filter(|c| !light || c.multi.len() == 1)
        .enumerate()
        .map(|(n, c)| {
            let space = make_space(&c.multi, c.panels, c.p).unwrap();
            (c.name, certify(&space, c.k, c.kernel, oracle_for(c.kernel, c.k), 17 + n as u64))
        })
        .collect()
}

