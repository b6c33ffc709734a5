//! Incident fields, right-hand sides, layer-potential evaluation and the
//! solve pipelines for sound-soft and sound-hard scattering.

use crate::dense::Matrix;
use crate::error::{HbieError, Result};
use crate::geometry::{BoundaryPoint, Curve, MultiCurve, Point};
use crate::kernels::KernelKind;
use crate::nystrom::{assemble_system, operator_matrix, Discretization, Formulation, NystromSystem};
use crate::solver::{gmres_solve, lu_solve, GmresOptions, Method, SolveReport};
use crate::specfun::hankel01;
use crate::trig::{DensityGrid, Lattice};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

type C = Complex64;

/// Points closer than this many wavelengths to the boundary are refused.
pub const NEAR_FIELD_BAND: f64 = 0.05;

pub trait Incident: Sync {
    fn value(&self, p: Point) -> C;
    fn gradient(&self, p: Point) -> [C; 2];

    fn normal_derivative(&self, b: &BoundaryPoint) -> C {
        let g = self.gradient(b.pos);
        g[0] * b.normal.x + g[1] * b.normal.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    pub direction: Point,
}

impl PlaneWave {
    pub fn new(k: f64, direction: Point) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(HbieError::InvalidParameter(format!("wavenumber must be positive, got {k}")));
        }
        if (direction.norm() - 1.0).abs() > 1e-14 {
            return Err(HbieError::InvalidParameter(format!("direction must be a unit vector, |d| = {}", direction.norm())));
        }
        Ok(PlaneWave { k, direction })
    }

    pub fn from_angle(k: f64, angle: f64) -> Result<Self> {
        PlaneWave::new(k, Point::new(angle.cos(), angle.sin()))
    }
}

impl Incident for PlaneWave {
    fn value(&self, p: Point) -> C {
        C::from_polar(1.0, self.k * p.dot(self.direction))
    }

    fn gradient(&self, p: Point) -> [C; 2] {
        let u = C::new(0.0, self.k) * self.value(p);
        [u * self.direction.x, u * self.direction.y]
    }
}

/// Phi_k(x, x0) = (i/4) H0(k|x - x0|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub k: f64,
    pub source: Point,
}

impl Incident for PointSource {
    fn value(&self, p: Point) -> C {
        C::new(0.0, 0.25) * hankel01(self.k * (p - self.source).norm()).0
    }

    fn gradient(&self, p: Point) -> [C; 2] {
        let d = p - self.source;
        let r = d.norm();
        // d/dr H0 = -k H1
        let f = C::new(0.0, -0.25) * self.k * hankel01(self.k * r).1 / r;
        [f * d.x, f * d.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Indirect,
}

impl Route {
    pub fn of(formulation: Formulation) -> Route {
        match formulation {
            Formulation::APrime | Formulation::BReg => Route::Direct,
            Formulation::A | Formulation::BPrimeReg => Route::Indirect,
        }
    }
}

/// Direct: du_I/dn - i eta u_I (pairs with A'); indirect: -u_I (pairs with A).
pub fn rhs_dirichlet(disc: &Discretization, wave: &dyn Incident, eta: f64, route: Route) -> Vec<C> {
    disc.sample(|b| match route {
        Route::Direct => wave.normal_derivative(b) - C::new(0.0, eta) * wave.value(b.pos),
        Route::Indirect => -wave.value(b.pos),
    })
}

/// Direct: i eta u_I - S_ik du_I/dn (pairs with B_reg); indirect: -du_I/dn
/// (pairs with B'_reg).
pub fn rhs_neumann(curve: &Curve, k: f64, wave: &dyn Incident, eta: f64, route: Route, n: usize) -> Result<DensityGrid> {
    let lattice = Lattice::new(n)?;
    let frames = curve.frames(&lattice.nodes());
    let dn: Vec<C> = frames.iter().map(|b| wave.normal_derivative(b)).collect();
    let values = match route {
        Route::Indirect => dn.iter().map(|v| -v).collect(),
        Route::Direct => {
            let s = operator_matrix(curve, k, KernelKind::SingleImag, n)?.matvec(&dn);
            frames.iter().zip(&s).map(|(b, sv)| C::new(0.0, eta) * wave.value(b.pos) - sv / k).collect()
        }
    };
    DensityGrid::new(lattice, values)
}

/// Layer potential built from a density on the boundary lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Representation {
    Single,
    Double,
    /// double - i eta single
    Combined { eta: f64 },
    /// double applied to S_ik v, minus i eta single applied to v
    DlSikCombined { eta: f64 },
}

impl Representation {
    /// Scattered-field representation used by each formulation, with the
    /// sign it enters u = u_I + sign * potential.
    pub fn of(formulation: Formulation, eta: f64) -> (Representation, f64) {
        match formulation {
            Formulation::A => (Representation::Combined { eta }, 1.0),
            Formulation::APrime => (Representation::Single, -1.0),
            Formulation::BReg => (Representation::Double, 1.0),
            Formulation::BPrimeReg => (Representation::DlSikCombined { eta }, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub points: Vec<Point>,
    pub values: Vec<C>,
}

fn check_points(multi: &MultiCurve, k: f64, points: &[Point]) -> Result<()> {
    let band = NEAR_FIELD_BAND * TAU / k;
    for &p in points {
        if multi.contains(p) {
            return Err(HbieError::PointRejected { x: p.x, y: p.y, reason: "inside the obstacle".into() });
        }
        let d = multi.distance_to(p);
        if d < band {
            return Err(HbieError::PointRejected {
                x: p.x,
                y: p.y,
                reason: format!("distance {d:.3e} to the boundary is inside the near-field band {band:.3e}"),
            });
        }
    }
    Ok(())
}

/// Trapezoid evaluation of the potential at exterior points. `density`
/// is ordered component by component as in `disc`.
pub fn eval_potential(disc: &Discretization, k: f64, density: &[C], rep: Representation, points: &[Point]) -> Result<FieldSample> {
    if density.len() != disc.total() {
        return Err(HbieError::SizeMismatch { expected: disc.total(), got: density.len() });
    }
    check_points(&disc.multi(), k, points)?;
    let (dl_density, sl_density, sl_coef, dl_coef): (Vec<C>, &[C], C, C) = match rep {
        Representation::Single => (Vec::new(), density, C::new(1.0, 0.0), C::new(0.0, 0.0)),
        Representation::Double => (density.to_vec(), density, C::new(0.0, 0.0), C::new(1.0, 0.0)),
        Representation::Combined { eta } => (density.to_vec(), density, C::new(0.0, -eta), C::new(1.0, 0.0)),
        Representation::DlSikCombined { eta } => {
            if disc.components.len() != 1 {
                return Err(HbieError::InvalidParameter("S_ik representation needs a single component".into()));
            }
            let g = &disc.components[0];
            let s = operator_matrix(&g.curve, k, KernelKind::SingleImag, g.lattice.n_modes())?.matvec(density);
            (s.iter().map(|v| v / k).collect(), density, C::new(0.0, -eta), C::new(1.0, 0.0))
        }
    };
    let nodes = disc.weighted_frames();
    let i4 = C::new(0.0, 0.25);
    let values = points
        .par_iter()
        .map(|&x| {
            let mut acc = C::new(0.0, 0.0);
            for (idx, (y, w)) in nodes.iter().enumerate() {
                let d = x - y.pos;
                let r = d.norm();
                let (h0, h1) = hankel01(k * r);
                let mut kern = C::new(0.0, 0.0);
                if sl_coef != C::new(0.0, 0.0) {
                    kern += sl_coef * i4 * h0 * sl_density[idx];
                }
                if dl_coef != C::new(0.0, 0.0) {
                    // d/dn(y) Phi(x, y) = (ik/4) H1(kr) <x - y, n(y)>/r
                    kern += dl_coef * i4 * k * h1 * (d.dot(y.normal) / r) * dl_density[idx];
                }
                acc += kern * (w * y.speed);
            }
            acc
        })
        .collect();
    Ok(FieldSample { points: points.to_vec(), values })
}

/// Single-curve form taking a lattice density.
pub fn eval_field(curve: &Curve, k: f64, density: &DensityGrid, rep: Representation, points: &[Point]) -> Result<FieldSample> {
    let disc = Discretization::single(curve, density.lattice.n_modes())?;
    eval_potential(&disc, k, &density.values, rep, points)
}

pub fn solve_linear(matrix: &Matrix, rhs: &[C], method: Method, opts: &GmresOptions) -> Result<(Vec<C>, SolveReport)> {
    match method {
        Method::Lu => lu_solve(matrix, rhs),
        Method::Gmres => gmres_solve(matrix, rhs, opts),
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub system: NystromSystem,
    pub density: Vec<C>,
    pub report: SolveReport,
}

impl ScatteringSolution {
    /// Scattered field at exterior points.
    pub fn scattered(&self, points: &[Point]) -> Result<FieldSample> {
        let (rep, sign) = Representation::of(self.system.formulation, self.system.eta);
        let mut f = eval_potential(&self.system.disc, self.system.k, &self.density, rep, points)?;
        for v in f.values.iter_mut() {
            *v *= sign;
        }
        Ok(f)
    }

    /// u_I + scattered.
    pub fn total(&self, wave: &dyn Incident, points: &[Point]) -> Result<FieldSample> {
        let mut f = self.scattered(points)?;
        for (v, p) in f.values.iter_mut().zip(points) {
            *v += wave.value(*p);
        }
        Ok(f)
    }
}

/// Assembles and solves the formulation for incident field `wave`
/// (sound-soft for the Dirichlet variants, sound-hard for Neumann).
pub fn solve_scattering(
    multi: &MultiCurve,
    k: f64,
    eta: f64,
    formulation: Formulation,
    n: usize,
    wave: &dyn Incident,
    method: Method,
    opts: &GmresOptions,
) -> Result<ScatteringSolution> {
    let system = assemble_system(multi, k, eta, formulation, n)?;
    solve_assembled(system, wave, method, opts)
}

pub fn solve_assembled(system: NystromSystem, wave: &dyn Incident, method: Method, opts: &GmresOptions) -> Result<ScatteringSolution> {
    let route = Route::of(system.formulation);
    let rhs = if system.formulation.is_dirichlet() {
        rhs_dirichlet(&system.disc, wave, system.eta, route)
    } else {
        let g = &system.disc.components[0];
        rhs_neumann(&g.curve, system.k, wave, system.eta, route, g.lattice.n_modes())?.values
    };
    let (density, report) = solve_linear(&system.matrix, &rhs, method, opts)?;
    Ok(ScatteringSolution { system, density, report })
}

/// Exterior Dirichlet problem whose exact solution is Phi_k(., x0): solves
/// A v = gamma Phi_k(., x0), represents u = (D - i eta S) v and returns the
/// largest relative deviation from Phi_k(., x0) at `test_points`.
pub fn point_source_test(curve: &Curve, k: f64, x0: Point, n: usize, test_points: &[Point]) -> Result<f64> {
    Ok(point_source_run(curve, k, k, x0, n, test_points, Method::Lu, &GmresOptions::default())?.0)
}

/// As `point_source_test`, with coupling and solver chosen by the caller;
/// also returns the solve report.
pub fn point_source_run(
    curve: &Curve,
    k: f64,
    eta: f64,
    x0: Point,
    n: usize,
    test_points: &[Point],
    method: Method,
    opts: &GmresOptions,
) -> Result<(f64, SolveReport)> {
    if !curve.contains(x0) {
        return Err(HbieError::PointRejected { x: x0.x, y: x0.y, reason: "source must lie inside the obstacle".into() });
    }
    let multi = MultiCurve::single(curve.clone());
    let src = PointSource { k, source: x0 };
    let system = assemble_system(&multi, k, eta, Formulation::A, n)?;
    let rhs = system.disc.sample(|b| src.value(b.pos));
    let (density, report) = solve_linear(&system.matrix, &rhs, method, opts)?;
    let field = eval_potential(&system.disc, k, &density, Representation::Combined { eta }, test_points)?;
    let err = field
        .values
        .iter()
        .zip(test_points)
        .map(|(u, p)| {
            let exact = src.value(*p);
            (u - exact).norm() / exact.norm()
        })
        .fold(0.0, f64::max);
    Ok((err, report))
}

/// `count` points on the circle of radius `radius` about `center`.
pub fn ring_points(center: Point, radius: f64, count: usize) -> Vec<Point> {
    (0..count)
        .map(|j| {
            let a = TAU * (j as f64 + 0.5) / count as f64;
            center + radius * Point::new(a.cos(), a.sin())
        })
        .collect()
}
