//! The experiment subcommands. Each builds a `Table` from an effective config.

use crate::config::ExperimentConfig;
use crate::report::{num, sci, Table};
use hbie::dense::Matrix;
use hbie::disk_oracle::multiplier_table;
use hbie::error::HbieError;
use hbie::galerkin::pollution_sweep;
use hbie::geometry::{parse_geometry, MultiCurve, Point};
use hbie::nystrom::{assemble_system, modes_for_ppw, Formulation};
use hbie::quadrature::kress_weights;
use hbie::scattering::{point_source_run, ring_points, solve_scattering, PlaneWave, NEAR_FIELD_BAND};
use hbie::solver::{GmresOptions, Method};
use hbie::specfun::{cyl_ik, cyl_jy};
use hbie::trig::{to_coeffs, DensityGrid, FourierCoeffs, Lattice};
use num_complex::Complex64 as C;
use std::f64::consts::{PI, TAU};
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(HbieError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<HbieError> for CliError {
    fn from(e: HbieError) -> Self {
        match e {
            HbieError::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn geometry(cfg: &ExperimentConfig) -> CliResult<(String, MultiCurve)> {
    let Some(spec) = cfg.geometry.clone() else {
        return usage("no geometry given (--geometry or geometry= in the config)");
    };
    let multi = parse_geometry(&spec)?;
    Ok((spec, multi))
}

fn preset(spec: &str) -> &str {
    spec.split(':').next().unwrap_or("").trim()
}

/// Default incidence: 5 degrees for the diamonds, -pi/2 + 0.2 for the cavity.
pub fn default_angle(spec: &str) -> f64 {
    match preset(spec) {
        "diamonds" => 5.0 * PI / 180.0,
        "cavity" => -PI / 2.0 + 0.2,
        _ => 0.0,
    }
}

pub const CAVITY_DEFAULT_K: f64 = 37.213;

fn wavenumbers(cfg: &ExperimentConfig, spec: &str) -> CliResult<Vec<f64>> {
    let ks = if cfg.k.is_empty() && preset(spec) == "cavity" { vec![CAVITY_DEFAULT_K] } else { cfg.k.clone() };
    if ks.is_empty() {
        return usage("no wavenumber given (--k or k= in the config)");
    }
    if let Some(k) = ks.iter().find(|k| !(**k > 0.0)) {
        return usage(format!("wavenumbers must be positive, got {k}"));
    }
    Ok(ks)
}

fn eta_for(cfg: &ExperimentConfig, formulation: Formulation, k: f64) -> f64 {
    cfg.eta.unwrap_or(if formulation.is_dirichlet() { k } else { 1.0 })
}

fn ppw_note(table: &mut Table) {
    table.note("ppw (trigonometric) = N_dof/k with parameter length 2pi; N = ceil(ppw*k*c_max/2) per component");
    table.note("ppw (panels) = panels*(p+1)*2pi/(k*arclength), arclength of the longest component");
}

fn sorted<T>(mut rows: Vec<(f64, f64, T)>) -> Vec<(f64, f64, T)> {
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    rows
}

/// Parameter-L2 distance between two multi-component lattice densities.
fn parameter_l2(coarse: &[FourierCoeffs], fine: &[FourierCoeffs]) -> f64 {
    let (mut d2, mut n2) = (0.0, 0.0);
    for (c, f) in coarse.iter().zip(fine) {
        for (m, v) in f.iter() {
            d2 += (c.get(m) - v).norm_sqr();
            n2 += v.norm_sqr();
        }
    }
    (d2 / n2).sqrt()
}

fn solve_coeffs(multi: &MultiCurve, k: f64, eta: f64, formulation: Formulation, n: usize, wave: &PlaneWave, opts: &GmresOptions) -> CliResult<(Vec<FourierCoeffs>, usize)> {
    let sol = solve_scattering(multi, k, eta, formulation, n, wave, Method::Gmres, opts)?;
    let lattice = Lattice::new(n)?;
    let coeffs = sol
        .system
        .component_offsets()
        .into_iter()
        .map(|r| DensityGrid::new(lattice, sol.density[r].to_vec()).map(|g| to_coeffs(&g)))
        .collect::<hbie::error::Result<Vec<_>>>()?;
    Ok((coeffs, sol.report.iterations))
}

pub fn nystrom_convergence(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (spec, multi) = geometry(cfg)?;
    let formulation = cfg.formulation.unwrap_or(Formulation::A);
    let ks = wavenumbers(cfg, &spec)?;
    let c_max = multi.c_max();
    let angle = cfg.angle.unwrap_or_else(|| default_angle(&spec));
    let opts = GmresOptions { tol: cfg.tol.unwrap_or(1e-12), ..GmresOptions::default() };
    let mut cells = Vec::new();
    for &k in &ks {
        let mut ns: Vec<(f64, usize)> = cfg.ppw.iter().map(|&p| (p, modes_for_ppw(p, k, c_max))).collect();
        ns.extend(cfg.n.iter().map(|&n| (2.0 * n as f64 / (k * c_max), n)));
        if ns.is_empty() {
            return usage("give points per wavelength (--ppw) or lattice sizes (n=)");
        }
        let wave = PlaneWave::from_angle(k, angle)?;
        let eta = eta_for(cfg, formulation, k);
        for (ppw, n) in ns {
            let (coarse, iters) = solve_coeffs(&multi, k, eta, formulation, n, &wave, &opts)?;
            let (fine, _) = solve_coeffs(&multi, k, eta, formulation, 4 * n, &wave, &opts)?;
            cells.push((k, ppw, (n, parameter_l2(&coarse, &fine), iters)));
        }
    }
    let mut table = Table::new(&["k", "ppw", "N", "rel_err", "gmres_iters"]);
    for (k, ppw, (n, err, iters)) in sorted(cells) {
        table.row(&[num(k), num(ppw), n.to_string(), sci(err), iters.to_string()]);
    }
    ppw_note(&mut table);
    table.note(format!("formulation={formulation} angle={} reference=4N norm=parameter-L2", num(angle)));
    Ok(table)
}

pub fn galerkin_pollution(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (spec, multi) = geometry(cfg)?;
    let formulation = cfg.formulation.unwrap_or(Formulation::APrime);
    if !formulation.is_dirichlet() {
        return usage("galerkin-pollution supports dirichlet-A and dirichlet-Aprime only");
    }
    let ks = wavenumbers(cfg, &spec)?;
    if cfg.ppw.is_empty() {
        return usage("give points per wavelength (--ppw)");
    }
    let p = cfg.p.unwrap_or(0);
    let angle = cfg.angle.unwrap_or_else(|| default_angle(&spec));
    let reference_ppw = cfg.reference_ppw.unwrap_or(12.0);
    let mut cells = Vec::new();
    for &k in &ks {
        let wave = PlaneWave::from_angle(k, angle)?;
        let rows = pollution_sweep(&multi, k, eta_for(cfg, formulation, k), formulation, &wave, p, &cfg.ppw, reference_ppw)?;
        cells.extend(rows.into_iter().map(|r| (r.k, r.ppw, r)));
    }
    let mut table = Table::new(&["k", "ppw", "panels", "p", "Cqo", "rel_err", "norm"]);
    for (k, ppw, r) in sorted(cells) {
        table.row(&[num(k), num(ppw), r.panels.to_string(), r.p.to_string(), sci(r.constant), sci(r.relative_error), "arclength".into()]);
    }
    ppw_note(&mut table);
    table.note(format!("formulation={formulation} angle={} reference=nystrom ppw={}", num(angle), num(reference_ppw)));
    Ok(table)
}

pub fn disk_spectrum(cfg: &ExperimentConfig) -> CliResult<Table> {
    let k = match cfg.k.as_slice() {
        [k] if *k > 0.0 => *k,
        [_] => return usage("wavenumber must be positive"),
        _ => return usage("disk-spectrum takes exactly one wavenumber"),
    };
    let modes = cfg.modes.unwrap_or((2.0 * k).ceil() as usize + 50) as i64;
    let (eta_d, eta_n) = (cfg.eta.unwrap_or(k), cfg.eta.unwrap_or(1.0));
    let mut table = Table::new(&["m", "re_lambda", "im_lambda", "abs_lambda", "re_mu", "im_mu", "abs_mu"]);
    for t in multiplier_table(k, eta_d, eta_n, 0, modes)? {
        table.row(&[
            t.m.to_string(),
            sci(t.lambda.re),
            sci(t.lambda.im),
            sci(t.lambda.norm()),
            sci(t.mu.re),
            sci(t.mu.im),
            sci(t.mu.norm()),
        ]);
    }
    table.note(format!("unit circle k={} eta_dirichlet={} eta_neumann={}", num(k), num(eta_d), num(eta_n)));
    Ok(table)
}

/// Largest distance from the centroid to the boundary.
fn extent(multi: &MultiCurve, center: Point) -> f64 {
    multi
        .components
        .iter()
        .flat_map(|c| (0..512).map(move |i| (c.eval(TAU * i as f64 / 512.0) - center).norm()))
        .fold(0.0, f64::max)
}

pub fn point_source(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (spec, multi) = geometry(cfg)?;
    if multi.len() != 1 {
        return usage("point-source needs a single closed curve");
    }
    let curve = &multi.components[0];
    let ks = wavenumbers(cfg, &spec)?;
    let source = curve.centroid();
    let points = ring_points(source, 2.0 * extent(&multi, source), 20);
    let c_max = curve.c_max();
    let mut cells = Vec::new();
    for &k in &ks {
        let mut ns: Vec<usize> = cfg.ppw.iter().map(|&p| modes_for_ppw(p, k, c_max)).chain(cfg.n.iter().copied()).collect();
        if ns.is_empty() {
            ns.push(modes_for_ppw(10.0, k, c_max));
        }
        for n in ns {
            let (err, _) = point_source_run(curve, k, eta_for(cfg, Formulation::A, k), source, n, &points, Method::Lu, &GmresOptions::default())?;
            cells.push((k, n as f64, err));
        }
    }
    let mut table = Table::new(&["k", "N", "max_rel_err"]);
    for (k, n, err) in sorted(cells) {
        table.row(&[num(k), (n as usize).to_string(), sci(err)]);
    }
    table.note(format!("source=({},{}) points=20 on radius {}", num(source.x), num(source.y), num(2.0 * extent(&multi, source))));
    Ok(table)
}

pub fn field_grid(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (spec, multi) = geometry(cfg)?;
    let formulation = cfg.formulation.unwrap_or(Formulation::A);
    let k = match wavenumbers(cfg, &spec)?.as_slice() {
        [k] => *k,
        _ => return usage("field-grid takes exactly one wavenumber"),
    };
    let ppw = match cfg.ppw.as_slice() {
        [] => 10.0,
        [p] => *p,
        _ => return usage("field-grid takes at most one ppw"),
    };
    let n = modes_for_ppw(ppw, k, multi.c_max());
    let angle = cfg.angle.unwrap_or_else(|| default_angle(&spec));
    let wave = PlaneWave::from_angle(k, angle)?;
    let opts = GmresOptions { tol: cfg.tol.unwrap_or(5e-8), ..GmresOptions::default() };
    let sol = solve_scattering(&multi, k, eta_for(cfg, formulation, k), formulation, n, &wave, Method::Gmres, &opts)?;
    let centroid = (1.0 / multi.len() as f64) * multi.components.iter().fold(Point::default(), |acc, c| acc + c.centroid());
    let r = 1.5 * extent(&multi, centroid);
    let box_ = if cfg.grid.is_empty() { vec![centroid.x - r, centroid.x + r, centroid.y - r, centroid.y + r] } else { cfg.grid.clone() };
    let count = cfg.grid_n.unwrap_or(41).max(2);
    let band = NEAR_FIELD_BAND * TAU / k;
    let mut pts = Vec::new();
    for iy in 0..count {
        for ix in 0..count {
            let x = box_[0] + (box_[1] - box_[0]) * ix as f64 / (count - 1) as f64;
            let y = box_[2] + (box_[3] - box_[2]) * iy as f64 / (count - 1) as f64;
            pts.push(Point::new(x, y));
        }
    }
    let outside: Vec<Point> = pts.iter().copied().filter(|p| !multi.contains(*p) && multi.distance_to(*p) >= band).collect();
    let field = sol.total(&wave, &outside)?;
    let mut values = field.values.into_iter();
    let mut table = Table::new(&["x", "y", "re_u", "im_u", "abs_u"]);
    for p in pts {
        let v = if !multi.contains(p) && multi.distance_to(p) >= band { values.next().unwrap() } else { C::new(f64::NAN, f64::NAN) };
        table.row(&[num(p.x), num(p.y), sci(v.re), sci(v.im), sci(v.norm())]);
    }
    table.note(format!(
        "total field, formulation={formulation} N={n} angle={} gmres_iters={}; nan inside or within {} wavelengths of the boundary",
        num(angle),
        sol.report.iterations,
        NEAR_FIELD_BAND
    ));
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn wronskian_check() -> CliResult<Check> {
    let mut worst: f64 = 0.0;
    for &x in &[0.5, 1.0, 5.0, 20.0, 100.0] {
        for n in 0..=50u32 {
            let a = cyl_jy(n, x)?;
            let b = cyl_ik(n, x)?;
            worst = worst
                .max((a.j * a.yp - a.jp * a.y - 2.0 / (PI * x)).abs() / ((a.j * a.yp).abs() + (a.jp * a.y).abs() + 1.0))
                .max((b.i * b.kp - b.ip * b.kk + 1.0 / x).abs() / ((b.i * b.kp).abs() + (b.ip * b.kk).abs() + 1.0));
        }
    }
    Ok(Check { name: "bessel wronskians", passed: worst <= 1e-10, detail: format!("worst {worst:.1e}") })
}

fn log_rule_check() -> Check {
    let mut worst: f64 = 0.0;
    for n in [1usize, 4, 16, 64] {
        let w = kress_weights(n);
        let nodes = Lattice::new(n).map(|l| l.nodes()).unwrap_or_default();
        worst = worst.max(w.r.iter().sum::<f64>().abs());
        for m in 1..=n {
            let got: f64 = (0..nodes.len()).map(|j| w.at(0, j) * (m as f64 * nodes[j]).cos()).sum();
            worst = worst.max((got + TAU / m as f64).abs());
        }
    }
    Check { name: "log-rule exactness", passed: worst <= 1e-12, detail: format!("worst {worst:.1e}") }
}

fn mode_error(mat: &Matrix, n: usize, m: i64, mult: C) -> CliResult<f64> {
    let v: Vec<C> = Lattice::new(n)?.nodes().iter().map(|&t| C::from_polar(1.0, m as f64 * t)).collect();
    let w = mat.matvec(&v);
    Ok(w.iter().zip(&v).map(|(a, b)| (a - mult * b).norm()).fold(0.0, f64::max) / mult.norm())
}

fn disk_check() -> CliResult<Check> {
    let circle = MultiCurve::single(hbie::geometry::make_circle(1.0)?);
    let (mut ed, mut en): (f64, f64) = (0.0, 0.0);
    for k in [1.0, 5.0, 20.0] {
        let n = (4.0f64 * k).ceil() as usize + 17;
        let a = assemble_system(&circle, k, k, Formulation::A, n)?;
        let b = assemble_system(&circle, k, 1.0, Formulation::BReg, n)?;
        for t in multiplier_table(k, k, 1.0, -(n as i64) / 2, n as i64 / 2)? {
            ed = ed.max(mode_error(&a.matrix, n, t.m, t.lambda)?);
            en = en.max(mode_error(&b.matrix, n, t.m, t.mu)?);
        }
    }
    Ok(Check { name: "disk diagonalization", passed: ed <= 1e-8 && en <= 1e-6, detail: format!("dirichlet {ed:.1e}, neumann {en:.1e}") })
}

fn point_source_check() -> CliResult<Check> {
    let pts = ring_points(Point::new(0.0, 0.0), 2.5, 20);
    let mut worst: f64 = 0.0;
    for curve in [hbie::geometry::make_circle(1.0)?, hbie::geometry::make_star()] {
        for k in [5.0, 20.0] {
            let n = modes_for_ppw(10.0, k, curve.c_max());
            let (err, _) = point_source_run(&curve, k, k, Point::new(0.1, 0.2), n, &pts, Method::Lu, &GmresOptions::default())?;
            worst = worst.max(err);
        }
    }
    Ok(Check { name: "point-source exactness", passed: worst <= 1e-8, detail: format!("worst {worst:.1e}") })
}

pub fn verify() -> CliResult<Vec<Check>> {
    Ok(vec![wronskian_check()?, log_rule_check(), disk_check()?, point_source_check()?])
}
