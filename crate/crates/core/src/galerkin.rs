//! Galerkin discretization of the combined-field Dirichlet operators with
//! piecewise polynomials (degree 0 or 1) on uniform parameter panels.
//!
//! All pairings are in arclength measure. Entries are double integrals over
//! a pair of panels:
//!   far pairs       tensor Gauss, order from the panel separation and k h
//!   self pairs      u = t - s, graded in u, Gauss in t
//!   adjacent pairs  Duffy split at the shared corner, graded in the radius
//! The log singularity is integrated directly: every graded piece sees an
//! integrand analytic in a Bernstein ellipse of fixed ratio.

use crate::dense::Matrix;
use crate::error::{HbieError, Result};
use crate::geometry::{BoundaryPoint, Curve, MultiCurve, Point};
use crate::kernels::{combined_full, full_kernel, KernelKind, PairGeom};
use crate::nystrom::{assemble_dirichlet, modes_for_ppw, Formulation};
use crate::quadrature::gauss_legendre;
use crate::scattering::{rhs_dirichlet, Incident, Route};
use crate::solver::{solve_auto, GmresOptions, SolveReport};
use crate::trig::{to_coeffs, DensityGrid, FourierCoeffs, Lattice};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::sync::OnceLock;

type C = Complex64;

pub const MIN_WAVENUMBER: f64 = 0.5;
/// Largest allowed k times panel arclength.
pub const MAX_PANEL_PHASE: f64 = 20.0;
pub const MIN_PANELS: usize = 4;

/// Digits asked of each quadrature piece before safety margins.
const TARGET_DIGITS: f64 = 13.0;
const MIN_FAR_ORDER: usize = 4;
const MAX_FAR_ORDER: usize = 64;
const SELF_LEVELS: usize = 20;
const ADJACENT_LEVELS: usize = 14;

#[derive(Debug, Clone)]
pub struct PanelSpace {
    multi: MultiCurve,
    panels: usize,
    degree: usize,
    // per component
    c_max: Vec<f64>,
    // per global panel, arclength Gram block (row-major 2x2, upper-left used for p = 0)
    gram: Vec<[f64; 4]>,
    // per global panel: midpoint and bounding radius
    centers: Vec<Point>,
    radii: Vec<f64>,
    arcs: Vec<f64>,
}

pub fn make_space(multi: &MultiCurve, panels_per_component: usize, p: usize) -> Result<PanelSpace> {
    if p > 1 {
        return Err(HbieError::InvalidParameter(format!("polynomial degree must be 0 or 1, got {p}")));
    }
    if panels_per_component < MIN_PANELS {
        return Err(HbieError::InvalidParameter(format!("need at least {MIN_PANELS} panels, got {panels_per_component}")));
    }
    let h = TAU / panels_per_component as f64;
    let rule = gauss_legendre(24);
    let mut gram = Vec::new();
    let mut centers = Vec::new();
    let mut radii = Vec::new();
    let mut arcs = Vec::new();
    for curve in &multi.components {
        for j in 0..panels_per_component {
            let t0 = j as f64 * h;
            let mut g = [0.0; 4];
            let mut arc = 0.0;
            let center = curve.eval(t0 + 0.5 * h);
            let mut radius: f64 = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let f = curve.frame(t0 + 0.5 * h * (x + 1.0));
                let ds = 0.5 * h * w * f.speed;
                let b = [1.0, *x];
                for a in 0..2 {
                    for c in 0..2 {
                        g[2 * a + c] += ds * b[a] * b[c];
                    }
                }
                arc += ds;
                radius = radius.max((f.pos - center).norm());
            }
            radius = radius.max((curve.eval(t0) - center).norm()).max((curve.eval(t0 + h) - center).norm());
            gram.push(g);
            centers.push(center);
            radii.push(radius);
            arcs.push(arc);
        }
    }
    Ok(PanelSpace {
        multi: multi.clone(),
        panels: panels_per_component,
        degree: p,
        c_max: multi.components.iter().map(Curve::c_max).collect(),
        gram,
        centers,
        radii,
        arcs,
    })
}

impl PanelSpace {
    pub fn multi(&self) -> &MultiCurve {
        &self.multi
    }

    pub fn panels_per_component(&self) -> usize {
        self.panels
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dofs_per_panel(&self) -> usize {
        self.degree + 1
    }

    pub fn dim(&self) -> usize {
        self.multi.len() * self.panels * self.dofs_per_panel()
    }

    /// Parameter width 2 pi / panels.
    pub fn panel_width(&self) -> f64 {
        TAU / self.panels as f64
    }

    pub fn panel_interval(&self, j: usize) -> (f64, f64) {
        let h = self.panel_width();
        (j as f64 * h, (j + 1) as f64 * h)
    }

    pub fn index(&self, component: usize, panel: usize, l: usize) -> usize {
        (component * self.panels + panel) * self.dofs_per_panel() + l
    }

    /// (component, panel, local degree) of a global basis index.
    pub fn locate(&self, i: usize) -> (usize, usize, usize) {
        let q = self.dofs_per_panel();
        let l = i % q;
        let g = i / q;
        (g / self.panels, g % self.panels, l)
    }

    /// Largest panel arclength.
    pub fn max_panel_arclength(&self) -> f64 {
        self.arcs.iter().cloned().fold(0.0, f64::max)
    }

    /// Total number of degrees of freedom per wavelength of boundary,
    /// dofs 2 pi / (k arclength) with the arclength of one component.
    pub fn points_per_wavelength(&self, k: f64) -> f64 {
        let arc = self.multi.components[0].arclength();
        (self.panels * self.dofs_per_panel()) as f64 * TAU / (k * arc)
    }

    pub fn gram_block(&self, component: usize, panel: usize) -> [f64; 4] {
        self.gram[component * self.panels + panel]
    }

    /// Dense arclength Gram matrix (block diagonal).
    pub fn gram_matrix(&self) -> Matrix {
        let q = self.dofs_per_panel();
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (g, block) in self.gram.iter().enumerate() {
            for a in 0..q {
                for b in 0..q {
                    m.as_mut_slice()[(g * q + a) * self.dim() + g * q + b] = C::new(block[2 * a + b], 0.0);
                }
            }
        }
        m
    }

    /// Value of the expansion with coefficients `coeffs` at parameter `t`
    /// on component `component`.
    pub fn eval(&self, coeffs: &[C], component: usize, t: f64) -> C {
        let h = self.panel_width();
        let t = t.rem_euclid(TAU);
        let j = ((t / h) as usize).min(self.panels - 1);
        let xi = 2.0 * (t - j as f64 * h) / h - 1.0;
        let base = self.index(component, j, 0);
        let mut v = coeffs[base];
        if self.degree == 1 {
            v += coeffs[base + 1] * xi;
        }
        v
    }

    fn check_wavenumber(&self, k: f64) -> Result<()> {
        if !(k >= MIN_WAVENUMBER) || !k.is_finite() {
            return Err(HbieError::InvalidParameter(format!("wavenumber must be at least {MIN_WAVENUMBER}, got {k}")));
        }
        let phase = k * self.max_panel_arclength();
        if phase > MAX_PANEL_PHASE {
            return Err(HbieError::Resolution(format!(
                "k times panel arclength is {phase:.3}, above {MAX_PANEL_PHASE}; use more panels"
            )));
        }
        Ok(())
    }
}

/// Geometry and weight at one quadrature node. `w` already holds the Gauss
/// weight, the Jacobian and the speed.
#[derive(Debug, Clone, Copy)]
struct Node {
    pos: Point,
    normal: Point,
    w: f64,
    xi: f64,
}

fn panel_nodes(curve: &Curve, t0: f64, h: f64, order: usize) -> Vec<Node> {
    let rule = gauss_legendre(order);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let f = curve.frame(t0 + 0.5 * h * (x + 1.0));
            Node { pos: f.pos, normal: f.normal, w: 0.5 * h * w * f.speed, xi: x }
        })
        .collect()
}

/// Nodes and weights on [0, len] for integrands a(u) log u + b(u) with a, b
/// smooth on the scale of `len`. Piece [len 2^{-l-1}, len 2^{-l}] is a
/// Gauss rule whose order drops with the piece's share of the integral
/// (2^{-l} for `power` = 1, 4^{-l} for `power` = 2); the last piece [0, eps]
/// is mapped by u = eps v^4 to tame the log.
#[derive(Debug, Clone)]
struct GradedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GradedRule {
    fn new(len: f64, levels: usize, power: f64, phase: f64) -> Self {
        // log u on [a, 2a] is analytic in the ellipse of ratio 3 + sqrt 8
        let per_digit = std::f64::consts::LN_10 / (2.0 * (3.0 + 8f64.sqrt()).ln());
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut hi = len;
        for l in 0..levels {
            let lo = 0.5 * hi;
            let digits = (TARGET_DIGITS - power * 0.301 * l as f64).max(2.0);
            let osc = (0.6 * phase * (hi - lo) / len).ceil() as usize;
            let n = ((digits * per_digit).ceil() as usize + 1 + osc).max(3);
            let g = gauss_legendre(n);
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                nodes.push(lo + 0.5 * (hi - lo) * (x + 1.0));
                weights.push(0.5 * (hi - lo) * w);
            }
            hi = lo;
        }
        let g = gauss_legendre(8);
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            let v = 0.5 * (x + 1.0);
            nodes.push(hi * v.powi(4));
            weights.push(0.5 * w * 4.0 * hi * v.powi(3));
        }
        GradedRule { nodes, weights }
    }
}

/// The kernel paired by the Galerkin forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairKernel {
    /// One of eta S_k, K_k, K'_k; the others are rejected.
    Operator(KernelKind),
    /// K_k - i eta S_k (adjoint = false) or K'_k - i eta S_k.
    Combined { eta: f64, adjoint: bool },
}

impl PairKernel {
    fn eval(&self, k: f64, g: &PairGeom) -> C {
        match *self {
            PairKernel::Operator(kind) => full_kernel(kind, k, g),
            PairKernel::Combined { eta, adjoint } => combined_full(k, eta, adjoint, g),
        }
    }
}

struct Assembler<'a> {
    space: &'a PanelSpace,
    k: f64,
    kernel: PairKernel,
    // per component
    self_rule: Vec<GradedRule>,
    adjacent_rule: Vec<GradedRule>,
    inner_order: Vec<usize>,
    // far-field node sets, [global panel][order - MIN_FAR_ORDER]
    far_nodes: Vec<Vec<OnceLock<Vec<Node>>>>,
}

impl<'a> Assembler<'a> {
    fn new(space: &'a PanelSpace, k: f64, kernel: PairKernel) -> Self {
        let h = space.panel_width();
        let mut self_rule = Vec::new();
        let mut adjacent_rule = Vec::new();
        let mut inner_order = Vec::new();
        for &cm in &space.c_max {
            let phase = k * cm * h;
            self_rule.push(GradedRule::new(h, SELF_LEVELS, 1.0, phase));
            adjacent_rule.push(GradedRule::new(h, ADJACENT_LEVELS, 2.0, phase));
            inner_order.push(12 + (0.6 * phase).ceil() as usize);
        }
        let n_panels = space.gram.len();
        let far_nodes = (0..n_panels).map(|_| (MIN_FAR_ORDER..=MAX_FAR_ORDER).map(|_| OnceLock::new()).collect()).collect();
        Assembler { space, k, kernel, self_rule, adjacent_rule, inner_order, far_nodes }
    }

    fn curve(&self, c: usize) -> &Curve {
        &self.space.multi.components[c]
    }

    fn far_set(&self, g: usize, order: usize) -> &[Node] {
        let c = g / self.space.panels;
        let j = g % self.space.panels;
        let (t0, t1) = self.space.panel_interval(j);
        self.far_nodes[g][order - MIN_FAR_ORDER].get_or_init(|| panel_nodes(self.curve(c), t0, t1 - t0, order))
    }

    /// Gauss order on panel `g` for a smooth partner at effective distance `dist`.
    fn far_order(&self, g: usize, dist: f64) -> usize {
        let half = 0.5 * self.space.arcs[g];
        let z = 1.0 + (dist / half).max(1e-3);
        let rho = z + (z * z - 1.0).sqrt();
        let bern = (TARGET_DIGITS * std::f64::consts::LN_10 / (2.0 * rho.ln())).ceil() as usize + 1;
        // e^{ikr} grows like e^{k half Im} inside the ellipse: pay for it on top
        let phase = (self.k * half).ceil() as usize;
        (bern + phase).max(2 * phase + 4).clamp(MIN_FAR_ORDER, MAX_FAR_ORDER)
    }

    fn kernel_at(&self, d: Point, nx: Point, ny: Point) -> C {
        self.kernel.eval(self.k, &PairGeom::from_chord(d, nx, ny))
    }

    /// (p+1) x (p+1) block for row panel `gp`, column panel `gq`.
    fn block(&self, gp: usize, gq: usize) -> [C; 4] {
        let panels = self.space.panels;
        let (cp, jp) = (gp / panels, gp % panels);
        let (cq, jq) = (gq / panels, gq % panels);
        if cp == cq {
            if jp == jq {
                return self.self_block(cp, jp);
            }
            if (jp + 1) % panels == jq {
                return self.adjacent_block(cp, jp, 1.0);
            }
            if (jq + 1) % panels == jp {
                return self.adjacent_block(cp, jp, -1.0);
            }
        }
        self.far_block(gp, gq)
    }

    fn far_block(&self, gp: usize, gq: usize) -> [C; 4] {
        let sp = &self.space;
        let dist = (sp.centers[gp] - sp.centers[gq]).norm() - sp.radii[gp] - sp.radii[gq];
        let xs = self.far_set(gp, self.far_order(gp, dist));
        let ys = self.far_set(gq, self.far_order(gq, dist));
        let mut out = [C::new(0.0, 0.0); 4];
        let p1 = sp.degree == 1;
        for x in xs {
            let mut row = [C::new(0.0, 0.0); 2];
            for y in ys {
                let kv = self.kernel_at(x.pos - y.pos, x.normal, y.normal) * y.w;
                row[0] += kv;
                if p1 {
                    row[1] += kv * y.xi;
                }
            }
            out[0] += row[0] * x.w;
            if p1 {
                out[1] += row[1] * x.w;
                out[2] += row[0] * (x.w * x.xi);
                out[3] += row[1] * (x.w * x.xi);
            }
        }
        out
    }

    fn accumulate(&self, out: &mut [C; 4], kv: C, w: f64, xi_x: f64, xi_y: f64) {
        out[0] += kv * w;
        if self.space.degree == 1 {
            out[1] += kv * (w * xi_y);
            out[2] += kv * (w * xi_x);
            out[3] += kv * (w * xi_x * xi_y);
        }
    }

    fn self_block(&self, c: usize, j: usize) -> [C; 4] {
        let curve = self.curve(c);
        let (t0, t1) = self.space.panel_interval(j);
        let h = t1 - t0;
        let inner = gauss_legendre(self.inner_order[c]);
        let rule = &self.self_rule[c];
        let mut out = [C::new(0.0, 0.0); 4];
        for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
            let len = h - u;
            for (&g, &wg) in inner.nodes.iter().zip(&inner.weights) {
                // later point at local tau, earlier at tau - u
                let tau = u + 0.5 * len * (g + 1.0);
                let (ta, tb) = (t0 + tau, t0 + tau - u);
                let (fa, fb) = (curve.frame(ta), curve.frame(tb));
                let d = curve.chord(ta, tb);
                let w = wu * wg * 0.5 * len * fa.speed * fb.speed;
                let (xa, xb) = (2.0 * tau / h - 1.0, 2.0 * (tau - u) / h - 1.0);
                let k_ab = self.kernel_at(d, fa.normal, fb.normal);
                let k_ba = self.kernel_at(-d, fb.normal, fa.normal);
                self.accumulate(&mut out, k_ab, w, xa, xb);
                self.accumulate(&mut out, k_ba, w, xb, xa);
            }
        }
        out
    }

    /// Row panel j of component c against its neighbour on side `side`
    /// (+1 next, -1 previous). Distances from the shared corner are alpha
    /// (row) and beta (column); the column parameter is unwrapped so the
    /// chord never straddles the period.
    fn adjacent_block(&self, c: usize, j: usize, side: f64) -> [C; 4] {
        let curve = self.curve(c);
        let (t0, t1) = self.space.panel_interval(j);
        let h = t1 - t0;
        let corner = if side > 0.0 { t1 } else { t0 };
        let inner = gauss_legendre(self.inner_order[c]);
        let rule = &self.adjacent_rule[c];
        let mut out = [C::new(0.0, 0.0); 4];
        let mut add = |alpha: f64, beta: f64, w: f64| {
            let (tx, ty) = (corner - side * alpha, corner + side * beta);
            let (fx, fy): (BoundaryPoint, BoundaryPoint) = (curve.frame(tx), curve.frame(ty));
            let d = curve.chord(tx, ty);
            let kv = self.kernel_at(d, fx.normal, fy.normal);
            let xi_x = side * (1.0 - 2.0 * alpha / h);
            let xi_y = side * (2.0 * beta / h - 1.0);
            self.accumulate(&mut out, kv, w * fx.speed * fy.speed, xi_x, xi_y);
        };
        for (&rho, &wr) in rule.nodes.iter().zip(&rule.weights) {
            for (&g, &wg) in inner.nodes.iter().zip(&inner.weights) {
                let s = 0.5 * (g + 1.0);
                let w = wr * rho * 0.5 * wg;
                add(rho, rho * s, w);
                add(rho * s, rho, w);
            }
        }
        out
    }

    fn matrix(&self) -> Matrix {
        let sp = self.space;
        let q = sp.dofs_per_panel();
        let dim = sp.dim();
        let n_panels = sp.gram.len();
        let mut m = Matrix::zeros(dim, dim);
        m.as_mut_slice().par_chunks_mut(q * dim).enumerate().for_each(|(gp, rows)| {
            for gq in 0..n_panels {
                let b = self.block(gp, gq);
                for a in 0..q {
                    for c in 0..q {
                        rows[a * dim + gq * q + c] = b[2 * a + c];
                    }
                }
            }
        });
        m
    }
}

/// Matrix of pairings <L phi_j, phi_i> for a bare kernel (no identity part).
pub fn pairing_matrix(space: &PanelSpace, k: f64, kernel: PairKernel) -> Result<Matrix> {
    space.check_wavenumber(k)?;
    if let PairKernel::Operator(kind) = kernel {
        if !matches!(kind, KernelKind::Single { .. } | KernelKind::Double | KernelKind::DoubleAdj) {
            return Err(HbieError::InvalidParameter(format!("Galerkin pairing supports eta*S_k, K_k, K'_k, not {}", kind.tag())));
        }
    }
    Ok(Assembler::new(space, k, kernel).matrix())
}

#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub matrix: Matrix,
    pub rhs: Vec<C>,
    pub space: PanelSpace,
    pub k: f64,
    pub eta: f64,
    pub variant: Formulation,
}

fn adjoint_flag(variant: Formulation) -> Result<bool> {
    match variant {
        Formulation::A => Ok(false),
        Formulation::APrime => Ok(true),
        _ => Err(HbieError::InvalidParameter(format!("Galerkin discretization is Dirichlet only, got {variant}"))),
    }
}

/// <(1/2 + K - i eta S) phi_j, phi_i> (or with K'), and the load vector of
/// the matching right-hand side for `wave`.
pub fn assemble_galerkin(space: &PanelSpace, k: f64, eta: f64, variant: Formulation, wave: &dyn Incident) -> Result<GalerkinSystem> {
    let adjoint = adjoint_flag(variant)?;
    let mut matrix = pairing_matrix(space, k, PairKernel::Combined { eta, adjoint })?;
    matrix.add_scaled(&space.gram_matrix(), C::new(0.5, 0.0));
    let rhs = load_vector(space, k, |b| rhs_value(wave, eta, Route::of(variant), b));
    Ok(GalerkinSystem { matrix, rhs, space: space.clone(), k, eta, variant })
}

fn rhs_value(wave: &dyn Incident, eta: f64, route: Route, b: &BoundaryPoint) -> C {
    match route {
        Route::Direct => wave.normal_derivative(b) - C::new(0.0, eta) * wave.value(b.pos),
        Route::Indirect => -wave.value(b.pos),
    }
}

/// Panel-wise Gauss order for smooth data oscillating at wavenumber k.
fn data_order(space: &PanelSpace, k: f64) -> usize {
    16 + (0.6 * k * space.max_panel_arclength()).ceil() as usize
}

/// <f, phi_i> for every basis function.
pub fn load_vector(space: &PanelSpace, k: f64, f: impl Fn(&BoundaryPoint) -> C + Sync) -> Vec<C> {
    let h = space.panel_width();
    let rule = gauss_legendre(data_order(space, k));
    let q = space.dofs_per_panel();
    let n_panels = space.gram.len();
    (0..n_panels)
        .into_par_iter()
        .flat_map_iter(|g| {
            let curve = &space.multi.components[g / space.panels];
            let t0 = (g % space.panels) as f64 * h;
            let mut acc = [C::new(0.0, 0.0); 2];
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let b = curve.frame(t0 + 0.5 * h * (x + 1.0));
                let v = f(&b) * (0.5 * h * w * b.speed);
                acc[0] += v;
                acc[1] += v * *x;
            }
            acc.into_iter().take(q)
        })
        .collect()
}

/// Smooth reference density, one trigonometric interpolant per component.
#[derive(Debug, Clone)]
pub struct Reference {
    coeffs: Vec<FourierCoeffs>,
    sizes: Vec<usize>,
}

impl Reference {
    pub fn new(grids: &[DensityGrid]) -> Self {
        Reference { coeffs: grids.iter().map(to_coeffs).collect(), sizes: grids.iter().map(|g| g.lattice.size()).collect() }
    }

    pub fn components(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, component: usize, t: f64) -> C {
        self.coeffs[component].eval(t)
    }
}

fn check_reference(space: &PanelSpace, reference: &Reference) -> Result<()> {
    if reference.components() != space.multi.len() {
        return Err(HbieError::SizeMismatch { expected: space.multi.len(), got: reference.components() });
    }
    let per_component = space.panels * space.dofs_per_panel();
    if let Some(&n) = reference.sizes.iter().find(|&&n| n < per_component) {
        return Err(HbieError::Resolution(format!(
            "reference has {n} samples per component, fewer than the {per_component} dofs it is compared against"
        )));
    }
    Ok(())
}

/// Panel-wise arclength L2 projection of the reference onto the space.
pub fn l2_project(reference: &Reference, space: &PanelSpace, k: f64) -> Result<Vec<C>> {
    check_reference(space, reference)?;
    let h = space.panel_width();
    let rule = gauss_legendre(data_order(space, k));
    let q = space.dofs_per_panel();
    let out: Vec<C> = (0..space.gram.len())
        .into_par_iter()
        .flat_map_iter(|g| {
            let c = g / space.panels;
            let curve = &space.multi.components[c];
            let t0 = (g % space.panels) as f64 * h;
            let mut acc = [C::new(0.0, 0.0); 2];
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let t = t0 + 0.5 * h * (x + 1.0);
                let v = reference.eval(c, t) * (0.5 * h * w * curve.frame(t).speed);
                acc[0] += v;
                acc[1] += v * *x;
            }
            let gm = space.gram[g];
            let coef = if q == 1 {
                vec![acc[0] / gm[0]]
            } else {
                let det = gm[0] * gm[3] - gm[1] * gm[2];
                vec![(acc[0] * gm[3] - acc[1] * gm[1]) / det, (acc[1] * gm[0] - acc[0] * gm[2]) / det]
            };
            coef.into_iter()
        })
        .collect();
    Ok(out)
}

/// Arclength L2 norms (|v_h - v|, |v|) of the difference between the
/// expansion `coeffs` and the reference.
pub fn l2_distance(space: &PanelSpace, k: f64, coeffs: &[C], reference: &Reference) -> Result<(f64, f64)> {
    check_reference(space, reference)?;
    if coeffs.len() != space.dim() {
        return Err(HbieError::SizeMismatch { expected: space.dim(), got: coeffs.len() });
    }
    let h = space.panel_width();
    let rule = gauss_legendre(data_order(space, k));
    let q = space.dofs_per_panel();
    let (diff, norm) = (0..space.gram.len())
        .into_par_iter()
        .map(|g| {
            let c = g / space.panels;
            let curve = &space.multi.components[c];
            let t0 = (g % space.panels) as f64 * h;
            let (mut d2, mut n2) = (0.0, 0.0);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let t = t0 + 0.5 * h * (x + 1.0);
                let v = reference.eval(c, t);
                let mut vh = coeffs[g * q];
                if q == 2 {
                    vh += coeffs[g * q + 1] * *x;
                }
                let ds = 0.5 * h * w * curve.frame(t).speed;
                d2 += (vh - v).norm_sqr() * ds;
                n2 += v.norm_sqr() * ds;
            }
            (d2, n2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok((diff.sqrt(), norm.sqrt()))
}

/// Outcome of one Galerkin solve against a reference.
#[derive(Debug, Clone)]
pub struct QuasiOptimality {
    /// |v_h - v| / |v - P v|
    pub constant: f64,
    /// |v_h - v| / |v|
    pub relative_error: f64,
    /// |v - P v| / |v|
    pub best_relative_error: f64,
    pub report: SolveReport,
}

/// Systems up to this size are solved by LU, larger ones by GMRES.
pub const GALERKIN_LU_LIMIT: usize = 1500;

/// Solves the Galerkin system and compares with the reference in arclength
/// L2. Fails when the best-approximation error is below 1e-12 relative, where
/// the ratio is meaningless.
pub fn quasiopt_constant(
    space: &PanelSpace,
    k: f64,
    eta: f64,
    variant: Formulation,
    wave: &dyn Incident,
    reference: &Reference,
) -> Result<QuasiOptimality> {
    check_reference(space, reference)?;
    let sys = assemble_galerkin(space, k, eta, variant, wave)?;
    let opts = GmresOptions { tol: 1e-10, ..GmresOptions::default() };
    let (coeffs, report) = solve_auto(&sys.matrix, &sys.rhs, GALERKIN_LU_LIMIT, &opts)?;
    let best = l2_project(reference, space, k)?;
    let (err, norm) = l2_distance(space, k, &coeffs, reference)?;
    let (best_err, _) = l2_distance(space, k, &best, reference)?;
    if !(best_err >= 1e-12 * norm) {
        return Err(HbieError::Resolution(format!(
            "best-approximation error {best_err:e} is at roundoff relative to |v| = {norm:e}"
        )));
    }
    Ok(QuasiOptimality { constant: err / best_err, relative_error: err / norm, best_relative_error: best_err / norm, report })
}

/// Panels per component for a target number of degrees of freedom per
/// wavelength: ppw k arclength / (2 pi (p + 1)), rounded up.
pub fn panels_for_ppw(ppw: f64, k: f64, arclength: f64, p: usize) -> usize {
    ((ppw * k * arclength / (TAU * (p + 1) as f64)).ceil() as usize).max(MIN_PANELS)
}

/// Nystrom solution of the same Dirichlet equation at `ppw` points per
/// wavelength (N = ceil(ppw k c_max / 2) per component), as a reference.
pub fn nystrom_reference(
    multi: &MultiCurve,
    k: f64,
    eta: f64,
    variant: Formulation,
    wave: &dyn Incident,
    ppw: f64,
) -> Result<(Vec<DensityGrid>, SolveReport)> {
    adjoint_flag(variant)?;
    let n = modes_for_ppw(ppw, k, multi.c_max());
    let sys = assemble_dirichlet(multi, k, eta, variant, n)?;
    let rhs = rhs_dirichlet(&sys.disc, wave, eta, Route::of(variant));
    let (x, report) = solve_auto(&sys.matrix, &rhs, GALERKIN_LU_LIMIT, &GmresOptions { tol: 1e-12, ..GmresOptions::default() })?;
    let lattice = Lattice::new(n)?;
    let grids = sys.disc.ranges().into_iter().map(|r| DensityGrid::new(lattice, x[r].to_vec())).collect::<Result<Vec<_>>>()?;
    Ok((grids, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PollutionRow {
    pub k: f64,
    pub ppw: f64,
    pub panels: usize,
    pub p: usize,
    pub constant: f64,
    pub relative_error: f64,
    pub iterations: usize,
}

/// C_qo over a ppw sweep at one wavenumber, against one Nystrom reference
/// at `reference_ppw`. Rows come back in the order of `ppws`.
#[allow(clippy::too_many_arguments)]
pub fn pollution_sweep(
    multi: &MultiCurve,
    k: f64,
    eta: f64,
    variant: Formulation,
    wave: &dyn Incident,
    p: usize,
    ppws: &[f64],
    reference_ppw: f64,
) -> Result<Vec<PollutionRow>> {
    let (grids, _) = nystrom_reference(multi, k, eta, variant, wave, reference_ppw)?;
    let reference = Reference::new(&grids);
    let arclength = multi.components.iter().map(Curve::arclength).fold(0.0, f64::max);
    ppws.iter()
        .map(|&ppw| {
            let panels = panels_for_ppw(ppw, k, arclength, p);
            let space = make_space(multi, panels, p)?;
            let q = quasiopt_constant(&space, k, eta, variant, wave, &reference)?;
            Ok(PollutionRow { k, ppw, panels, p, constant: q.constant, relative_error: q.relative_error, iterations: q.report.iterations })
        })
        .collect()
}
