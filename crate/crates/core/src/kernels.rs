//! Boundary kernels in the split form
//!
//!   L(t, tau) = L1(t, tau) log(4 sin^2((t - tau)/2)) + L2(t, tau),
//!
//! with the speed |gamma'(tau)| folded into both parts.
//!
//! Each kernel is written as A ln(kr/2) + B with A, B smooth (log-separated
//! Bessel forms from `specfun`). Since
//! ln(kr/2) = (1/2) log(4 sin^2) + ell, ell = ln(k/2) + (1/2) ln(r^2 / 4 sin^2),
//! we get L1 = A/2 and L2 = A ell + B with no cancellation anywhere, and the
//! diagonal limit is A ln(k|gamma'|/2) + B(t, t).

use crate::error::{HbieError, Result};
use crate::geometry::{BoundaryPoint, Curve, Point};
use crate::specfun::{hankel01, k01, split_ik01, split_jy01, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_PI;

type C = Complex64;

const INV_2PI: f64 = 0.5 * FRAC_1_PI;
const INV_4PI: f64 = 0.25 * FRAC_1_PI;

/// The log split of the ik kernels is blended out over IMAG_SPLIT_Z <= kr <= 2 IMAG_SPLIT_Z;
/// beyond that the kernels are smooth to working precision and used directly.
pub const IMAG_SPLIT_Z: f64 = 4.0;

/// Which boundary operator a split kernel represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// eta * S_k
    Single { eta: f64 },
    /// K_k, normal derivative at the source point
    Double,
    /// K'_k, normal derivative at the target point
    DoubleAdj,
    /// k * S_{ik}
    SingleImag,
    /// K_{ik}
    DoubleImag,
    /// K'_{ik}
    DoubleAdjImag,
    /// k^{-1} (H_k - H_{ik})
    HyperDiff,
}

impl KernelKind {
    pub fn tag(&self) -> &'static str {
        match self {
            KernelKind::Single { .. } => "eta*S_k",
            KernelKind::Double => "K_k",
            KernelKind::DoubleAdj => "K'_k",
            KernelKind::SingleImag => "k*S_ik",
            KernelKind::DoubleImag => "K_ik",
            KernelKind::DoubleAdjImag => "K'_ik",
            KernelKind::HyperDiff => "(H_k-H_ik)/k",
        }
    }
}

/// Smooth bump: 1 on [0, 1], 0 on [2, inf).
pub fn cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let g = |s: f64| (-1.0 / s).exp();
    let a = g(2.0 - x);
    a / (a + g(x - 1.0))
}

/// Pair geometry shared by all kernels.
#[derive(Debug, Clone, Copy)]
pub struct PairGeom {
    pub r: f64,
    pub r2: f64,
    /// <x - y, n(x)>
    pub a: f64,
    /// <x - y, n(y)>
    pub b: f64,
    /// <n(x), n(y)>
    pub c: f64,
    /// log(4 sin^2((t - tau)/2))
    pub logf: f64,
    /// (1/2) ln(r^2 / 4 sin^2((t - tau)/2))
    pub half_log_ratio: f64,
}

impl PairGeom {
    pub fn new(x: &BoundaryPoint, y: &BoundaryPoint) -> Self {
        let d = x.pos - y.pos;
        let r2 = d.norm_sqr();
        let s = (0.5 * (x.t - y.t)).sin();
        let sin2 = 4.0 * s * s;
        PairGeom {
            r: r2.sqrt(),
            r2,
            a: d.dot(x.normal),
            b: d.dot(y.normal),
            c: x.normal.dot(y.normal),
            logf: sin2.ln(),
            half_log_ratio: 0.5 * (r2 / sin2).ln(),
        }
    }

    /// Geometry from a precomputed difference d = x - y (no log factor).
    pub fn from_chord(d: Point, normal_x: Point, normal_y: Point) -> Self {
        let r2 = d.norm_sqr();
        PairGeom { r: r2.sqrt(), r2, a: d.dot(normal_x), b: d.dot(normal_y), c: normal_x.dot(normal_y), logf: 0.0, half_log_ratio: 0.0 }
    }

    /// Geometry for points on different curves (no log factor).
    pub fn unsplit(x: &BoundaryPoint, y: &BoundaryPoint) -> Self {
        let d = x.pos - y.pos;
        let r2 = d.norm_sqr();
        PairGeom { r: r2.sqrt(), r2, a: d.dot(x.normal), b: d.dot(y.normal), c: x.normal.dot(y.normal), logf: 0.0, half_log_ratio: 0.0 }
    }
}

/// A boundary operator kernel on one curve, at wavenumber `k`.
#[derive(Debug, Clone)]
pub struct SplitKernel {
    pub kind: KernelKind,
    pub k: f64,
    curve: Curve,
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(HbieError::InvalidParameter(format!("wavenumber must be positive, got {k}")));
    }
    Ok(())
}

pub fn split_single(curve: &Curve, k: f64, eta: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::Single { eta })
}

pub fn split_double(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::Double)
}

pub fn split_double_adj(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::DoubleAdj)
}

pub fn split_single_imag(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::SingleImag)
}

pub fn split_double_imag(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::DoubleImag)
}

pub fn split_double_adj_imag(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::DoubleAdjImag)
}

pub fn split_hyper_diff(curve: &Curve, k: f64) -> Result<SplitKernel> {
    SplitKernel::new(curve, k, KernelKind::HyperDiff)
}

impl SplitKernel {
    pub fn new(curve: &Curve, k: f64, kind: KernelKind) -> Result<Self> {
        check_k(k)?;
        Ok(SplitKernel { kind, k, curve: curve.clone() })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn l1(&self, t: f64, tau: f64) -> C {
        if t == tau {
            return self.diag_at(&self.curve.frame(t)).0;
        }
        self.split_at(&self.curve.frame(t), &self.curve.frame(tau)).0
    }

    pub fn l2(&self, t: f64, tau: f64) -> C {
        self.split_at(&self.curve.frame(t), &self.curve.frame(tau)).1
    }

    pub fn l2_diag(&self, t: f64) -> C {
        self.diag_at(&self.curve.frame(t)).1
    }

    /// The kernel itself from direct Hankel / Macdonald evaluation.
    pub fn kernel(&self, t: f64, tau: f64) -> C {
        let x = self.curve.frame(t);
        let y = self.curve.frame(tau);
        full_kernel(self.kind, self.k, &PairGeom::unsplit(&x, &y)) * y.speed
    }

    /// (L1, L2) for distinct points of the curve.
    pub fn split_at(&self, x: &BoundaryPoint, y: &BoundaryPoint) -> (C, C) {
        split_value(self.kind, self.k, &PairGeom::new(x, y), y.speed)
    }

    /// (L1, L2) on the diagonal.
    pub fn diag_at(&self, x: &BoundaryPoint) -> (C, C) {
        diag_value(self.kind, self.k, x)
    }
}

/// (L1, L2) for kernel `kind` given the pair geometry and source speed.
pub fn split_value(kind: KernelKind, k: f64, g: &PairGeom, speed: f64) -> (C, C) {
    let z = k * g.r;
    let ell = (0.5 * k).ln() + g.half_log_ratio;
    let (a, b) = match kind {
        KernelKind::Single { eta } => {
            let s = split_jy01(z);
            let a = -eta * INV_2PI * s.j0;
            (C::new(a, 0.0), C::new(-0.25 * eta * s.y0h, 0.25 * eta * s.j0))
        }
        KernelKind::Double => {
            let s = split_jy01(z);
            let br = g.b / g.r;
            let a = -k * INV_2PI * s.j1 * br;
            let b = C::new(-0.25 * k * br * s.y1h + INV_2PI * g.b / g.r2, 0.25 * k * br * s.j1);
            (C::new(a, 0.0), b)
        }
        KernelKind::DoubleAdj => {
            let s = split_jy01(z);
            let ar = g.a / g.r;
            let a = k * INV_2PI * s.j1 * ar;
            let b = C::new(0.25 * k * ar * s.y1h - INV_2PI * g.a / g.r2, -0.25 * k * ar * s.j1);
            (C::new(a, 0.0), b)
        }
        KernelKind::SingleImag => {
            if z >= 2.0 * IMAG_SPLIT_Z {
                return (C::new(0.0, 0.0), C::new(k * INV_2PI * k01(z).0 * speed, 0.0));
            }
            let s = split_ik01(z);
            let chi = cutoff(z / IMAG_SPLIT_Z);
            let a = -k * INV_2PI * s.i0;
            let l2 = a * (chi * ell + (1.0 - chi) * (0.5 * z).ln()) + k * INV_2PI * s.k0h;
            return (C::new(0.5 * a * chi * speed, 0.0), C::new(l2 * speed, 0.0));
        }
        KernelKind::DoubleImag | KernelKind::DoubleAdjImag => {
            let (proj, sign) = if kind == KernelKind::DoubleImag { (g.b, 1.0) } else { (g.a, -1.0) };
            let pr = proj / g.r;
            if z >= 2.0 * IMAG_SPLIT_Z {
                return (C::new(0.0, 0.0), C::new(sign * k * INV_2PI * k01(z).1 * pr * speed, 0.0));
            }
            let s = split_ik01(z);
            let chi = cutoff(z / IMAG_SPLIT_Z);
            let a = sign * k * INV_2PI * s.i1 * pr;
            let bb = sign * (k * INV_2PI * s.k1h * pr + INV_2PI * proj / g.r2);
            let l2 = a * (chi * ell + (1.0 - chi) * (0.5 * z).ln()) + bb;
            return (C::new(0.5 * a * chi * speed, 0.0), C::new(l2 * speed, 0.0));
        }
        KernelKind::HyperDiff => return hyper_split(k, g, z, ell, speed),
    };
    (0.5 * a * speed, (a * ell + b) * speed)
}

fn hyper_split(k: f64, g: &PairGeom, z: f64, ell: f64, speed: f64) -> (C, C) {
    let abr2 = g.a * g.b / g.r2;
    let gg = g.c / g.r - 2.0 * abr2 / g.r;
    let s = split_jy01(z);
    let a_j = -INV_2PI * (k * abr2 * s.j0 + gg * s.j1);
    let b_j = C::new(-0.25 * (k * abr2 * s.y0h + gg * s.y1h), 0.25 * (k * abr2 * s.j0 + gg * s.j1));
    if z >= 2.0 * IMAG_SPLIT_Z {
        let (k0, k1) = k01(z);
        let k_part = -INV_2PI * (-k * k0 * abr2 + (k1 - 1.0 / z) * gg);
        return (C::new(0.5 * a_j * speed, 0.0), (a_j * ell + b_j + k_part) * speed);
    }
    let m = split_ik01(z);
    let chi = cutoff(z / IMAG_SPLIT_Z);
    let a_i = -INV_2PI * (k * abr2 * m.i0 + gg * m.i1);
    let b_i = INV_2PI * (k * abr2 * m.k0h - gg * m.k1h);
    let l1 = 0.5 * (a_j + chi * a_i);
    let l2 = a_j * ell + a_i * (chi * ell + (1.0 - chi) * (0.5 * z).ln()) + b_i;
    (C::new(l1 * speed, 0.0), (b_j + l2) * speed)
}

/// (L1, L2) at coincident points.
pub fn diag_value(kind: KernelKind, k: f64, x: &BoundaryPoint) -> (C, C) {
    let s = x.speed;
    let lg = (0.5 * k * s).ln();
    match kind {
        KernelKind::Single { eta } => (
            C::new(-eta * INV_4PI * s, 0.0),
            eta * s * C::new(-EULER_GAMMA * INV_2PI - INV_2PI * lg, 0.25),
        ),
        KernelKind::Double | KernelKind::DoubleAdj | KernelKind::DoubleImag | KernelKind::DoubleAdjImag => {
            (C::new(0.0, 0.0), C::new(-x.curvature * s * INV_4PI, 0.0))
        }
        KernelKind::SingleImag => (C::new(-k * INV_4PI * s, 0.0), C::new(k * INV_2PI * (-lg - EULER_GAMMA) * s, 0.0)),
        KernelKind::HyperDiff => (
            C::new(-k * INV_4PI * s, 0.0),
            s * C::new(k * (1.0 - 2.0 * EULER_GAMMA) * INV_4PI - k * INV_2PI * lg, k / 8.0),
        ),
    }
}

/// The kernel without the source speed, from direct special-function
/// evaluation (no splitting). Used off the diagonal of multi-component
/// systems and by tests.
pub fn full_kernel(kind: KernelKind, k: f64, g: &PairGeom) -> C {
    let z = k * g.r;
    let i4 = C::new(0.0, 0.25);
    match kind {
        KernelKind::Single { eta } => i4 * hankel01(z).0 * eta,
        KernelKind::Double => i4 * k * hankel01(z).1 * (g.b / g.r),
        KernelKind::DoubleAdj => -i4 * k * hankel01(z).1 * (g.a / g.r),
        KernelKind::SingleImag => C::new(k * INV_2PI * k01(z).0, 0.0),
        KernelKind::DoubleImag => C::new(k * INV_2PI * k01(z).1 * g.b / g.r, 0.0),
        KernelKind::DoubleAdjImag => C::new(-k * INV_2PI * k01(z).1 * g.a / g.r, 0.0),
        KernelKind::HyperDiff => {
            let abr2 = g.a * g.b / g.r2;
            let gg = g.c / g.r - 2.0 * abr2 / g.r;
            let (h0, h1) = hankel01(z);
            let (k0, k1) = k01(z);
            i4 * (k * h0 * abr2 + h1 * gg) - INV_2PI * (-k * k0 * abr2 + k1 * gg)
        }
    }
}

/// Fused kernel of K_k - i eta S_k (`adjoint = false`) or K'_k - i eta S_k
/// (`adjoint = true`): one Bessel evaluation for both parts. Returns (L1, L2).
pub fn combined_split(k: f64, eta: f64, adjoint: bool, g: &PairGeom, speed: f64) -> (C, C) {
    let z = k * g.r;
    let ell = (0.5 * k).ln() + g.half_log_ratio;
    let s = split_jy01(z);
    let (proj, sign) = if adjoint { (g.a, -1.0) } else { (g.b, 1.0) };
    let pr = proj / g.r;
    // double layer part
    let ad = -sign * k * INV_2PI * s.j1 * pr;
    let bd = C::new(sign * (-0.25 * k * pr * s.y1h + INV_2PI * proj / g.r2), sign * 0.25 * k * pr * s.j1);
    // -i eta S part: A_s = -(eta/2pi) J0, B_s = eta(-y0h/4 + i J0/4)
    let as_ = C::new(0.0, eta * INV_2PI * s.j0);
    let bs = C::new(0.0, -eta) * C::new(-0.25 * s.y0h, 0.25 * s.j0);
    let a = C::new(ad, 0.0) + as_;
    (0.5 * a * speed, (a * ell + bd + bs) * speed)
}

/// Diagonal (L1, L2) of the fused Dirichlet kernel.
pub fn combined_diag(k: f64, eta: f64, x: &BoundaryPoint) -> (C, C) {
    let (l1s, l2s) = diag_value(KernelKind::Single { eta }, k, x);
    let (_, l2d) = diag_value(KernelKind::Double, k, x);
    let mi = C::new(0.0, -1.0);
    (mi * l1s, l2d + mi * l2s)
}

/// Unsplit fused Dirichlet kernel without the source speed.
pub fn combined_full(k: f64, eta: f64, adjoint: bool, g: &PairGeom) -> C {
    let (h0, h1) = hankel01(g.r * k);
    let i4 = C::new(0.0, 0.25);
    let dl = if adjoint { -i4 * k * h1 * (g.a / g.r) } else { i4 * k * h1 * (g.b / g.r) };
    dl + C::new(0.0, -eta) * i4 * h0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.3), 1.0);
        assert_eq!(cutoff(2.5), 0.0);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = cutoff(1.0 + i as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn rejects_bad_wavenumber() {
        let c = crate::geometry::make_circle(1.0).unwrap();
        assert!(split_single(&c, 0.0, 1.0).is_err());
        assert!(split_hyper_diff(&c, -1.0).is_err());
    }
}
