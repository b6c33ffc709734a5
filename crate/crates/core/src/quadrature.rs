//! Kress logarithmic quadrature on the odd lattice and the dense operator
//! matrices it produces.
//!
//! Integrating log(4 sin^2((t - tau)/2)) against the Lagrange basis of the
//! lattice uses  int log(4 sin^2(s/2)) e^{ims} ds = -2 pi/|m|  (m != 0, zero
//! for m = 0), which gives the circulant weights
//!   r_d = -(4 pi/(2N+1)) sum_{m=1}^{N} cos(2 pi m d/(2N+1))/m.

use crate::dense::Matrix;
use crate::geometry::BoundaryPoint;
use crate::kernels::{KernelKind, SplitKernel};
use crate::trig::{dft, Lattice};
use rayon::prelude::*;
use rustfft::FftPlanner;
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct KressWeights {
    pub lattice: Lattice,
    /// r[d] for d = 0..2N
    pub r: Arc<Vec<f64>>,
}

impl KressWeights {
    /// Weight between nodes i and j.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        let n = self.r.len();
        self.r[(i + n - j) % n]
    }
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_weights(n: usize) -> Vec<f64> {
    let size = 2 * n + 1;
    // sum_m cos(2 pi m d/size)/m = Re of the DFT of (0, 1, 1/2, ..., 1/N, 0, ...)
    let mut seq = vec![C::new(0.0, 0.0); size];
    for (m, v) in seq.iter_mut().enumerate().take(n + 1).skip(1) {
        *v = C::new(1.0 / m as f64, 0.0);
    }
    let spec = dft(&seq);
    let scale = -4.0 * PI / size as f64;
    spec.iter().map(|c| scale * c.re).collect()
}

/// Cached weights for the (2N+1)-point lattice.
pub fn kress_weights(n: usize) -> KressWeights {
    let lattice = Lattice::new(n.max(1)).expect("N >= 1");
    let r = {
        let mut map = cache().lock().unwrap();
        map.entry(lattice.n_modes()).or_insert_with(|| Arc::new(compute_weights(lattice.n_modes()))).clone()
    };
    KressWeights { lattice, r }
}

/// 2 pi/(2N+1).
pub fn trapezoid_weight(n: usize) -> f64 {
    TAU / (2 * n + 1) as f64
}

/// M[i][j] = r_{i-j} L1(t_i, t_j) + w L2(t_i, t_j), diagonal from the
/// analytic limits. `split(x, y)` and `diag(x)` return (L1, L2).
pub fn assemble_with<F, D>(frames: &[BoundaryPoint], weights: &KressWeights, split: F, diag: D) -> Matrix
where
    F: Fn(&BoundaryPoint, &BoundaryPoint) -> (C, C) + Sync,
    D: Fn(&BoundaryPoint) -> (C, C) + Sync,
{
    let n = frames.len();
    assert_eq!(n, weights.lattice.size(), "frames must match the lattice");
    let w = weights.lattice.weight();
    Matrix::from_fn(n, n, |i, j| {
        let (l1, l2) = if i == j { diag(&frames[i]) } else { split(&frames[i], &frames[j]) };
        l1 * weights.at(i, j) + l2 * w
    })
}

/// Dense matrix of the kernel on the lattice nodes.
pub fn assemble(kernel: &SplitKernel, lattice: Lattice) -> Matrix {
    let frames = kernel.curve().frames(&lattice.nodes());
    let weights = kress_weights(lattice.n_modes());
    assemble_with(&frames, &weights, |x, y| kernel.split_at(x, y), |x| kernel.diag_at(x))
}

/// Kress rule run on the lattice of size q(2N+1) and pulled back to the
/// (2N+1)-lattice through trigonometric interpolation: row i of the result
/// is the fine row at node q i with its spectrum truncated to |m| <= N.
/// Exact for densities of degree N whenever the fine rule is accurate.
pub fn assemble_upsampled(kernel: &SplitKernel, lattice: Lattice, q: usize) -> Matrix {
    assert!(q % 2 == 1, "upsampling factor must be odd");
    if q == 1 {
        return assemble(kernel, lattice);
    }
    let n = lattice.n_modes();
    let size = lattice.size();
    let fine = Lattice::from_size(q * size).expect("odd fine size");
    let fine_size = fine.size();
    let frames = kernel.curve().frames(&fine.nodes());
    let weights = kress_weights(fine.n_modes());
    let w = fine.weight();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(fine_size);
    let inv = planner.plan_fft_inverse(size);
    let mut out = Matrix::zeros(size, size);
    out.as_mut_slice().par_chunks_mut(size).enumerate().for_each(|(i, row)| {
        let fi = q * i;
        let x = &frames[fi];
        let mut buf: Vec<C> = (0..fine_size)
            .map(|l| {
                let (l1, l2) = if l == fi { kernel.diag_at(x) } else { kernel.split_at(x, &frames[l]) };
                l1 * weights.at(fi, l) + l2 * w
            })
            .collect();
        fwd.process(&mut buf);
        // M[i][j] = (1/(2N+1)) sum_{|m|<=N} F^[m] e^{2 pi i mj/(2N+1)}
        for m in 0..=n {
            row[m] = buf[m];
            if m > 0 {
                row[size - m] = buf[fine_size - m];
            }
        }
        inv.process(row);
        let s = 1.0 / size as f64;
        for v in row.iter_mut() {
            *v *= s;
        }
    });
    out
}

/// Odd upsampling factor that puts about `per_unit` fine nodes in each
/// unit of k * arclength, never below the coarse lattice.
pub fn upsampling_factor(lattice: Lattice, k: f64, c_max: f64, per_unit: f64) -> usize {
    let want = (TAU * k * c_max * per_unit / lattice.size() as f64).ceil().max(1.0) as usize;
    if want % 2 == 0 {
        want + 1
    } else {
        want
    }
}

/// Fine nodes per unit of k * arclength used for kernels with an ik part.
pub const IMAG_NODES_PER_UNIT: f64 = 16.0;

/// Kress matrix of `kernel`, upsampled when it contains a modified-Helmholtz
/// part whose decay length 1/k is below the lattice spacing.
pub fn assemble_auto(kernel: &SplitKernel, lattice: Lattice) -> Matrix {
    let has_imag = matches!(
        kernel.kind,
        KernelKind::SingleImag | KernelKind::DoubleImag | KernelKind::DoubleAdjImag | KernelKind::HyperDiff
    );
    if !has_imag {
        return assemble(kernel, lattice);
    }
    let q = upsampling_factor(lattice, kernel.k, kernel.curve().c_max(), IMAG_NODES_PER_UNIT);
    assemble_upsampled(kernel, lattice, q)
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn compute_gauss(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Cached n-point Gauss-Legendre rule.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    assert!(n >= 1, "Gauss rule needs at least one node");
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(compute_gauss(n))).clone()
}
