//! Dense Nystrom matrices for the combined-field Dirichlet operators
//! A = 1/2 + K - i eta S, A' = 1/2 + K' - i eta S and the regularised
//! Neumann operators
//!   B_reg  = i eta (1/2 - K) + S_ik H_k,
//!   B'_reg = i eta (1/2 - K') + H_k S_ik.
//!
//! The Neumann products are wired through the Calderon identity at the
//! imaginary wavenumber, S_ik H_ik = -1/4 + K_ik^2, so that
//!   S_ik H_k = (k S_ik)(k^{-1}(H_k - H_ik)) - 1/4 + K_ik^2,
//! and every factor is one of the split kernels.

use crate::dense::Matrix;
use crate::error::{HbieError, Result};
use crate::geometry::{BoundaryPoint, Curve, MultiCurve};
use crate::kernels::{combined_diag, combined_full, combined_split, KernelKind, PairGeom, SplitKernel};
use crate::quadrature::{assemble_auto, assemble_with, kress_weights};
use crate::trig::Lattice;
use num_complex::Complex64;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    A,
    APrime,
    BReg,
    BPrimeReg,
}

impl Formulation {
    pub fn is_dirichlet(self) -> bool {
        matches!(self, Formulation::A | Formulation::APrime)
    }

    pub fn name(self) -> &'static str {
        match self {
            Formulation::A => "dirichlet-A",
            Formulation::APrime => "dirichlet-Aprime",
            Formulation::BReg => "neumann-Breg",
            Formulation::BPrimeReg => "neumann-Bprimereg",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formulation {
    type Err = HbieError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet-A" => Ok(Formulation::A),
            "dirichlet-Aprime" => Ok(Formulation::APrime),
            "neumann-Breg" => Ok(Formulation::BReg),
            "neumann-Bprimereg" => Ok(Formulation::BPrimeReg),
            _ => Err(HbieError::InvalidParameter(format!(
                "unknown formulation '{s}' (expected dirichlet-A, dirichlet-Aprime, neumann-Breg, neumann-Bprimereg)"
            ))),
        }
    }
}

/// One boundary component sampled on its lattice.
#[derive(Debug, Clone)]
pub struct ComponentGrid {
    pub curve: Curve,
    pub lattice: Lattice,
    pub frames: Vec<BoundaryPoint>,
}

/// All components with their global node ranges.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub components: Vec<ComponentGrid>,
    offsets: Vec<usize>,
}

impl Discretization {
    pub fn new(multi: &MultiCurve, n_per_component: &[usize]) -> Result<Self> {
        if n_per_component.len() != multi.len() {
            return Err(HbieError::SizeMismatch { expected: multi.len(), got: n_per_component.len() });
        }
        let mut components = Vec::new();
        let mut offsets = vec![0];
        for (curve, &n) in multi.components.iter().zip(n_per_component) {
            let lattice = Lattice::new(n)?;
            let frames = curve.frames(&lattice.nodes());
            offsets.push(offsets.last().unwrap() + lattice.size());
            components.push(ComponentGrid { curve: curve.clone(), lattice, frames });
        }
        Ok(Discretization { components, offsets })
    }

    pub fn uniform(multi: &MultiCurve, n: usize) -> Result<Self> {
        Discretization::new(multi, &vec![n; multi.len()])
    }

    pub fn single(curve: &Curve, n: usize) -> Result<Self> {
        Discretization::uniform(&MultiCurve::single(curve.clone()), n)
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn range(&self, c: usize) -> Range<usize> {
        self.offsets[c]..self.offsets[c + 1]
    }

    pub fn ranges(&self) -> Vec<Range<usize>> {
        (0..self.components.len()).map(|c| self.range(c)).collect()
    }

    pub fn multi(&self) -> MultiCurve {
        MultiCurve {
            components: self.components.iter().map(|g| g.curve.clone()).collect(),
            labels: self.components.iter().map(|g| g.curve.name().to_string()).collect(),
        }
    }

    /// Flattened frames with the trapezoid weight of their component.
    pub fn weighted_frames(&self) -> Vec<(BoundaryPoint, f64)> {
        self.components.iter().flat_map(|g| g.frames.iter().map(move |f| (*f, g.lattice.weight()))).collect()
    }

    /// Samples `f` at every node, component by component.
    pub fn sample(&self, f: impl Fn(&BoundaryPoint) -> C) -> Vec<C> {
        self.components.iter().flat_map(|g| g.frames.iter().map(&f).collect::<Vec<_>>()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct NystromSystem {
    pub matrix: Matrix,
    pub k: f64,
    pub eta: f64,
    pub formulation: Formulation,
    /// 1/2 for Dirichlet, i eta/2 - 1/4 for Neumann.
    pub c0: C,
    pub disc: Discretization,
}

impl NystromSystem {
    pub fn component_offsets(&self) -> Vec<Range<usize>> {
        self.disc.ranges()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(HbieError::InvalidParameter(format!("wavenumber must be positive, got {k}")));
    }
    Ok(())
}

/// 1/2 I + K - i eta S (variant A) or 1/2 I + K' - i eta S (variant A').
pub fn assemble_dirichlet_disc(disc: &Discretization, k: f64, eta: f64, variant: Formulation) -> Result<NystromSystem> {
    check_k(k)?;
    let adjoint = match variant {
        Formulation::A => false,
        Formulation::APrime => true,
        _ => return Err(HbieError::InvalidParameter(format!("{variant} is not a Dirichlet formulation"))),
    };
    if disc.components.iter().any(|g| g.lattice.n_modes() < 4) {
        return Err(HbieError::InvalidParameter("need N >= 4 per component".into()));
    }
    let total = disc.total();
    let mut matrix = Matrix::zeros(total, total);
    for (ci, gi) in disc.components.iter().enumerate() {
        let weights = kress_weights(gi.lattice.n_modes());
        let block = assemble_with(
            &gi.frames,
            &weights,
            |x, y| combined_split(k, eta, adjoint, &PairGeom::new(x, y), y.speed),
            |x| combined_diag(k, eta, x),
        );
        let ri = disc.range(ci);
        matrix.set_block(ri.start, ri.start, &block);
        for (cj, gj) in disc.components.iter().enumerate() {
            if cj == ci {
                continue;
            }
            let w = gj.lattice.weight();
            let block = Matrix::from_fn(gi.frames.len(), gj.frames.len(), |i, j| {
                let (x, y) = (&gi.frames[i], &gj.frames[j]);
                combined_full(k, eta, adjoint, &PairGeom::unsplit(x, y)) * (w * y.speed)
            });
            matrix.set_block(ri.start, disc.range(cj).start, &block);
        }
    }
    matrix.add_diagonal(C::new(0.5, 0.0));
    Ok(NystromSystem { matrix, k, eta, formulation: variant, c0: C::new(0.5, 0.0), disc: disc.clone() })
}

pub fn assemble_dirichlet(multi: &MultiCurve, k: f64, eta: f64, variant: Formulation, n_per_component: usize) -> Result<NystromSystem> {
    assemble_dirichlet_disc(&Discretization::uniform(multi, n_per_component)?, k, eta, variant)
}

/// Kress matrix of a single split operator on one curve.
pub fn operator_matrix(curve: &Curve, k: f64, kind: KernelKind, n: usize) -> Result<Matrix> {
    let kernel = SplitKernel::new(curve, k, kind)?;
    Ok(assemble_auto(&kernel, Lattice::new(n)?))
}

/// B_reg or B'_reg on a single closed curve.
pub fn assemble_neumann(curve: &Curve, k: f64, eta: f64, variant: Formulation, n: usize) -> Result<NystromSystem> {
    check_k(k)?;
    if n < 4 {
        return Err(HbieError::InvalidParameter("need N >= 4".into()));
    }
    let (dl, dl_imag) = match variant {
        Formulation::BReg => (KernelKind::Double, KernelKind::DoubleImag),
        Formulation::BPrimeReg => (KernelKind::DoubleAdj, KernelKind::DoubleAdjImag),
        _ => return Err(HbieError::InvalidParameter(format!("{variant} is not a Neumann formulation"))),
    };
    let kmat = operator_matrix(curve, k, dl, n)?;
    let s_imag = operator_matrix(curve, k, KernelKind::SingleImag, n)?;
    let hyper = operator_matrix(curve, k, KernelKind::HyperDiff, n)?;
    let k_imag = operator_matrix(curve, k, dl_imag, n)?;
    let mut matrix = if variant == Formulation::BReg { s_imag.matmul(&hyper) } else { hyper.matmul(&s_imag) };
    matrix.add_scaled(&k_imag.matmul(&k_imag), C::new(1.0, 0.0));
    matrix.add_scaled(&kmat, C::new(0.0, -eta));
    let c0 = C::new(-0.25, 0.5 * eta);
    matrix.add_diagonal(c0);
    Ok(NystromSystem { matrix, k, eta, formulation: variant, c0, disc: Discretization::single(curve, n)? })
}

/// Any formulation; Neumann requires a single component.
pub fn assemble_system(multi: &MultiCurve, k: f64, eta: f64, formulation: Formulation, n: usize) -> Result<NystromSystem> {
    if formulation.is_dirichlet() {
        assemble_dirichlet(multi, k, eta, formulation, n)
    } else {
        if multi.len() != 1 {
            return Err(HbieError::InvalidParameter("Neumann formulations need a connected obstacle (one component)".into()));
        }
        assemble_neumann(&multi.components[0], k, eta, formulation, n)
    }
}

/// N = ceil(ppw k c_max / 2) for a component of maximal speed `c_max`.
pub fn modes_for_ppw(ppw: f64, k: f64, c_max: f64) -> usize {
    ((ppw * k * c_max / 2.0).ceil() as usize).max(4)
}
