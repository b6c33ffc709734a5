//! Odd periodic lattices t_j = 2 pi j/(2N+1), their discrete Fourier
//! transforms and the two trigonometric projections.
//!
//! Coefficients follow f(t) = (2 pi)^{-1/2} sum_m c_m e^{imt}, so the
//! parameter-measure L2 norm is the l2 norm of the coefficients.

use crate::error::{HbieError, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    n_modes: usize,
}

impl Lattice {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 1 {
            return Err(HbieError::InvalidParameter("lattice needs N >= 1".into()));
        }
        Ok(Lattice { n_modes })
    }

    /// From a node count, which must be odd.
    pub fn from_size(size: usize) -> Result<Self> {
        if size % 2 == 0 || size < 3 {
            return Err(HbieError::InvalidParameter(format!("lattice size must be odd and >= 3, got {size}")));
        }
        Lattice::new(size / 2)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn size(&self) -> usize {
        2 * self.n_modes + 1
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.size() as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.size()).map(|j| self.node(j)).collect()
    }

    /// Trapezoid weight 2 pi/(2N+1).
    pub fn weight(&self) -> f64 {
        TAU / self.size() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub lattice: Lattice,
    pub values: Vec<C>,
}

impl DensityGrid {
    pub fn new(lattice: Lattice, values: Vec<C>) -> Result<Self> {
        if values.len() != lattice.size() {
            return Err(HbieError::SizeMismatch { expected: lattice.size(), got: values.len() });
        }
        Ok(DensityGrid { lattice, values })
    }

    pub fn from_fn(lattice: Lattice, f: impl Fn(f64) -> C) -> Self {
        DensityGrid { lattice, values: lattice.nodes().into_iter().map(f).collect() }
    }

    /// Parameter-measure L2 norm sqrt(2 pi/(2N+1)) |v|.
    pub fn l2_norm(&self) -> f64 {
        (self.lattice.weight() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Value of the trigonometric interpolant at arbitrary t.
    pub fn interpolate(&self, t: f64) -> C {
        to_coeffs(self).eval(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    n_modes: usize,
    // index m + N
    coeffs: Vec<C>,
}

impl FourierCoeffs {
    pub fn zeros(n_modes: usize) -> Self {
        FourierCoeffs { n_modes, coeffs: vec![C::new(0.0, 0.0); 2 * n_modes + 1] }
    }

    /// Coefficients listed from m = -N to m = N.
    pub fn from_vec(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(HbieError::InvalidParameter("coefficient vector must have odd length".into()));
        }
        Ok(FourierCoeffs { n_modes: coeffs.len() / 2, coeffs })
    }

    pub fn from_fn(n_modes: usize, f: impl Fn(i64) -> C) -> Self {
        let n = n_modes as i64;
        FourierCoeffs { n_modes, coeffs: (-n..=n).map(f).collect() }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn get(&self, m: i64) -> C {
        if m.unsigned_abs() as usize > self.n_modes {
            return C::new(0.0, 0.0);
        }
        self.coeffs[(m + self.n_modes as i64) as usize]
    }

    pub fn set(&mut self, m: i64, v: C) {
        let i = (m + self.n_modes as i64) as usize;
        self.coeffs[i] = v;
    }

    pub fn as_slice(&self) -> &[C] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C)> + '_ {
        let n = self.n_modes as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, t: f64) -> C {
        let w = C::from_polar(1.0, t);
        let n = self.n_modes as i64;
        // Horner from the top mode down, then shift by e^{-iNt}
        let mut acc = C::new(0.0, 0.0);
        for m in (-n..=n).rev() {
            acc = acc * w + self.get(m);
        }
        acc * C::from_polar(1.0, -(n as f64) * t) / TAU.sqrt()
    }
}

/// Unnormalized forward DFT, X_k = sum_j x_j e^{-2 pi i jk/n}.
pub fn dft(x: &[C]) -> Vec<C> {
    let mut buf = x.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Unnormalized inverse DFT, x_j = sum_k X_k e^{2 pi i jk/n}.
pub fn idft(x: &[C]) -> Vec<C> {
    let mut buf = x.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

pub fn to_coeffs(grid: &DensityGrid) -> FourierCoeffs {
    let size = grid.lattice.size();
    let n = grid.lattice.n_modes();
    let spec = dft(&grid.values);
    let scale = TAU.sqrt() / size as f64;
    let mut out = FourierCoeffs::zeros(n);
    for (k, &c) in spec.iter().enumerate() {
        let m = if k <= n { k as i64 } else { k as i64 - size as i64 };
        out.set(m, c * scale);
    }
    out
}

pub fn to_grid(coeffs: &FourierCoeffs, lattice: Lattice) -> Result<DensityGrid> {
    if coeffs.n_modes() != lattice.n_modes() {
        return Err(HbieError::SizeMismatch { expected: lattice.n_modes(), got: coeffs.n_modes() });
    }
    let size = lattice.size();
    let mut spec = vec![C::new(0.0, 0.0); size];
    for (m, c) in coeffs.iter() {
        let k = m.rem_euclid(size as i64) as usize;
        spec[k] = c / TAU.sqrt();
    }
    Ok(DensityGrid { lattice, values: idft(&spec) })
}

/// Truncation to |m| <= n.
pub fn proj_galerkin(coeffs: &FourierCoeffs, n: usize) -> Result<FourierCoeffs> {
    if n > coeffs.n_modes() {
        return Err(HbieError::InvalidParameter(format!(
            "target degree {n} exceeds input degree {}",
            coeffs.n_modes()
        )));
    }
    Ok(FourierCoeffs::from_fn(n, |m| coeffs.get(m)))
}

/// Interpolation onto the N-lattice of the trigonometric polynomial whose
/// samples on a finer (2M+1)-lattice are given. Modes alias as
/// m -> m mod (2N+1) into [-N, N].
pub fn proj_colloc(fine: &DensityGrid, n: usize) -> Result<DensityGrid> {
    let lattice = Lattice::new(n)?;
    if fine.lattice.n_modes() < n {
        return Err(HbieError::InvalidParameter(format!(
            "input lattice degree {} is below target {n}",
            fine.lattice.n_modes()
        )));
    }
    let c = to_coeffs(fine);
    let size = lattice.size() as i64;
    let mut folded = FourierCoeffs::zeros(n);
    for (m, v) in c.iter() {
        let mu = (m + n as i64).rem_euclid(size) - n as i64;
        folded.set(mu, folded.get(mu) + v);
    }
    to_grid(&folded, lattice)
}

/// Interpolation of a function sampled directly at the N-lattice nodes.
pub fn proj_colloc_fn(f: impl Fn(f64) -> C, n: usize) -> Result<DensityGrid> {
    Ok(DensityGrid::from_fn(Lattice::new(n)?, f))
}

/// (sum |c_m|^2 (1 + (m/k)^2)^s)^{1/2}.
pub fn sobolev_norm(coeffs: &FourierCoeffs, s: f64, k: f64) -> f64 {
    coeffs.iter().map(|(m, c)| c.norm_sqr() * (1.0 + (m as f64 / k).powi(2)).powf(s)).sum::<f64>().sqrt()
}

/// Trigonometric interpolant of `grid` re-sampled on a lattice of degree `n`
/// (zero padding when refining, aliasing when coarsening).
pub fn resample(grid: &DensityGrid, n: usize) -> Result<DensityGrid> {
    if n >= grid.lattice.n_modes() {
        let c = to_coeffs(grid);
        let padded = FourierCoeffs::from_fn(n, |m| c.get(m));
        to_grid(&padded, Lattice::new(n)?)
    } else {
        proj_colloc(grid, n)
    }
}
