//! Closed-form spectra of the boundary operators on the unit circle.
//!
//! Every rotation-invariant operator is diagonal in e^{imt}; the multipliers
//! below are products of J_m, Y_m, I_m, K_m at argument k.

use crate::error::{HbieError, Result};
use crate::kernels::KernelKind;
use crate::nystrom::Formulation;
use crate::specfun::{cyl_ik_scaled, cyl_jy, CylValue, ModCylValue};
use crate::trig::FourierCoeffs;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};

type C = Complex64;

const HALF_PI_I: C = C::new(0.0, FRAC_PI_2);

/// Bessel data of order |m| at argument k.
#[derive(Debug, Clone, Copy)]
struct ModeData {
    jy: CylValue,
    ik: ModCylValue,
}

fn mode_data(k: f64, m: i64) -> Result<ModeData> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(HbieError::InvalidParameter(format!("wavenumber must be positive, got {k}")));
    }
    let n = u32::try_from(m.unsigned_abs()).map_err(|_| HbieError::Domain(format!("mode {m} too large")))?;
    Ok(ModeData { jy: cyl_jy(n, k)?, ik: cyl_ik_scaled(n, k)? })
}

impl ModeData {
    fn hj(&self) -> C {
        self.jy.hankel() * self.jy.j
    }
    fn hjp(&self) -> C {
        self.jy.hankel() * self.jy.jp
    }
    fn hpjp(&self) -> C {
        self.jy.hankel_prime() * self.jy.jp
    }
    // scaled I and K: exponentials cancel in the products
    fn ik(&self) -> f64 {
        self.ik.i * self.ik.kk
    }
    fn kip(&self) -> f64 {
        self.ik.kk * self.ik.ip
    }
    fn kpip(&self) -> f64 {
        self.ik.kp * self.ik.ip
    }
}

/// Multiplier of a single split operator on the unit circle (arclength
/// measure equals parameter measure there).
pub fn operator_multiplier(kind: KernelKind, k: f64, m: i64) -> Result<C> {
    let d = mode_data(k, m)?;
    Ok(match kind {
        KernelKind::Single { eta } => HALF_PI_I * d.hj() * eta,
        KernelKind::Double | KernelKind::DoubleAdj => HALF_PI_I * k * d.hjp() - 0.5,
        KernelKind::SingleImag => C::new(k * d.ik(), 0.0),
        KernelKind::DoubleImag | KernelKind::DoubleAdjImag => C::new(k * d.kip() - 0.5, 0.0),
        KernelKind::HyperDiff => k * (HALF_PI_I * d.hpjp() - d.kpip()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMultipliers {
    pub m: i64,
    /// of A (and A')
    pub lambda: C,
    /// of B_reg (and B'_reg)
    pub mu: C,
}

/// lambda_m = (pi/2)(i k H_m J'_m + eta_d H_m J_m),
/// mu_m = i eta_n (1 - (pi i/2) k H_m J'_m) + I_m K_m (pi i/2) k^2 H'_m J'_m.
pub fn multipliers(k: f64, eta_d: f64, eta_n: f64, m: i64) -> Result<DiskMultipliers> {
    let d = mode_data(k, m)?;
    let lambda = FRAC_PI_2 * (C::new(0.0, k) * d.hjp() + eta_d * d.hj());
    let mu = C::new(0.0, eta_n) * (1.0 - HALF_PI_I * k * d.hjp()) + d.ik() * HALF_PI_I * k * k * d.hpjp();
    // Y_m overflows once m is far beyond k
    if !(lambda.is_finite() && mu.is_finite()) {
        return Err(HbieError::Domain(format!("mode {m} overflows double range at k = {k}")));
    }
    Ok(DiskMultipliers { m, lambda, mu })
}

pub fn multiplier_table(k: f64, eta_d: f64, eta_n: f64, m_lo: i64, m_hi: i64) -> Result<Vec<DiskMultipliers>> {
    if m_lo > m_hi {
        return Err(HbieError::InvalidParameter(format!("empty mode range {m_lo}..={m_hi}")));
    }
    (m_lo..=m_hi).map(|m| multipliers(k, eta_d, eta_n, m)).collect()
}

/// Multiplier of the given formulation (lambda for Dirichlet, mu for Neumann).
pub fn formulation_multiplier(formulation: Formulation, k: f64, eta: f64, m: i64) -> Result<C> {
    let t = multipliers(k, eta, eta, m)?;
    Ok(if formulation.is_dirichlet() { t.lambda } else { t.mu })
}

/// Below this modulus a multiplier is treated as a resonance.
pub const RESONANCE_FLOOR: f64 = 1e-13;

/// Diagonal solve on the unit circle: divides each coefficient by lambda_m
/// (Dirichlet) or mu_m (Neumann).
pub fn solve_disk(k: f64, eta: f64, formulation: Formulation, rhs: &FourierCoeffs) -> Result<FourierCoeffs> {
    let n = rhs.n_modes() as i64;
    let mut out = FourierCoeffs::zeros(rhs.n_modes());
    for m in -n..=n {
        let c = rhs.get(m);
        let mult = formulation_multiplier(formulation, k, eta, m)?;
        if mult.norm() < RESONANCE_FLOOR {
            return Err(HbieError::Resonance { mode: m, modulus: mult.norm() });
        }
        out.set(m, c / mult);
    }
    Ok(out)
}

/// Plane wave e^{ik(cos a, sin a).x} on the unit circle:
/// coefficients sqrt(2 pi) i^m J_m(k) e^{-ima}.
pub fn plane_wave_trace(k: f64, angle: f64, n_modes: usize) -> Result<FourierCoeffs> {
    coeffs_from(k, angle, n_modes, |d| d.jy.j)
}

/// Radial derivative of the plane wave on the unit circle:
/// coefficients sqrt(2 pi) i^m k J'_m(k) e^{-ima}.
pub fn plane_wave_normal(k: f64, angle: f64, n_modes: usize) -> Result<FourierCoeffs> {
    coeffs_from(k, angle, n_modes, |d| k * d.jy.jp)
}

fn i_pow(m: i64) -> C {
    match m.rem_euclid(4) {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    }
}

fn coeffs_from(k: f64, angle: f64, n_modes: usize, f: impl Fn(&ModeData) -> f64) -> Result<FourierCoeffs> {
    let n = n_modes as i64;
    let mut out = FourierCoeffs::zeros(n_modes);
    for m in -n..=n {
        let d = mode_data(k, m)?;
        // J_{-m} = (-1)^m J_m, and the same for the derivative
        let parity = if m < 0 && m % 2 != 0 { -1.0 } else { 1.0 };
        out.set(m, TAU.sqrt() * i_pow(m) * (parity * f(&d)) * C::from_polar(1.0, -(m as f64) * angle));
    }
    Ok(out)
}

/// Exact density of the formulation for plane-wave incidence at `angle`,
/// truncated to |m| <= n_modes:
///   A:   v = -trace/lambda        (indirect, Dirichlet)
///   A':  du/dn = (normal - i eta trace)/lambda   (direct, Dirichlet)
///   B:   u = (i eta trace - S_ik normal)/mu      (direct, Neumann)
///   B':  v = -normal/mu           (indirect, Neumann)
pub fn exact_density(formulation: Formulation, k: f64, eta: f64, angle: f64, n_modes: usize) -> Result<FourierCoeffs> {
    let g = plane_wave_trace(k, angle, n_modes)?;
    let dn = plane_wave_normal(k, angle, n_modes)?;
    let n = n_modes as i64;
    let mut out = FourierCoeffs::zeros(n_modes);
    for m in -n..=n {
        let t = multipliers(k, eta, eta, m)?;
        let denom = if formulation.is_dirichlet() { t.lambda } else { t.mu };
        if denom.norm() < 1e-300 {
            return Err(HbieError::Resonance { mode: m, modulus: denom.norm() });
        }
        let v = match formulation {
            Formulation::A => -g.get(m) / denom,
            Formulation::APrime => (dn.get(m) - C::new(0.0, eta) * g.get(m)) / denom,
            Formulation::BReg => {
                let s_imag = mode_data(k, m)?.ik();
                (C::new(0.0, eta) * g.get(m) - s_imag * dn.get(m)) / denom
            }
            Formulation::BPrimeReg => -dn.get(m) / denom,
        };
        out.set(m, v);
    }
    Ok(out)
}

/// Normal derivative of the total field for sound-soft scattering by the
/// unit disk, from the separated series: coefficients
/// sqrt(2 pi) i^m (-2i/pi) e^{-ima} / H_m(k).
pub fn sound_soft_normal_derivative(k: f64, angle: f64, n_modes: usize) -> Result<FourierCoeffs> {
    let n = n_modes as i64;
    let mut out = FourierCoeffs::zeros(n_modes);
    for m in -n..=n {
        let d = mode_data(k, m)?;
        let h = d.jy.hankel();
        let h = if m < 0 && m % 2 != 0 { -h } else { h };
        let v = TAU.sqrt() * i_pow(m) * C::new(0.0, -2.0 / std::f64::consts::PI) * C::from_polar(1.0, -(m as f64) * angle) / h;
        out.set(m, v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseNormScan {
    /// Mode where |multiplier| is smallest.
    pub m_min: i64,
    pub min_abs: f64,
    /// 1/min_abs, the inverse norm on L2 restricted to the scanned modes.
    pub inverse_norm: f64,
}

/// Smallest |multiplier| over m_lo..=m_hi.
pub fn inverse_norm_scan(formulation: Formulation, k: f64, eta: f64, m_lo: i64, m_hi: i64) -> Result<InverseNormScan> {
    if m_lo > m_hi {
        return Err(HbieError::InvalidParameter(format!("empty mode range {m_lo}..={m_hi}")));
    }
    let mut best = InverseNormScan { m_min: m_lo, min_abs: f64::INFINITY, inverse_norm: 0.0 };
    for m in m_lo..=m_hi {
        let a = formulation_multiplier(formulation, k, eta, m)?.norm();
        if a < best.min_abs {
            best.m_min = m;
            best.min_abs = a;
        }
    }
    best.inverse_norm = 1.0 / best.min_abs;
    Ok(best)
}
