//! Integer-order cylinder functions of real argument.
//!
//! Orders 0 and 1 are also available in log-separated form,
//!
//!   Y0 = (2/pi) ln(x/2) J0 + y0h          K0 = -ln(x/2) I0 + k0h
//!   Y1 = (2/pi) ln(x/2) J1 - 2/(pi x) + y1h   K1 = 1/x + ln(x/2) I1 + k1h
//!
//! where the hatted remainders are entire functions. Kernel splitting relies on
//! these so that the logarithm never has to be subtracted numerically.

use crate::error::{HbieError, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest order accepted by [`cyl_jy`] and [`cyl_ik`].
pub const MAX_ORDER: u32 = 1000;

const SERIES_MAX_X: f64 = 2.0;
const ASYMPTOTIC_MIN_X: f64 = 25.0;
const RESCALE: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylValue {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

impl CylValue {
    pub fn hankel(&self) -> Complex64 {
        Complex64::new(self.j, self.y)
    }

    pub fn hankel_prime(&self) -> Complex64 {
        Complex64::new(self.jp, self.yp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModCylValue {
    pub i: f64,
    pub kk: f64,
    pub ip: f64,
    pub kp: f64,
}

/// J0, J1 together with the entire remainders of Y0, Y1.
#[derive(Debug, Clone, Copy)]
pub struct SplitJY01 {
    pub j0: f64,
    pub j1: f64,
    pub y0h: f64,
    pub y1h: f64,
}

impl SplitJY01 {
    pub fn y0(&self, x: f64) -> f64 {
        FRAC_2_PI * (0.5 * x).ln() * self.j0 + self.y0h
    }

    pub fn y1(&self, x: f64) -> f64 {
        FRAC_2_PI * (0.5 * x).ln() * self.j1 - FRAC_2_PI / x + self.y1h
    }
}

/// I0, I1 together with the entire remainders of K0, K1 (small argument only).
#[derive(Debug, Clone, Copy)]
pub struct SplitIK01 {
    pub i0: f64,
    pub i1: f64,
    pub k0h: f64,
    pub k1h: f64,
}

impl SplitIK01 {
    pub fn k0(&self, x: f64) -> f64 {
        -(0.5 * x).ln() * self.i0 + self.k0h
    }

    pub fn k1(&self, x: f64) -> f64 {
        1.0 / x + (0.5 * x).ln() * self.i1 + self.k1h
    }
}

fn check_args(n: u32, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(HbieError::Domain(format!("cylinder function argument must be positive and finite, got {x}")));
    }
    if n > MAX_ORDER {
        return Err(HbieError::Domain(format!("order {n} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// orders 0 and 1

fn series_jy01(x: f64) -> SplitJY01 {
    let q = 0.25 * x * x;
    let (mut j0, mut j1s) = (0.0, 0.0);
    let (mut y0s, mut y1s) = (0.0, 0.0);
    // term0 = (-q)^k/(k!)^2, term1 = (-q)^k/(k!(k+1)!)
    let mut t0: f64 = 1.0;
    let mut t1 = 1.0;
    let mut hk = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        let hk1 = hk + 1.0 / (kf + 1.0);
        j0 += t0;
        j1s += t1;
        if k > 0 {
            y0s -= hk * t0;
        }
        y1s += (hk + hk1 - 2.0 * EULER_GAMMA) * t1;
        if t0.abs() < 1e-18 && k > 2 {
            break;
        }
        t0 *= -q / ((kf + 1.0) * (kf + 1.0));
        t1 *= -q / ((kf + 1.0) * (kf + 2.0));
        hk = hk1;
    }
    let j1 = 0.5 * x * j1s;
    SplitJY01 {
        j0,
        j1,
        y0h: FRAC_2_PI * (EULER_GAMMA * j0 + y0s),
        y1h: -x / (2.0 * PI) * y1s,
    }
}

fn miller_jy01(x: f64) -> SplitJY01 {
    let start = x + 30.0 + 6.0 * x.cbrt();
    let m = 2 * ((start / 2.0).ceil() as usize);
    // j[n] for n = 0..=m+1; m <= 74 for x < 25
    let mut j = [0.0; 80];
    j[m] = 1e-30;
    for n in (1..=m).rev() {
        j[n - 1] = (2.0 * n as f64 / x) * j[n] - j[n + 1];
        if j[n - 1].abs() > RESCALE {
            for v in j[n - 1..m + 2].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=m).step_by(2) {
        norm += 2.0 * j[k];
    }
    for v in j[..m + 2].iter_mut() {
        *v /= norm;
    }
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=m / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
    }
    let (j0, j1) = (j[0], j[1]);
    SplitJY01 {
        j0,
        j1,
        y0h: FRAC_2_PI * EULER_GAMMA * j0 - 2.0 * FRAC_2_PI * s0,
        y1h: FRAC_2_PI / x * (1.0 - j0) + FRAC_2_PI * EULER_GAMMA * j1 + FRAC_2_PI * s1,
    }
}

/// Hankel large-argument expansion: returns (P, Q) for order nu.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let term = a;
        if term.abs() > prev {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 * p.abs().max(1.0) {
            break;
        }
        prev = term.abs();
        let kf = (k + 1) as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
    }
    (p, q)
}

fn asymptotic_jy01(x: f64) -> (f64, f64, f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // x - pi/4 and x - 3pi/4
    let (c0, s0) = ((c + s) * r, (s - c) * r);
    let (c1, s1) = ((s - c) * r, -(s + c) * r);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    (
        amp * (p0 * c0 - q0 * s0),
        amp * (p1 * c1 - q1 * s1),
        amp * (p0 * s0 + q0 * c0),
        amp * (p1 * s1 + q1 * c1),
    )
}

/// J0, J1 and the log-free remainders of Y0, Y1 at `x > 0`.
pub fn split_jy01(x: f64) -> SplitJY01 {
    if x <= SERIES_MAX_X {
        series_jy01(x)
    } else if x < ASYMPTOTIC_MIN_X {
        miller_jy01(x)
    } else {
        let (j0, j1, y0, y1) = asymptotic_jy01(x);
        let l = FRAC_2_PI * (0.5 * x).ln();
        SplitJY01 { j0, j1, y0h: y0 - l * j0, y1h: y1 - l * j1 + FRAC_2_PI / x }
    }
}

/// (J0, J1, Y0, Y1) at `x > 0`.
pub fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x >= ASYMPTOTIC_MIN_X {
        return asymptotic_jy01(x);
    }
    let s = split_jy01(x);
    (s.j0, s.j1, s.y0(x), s.y1(x))
}

/// Hankel functions of the first kind H0(x), H1(x).
pub fn hankel01(x: f64) -> (Complex64, Complex64) {
    let (j0, j1, y0, y1) = jy01(x);
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// I0, I1 and the log-free remainders of K0, K1. Intended for `x <= 2`; the
/// remainders are formed by cancellation beyond that.
pub fn split_ik01(x: f64) -> SplitIK01 {
    if x > SERIES_MAX_X {
        let (i0, i1) = i01(x);
        let (k0, k1) = k01(x);
        let l = (0.5 * x).ln();
        return SplitIK01 { i0, i1, k0h: k0 + l * i0, k1h: k1 - 1.0 / x - l * i1 };
    }
    let q = 0.25 * x * x;
    let (mut i0, mut i1s, mut k0s, mut k1s) = (0.0, 0.0, 0.0, 0.0);
    let mut t0: f64 = 1.0;
    let mut t1 = 1.0;
    let mut hk = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        let hk1 = hk + 1.0 / (kf + 1.0);
        i0 += t0;
        i1s += t1;
        k0s += hk * t0;
        k1s += (hk + hk1 - 2.0 * EULER_GAMMA) * t1;
        if t0 < 1e-18 * i0 && k > 2 {
            break;
        }
        t0 *= q / ((kf + 1.0) * (kf + 1.0));
        t1 *= q / ((kf + 1.0) * (kf + 2.0));
        hk = hk1;
    }
    SplitIK01 { i0, i1: 0.5 * x * i1s, k0h: -EULER_GAMMA * i0 + k0s, k1h: -0.25 * x * k1s }
}

/// Steed's continued fraction for (K0 e^x, K1 e^x), `x > 2`.
fn k01_scaled_cf2(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// (K0(x), K1(x)).
pub fn k01(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX_X {
        let s = split_ik01(x);
        (s.k0(x), s.k1(x))
    } else {
        let (k0, k1) = k01_scaled_cf2(x);
        let e = (-x).exp();
        (k0 * e, k1 * e)
    }
}

/// (K0(x) e^x, K1(x) e^x).
pub fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX_X {
        let (k0, k1) = k01(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_scaled_cf2(x)
    }
}

fn i01(x: f64) -> (f64, f64) {
    let v0 = ik_scaled_block(0, x);
    let e = x.exp();
    (v0.1 * e, v0.2 * e)
}

// ---------------------------------------------------------------------------
// general integer order

/// Reciprocal of the ratio J_n/J_{n-1} (sign = -1) or I_n/I_{n-1} (sign = +1)
/// by the modified Lentz algorithm.
fn cf1_inverse_ratio(n: u32, x: f64, sign: f64) -> f64 {
    let tiny = 1e-300;
    let b0 = 2.0 * n as f64 / x;
    let mut f = if b0 == 0.0 { tiny } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for m in 1..200_000u32 {
        let b = 2.0 * (n + m) as f64 / x;
        d = b + sign * d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + sign / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// Downward recurrence from order `top` to 0 starting at unit value with the
/// continued-fraction ratio. Returns (values at n-1, n, n+1 relative to scale,
/// value at 0 and 1 relative to the same scale) with `n+1 <= top`.
struct Downward {
    around: [f64; 3],
    zero: f64,
    one: f64,
}

fn downward(n: u32, x: f64, sign: f64) -> Downward {
    let top = n + 1;
    let g = cf1_inverse_ratio(top, x, sign);
    // v_top = 1, v_{top-1} = g
    let mut hi = 1.0;
    let mut lo = g;
    let mut around = [0.0; 3];
    around[2] = 1.0;
    if n == 0 {
        // top = 1: lo is order 0
        around[1] = lo;
        return Downward { around, zero: lo, one: hi };
    }
    let mut order = top - 1; // order of `lo`
    if order == n {
        around[1] = lo;
    }
    let mut one = if order == 1 { lo } else { f64::NAN };
    let mut zero = f64::NAN;
    while order > 0 {
        // J: v_{m-1} = (2m/x) v_m - v_{m+1}; I: v_{m-1} = (2m/x) v_m + v_{m+1}
        let next = (2.0 * order as f64 / x) * lo + sign * hi;
        hi = lo;
        lo = next;
        order -= 1;
        if lo.abs() > RESCALE {
            lo /= RESCALE;
            hi /= RESCALE;
            for v in around.iter_mut() {
                *v /= RESCALE;
            }
            if one.is_finite() {
                one /= RESCALE;
            }
        }
        if order + 1 == n {
            around[0] = lo;
        } else if order == n {
            around[1] = lo;
        }
        if order == 1 {
            one = lo;
        }
        if order == 0 {
            zero = lo;
        }
    }
    Downward { around, zero, one }
}

fn series_jn(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut pre = 1.0;
    for i in 1..=n {
        pre *= half / i as f64;
    }
    let q = -half * half;
    let mut term: f64 = 1.0;
    let mut sum: f64 = 0.0;
    for k in 0..60 {
        sum += term;
        if term.abs() < 1e-18 * sum.abs() && k > 0 {
            break;
        }
        let kf = (k + 1) as f64;
        term *= q / (kf * (kf + n as f64));
    }
    pre * sum
}

fn series_in(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut pre = 1.0;
    for i in 1..=n {
        pre *= half / i as f64;
    }
    let q = half * half;
    let mut term: f64 = 1.0;
    let mut sum: f64 = 0.0;
    for k in 0..60 {
        sum += term;
        if term < 1e-18 * sum && k > 0 {
            break;
        }
        let kf = (k + 1) as f64;
        term *= q / (kf * (kf + n as f64));
    }
    pre * sum
}

/// J_n and Y_n with derivatives for integer order `n <= MAX_ORDER`.
pub fn cyl_jy(n: u32, x: f64) -> Result<CylValue> {
    check_args(n, x)?;
    Ok(cyl_jy_unchecked(n, x))
}

fn y_forward(n: u32, x: f64, y0: f64, y1: f64) -> [f64; 3] {
    // returns Y_{n-1}, Y_n, Y_{n+1} (Y_{-1} = -Y_1)
    let mut prev = -y1;
    let mut cur = y0;
    for m in 0..n {
        let next = if m == 0 { y1 } else { (2.0 * m as f64 / x) * cur - prev };
        prev = cur;
        cur = next;
    }
    let next = if n == 0 { y1 } else { (2.0 * n as f64 / x) * cur - prev };
    [prev, cur, next]
}

fn cyl_jy_unchecked(n: u32, x: f64) -> CylValue {
    let (j0, j1, y0, y1) = jy01(x);
    let js: [f64; 3] = if x <= SERIES_MAX_X {
        let jm = if n == 0 { -j1 } else if n == 1 { j0 } else { series_jn(n - 1, x) };
        let jn = match n {
            0 => j0,
            1 => j1,
            _ => series_jn(n, x),
        };
        [jm, jn, series_jn(n + 1, x)]
    } else {
        let d = downward(n, x, -1.0);
        let scale = if j0.abs() >= j1.abs() { j0 / d.zero } else { j1 / d.one };
        let mut v = [d.around[0] * scale, d.around[1] * scale, d.around[2] * scale];
        if n == 0 {
            v = [-j1, j0, j1];
        } else if n == 1 {
            v[0] = j0;
            v[1] = j1;
        }
        v
    };
    let ys = y_forward(n, x, y0, y1);
    let (jp, yp) = if n == 0 { (-js[2], -ys[2]) } else { (0.5 * (js[0] - js[2]), 0.5 * (ys[0] - ys[2])) };
    CylValue { j: js[1], y: ys[1], jp, yp }
}

/// Scaled block (ratio-free) for modified functions: returns
/// (order-n values e^{-x} I_{n-1}, I_n, I_{n+1}; e^{x} K_{n-1}, K_n, K_{n+1}).
fn ik_scaled_triplets(n: u32, x: f64) -> ([f64; 3], [f64; 3]) {
    let (k0, k1) = k01_scaled(x);
    // K forward: K_{m+1} = K_{m-1} + (2m/x) K_m
    let mut prev = k1; // K_{-1} = K_1
    let mut cur = k0;
    for m in 0..n {
        let next = if m == 0 { k1 } else { prev + (2.0 * m as f64 / x) * cur };
        prev = cur;
        cur = next;
    }
    let next = if n == 0 { k1 } else { prev + (2.0 * n as f64 / x) * cur };
    let ks = [prev, cur, next];
    let is: [f64; 3] = if x <= SERIES_MAX_X {
        let e = (-x).exp();
        let im = if n == 0 { series_in(1, x) } else { series_in(n - 1, x) };
        [im * e, series_in(n, x) * e, series_in(n + 1, x) * e]
    } else {
        let d = downward(n, x, 1.0);
        // Wronskian I0 K1 + I1 K0 = 1/x, in scaled form the exponentials cancel.
        let i0 = (1.0 / x) / (k1 + k0 * d.one / d.zero);
        let scale = i0 / d.zero;
        let mut v = [d.around[0] * scale, d.around[1] * scale, d.around[2] * scale];
        if n == 0 {
            v[0] = v[2];
        }
        v
    };
    (is, ks)
}

fn ik_scaled_block(n: u32, x: f64) -> (f64, f64, f64) {
    let (is, _) = ik_scaled_triplets(n, x);
    (is[0], is[1], is[2])
}

fn mod_from_triplets(is: [f64; 3], ks: [f64; 3]) -> ModCylValue {
    ModCylValue { i: is[1], kk: ks[1], ip: 0.5 * (is[0] + is[2]), kp: -0.5 * (ks[0] + ks[2]) }
}

/// I_n and K_n with derivatives for integer order `n <= MAX_ORDER`.
pub fn cyl_ik(n: u32, x: f64) -> Result<ModCylValue> {
    check_args(n, x)?;
    let (is, ks) = ik_scaled_triplets(n, x);
    let ep = x.exp();
    let em = (-x).exp();
    let v = mod_from_triplets(is, ks);
    Ok(ModCylValue { i: v.i * ep, kk: v.kk * em, ip: v.ip * ep, kp: v.kp * em })
}

/// Exponentially scaled values: I_n e^{-x}, K_n e^{x} and the derivatives
/// scaled the same way.
pub fn cyl_ik_scaled(n: u32, x: f64) -> Result<ModCylValue> {
    check_args(n, x)?;
    let (is, ks) = ik_scaled_triplets(n, x);
    Ok(mod_from_triplets(is, ks))
}

/// Hankel function H^{(1)}_n(x) and its derivative.
pub fn hankel1(n: u32, x: f64) -> Result<(Complex64, Complex64)> {
    let v = cyl_jy(n, x)?;
    Ok((v.hankel(), v.hankel_prime()))
}

/// J_m(x), Y_m(x) and derivatives for all orders 0..=nmax at once.
pub fn cyl_jy_table(nmax: u32, x: f64) -> Result<Vec<CylValue>> {
    check_args(nmax, x)?;
    let (j0, j1, y0, y1) = jy01(x);
    let len = nmax as usize + 2;
    let mut j = vec![0.0; len];
    if x <= SERIES_MAX_X {
        j[0] = j0;
        j[1] = j1;
        for (m, v) in j.iter_mut().enumerate().skip(2) {
            *v = series_jn(m as u32, x);
        }
    } else {
        let top = nmax + 1;
        let g = cf1_inverse_ratio(top, x, -1.0);
        j[top as usize] = 1.0;
        j[top as usize - 1] = g;
        for m in (1..top as usize).rev() {
            j[m - 1] = (2.0 * m as f64 / x) * j[m] - j[m + 1];
            if j[m - 1].abs() > RESCALE {
                for v in j[m - 1..].iter_mut() {
                    *v /= RESCALE;
                }
            }
        }
        let scale = if j0.abs() >= j1.abs() { j0 / j[0] } else { j1 / j[1] };
        for v in j.iter_mut() {
            *v *= scale;
        }
        j[0] = j0;
        j[1] = j1;
    }
    let mut y = vec![0.0; len];
    y[0] = y0;
    y[1] = y1;
    for m in 1..len - 1 {
        y[m + 1] = (2.0 * m as f64 / x) * y[m] - y[m - 1];
    }
    let mut out = Vec::with_capacity(nmax as usize + 1);
    for m in 0..=nmax as usize {
        let (jp, yp) = if m == 0 { (-j[1], -y[1]) } else { (0.5 * (j[m - 1] - j[m + 1]), 0.5 * (y[m - 1] - y[m + 1])) };
        out.push(CylValue { j: j[m], y: y[m], jp, yp });
    }
    Ok(out)
}

/// Products I_m(x) K_m(x), I_m K'_m and I'_m K'_m style data for orders 0..=nmax:
/// returns the scaled values (exponentials cancel in any I*K product).
pub fn cyl_ik_scaled_table(nmax: u32, x: f64) -> Result<Vec<ModCylValue>> {
    check_args(nmax, x)?;
    (0..=nmax).map(|m| cyl_ik_scaled(m, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_and_j1_at_one() {
        let v0 = cyl_jy(0, 1.0).unwrap();
        let v1 = cyl_jy(1, 1.0).unwrap();
        assert!((v0.j - 0.7651976865579666).abs() < 1e-15);
        assert!((v1.j - 0.4400505857449335).abs() < 1e-15);
    }

    #[test]
    fn k0_and_i0_at_one() {
        let v = cyl_ik(0, 1.0).unwrap();
        assert!((v.kk - 0.42102443824070834).abs() < 1e-15);
        assert!((v.i - 1.2660658777520084).abs() < 1e-15);
    }

    #[test]
    fn small_argument_limits() {
        let v = cyl_jy(0, 1e-10).unwrap();
        assert!((v.j - 1.0).abs() < 1e-15);
        assert!(v.jp.abs() < 1e-9);
        let w = cyl_ik(3, 1e-8).unwrap();
        assert!(w.i.abs() < 1e-20);
    }

    #[test]
    fn j0_derivative_is_minus_j1() {
        for &x in &[0.1, 1.0, 3.7, 20.0, 80.0, 400.0] {
            let v0 = cyl_jy(0, x).unwrap();
            let v1 = cyl_jy(1, x).unwrap();
            assert_eq!(v0.jp, -v1.j);
        }
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(cyl_jy(0, 0.0).is_err());
        assert!(cyl_ik(2, -1.0).is_err());
        assert!(cyl_jy(MAX_ORDER + 1, 1.0).is_err());
    }

    #[test]
    fn table_matches_pointwise() {
        for &x in &[0.7, 5.0, 60.0] {
            let t = cyl_jy_table(40, x).unwrap();
            for (m, v) in t.iter().enumerate() {
                let p = cyl_jy(m as u32, x).unwrap();
                let scale = 1e-13 * (p.j.abs() + p.y.abs()).max(1e-300);
                assert!((v.j - p.j).abs() <= scale.max(1e-300), "J m={m} x={x}");
                assert!((v.y - p.y).abs() <= 1e-13 * p.y.abs().max(1.0), "Y m={m} x={x}");
            }
        }
    }
}
