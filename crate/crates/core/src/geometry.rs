//! Closed parametrized boundary curves on [0, 2pi).
//!
//! Every component is oriented counterclockwise; the outward normal of the
//! enclosed obstacle is (y', -x')/|gamma'|.

use crate::error::{HbieError, Result};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

/// A 2pi-periodic smooth map into the plane together with its first three
/// derivatives.
pub trait Parametrization: Send + Sync + fmt::Debug {
    /// Position and derivatives 1..=3 at `t`.
    fn jet(&self, t: f64) -> [Point; 4];

    /// gamma(t) - gamma(s). Override when the plain difference loses digits
    /// for nearby parameters.
    fn chord(&self, t: f64, s: f64) -> Point {
        self.jet(t)[0] - self.jet(s)[0]
    }
}

// e^{imt} - e^{ims} = 2i sin(m(t - s)/2) e^{im(t + s)/2}
fn exp_chord(m: f64, t: f64, s: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * (0.5 * m * (t - s)).sin()) * Complex64::from_polar(1.0, 0.5 * m * (t + s))
}

/// Geometric data at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub pos: Point,
    pub tangent: Point,
    pub normal: Point,
    pub speed: f64,
    pub curvature: f64,
}

#[derive(Clone)]
pub struct Curve {
    param: Arc<dyn Parametrization>,
    rotation: f64,
    offset: Point,
    reversed: bool,
    name: String,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve").field("name", &self.name).field("offset", &self.offset).field("rotation", &self.rotation).finish()
    }
}

impl Curve {
    /// Wraps a parametrization; clockwise input is reversed (t -> -t) so the
    /// result is counterclockwise.
    pub fn new(param: Arc<dyn Parametrization>, name: impl Into<String>) -> Self {
        let mut c = Curve { param, rotation: 0.0, offset: Point::default(), reversed: false, name: name.into() };
        if c.signed_area() < 0.0 {
            c.reversed = true;
        }
        c
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn translated(&self, by: Point) -> Curve {
        let mut c = self.clone();
        c.offset = c.offset + by;
        c
    }

    /// Rigid rotation about the origin.
    pub fn rotated(&self, angle: f64) -> Curve {
        let mut c = self.clone();
        c.rotation += angle;
        c.offset = c.offset.rotated(angle);
        c
    }

    pub fn jet(&self, t: f64) -> [Point; 4] {
        let mut j = if self.reversed {
            let mut j = self.param.jet(-t);
            j[1] = -j[1];
            j[3] = -j[3];
            j
        } else {
            self.param.jet(t)
        };
        if self.rotation != 0.0 {
            for p in j.iter_mut() {
                *p = p.rotated(self.rotation);
            }
        }
        j[0] = j[0] + self.offset;
        j
    }

    pub fn eval(&self, t: f64) -> Point {
        self.jet(t)[0]
    }

    /// gamma(t) - gamma(s) without cancellation for t close to s.
    pub fn chord(&self, t: f64, s: f64) -> Point {
        let d = if self.reversed { self.param.chord(-t, -s) } else { self.param.chord(t, s) };
        if self.rotation != 0.0 {
            d.rotated(self.rotation)
        } else {
            d
        }
    }

    pub fn deriv1(&self, t: f64) -> Point {
        self.jet(t)[1]
    }

    pub fn deriv2(&self, t: f64) -> Point {
        self.jet(t)[2]
    }

    pub fn deriv3(&self, t: f64) -> Point {
        self.jet(t)[3]
    }

    pub fn frame(&self, t: f64) -> BoundaryPoint {
        let [p, d1, d2, _] = self.jet(t);
        let speed = d1.norm();
        BoundaryPoint {
            t,
            pos: p,
            tangent: (1.0 / speed) * d1,
            normal: Point::new(d1.y / speed, -d1.x / speed),
            speed,
            curvature: d1.cross(d2) / (speed * speed * speed),
        }
    }

    pub fn frames(&self, ts: &[f64]) -> Vec<BoundaryPoint> {
        ts.iter().map(|&t| self.frame(t)).collect()
    }

    /// max |gamma'| over a 4096-point lattice.
    pub fn c_max(&self) -> f64 {
        (0..4096).map(|i| self.deriv1(TAU * i as f64 / 4096.0).norm()).fold(0.0, f64::max)
    }

    pub fn min_speed(&self) -> f64 {
        (0..4096).map(|i| self.deriv1(TAU * i as f64 / 4096.0).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Half the contour integral of x dy - y dx (trapezoid, spectrally accurate).
    pub fn signed_area(&self) -> f64 {
        let n = 2048;
        let mut s = 0.0;
        for i in 0..n {
            let j = self.jet(TAU * i as f64 / n as f64);
            s += j[0].cross(j[1]);
        }
        0.5 * s * TAU / n as f64
    }

    pub fn arclength(&self) -> f64 {
        let n = 4096;
        (0..n).map(|i| self.deriv1(TAU * i as f64 / n as f64).norm()).sum::<f64>() * TAU / n as f64
    }

    /// Area-weighted centroid of the enclosed region.
    pub fn centroid(&self) -> Point {
        let n = 2048;
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let [p, d, _, _] = self.jet(TAU * i as f64 / n as f64);
            let w = p.cross(d);
            a += w;
            cx += p.x * w;
            cy += p.y * w;
        }
        Point::new(cx / (1.5 * a), cy / (1.5 * a))
    }

    /// Winding number of the curve around `p`, via the sampled polygon.
    pub fn winding_number(&self, p: Point) -> i32 {
        let n = 4096;
        let mut total = 0.0;
        let mut prev = self.eval(0.0) - p;
        for i in 1..=n {
            let cur = self.eval(TAU * i as f64 / n as f64) - p;
            total += prev.cross(cur).atan2(prev.dot(cur));
            prev = cur;
        }
        (total / TAU).round() as i32
    }

    pub fn contains(&self, p: Point) -> bool {
        self.winding_number(p) != 0
    }

    /// Sampled distance from `p` to the curve (lattice of `n` points refined
    /// by a few Newton steps on the nearest sample).
    pub fn distance_to(&self, p: Point) -> f64 {
        let n = 1024;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..n {
            let t = TAU * i as f64 / n as f64;
            let d = (self.eval(t) - p).norm();
            if d < best.0 {
                best = (d, t);
            }
        }
        let mut t = best.1;
        for _ in 0..8 {
            let [q, d1, d2, _] = self.jet(t);
            let r = q - p;
            let g = r.dot(d1);
            let h = d1.dot(d1) + r.dot(d2);
            if h <= 0.0 {
                break;
            }
            let step = (g / h).clamp(-TAU / n as f64, TAU / n as f64);
            t -= step;
        }
        best.0.min((self.eval(t) - p).norm())
    }

    /// Checks positivity of the speed on a 4096 lattice and closure at the seam.
    pub fn validate(&self) -> Result<()> {
        let smin = self.min_speed();
        if !(smin > 0.0) {
            return Err(HbieError::InvalidParameter(format!("curve {} has vanishing speed", self.name)));
        }
        let a = self.jet(0.0);
        let b = self.jet(TAU);
        if (a[0] - b[0]).norm() > 1e-8 * (1.0 + a[0].norm()) || (a[1] - b[1]).norm() > 1e-8 * (1.0 + a[1].norm()) {
            return Err(HbieError::InvalidParameter(format!("curve {} does not close", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MultiCurve {
    pub components: Vec<Curve>,
    pub labels: Vec<String>,
}

impl MultiCurve {
    pub fn single(c: Curve) -> Self {
        let label = c.name().to_string();
        MultiCurve { components: vec![c], labels: vec![label] }
    }

    pub fn new(components: Vec<Curve>, labels: Vec<String>) -> Result<Self> {
        if components.is_empty() || components.len() != labels.len() {
            return Err(HbieError::InvalidParameter("need one label per component and at least one component".into()));
        }
        let m = MultiCurve { components, labels };
        if m.components.len() > 1 && !(m.min_separation() > 0.0) {
            return Err(HbieError::InvalidParameter("boundary components intersect".into()));
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Sampled minimum distance between distinct components (infinite for one).
    pub fn min_separation(&self) -> f64 {
        let n = 512;
        let samples: Vec<Vec<Point>> =
            self.components.iter().map(|c| (0..n).map(|i| c.eval(TAU * i as f64 / n as f64)).collect()).collect();
        let mut best = f64::INFINITY;
        for a in 0..samples.len() {
            for b in a + 1..samples.len() {
                if self.components[a].contains(samples[b][0]) || self.components[b].contains(samples[a][0]) {
                    return 0.0;
                }
                for p in &samples[a] {
                    for q in &samples[b] {
                        best = best.min((*p - *q).norm());
                    }
                }
            }
        }
        best
    }

    pub fn contains(&self, p: Point) -> bool {
        self.components.iter().any(|c| c.contains(p))
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        self.components.iter().map(|c| c.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn arclength(&self) -> f64 {
        self.components.iter().map(Curve::arclength).sum()
    }

    pub fn c_max(&self) -> f64 {
        self.components.iter().map(Curve::c_max).fold(0.0, f64::max)
    }

    pub fn rotated(&self, angle: f64) -> MultiCurve {
        MultiCurve { components: self.components.iter().map(|c| c.rotated(angle)).collect(), labels: self.labels.clone() }
    }
}

// ---------------------------------------------------------------------------
// concrete parametrizations

#[derive(Debug, Clone)]
struct Circle {
    radius: f64,
}

impl Parametrization for Circle {
    fn jet(&self, t: f64) -> [Point; 4] {
        let (s, c) = t.sin_cos();
        let r = self.radius;
        [Point::new(r * c, r * s), Point::new(-r * s, r * c), Point::new(-r * c, -r * s), Point::new(r * s, -r * c)]
    }

    fn chord(&self, t: f64, s: f64) -> Point {
        let z = self.radius * exp_chord(1.0, t, s);
        Point::new(z.re, z.im)
    }
}

#[derive(Debug, Clone)]
struct Star;

impl Parametrization for Star {
    // (1 + 0.3 cos t)(cos t, sin t) = (cos t + 0.15 + 0.15 cos 2t, sin t + 0.15 sin 2t)
    fn jet(&self, t: f64) -> [Point; 4] {
        let (s1, c1) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        [
            Point::new(c1 + 0.15 + 0.15 * c2, s1 + 0.15 * s2),
            Point::new(-s1 - 0.3 * s2, c1 + 0.3 * c2),
            Point::new(-c1 - 0.6 * c2, -s1 - 0.6 * s2),
            Point::new(s1 + 1.2 * s2, -c1 - 1.2 * c2),
        ]
    }

    fn chord(&self, t: f64, s: f64) -> Point {
        let z = exp_chord(1.0, t, s) + 0.15 * exp_chord(2.0, t, s);
        Point::new(z.re, z.im)
    }
}

/// Band-limited curve z(t) = x + iy = sum_m c_m e^{imt}.
#[derive(Debug, Clone)]
pub struct FourierCurve {
    // c[m] for m = 0..=mmax and c_neg[m] = c_{-m} for m = 1..=mmax (index 0 unused)
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
    samples: usize,
}

impl FourierCurve {
    /// Trigonometric interpolant of `points` taken at t_j = 2 pi j / M. For
    /// even M the Nyquist coefficient is split evenly between +-M/2.
    pub fn from_samples(points: &[Point]) -> Result<Self> {
        let m = points.len();
        if m < 3 {
            return Err(HbieError::InvalidParameter("need at least three samples".into()));
        }
        let z: Vec<Complex64> = points.iter().map(|p| Complex64::new(p.x, p.y)).collect();
        let spec = crate::trig::dft(&z);
        let half = m / 2;
        let mut pos = vec![Complex64::new(0.0, 0.0); half + 1];
        let mut neg = vec![Complex64::new(0.0, 0.0); half + 1];
        for (k, &c) in spec.iter().enumerate() {
            let c = c / m as f64;
            if k < (m + 1) / 2 {
                pos[k] = c;
            }
            if k > m / 2 {
                neg[m - k] = c;
            }
            if m % 2 == 0 && k == half {
                pos[half] = 0.5 * c;
                neg[half] = 0.5 * c;
            }
        }
        Ok(FourierCurve::from_coefficients(pos, neg, m))
    }

    /// `pos[m] = c_m`, `neg[m] = c_{-m}`; trailing negligible modes are dropped.
    pub fn from_coefficients(mut pos: Vec<Complex64>, mut neg: Vec<Complex64>, samples: usize) -> Self {
        let len = pos.len().max(neg.len());
        pos.resize(len, Complex64::new(0.0, 0.0));
        neg.resize(len, Complex64::new(0.0, 0.0));
        let scale = pos.iter().chain(neg.iter()).map(|c| c.norm()).fold(0.0, f64::max);
        let mut keep = len;
        while keep > 2 && pos[keep - 1].norm() < 1e-18 * scale && neg[keep - 1].norm() < 1e-18 * scale {
            keep -= 1;
        }
        pos.truncate(keep);
        neg.truncate(keep);
        FourierCurve { pos, neg, samples }
    }

    /// Number of samples the curve was built from (the coefficient count).
    pub fn coefficient_count(&self) -> usize {
        self.samples
    }

    /// Highest retained |m|.
    pub fn max_mode(&self) -> usize {
        self.pos.len() - 1
    }

    pub fn coefficient(&self, m: i64) -> Complex64 {
        let a = m.unsigned_abs() as usize;
        if a >= self.pos.len() {
            return Complex64::new(0.0, 0.0);
        }
        if m >= 0 {
            self.pos[a]
        } else {
            self.neg[a]
        }
    }
}

impl Parametrization for FourierCurve {
    fn jet(&self, t: f64) -> [Point; 4] {
        let w = Complex64::from_polar(1.0, t);
        let wc = w.conj();
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        let mut zp = Complex64::new(1.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut refresh = 0;
        for m in 0..self.pos.len() {
            let mf = m as f64;
            let a = self.pos[m] * zp;
            let b = if m > 0 { self.neg[m] * zn } else { Complex64::new(0.0, 0.0) };
            // derivative p multiplies by (i m)^p for +m and (-i m)^p for -m
            acc[0] += a + b;
            let d = a - b;
            let s = a + b;
            acc[1] += Complex64::new(0.0, mf) * d;
            acc[2] += -(mf * mf) * s;
            acc[3] += Complex64::new(0.0, -mf * mf * mf) * d;
            zp *= w;
            zn *= wc;
            refresh += 1;
            if refresh == 64 {
                // recompute powers directly to stop rounding drift
                zp = Complex64::from_polar(1.0, (m + 1) as f64 * t);
                zn = zp.conj();
                refresh = 0;
            }
        }
        acc.map(|c| Point::new(c.re, c.im))
    }

    fn chord(&self, t: f64, s: f64) -> Point {
        let half = 0.5 * (t - s);
        if half.abs() > 0.5 {
            return self.jet(t)[0] - self.jet(s)[0];
        }
        let mid = 0.5 * (t + s);
        let w = Complex64::from_polar(1.0, mid);
        // sin(m half) by Reinsch's recurrence, stable for small arguments
        let lam = -4.0 * (0.5 * half).sin().powi(2);
        let (mut sn, mut dsn) = (0.0, half.sin());
        let mut zp = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 1..self.pos.len() {
            sn += dsn;
            zp = if m % 64 == 0 { Complex64::from_polar(1.0, m as f64 * mid) } else { zp * w };
            // c_m (e^{imt} - e^{ims}) + c_{-m} (e^{-imt} - e^{-ims})
            acc += Complex64::new(0.0, 2.0 * sn) * (self.pos[m] * zp - self.neg[m] * zp.conj());
            dsn += lam * sn;
        }
        Point::new(acc.re, acc.im)
    }
}

/// Circle of the given radius about the origin.
pub fn make_circle(radius: f64) -> Result<Curve> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(HbieError::InvalidParameter(format!("circle radius must be positive, got {radius}")));
    }
    Ok(Curve::new(Arc::new(Circle { radius }), format!("circle(r={radius})")))
}

/// (1 + 0.3 cos t)(cos t, sin t).
pub fn make_star() -> Curve {
    Curve::new(Arc::new(Star), "star")
}

pub const CAVITY_SAMPLES: usize = 400;

/// Crescent-shaped cavity: the trigonometric interpolant of 400 samples of
/// the mirrored erf profile.
pub fn make_cavity() -> Curve {
    let a = 0.2;
    let b = PI / 12.0;
    let theta = |s: f64| {
        b - a + 2.0 * (1.0 - (b - a) / PI) * (a / PI.sqrt() * (-(s / a) * (s / a)).exp() + s * libm::erf(s / a))
    };
    let r = |s: f64| 1.0 - a * libm::erf(s / a);
    let m = CAVITY_SAMPLES;
    let half = m / 2;
    let s_of = |j: usize| -PI / 2.0 + (j as f64 - 0.5) * PI / half as f64;
    let mut pts = Vec::with_capacity(m);
    for j in 1..=half {
        let s = s_of(j);
        pts.push(Point::new(r(s) * theta(s).sin(), r(s) * theta(s).cos()));
    }
    for j in half + 1..=m {
        let s = s_of(m - j + 1);
        pts.push(Point::new(-r(s) * theta(s).sin(), r(s) * theta(s).cos()));
    }
    let fc = FourierCurve::from_samples(&pts).expect("400 samples");
    Curve::new(Arc::new(fc), "cavity")
}

/// Half-diagonal of the base square, 4 sqrt(2) pi / 5.
pub const DIAMOND_HALF_DIAGONAL: f64 = 4.0 * SQRT_2 * PI / 5.0;
pub const DIAMOND_OFFSET: f64 = SQRT_2 * PI;
const DIAMOND_MODES: usize = 256;

/// The square with vertices (+-R, 0), (0, +-R), at constant speed, with its
/// corners rounded by a periodic Gaussian of parameter width `sigma`.
pub fn make_rounded_diamond(sigma: f64) -> Result<Curve> {
    if !(sigma > 0.0 && sigma < 0.5) {
        return Err(HbieError::InvalidParameter(format!("sigma must lie in (0, 0.5), got {sigma}")));
    }
    let r = DIAMOND_HALF_DIAGONAL;
    let verts = [Point::new(r, 0.0), Point::new(0.0, r), Point::new(-r, 0.0), Point::new(0.0, -r)];
    let side = PI / 2.0;
    // jumps of the piecewise-constant derivative at t_j = j pi/2
    let jumps: Vec<(f64, Point)> = (0..4)
        .map(|j| {
            let next = verts[(j + 1) % 4] - verts[j];
            let prev = verts[j] - verts[(j + 3) % 4];
            (j as f64 * side, (1.0 / side) * (next - prev))
        })
        .collect();
    let coef = |m: i64| -> Complex64 {
        if m == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let mf = m as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(tj, d) in &jumps {
            acc += Complex64::new(d.x, d.y) * Complex64::from_polar(1.0, -mf * tj);
        }
        -acc / (TAU * mf * mf) * (-0.5 * sigma * sigma * mf * mf).exp()
    };
    let pos: Vec<Complex64> = (0..=DIAMOND_MODES as i64).map(coef).collect();
    let neg: Vec<Complex64> = (0..=DIAMOND_MODES as i64).map(|m| coef(-m)).collect();
    let fc = FourierCurve::from_coefficients(pos, neg, 2 * DIAMOND_MODES);
    Ok(Curve::new(Arc::new(fc), format!("diamond(sigma={sigma})")))
}

/// Four rounded diamonds centred at (+-sqrt2 pi, +-sqrt2 pi).
pub fn make_four_diamonds(sigma: f64) -> Result<MultiCurve> {
    let base = make_rounded_diamond(sigma)?;
    let d = DIAMOND_OFFSET;
    let centers = [(d, d), (-d, d), (-d, -d), (d, -d)];
    let comps: Vec<Curve> = centers.iter().map(|&(x, y)| base.translated(Point::new(x, y))).collect();
    let labels = centers.iter().map(|&(x, y)| format!("diamond({:+.4},{:+.4})", x, y)).collect();
    MultiCurve::new(comps, labels)
}

/// Parses "circle:r=1", "star", "cavity", "diamonds:sigma=0.1" and
/// "fourier:<path>" (one "x,y" per line).
pub fn parse_geometry(spec: &str) -> Result<MultiCurve> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h.trim(), r.trim()),
        None => (spec.trim(), ""),
    };
    let kv = |key: &str, default: f64| -> Result<f64> {
        if rest.is_empty() {
            return Ok(default);
        }
        let mut val = None;
        for part in rest.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| HbieError::InvalidParameter(format!("expected key=value in geometry spec, got '{part}'")))?;
            if k.trim() != key {
                return Err(HbieError::InvalidParameter(format!("unknown geometry key '{}'", k.trim())));
            }
            val = Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| HbieError::InvalidParameter(format!("bad number '{}' for {key}", v.trim())))?,
            );
        }
        Ok(val.unwrap_or(default))
    };
    match head {
        "circle" => Ok(MultiCurve::single(make_circle(kv("r", 1.0)?)?)),
        "star" if rest.is_empty() => Ok(MultiCurve::single(make_star())),
        "cavity" if rest.is_empty() => Ok(MultiCurve::single(make_cavity())),
        "diamonds" => make_four_diamonds(kv("sigma", 0.1)?),
        "fourier" => {
            let text = std::fs::read_to_string(rest)?;
            let mut pts = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut it = line.split(',').map(|s| s.trim().parse::<f64>());
                match (it.next(), it.next(), it.next()) {
                    (Some(Ok(x)), Some(Ok(y)), None) => pts.push(Point::new(x, y)),
                    _ => {
                        return Err(HbieError::InvalidParameter(format!("{}: line {}: expected 'x,y'", rest, i + 1)));
                    }
                }
            }
            let fc = FourierCurve::from_samples(&pts)?;
            let c = Curve::new(Arc::new(fc), format!("fourier({rest})"));
            c.validate()?;
            Ok(MultiCurve::single(c))
        }
        _ => Err(HbieError::InvalidParameter(format!("unknown geometry '{spec}'"))),
    }
}
