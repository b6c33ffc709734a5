//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex
//! integrands, used as a brute-force reference for panel integrals.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

type C = Complex64;

// Kronrod nodes on [0, 1] (symmetric), 15-point weights and embedded 7-point Gauss weights.
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Piece {
    a: f64,
    b: f64,
    value: C,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

fn gk15(f: &mut impl FnMut(f64) -> C, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let s = f(c - h * XK[i]) + f(c + h * XK[i]);
        k += s * WK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Piece { a, b, value: k * h, err: ((k - g) * h).norm() }
}

/// Integral of f over [a, b] until the summed error estimate is below
/// max(rel |I|, abs), or `max_pieces` is reached.
pub fn integrate(mut f: impl FnMut(f64) -> C, a: f64, b: f64, rel: f64, abs: f64) -> C {
    let max_pieces = 2000;
    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b);
    let (mut total, mut err) = (first.value, first.err);
    heap.push(first);
    while err > (rel * total.norm()).max(abs) && heap.len() < max_pieces && err.is_finite() {
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        let (l, r) = (gk15(&mut f, worst.a, m), gk15(&mut f, m, worst.b));
        total += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    heap.iter().map(|p| p.value).sum()
}

/// Same, over consecutive intervals between sorted breakpoints.
pub fn integrate_pieces(mut f: impl FnMut(f64) -> C, breaks: &[f64], rel: f64, abs: f64) -> C {
    breaks.windows(2).filter(|w| w[1] > w[0]).map(|w| integrate(&mut f, w[0], w[1], rel, abs)).sum()
}
