//! Dense LU with partial pivoting and unrestarted GMRES.

use crate::dense::{dot_conj, norm2, Matrix};
use crate::error::{HbieError, Result};
use num_complex::Complex64;
use rayon::prelude::*;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lu,
    Gmres,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: Method,
    /// 0 for LU.
    pub iterations: usize,
    /// |b - A x| / |b|
    pub final_relative_residual: f64,
    /// Relative residual estimate after each GMRES step (empty for LU).
    pub residual_history: Vec<f64>,
}

/// Packed LU factors: unit lower and upper triangles share storage.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Matrix,
    pivots: Vec<usize>,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve(&self, b: &[C]) -> Result<Vec<C>> {
        let n = self.dim();
        if b.len() != n {
            return Err(HbieError::SizeMismatch { expected: n, got: b.len() });
        }
        let mut x = b.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            x.swap(i, p);
        }
        for i in 0..n {
            let row = self.lu.row(i);
            let s = row[..i].iter().zip(&x[..i]).fold(C::new(0.0, 0.0), |acc, (a, v)| acc + a * v);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = row[i + 1..].iter().zip(&x[i + 1..]).fold(C::new(0.0, 0.0), |acc, (a, v)| acc + a * v);
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}

pub fn lu_factor(a: &Matrix) -> Result<LuFactors> {
    if !a.is_square() {
        return Err(HbieError::SizeMismatch { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut pivots = Vec::with_capacity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let (p, pv) = (col..n).map(|i| (i, lu[(i, col)].norm())).fold((col, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if pv <= 1e-15 * scale {
            return Err(HbieError::Singular { column: col, pivot: pv });
        }
        pivots.push(p);
        if p != col {
            let data = lu.as_mut_slice();
            for j in 0..n {
                data.swap(col * n + j, p * n + j);
            }
        }
        let inv = 1.0 / lu[(col, col)];
        let (head, tail) = lu.as_mut_slice().split_at_mut((col + 1) * n);
        let prow = &head[col * n..col * n + n];
        tail.par_chunks_mut(n).for_each(|row| {
            let f = row[col] * inv;
            row[col] = f;
            if f != C::new(0.0, 0.0) {
                for (r, &u) in row[col + 1..].iter_mut().zip(&prow[col + 1..]) {
                    *r -= f * u;
                }
            }
        });
    }
    Ok(LuFactors { lu, pivots })
}

pub fn lu_solve(a: &Matrix, b: &[C]) -> Result<(Vec<C>, SolveReport)> {
    if b.len() != a.rows() {
        return Err(HbieError::SizeMismatch { expected: a.rows(), got: b.len() });
    }
    let x = lu_factor(a)?.solve(b)?;
    let report = SolveReport {
        method: Method::Lu,
        iterations: 0,
        final_relative_residual: relative_residual(a, &x, b),
        residual_history: Vec::new(),
    };
    Ok((x, report))
}

pub fn relative_residual(a: &Matrix, x: &[C], b: &[C]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<C> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
    let nb = norm2(b);
    if nb == 0.0 {
        norm2(&r)
    } else {
        norm2(&r) / nb
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Fail when the residual drops by less than this relative amount
    /// over `stall_window` iterations.
    pub stall_drop: f64,
    pub stall_window: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 5e-8, max_iter: 2000, stall_drop: 1e-14, stall_window: 20 }
    }
}

/// GMRES on x -> A x, zero initial guess, modified Gram-Schmidt with one
/// reorthogonalisation pass, Givens rotations on the Hessenberg matrix.
pub fn gmres_apply(apply: impl Fn(&[C]) -> Vec<C>, b: &[C], opts: &GmresOptions) -> Result<(Vec<C>, SolveReport)> {
    let n = b.len();
    let zero = C::new(0.0, 0.0);
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        let report = SolveReport { method: Method::Gmres, iterations: 0, final_relative_residual: 0.0, residual_history: vec![0.0] };
        return Ok((vec![zero; n], report));
    }
    let max_iter = opts.max_iter.min(n).max(1);
    let mut basis: Vec<Vec<C>> = vec![b.iter().map(|v| v / bnorm).collect()];
    // columns of the rotated Hessenberg matrix
    let mut h_cols: Vec<Vec<C>> = Vec::new();
    let mut rot: Vec<(C, C)> = Vec::new();
    let mut g = vec![C::new(bnorm, 0.0)];
    let mut history = vec![1.0];
    let mut converged = false;
    for j in 0..max_iter {
        let mut w = apply(&basis[j]);
        let mut h = vec![zero; j + 2];
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = dot_conj(v, &w);
                h[i] += c;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= c * vk;
                }
            }
        }
        let hn = norm2(&w);
        h[j + 1] = C::new(hn, 0.0);
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (a, bb) = (h[i], h[i + 1]);
            h[i] = c.conj() * a + s.conj() * bb;
            h[i + 1] = -s * a + c * bb;
        }
        let (a, bb) = (h[j], h[j + 1]);
        let r = (a.norm_sqr() + bb.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (C::new(1.0, 0.0), zero) } else { (a / r, bb / r) };
        h[j] = C::new(r, 0.0);
        h[j + 1] = zero;
        rot.push((c, s));
        let gj = g[j];
        g[j] = c.conj() * gj;
        g.push(-s * gj);
        h.truncate(j + 1);
        h_cols.push(h);
        let rel = g[j + 1].norm() / bnorm;
        history.push(rel);
        if rel <= opts.tol || hn <= 1e-300 {
            converged = true;
            break;
        }
        let it = j + 1;
        if it >= opts.stall_window {
            let before = history[it - opts.stall_window];
            if before - rel < opts.stall_drop * before {
                return Err(HbieError::Stagnation { iteration: it, residual: rel });
            }
        }
        basis.push(w.into_iter().map(|v| v / hn).collect());
    }
    let m = h_cols.len();
    let mut y = vec![zero; m];
    for i in (0..m).rev() {
        let mut s = g[i];
        for jj in i + 1..m {
            s -= h_cols[jj][i] * y[jj];
        }
        y[i] = s / h_cols[i][i];
    }
    let mut x = vec![zero; n];
    for (v, &c) in basis.iter().zip(&y) {
        for (xk, vk) in x.iter_mut().zip(v) {
            *xk += c * vk;
        }
    }
    let ax = apply(&x);
    let res: Vec<C> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
    let final_rel = norm2(&res) / bnorm;
    if !converged && final_rel > opts.tol {
        return Err(HbieError::NotConverged { iterations: m, residual: final_rel });
    }
    let report = SolveReport { method: Method::Gmres, iterations: m, final_relative_residual: final_rel, residual_history: history };
    Ok((x, report))
}

pub fn gmres_solve(a: &Matrix, b: &[C], opts: &GmresOptions) -> Result<(Vec<C>, SolveReport)> {
    if !a.is_square() || b.len() != a.rows() {
        return Err(HbieError::SizeMismatch { expected: a.rows(), got: b.len() });
    }
    gmres_apply(|v| a.matvec(v), b, opts)
}

/// LU below `lu_limit` unknowns, GMRES above.
pub fn solve_auto(a: &Matrix, b: &[C], lu_limit: usize, opts: &GmresOptions) -> Result<(Vec<C>, SolveReport)> {
    if a.rows() <= lu_limit {
        lu_solve(a, b)
    } else {
        gmres_solve(a, b, opts)
    }
}
