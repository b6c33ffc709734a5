//! Row-major dense complex matrices.

use crate::error::{HbieError, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{Read, Write};
use std::ops::{Index, IndexMut};

type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C + Sync) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        m.data.par_chunks_mut(cols.max(1)).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        });
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HbieError::SizeMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[C]) -> Vec<C> {
        assert_eq!(x.len(), self.cols, "matvec dimension");
        self.data
            .par_chunks(self.cols.max(1))
            .map(|row| row.iter().zip(x).fold(C::new(0.0, 0.0), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension");
        let mut out = Matrix::zeros(self.rows, other.cols);
        let oc = other.cols;
        out.data.par_chunks_mut(oc.max(1)).enumerate().for_each(|(i, orow)| {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            for (kk, &a) in arow.iter().enumerate() {
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[kk * oc..(kk + 1) * oc];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        });
        out
    }

    pub fn scale(&mut self, s: C) {
        for v in self.data.iter_mut() {
            *v *= s;
        }
    }

    /// self += s * other
    pub fn add_scaled(&mut self, other: &Matrix, s: C) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn add_diagonal(&mut self, s: C) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += s;
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Copies `block` into the sub-matrix starting at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            let dst = &mut self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + block.cols];
            dst.copy_from_slice(block.row(i));
        }
    }

    /// Binary dump: "HBIE", u32 rows, u32 cols, u32 reserved, then
    /// little-endian f64 (re, im) pairs row by row.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        w.write_all(b"HBIE")?;
        w.write_all(&(self.rows as u32).to_le_bytes())?;
        w.write_all(&(self.cols as u32).to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.data.len() * 16);
        for v in &self.data {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<Matrix> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        if &head[0..4] != b"HBIE" {
            return Err(HbieError::Io("missing HBIE magic".into()));
        }
        let rows = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
        let cols = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
        let mut raw = vec![0u8; rows * cols * 16];
        r.read_exact(&mut raw)?;
        let data = raw
            .chunks_exact(16)
            .map(|c| C::new(f64::from_le_bytes(c[0..8].try_into().unwrap()), f64::from_le_bytes(c[8..16].try_into().unwrap())))
            .collect();
        Matrix::from_rows(rows, cols, data)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm2(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dot_conj(x: &[C], y: &[C]) -> C {
    x.iter().zip(y).fold(C::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let m = Matrix::from_fn(3, 2, |i, j| C::new(i as f64, -(j as f64) * 0.5));
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 6 * 16);
        assert_eq!(&buf[0..4], b"HBIE");
        assert_eq!(Matrix::read_binary(&buf[..]).unwrap(), m);
    }

    #[test]
    fn matmul_against_matvec() {
        let a = Matrix::from_fn(4, 3, |i, j| C::new((i * 3 + j) as f64, 1.0));
        let b = Matrix::from_fn(3, 2, |i, j| C::new(i as f64 - j as f64, 0.5));
        let ab = a.matmul(&b);
        for j in 0..2 {
            let col: Vec<C> = (0..3).map(|i| b[(i, j)]).collect();
            let v = a.matvec(&col);
            for i in 0..4 {
                assert!((v[i] - ab[(i, j)]).norm() < 1e-12);
            }
        }
    }
}
