//! Small dense matrices over Q(i) with exact linear algebra.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::scalar::CQ;
use crate::error::{HeckeError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CQ>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![CQ::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CQ::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CQ) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        DenseMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| CQ::from_int(rows[i][j]))
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

    pub fn get(&self, i: usize, j: usize) -> &CQ {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CQ) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &CQ) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CQ::is_zero)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: &CQ) -> Self {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> CQ {
        (0..self.rows.min(self.cols)).fold(CQ::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn mul_vec(&self, v: &[CQ]) -> Vec<CQ> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(CQ::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j])))
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<CQ> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(HeckeError::BlockDimMismatch { left: self.cols, right: o.rows });
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(r, j) - &(&f * m.get(row, j));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(HeckeError::NotInvertible);
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                CQ::one()
            } else {
                CQ::zero()
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(HeckeError::NotInvertible);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
    }

    /// Exact positive-semidefiniteness of a Hermitian matrix by symmetric
    /// elimination: a zero pivot must have a zero row, a negative pivot fails.
    pub fn is_psd(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let mut m = self.clone();
        let n = m.rows;
        for k in 0..n {
            let pivot = m.get(k, k).re.clone();
            if pivot.is_negative() {
                return false;
            }
            if pivot.is_zero() {
                if (k + 1..n).any(|j| !m.get(k, j).is_zero()) {
                    return false;
                }
                continue;
            }
            let inv = BigRational::from_integer(1.into()) / &pivot;
            for i in k + 1..n {
                let f = m.get(i, k).scale(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = m.get(i, j) - &(&f * m.get(k, j));
                    m.set(i, j, v);
                }
            }
        }
        true
    }

    /// Complex f64 copy for spectral work.
    pub fn to_complex_f64(&self) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (re, im) = self.get(i, j).to_f64();
            nalgebra::Complex::new(re, im)
        })
    }
}

impl<'a> Add<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, o: &DenseMatrix) -> DenseMatrix {
        self.try_mul(o).expect("shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rank() {
        let m = DenseMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, DenseMatrix::identity(2));
        let s = DenseMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn psd_detection() {
        assert!(DenseMatrix::from_i64(&[vec![1, 1], vec![1, 1]]).is_psd());
        assert!(DenseMatrix::from_i64(&[vec![0, 0], vec![0, 3]]).is_psd());
        assert!(!DenseMatrix::from_i64(&[vec![1, 2], vec![2, 1]]).is_psd());
        assert!(!DenseMatrix::from_i64(&[vec![0, 1], vec![1, 5]]).is_psd());
        assert!(!DenseMatrix::from_i64(&[vec![1, 2], vec![0, 1]]).is_psd());
    }
}
