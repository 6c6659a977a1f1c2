use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Range, Sub};

use num_complex::Complex64;

// only needed without std, where f64 has no inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type C64 = Complex64;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Dense complex matrix stored row-major.
///
/// Zero-sized dimensions are allowed: a `0 x 0` matrix is what remains after
/// peeling every eigenvalue off a unitary matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Checked constructor: length must match and every entry must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(alloc::format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        let m = CMat { rows, cols, data };
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![c64(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c64(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Real row-major entries. Panics on length mismatch.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols, "from_real: length mismatch");
        CMat { rows, cols, data: values.iter().map(|&v| c64(v, 0.0)).collect() }
    }

    /// Complex row-major entries. Panics on length mismatch.
    pub fn from_complex(rows: usize, cols: usize, values: &[C64]) -> Self {
        assert_eq!(values.len(), rows * cols, "from_complex: length mismatch");
        CMat { rows, cols, data: values.to_vec() }
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Jordan block `J_n(lambda)`: `lambda` on the diagonal, ones above it.
    pub fn jordan_block(n: usize, lambda: C64) -> Self {
        let mut m = Self::diag(&vec![lambda; n]);
        for i in 1..n {
            m[(i - 1, i)] = c64(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid("matrix has non-finite entries"))
        }
    }

    pub(crate) fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::invalid(alloc::format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        // scaled accumulation keeps tiny and huge entries from under/overflowing
        let amax = self.max_abs();
        if amax == 0.0 {
            return 0.0;
        }
        let sum: f64 = self.data.iter().map(|z| (z / amax).norm_sqr()).sum();
        amax * sum.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// `A - lambda I`.
    pub fn shifted(&self, lambda: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, values: &[C64]) {
        assert_eq!(values.len(), self.rows);
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)])
    }

    /// Rows and columns picked by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &CMat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    pub fn direct_sum(&self, other: &CMat) -> Self {
        Self::block_diag([self, other])
    }

    pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a CMat>) -> Self {
        let blocks: Vec<&CMat> = blocks.into_iter().collect();
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    /// Columns laid side by side; all must share the row count.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            m.set_col(j, col);
        }
        m
    }

    pub fn hstack(&self, other: &CMat) -> Self {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn matmul(&self, rhs: &CMat) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == c64(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self^H * rhs` without forming the adjoint.
    pub fn adjoint_mul(&self, rhs: &CMat) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_mul: dimension mismatch");
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self.data[k * self.cols + i].conj();
                if a == c64(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Integer power of a square matrix by repeated squaring.
    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)] == c64(0.0, 0.0)))
    }

    /// Frobenius distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        assert!(self.is_square());
        (self - &Self::identity(self.rows)).frobenius_norm()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a CMat> for &'a CMat {
    type Output = CMat;

    fn mul(self, rhs: &'a CMat) -> CMat {
        self.matmul(rhs)
    }
}

impl<'a> Add<&'a CMat> for &'a CMat {
    type Output = CMat;

    fn add(self, rhs: &'a CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CMat> for &'a CMat {
    type Output = CMat;

    fn sub(self, rhs: &'a CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_bad_length_and_nan() {
        assert!(CMat::new(2, 2, vec![c64(0.0, 0.0); 3]).is_err());
        assert!(CMat::new(1, 1, vec![c64(f64::NAN, 0.0)]).is_err());
        assert!(CMat::new(1, 1, vec![c64(0.0, f64::INFINITY)]).is_err());
        assert!(CMat::new(0, 0, vec![]).is_ok());
    }

    #[test]
    fn products_and_adjoint() {
        let a = CMat::from_complex(2, 2, &[c64(1.0, 1.0), c64(2.0, 0.0), c64(0.0, -1.0), c64(3.0, 0.5)]);
        let b = CMat::from_real(2, 1, &[1.0, -1.0]);
        let ab = &a * &b;
        assert_eq!(ab[(0, 0)], c64(-1.0, 1.0));
        assert_eq!(ab[(1, 0)], c64(-3.0, -1.5));
        let ahb = a.adjoint_mul(&a);
        let expected = a.adjoint().matmul(&a);
        assert!((&ahb - &expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let j = CMat::jordan_block(4, c64(0.5, 0.0));
        let p3 = j.pow(3);
        let direct = j.matmul(&j).matmul(&j);
        assert!((&p3 - &direct).frobenius_norm() < 1e-15);
        assert_eq!(CMat::jordan_block(3, c64(0.0, 0.0)).pow(3).max_abs(), 0.0);
    }

    #[test]
    fn block_diag_layout() {
        let a = CMat::from_real(1, 1, &[2.0]);
        let b = CMat::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let d = a.direct_sum(&b);
        assert_eq!(d.rows(), 3);
        assert_eq!(d[(0, 0)], c64(2.0, 0.0));
        assert_eq!(d[(2, 1)], c64(3.0, 0.0));
        assert_eq!(d[(0, 2)], c64(0.0, 0.0));
        let empty = CMat::zeros(0, 0);
        assert_eq!(empty.direct_sum(&a), a);
    }

    #[test]
    fn frobenius_handles_extreme_scales() {
        let m = CMat::from_real(1, 2, &[3e-200, 4e-200]);
        assert!((m.frobenius_norm() / 5e-200 - 1.0).abs() < 1e-14);
        let m = CMat::from_real(1, 2, &[3e200, 4e200]);
        assert!((m.frobenius_norm() / 5e200 - 1.0).abs() < 1e-14);
    }
}
