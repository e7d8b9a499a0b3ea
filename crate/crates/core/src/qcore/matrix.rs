use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{ONE, ZERO};
use crate::{Error, Result};

/// Dense complex matrix.
///
/// Entries are addressed `(row, col)`; construction from flat data is
/// row-major. Equality is tolerance-based through [`ComplexMatrix::max_abs_diff`].
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                entries: entries.len(),
            });
        }
        Ok(ComplexMatrix(DMatrix::from_row_iterator(rows, cols, entries)))
    }

    /// Builds from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    rows: rows.len(),
                    cols,
                    entries: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(rows.len(), cols, entries)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::from_element(rows, cols, ZERO))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Self {
        ComplexMatrix(u * v.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix(&self.0 * factor)
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }

    /// Largest entry-wise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Worst Hermiticity violation as `(row, col, |M_ij - conj(M_ji)|)`.
    pub fn hermiticity_violation(&self) -> (usize, usize, f64) {
        let n = self.rows().min(self.cols());
        let mut worst = (0, 0, 0.0);
        for i in 0..n {
            for j in i..n {
                let dev = (self.0[(i, j)] - self.0[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        worst
    }

    /// Checks Hermiticity within `tol`, naming the worst offending pair on failure.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                found: self.cols(),
            });
        }
        let (row, col, deviation) = self.hermiticity_violation();
        if deviation > tol {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        Ok(())
    }

    /// Distance of `self† self` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = ComplexMatrix(self.0.adjoint() * &self.0);
        gram.max_abs_diff(&ComplexMatrix::identity(self.cols()))
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> DVector<Complex64> {
        self.0.column(j).into_owned()
    }

    pub fn as_inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix(m)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) ", self.rows(), self.cols())?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Kronecker product with `x` as the major (outer) index:
/// `(x⊗y)[(i,k),(j,l)] = x[i,j]·y[k,l]`.
pub fn tensor_product(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let (yr, yc) = (y.rows(), y.cols());
    ComplexMatrix::from_fn(x.rows() * yr, x.cols() * yc, |r, c| {
        x.get(r / yr, c / yc) * y.get(r % yr, c % yc)
    })
}

#[allow(dead_code)]
pub(crate) fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::i();
    [
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]).unwrap(),
        ComplexMatrix::from_diagonal(&[1.0, -1.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn row_major_layout() {
        let m = ComplexMatrix::from_row_major(2, 3, (0..6).map(|k| c(k as f64)).collect()).unwrap();
        assert_eq!(m.get(0, 2), c(2.0));
        assert_eq!(m.get(1, 0), c(3.0));
        assert!(ComplexMatrix::from_row_major(2, 2, vec![c(1.0)]).is_err());
    }

    #[test]
    fn identity_tensor_identity() {
        let k = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k.max_abs_diff(&ComplexMatrix::identity(6)), 0.0);
    }

    #[test]
    fn diagonal_tensor_diagonal() {
        let (a1, a2, b1, b2) = (2.0, -3.0, 0.5, 7.0);
        let k = tensor_product(
            &ComplexMatrix::from_diagonal(&[a1, a2]),
            &ComplexMatrix::from_diagonal(&[b1, b2]),
        );
        let expected = ComplexMatrix::from_diagonal(&[a1 * b1, a1 * b2, a2 * b1, a2 * b2]);
        assert_eq!(k.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn kronecker_order_matters() {
        let [sx, _, sz] = pauli();
        let zx = tensor_product(&sz, &sx);
        let xz = tensor_product(&sx, &sz);
        assert!(zx.max_abs_diff(&xz) > 0.5);
        zx.check_hermitian(0.0).unwrap();
        xz.check_hermitian(0.0).unwrap();
        // σz⊗σx[(0,0),(0,1)] = σz[0,0]·σx[0,1] = 1
        assert_eq!(zx.get(0, 1), c(1.0));
        // σx⊗σz[(0,0),(1,0)] = σx[0,1]·σz[0,0] = 1
        assert_eq!(xz.get(0, 2), c(1.0));
        assert_eq!(xz.get(0, 1), c(0.0));
    }

    #[test]
    fn hermiticity_reports_offending_pair() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.5], vec![0.0, 0.0, 1.0]])
            .unwrap();
        match m.check_hermitian(1e-10) {
            Err(Error::NotHermitian { row, col, deviation }) => {
                assert_eq!((row, col), (1, 2));
                assert!((deviation - 0.5).abs() < 1e-15);
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }
}
