//! Matrices whose entries are Laurent polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::laurent::LaurentPoly;

/// Row-major matrix of [`LaurentPoly`] entries.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixLaurent {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl MatrixLaurent {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| LaurentPoly::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            }
        })
    }

    /// Constant matrix.
    pub fn from_constant(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| LaurentPoly::constant(m[(i, j)]))
    }

    /// Builds `Σ_k coeffs[k] z^(lowest + k)` from matrix coefficients.
    pub fn from_matrix_coeffs(lowest: i64, coeffs: &[DMatrix<Complex64>]) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Dimension("no coefficient matrices".into()));
        };
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|c| c.shape() != (rows, cols)) {
            return Err(Error::Dimension("coefficient matrices differ in shape".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            LaurentPoly::new(lowest, coeffs.iter().map(|c| c[(i, j)]).collect())
        }))
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

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn lowest(&self) -> i64 {
        self.entries
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.lowest())
            .min()
            .unwrap_or(0)
    }

    pub fn highest(&self) -> i64 {
        self.entries
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.highest())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient modulus over all entries.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        }))
    }

    /// Entrywise tilde followed by transposition, so that evaluating the
    /// result on the circle gives the numeric conjugate transpose.
    pub fn hermitian_conjugate(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).tilde())
    }

    /// `[M]_{m×m}`.
    pub fn leading_principal_submatrix(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.rows || m > self.cols {
            return Err(Error::Dimension(format!(
                "leading {m}x{m} block of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(m, m, |i, j| self.get(i, j).clone()))
    }

    /// Evaluates at a point of the unit circle.
    pub fn evaluate(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).evaluate(z)?;
            }
        }
        Ok(out)
    }

    /// Evaluates without the unit-circle check.
    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(z))
    }

    /// Values at every point of the size-`grid` uniform grid.
    pub fn sample(&self, grid: usize) -> Vec<DMatrix<Complex64>> {
        let per_entry: Vec<Vec<Complex64>> =
            self.entries.iter().map(|p| fourier::sample(p, grid)).collect();
        (0..grid)
            .map(|n| {
                DMatrix::from_fn(self.rows, self.cols, |i, j| per_entry[i * self.cols + j][n])
            })
            .collect()
    }

    /// Coefficient of `z^power` as a constant matrix.
    pub fn coeff_matrix(&self, power: i64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(power))
    }

    /// Relative coefficient-level Hermitian defect `max|S̃ᵀ - S| / max|S|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let h = self.hermitian_conjugate();
        self.entries
            .iter()
            .zip(&h.entries)
            .map(|(a, b)| a.max_diff(b))
            .fold(0.0, f64::max)
            / scale
    }

    /// Every entry restricted to powers in `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        self.map(|p| p.window(lo, hi))
    }

    /// Largest entrywise coefficient difference.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn leading_block_of_example() {
        let s = fixtures::singular_example();
        let s1 = s.leading_principal_submatrix(1).unwrap();
        assert_eq!(s1.get(0, 0), &LaurentPoly::from_real(-1, &[-8.0, -19.0, -8.0]));
        assert!(s.leading_principal_submatrix(3).is_err());
        assert!(s.leading_principal_submatrix(0).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let s = fixtures::singular_example();
        assert_eq!(MatrixLaurent::identity(2).mat_mul(&s).unwrap(), s);
        assert_eq!(s.mat_mul(&MatrixLaurent::identity(2)).unwrap(), s);
    }

    #[test]
    fn example_is_hermitian() {
        let s = fixtures::singular_example();
        assert_eq!(s.hermitian_conjugate(), s);
        assert_eq!(s.hermitian_defect(), 0.0);
    }

    #[test]
    fn dimension_errors() {
        let a = MatrixLaurent::zeros(2, 3);
        let b = MatrixLaurent::zeros(2, 3);
        assert!(matches!(a.mat_mul(&b), Err(Error::Dimension(_))));
        assert!(MatrixLaurent::new(2, 2, vec![LaurentPoly::one()]).is_err());
        assert!(a.add(&MatrixLaurent::zeros(3, 2)).is_err());
    }

    #[test]
    fn hermitian_conjugate_evaluates_to_adjoint() {
        let m = MatrixLaurent::new(
            1,
            2,
            vec![
                LaurentPoly::new(-1, vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, 0.0)]),
                LaurentPoly::new(0, vec![Complex64::new(0.0, 1.0), Complex64::new(3.0, -1.0)]),
            ],
        )
        .unwrap();
        let z = Complex64::from_polar(1.0, 0.7);
        let lhs = m.hermitian_conjugate().evaluate(z).unwrap();
        let rhs = m.evaluate(z).unwrap().adjoint();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn sampled_values_match_evaluation() {
        let s = fixtures::singular_example();
        let pts = fourier::grid_points(16);
        for (z, v) in pts.iter().zip(s.sample(16)) {
            assert!((s.evaluate(*z).unwrap() - v).norm() < 1e-12);
        }
    }
}
