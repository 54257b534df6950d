//! Dense real matrices and eigenvalue-based definiteness tests.

use std::fmt::Write as _;

use faer::{Mat, Side};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Default PSD tolerance, relative to `max(1, |lambda_max|)`.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Dense row-major rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, actual: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, actual: other.rows });
        }
        Ok(from_faer(&(to_faer(self) * to_faer(other))))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        csv_rows(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

/// Dense symmetric matrix. Entries are kept exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Builds from the upper triangle (`i <= j`) of `f`, mirroring below.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Symmetrizes an arbitrary square matrix as `(A + A^T) / 2`.
    pub fn from_square(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(invalid(format!("matrix is {}x{}, not square", a.rows, a.cols)));
        }
        Ok(SymMatrix::from_fn(a.rows, |i, j| if i == j { a.get(i, i) } else { 0.5 * (a.get(i, j) + a.get(j, i)) }))
    }

    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        SymMatrix::from_square(&Matrix::from_row_major(dim, dim, data)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, data: self.data.iter().map(|v| c * v).collect() }
    }

    pub fn shifted(&self, c: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += c;
        }
        m
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &SymMatrix) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + c * b).collect();
        Ok(SymMatrix { dim: self.dim, data })
    }

    /// Principal submatrix on the given index list.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        csv_rows(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Parses the CSV produced by [`SymMatrix::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut data = Vec::new();
        let mut dim = None;
        for (line_no, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let row: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: line_no + 1, msg: e.to_string() })?;
            match dim {
                None => dim = Some(row.len()),
                Some(d) if d != row.len() => {
                    return Err(Error::Parse { line: line_no + 1, msg: format!("expected {d} columns") })
                }
                _ => {}
            }
            data.extend(row);
        }
        let dim = dim.ok_or(Error::Parse { line: 0, msg: "empty matrix".into() })?;
        if data.len() != dim * dim {
            return Err(Error::Parse { line: 0, msg: "matrix is not square".into() });
        }
        SymMatrix::from_row_major(dim, data)
    }
}

/// Full spectrum of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl EigenResult {
    fn band(&self, tol: f64) -> f64 {
        tol * self.max.abs().max(1.0)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min >= -self.band(tol)
    }

    pub fn is_pd(&self, tol: f64) -> bool {
        self.min > self.band(tol)
    }
}

/// Dense symmetric eigensolve; errors if the solver fails or returns non-finite values.
pub fn eigenvalues(a: &SymMatrix) -> Result<EigenResult> {
    if a.dim == 0 {
        return Err(invalid("eigenvalues of an empty matrix"));
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(invalid("matrix has non-finite entries"));
    }
    let m = Mat::<f64>::from_fn(a.dim, a.dim, |i, j| a.data[i * a.dim + j]);
    let mut values = m.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenFailure { dim: a.dim })?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure { dim: a.dim });
    }
    values.sort_by(f64::total_cmp);
    Ok(EigenResult { min: values[0], max: values[values.len() - 1], values })
}

pub fn lambda_min(a: &SymMatrix) -> Result<f64> {
    eigenvalues(a).map(|e| e.min)
}

/// `lambda_min >= -tol * max(1, |lambda_max|)`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    eigenvalues(a).map(|e| e.is_psd(tol))
}

/// `lambda_min > tol * max(1, |lambda_max|)`.
pub fn is_pd(a: &SymMatrix, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    eigenvalues(a).map(|e| e.is_pd(tol))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be finite and nonnegative, got {tol}")))
    }
}

/// `L * A * L^T`, re-symmetrized.
pub fn congruence(l: &Matrix, a: &SymMatrix) -> Result<SymMatrix> {
    if l.cols != a.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, actual: l.cols });
    }
    let ln = to_faer(l);
    let an = Mat::<f64>::from_fn(a.dim, a.dim, |i, j| a.data[i * a.dim + j]);
    let prod = &ln * &an * ln.transpose();
    SymMatrix::from_square(&from_faer(&prod))
}

/// `x^T A x`.
pub fn quadratic_form(x: &[f64], a: &SymMatrix) -> Result<f64> {
    if x.len() != a.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, actual: x.len() });
    }
    Ok((0..a.dim).map(|i| x[i] * (0..a.dim).map(|j| a.get(i, j) * x[j]).sum::<f64>()).sum())
}

fn to_faer(m: &Matrix) -> Mat<f64> {
    Mat::from_fn(m.rows, m.cols, |i, j| m.get(i, j))
}

fn from_faer(m: &Mat<f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// 17 significant digits; round-trips through `str::parse::<f64>`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_rows(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::new();
    for i in 0..rows {
        for j in 0..cols {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_real(f(i, j)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let e = eigenvalues(&SymMatrix::identity(3)).unwrap();
        assert_eq!(e.values.len(), 3);
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn two_by_two_off_diagonal() {
        let a = SymMatrix::from_row_major(2, vec![0.0, -0.125, -0.125, 0.0]).unwrap();
        let e = eigenvalues(&a).unwrap();
        assert!((e.min + 0.125).abs() < 1e-15 && (e.max - 0.125).abs() < 1e-15);
    }

    #[test]
    fn diagonal_spectrum_is_sorted_entries() {
        let e = eigenvalues(&SymMatrix::diagonal(&[3.0, -1.0, 2.0, 0.5])).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn zero_matrix_is_psd_not_pd() {
        let z = SymMatrix::zeros(4);
        assert!(is_psd(&z, DEFAULT_PSD_TOL).unwrap());
        assert!(!is_pd(&z, DEFAULT_PSD_TOL).unwrap());
    }

    #[test]
    fn weakly_dominant_matrix_is_psd() {
        let t = 1.0 / 3.0;
        let a = SymMatrix::from_row_major(3, vec![2.0 * t, t, t, t, t, 0.0, t, 0.0, t]).unwrap();
        // Closed-form spectrum {0, 1/3, 1}.
        let e = eigenvalues(&a).unwrap();
        assert!(e.min.abs() < 1e-13);
        assert!(is_psd(&a, DEFAULT_PSD_TOL).unwrap());
    }

    #[test]
    fn negative_diagonal_is_not_psd() {
        assert!(!is_psd(&SymMatrix::diagonal(&[0.5, -0.25]), DEFAULT_PSD_TOL).unwrap());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(eigenvalues(&SymMatrix::diagonal(&[f64::NAN])).is_err());
        assert!(is_psd(&SymMatrix::identity(1), -1.0).is_err());
    }

    #[test]
    fn congruence_by_scaled_identity() {
        let a = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(congruence(&Matrix::identity(2), &a).unwrap(), a);
        let two = Matrix::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 0.0 });
        assert_eq!(congruence(&two, &a).unwrap(), a.scaled(4.0));
        assert!(congruence(&Matrix::identity(3), &a).is_err());
    }

    #[test]
    fn quadratic_form_basics() {
        let a = SymMatrix::from_row_major(2, vec![1.5, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(quadratic_form(&[1.0, 0.0], &a).unwrap(), 1.5);
        assert_eq!(quadratic_form(&[0.0, 0.0], &a).unwrap(), 0.0);
        assert!(quadratic_form(&[1.0], &a).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let a = SymMatrix::from_row_major(2, vec![0.1, 1.0 / 3.0, 1.0 / 3.0, -7e-300]).unwrap();
        assert_eq!(SymMatrix::from_csv(&a.to_csv()).unwrap(), a);
    }
}
