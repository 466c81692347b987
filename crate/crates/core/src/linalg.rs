//! Complex square matrices, admissibility checks, polar decomposition and
//! the branch-fixed `(det A)^{-1/2}`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{input, Error, Result};

pub type C64 = Complex64;

/// Admissibility tolerance on both residuals.
pub const ADMISSIBLE_TOL: f64 = 1e-10;
/// Reconstruction tolerance for the polar factors, relative to `max |A_ij|`.
pub const RECONSTRUCTION_TOL: f64 = 1e-12;
/// Smallest singular value accepted, relative to `max |A_ij|`.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A dense `d x d` complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major rows; rejects ragged, empty or
    /// non-finite input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(input("matrix must have at least one row"));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != d) {
            return Err(input(format!(
                "matrix is not square: row {bad} has {} entries, expected {d}",
                rows[bad].len()
            )));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(input("matrix has non-finite entries"));
        }
        Ok(Self(DMatrix::from_fn(d, d, |i, j| rows[i][j])))
    }

    pub fn from_fn(d: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(d, d, f))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn scalar(d: usize, c: C64) -> Self {
        Self(DMatrix::from_diagonal_element(d, d, c))
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let d = diag.len();
        Self::from_fn(d, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub(crate) fn from_na(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn as_na(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Column `l` (zero-based), i.e. `M e_l`.
    pub fn column(&self, l: usize) -> Vec<C64> {
        self.0.column(l).iter().copied().collect()
    }

    /// Row `l` (zero-based), i.e. `e_l^t M`.
    pub fn row(&self, l: usize) -> Vec<C64> {
        self.0.row(l).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.map(|z| z * c))
    }

    /// Entrywise real part, as a complex matrix.
    pub fn real_part(&self) -> Self {
        Self(self.0.map(|z| C64::new(z.re, 0.0)))
    }

    /// `(M + M^t) / 2`.
    pub fn symmetric_part(&self) -> Self {
        Self((&self.0 + self.0.transpose()) * C64::new(0.5, 0.0))
    }

    /// `(M + M^*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "vector length must match matrix dimension");
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn mul_real_vec(&self, v: &[f64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "vector length must match matrix dimension");
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Fails unless the smallest singular value exceeds
    /// `SINGULAR_TOL * max |M_ij|`.
    pub fn ensure_invertible(&self) -> Result<()> {
        let scale = self.max_abs();
        let min = self
            .singular_values()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if scale == 0.0 || min <= SINGULAR_TOL * scale {
            return Err(Error::Singular(format!(
                "smallest singular value {min:e} is below {:e}",
                SINGULAR_TOL * scale
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<Self> {
        self.ensure_invertible()?;
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or_else(|| Error::Singular("LU factorization failed".into()))
    }

    /// `M^{-1} v` by LU with partial pivoting, which keeps the error
    /// proportional to `cond(M)` rather than `cond(M) |M^{-1}| |v|`.
    pub fn solve(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(input(format!("vector has {} entries, expected {}", v.len(), self.dim())));
        }
        let rhs = DVector::from_column_slice(v);
        self.0
            .clone()
            .lu()
            .solve(&rhs)
            .map(|x| x.iter().copied().collect())
            .ok_or_else(|| Error::Singular("LU factorization failed".into()))
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub ok: bool,
    /// `max |A^*B + B^*A - 2I|`
    pub residual1: f64,
    /// `max |A^tB - B^tA|`
    pub residual2: f64,
}

pub fn check_admissible(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<AdmissibilityReport> {
    if a.dim() != b.dim() {
        return Err(input(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    let d = a.dim();
    let two = ComplexMatrix::scalar(d, C64::new(2.0, 0.0));
    let first = &(&(&a.adjoint() * b) + &(&b.adjoint() * a)) - &two;
    let second = &(&a.transpose() * b) - &(&b.transpose() * a);
    let residual1 = first.max_abs();
    let residual2 = second.max_abs();
    Ok(AdmissibilityReport {
        ok: residual1 <= tol && residual2 <= tol,
        residual1,
        residual2,
    })
}

/// `A = |A| U` with `|A| = sqrt(A A^*)`.
///
/// The SVD factors `A = W S V^*` are retained so that the powers
/// `|A|^p = W S^p W^*` used throughout are formed without explicit inversion.
#[derive(Clone, Debug)]
pub struct PolarForm {
    pub abs_a: ComplexMatrix,
    pub unitary: ComplexMatrix,
    left: DMatrix<C64>,
    sigma: Vec<f64>,
}

impl PolarForm {
    /// `|A|^p` for integer `p`.
    pub fn abs_pow(&self, p: i32) -> ComplexMatrix {
        let d = self.sigma.len();
        let scaled = DMatrix::from_fn(d, d, |i, j| self.left[(i, j)] * self.sigma[j].powi(p));
        ComplexMatrix::from_na(scaled * self.left.adjoint())
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }
}

pub fn polar_decompose(a: &ComplexMatrix) -> Result<PolarForm> {
    a.ensure_invertible()?;
    let svd = a.as_na().clone().svd(true, true);
    let (Some(w), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Singular("SVD did not produce singular vectors".into()));
    };
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let d = sigma.len();
    let ws = DMatrix::from_fn(d, d, |i, j| w[(i, j)] * sigma[j]);
    let abs_a = ws * w.adjoint();
    let unitary = &w * v_t;
    Ok(PolarForm {
        abs_a: ComplexMatrix::from_na(abs_a),
        unitary: ComplexMatrix::from_na(unitary),
        left: w,
        sigma,
    })
}

/// Principal square root with `arg` taken in `(-pi, pi]`.
///
/// A negative real argument always maps to `+i sqrt|z|`, whatever the sign of
/// its zero imaginary part.
pub fn principal_sqrt(z: C64) -> C64 {
    let mut arg = z.arg();
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    if z.im == 0.0 && z.re < 0.0 {
        arg = std::f64::consts::PI;
    }
    C64::from_polar(z.norm().sqrt(), 0.5 * arg)
}

/// `(det A)^{-1/2}` on the principal branch.
pub fn inv_sqrt_det(a: &ComplexMatrix) -> Result<C64> {
    a.ensure_invertible()?;
    let det = a.determinant();
    if det.norm() == 0.0 {
        return Err(Error::Singular("determinant vanishes".into()));
    }
    Ok(principal_sqrt(det).inv())
}
