//! Dense complex linear algebra: square matrices, Kronecker products, the
//! Hermitian eigendecomposition and spectral propagators.
//!
//! Everything here is sized for the composite qubit-resonator space, which
//! stays below a few hundred dimensions, so storage is dense throughout.

use std::fmt;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest dimension any constructor in this crate accepts.
pub const DIM_CAP: usize = 1024;

/// Construction-time Hermiticity tolerance on max |A - A^H|.
pub const HERMITIAN_TOL: f64 = 1e-12;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.nrows() > DIM_CAP {
            return Err(Error::DimensionCap {
                dim: inner.nrows(),
                cap: DIM_CAP,
            });
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix(inner))
    }

    /// Builds from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        ComplexMatrix(DMatrix::from_diagonal(&d))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexMatrix(&self.0 - &other.0)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        ComplexMatrix(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |A - A^H|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Kronecker product `a ⊗ b`: entry `((i1,i2),(j1,j2))` is `a[i1,j1] * b[i2,j2]`
/// with the composite index `i1 * dim(b) + i2`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .filter(|&d| d <= DIM_CAP)
        .ok_or(Error::DimensionCap {
            dim: a.dim().saturating_mul(b.dim()),
            cap: DIM_CAP,
        })?;
    let out = a.0.kronecker(&b.0);
    debug_assert_eq!(out.nrows(), dim);
    Ok(ComplexMatrix(out))
}

/// A complex matrix verified Hermitian at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianOperator(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `<v|A|v>`, real for Hermitian `A`.
    pub fn expectation(&self, v: &DVector<C64>) -> f64 {
        v.dotc(&self.0.apply(v)).re
    }

    /// `tr(A rho)`.
    pub fn expectation_density(&self, rho: &DMatrix<C64>) -> f64 {
        let a = self.0.inner();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                acc += a[(i, j)] * rho[(j, i)];
            }
        }
        acc.re
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
    adjoint: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V diag(λ) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(lambda);
        }
        ComplexMatrix(scaled * &self.adjoint)
    }

    /// `e^{-iHt} psi` in O(dim^2).
    pub fn propagate_vector(&self, psi: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut coeffs = &self.adjoint * psi;
        for (c, &lambda) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= C64::from_polar(1.0, -lambda * t);
        }
        &self.eigenvectors * coeffs
    }

    /// `U rho U^H` with `U = e^{-iHt}`.
    pub fn propagate_density(&self, rho: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
        let u = propagator(self, t).into_inner();
        &u * rho * u.adjoint()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Fails with matrix diagnostics if the implicit QL iteration does not converge.
pub fn hermitian_eig(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    if dim > DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: DIM_CAP });
    }
    let raw = SymmetricEigen::try_new(h.matrix().inner().clone(), EIG_EPS, EIG_MAX_ITER).ok_or(
        Error::EigenFailed {
            dim,
            max_abs: h.matrix().max_abs(),
        },
    )?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| raw.eigenvalues[i].total_cmp(&raw.eigenvalues[j]).then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::<C64>::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &raw.eigenvectors.column(src));
    }
    let adjoint = eigenvectors.adjoint();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        adjoint,
    })
}

/// `U(t) = V exp(-iΛt) V^H`.
pub fn propagator(spec: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    let mut scaled = spec.eigenvectors.clone();
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * t);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    ComplexMatrix(scaled * &spec.adjoint)
}
