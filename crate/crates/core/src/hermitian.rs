//! Dense Hermitian matrices and their eigendecomposition.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative asymmetry below which input is silently symmetrized.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A dense square complex matrix with `M[i][j] == conj(M[j][i])` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// Index of the eigenvalue closest to `target`.
    pub fn nearest(&self, target: f64) -> usize {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if (v - target).abs() < (self.values[best] - target).abs() {
                best = k;
            }
        }
        best
    }

    /// Distance from eigenvalue `k` to the rest of the spectrum.
    pub fn gap(&self, k: usize) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &v)| (v - self.values[k]).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl HermitianMatrix {
    /// Validates and stores `m`, symmetrizing `(M + M*)/2` when the asymmetry is at
    /// rounding level and rejecting it otherwise.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let asymmetry = (&m - m.adjoint()).norm();
        let limit = SYMMETRY_TOL * m.norm();
        if asymmetry > limit {
            return Err(Error::NotHermitian { asymmetry, limit });
        }
        Ok(Self::hermitize(m))
    }

    /// Symmetrizes a matrix known to be Hermitian up to rounding, e.g. `K* Ω K`.
    pub(crate) fn hermitize(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        let data = (&m + m.adjoint()).scale(0.5);
        HermitianMatrix { data }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows are not all of length n".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(m)
    }

    /// Diagonal matrix; panics on an empty diagonal.
    pub fn diagonal(d: &[f64]) -> Self {
        assert!(!d.is_empty(), "diagonal must be nonempty");
        let n = d.len();
        let data = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        HermitianMatrix { data }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_inner(self) -> CMatrix {
        self.data
    }

    /// `M - lambda I`.
    pub fn shifted(&self, lambda: f64) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.dim() {
            data[(i, i)] -= Complex64::new(lambda, 0.0);
        }
        HermitianMatrix { data }
    }

    pub fn scaled(&self, c: f64) -> Self {
        HermitianMatrix {
            data: self.data.scale(c),
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Real part of the entries; for a real symmetric matrix this is the matrix itself.
    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.re)
    }

    pub fn eig(&self) -> Eigen {
        eig_herm(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_herm(self).values
    }

    pub fn spectral_radius(&self) -> f64 {
        eig_herm(self).spectral_radius()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.data[(rows[i], cols[j])])
    }

    /// Principal submatrix on `idx`, Hermitian by construction.
    pub fn principal(&self, idx: &[usize]) -> HermitianMatrix {
        HermitianMatrix {
            data: self.submatrix(idx, idx),
        }
    }

    /// `x* M x`, real for Hermitian `M`.
    pub fn quadratic_form(&self, x: &CVector) -> f64 {
        x.dotc(&(&self.data * x)).re
    }
}

impl std::ops::Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

/// Full eigendecomposition, eigenvalues ascending.
pub fn eig_herm(m: &HermitianMatrix) -> Eigen {
    let n = m.dim();
    if n == 1 {
        return Eigen {
            values: vec![m.data[(0, 0)].re],
            vectors: CMatrix::identity(1, 1),
        };
    }
    let decomposition = m.data.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .expect("eigenvalues of a finite Hermitian matrix are finite")
    });
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| decomposition.eigenvectors[(i, order[j])]);
    Eigen { values, vectors }
}

/// Multiplies `v` by a unit phase so that its largest-modulus entry is real positive.
pub fn fix_phase(v: &CVector) -> CVector {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let z = v[best];
    if z.norm() == 0.0 {
        return v.clone();
    }
    let phase = z.conj() / z.norm();
    v.map(|x| x * phase)
}

pub fn complex_from_real(v: &[f64]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Operator 2-norm of a rectangular complex matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0, |acc: f64, s| acc.max(*s))
}
