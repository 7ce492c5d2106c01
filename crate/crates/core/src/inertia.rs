//! Inertia counts, Moore–Penrose pseudoinverses and congruence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, Eigen, HermitianMatrix};

/// Default relative rank tolerance; scaled by `max(1, spectral radius)`.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Eigenvalues with `tol < |λ| <= AMBIGUITY_FACTOR * tol` make the zero count unreliable.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

/// Eigenvalues whose classification is unreliable at the chosen tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmbiguousRank {
    pub eigenvalues: Vec<f64>,
}

/// `(i₋, i₀, i₊)` relative to an absolute tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inertia {
    pub minus: usize,
    pub zero: usize,
    pub plus: usize,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambiguous: Option<AmbiguousRank>,
}

impl Inertia {
    pub fn from_eigenvalues(values: &[f64], tol: f64) -> Self {
        assert!(tol >= 0.0, "tolerance must be nonnegative");
        let mut minus = 0;
        let mut zero = 0;
        let mut plus = 0;
        let mut doubtful = Vec::new();
        for &v in values {
            if v < -tol {
                minus += 1;
            } else if v > tol {
                plus += 1;
            } else {
                zero += 1;
            }
            let a = v.abs();
            if a > tol && a <= AMBIGUITY_FACTOR * tol {
                doubtful.push(v);
            }
        }
        Inertia {
            minus,
            zero,
            plus,
            tol,
            ambiguous: (!doubtful.is_empty()).then_some(AmbiguousRank {
                eigenvalues: doubtful,
            }),
        }
    }

    /// Inertia at `rel_tol * max(1, spectral radius)`.
    pub fn relative(m: &HermitianMatrix, rel_tol: f64) -> Self {
        let eig = m.eig();
        let tol = relative_tol_from(&eig, rel_tol);
        Self::from_eigenvalues(&eig.values, tol)
    }

    pub fn dim(&self) -> usize {
        self.minus + self.zero + self.plus
    }

    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous.is_some()
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.minus, self.zero, self.plus)
    }

    /// Converts a diagnostic into an error for callers that cannot tolerate it.
    pub fn require_unambiguous(self) -> Result<Self> {
        match &self.ambiguous {
            Some(a) => Err(Error::AmbiguousRank {
                eigenvalues: a.eigenvalues.clone(),
                tol: self.tol,
            }),
            None => Ok(self),
        }
    }
}

pub fn inertia(m: &HermitianMatrix, tol: f64) -> Inertia {
    Inertia::from_eigenvalues(&m.eigenvalues(), tol)
}

pub fn relative_tol(m: &HermitianMatrix, rel_tol: f64) -> f64 {
    relative_tol_from(&m.eig(), rel_tol)
}

pub(crate) fn relative_tol_from(eig: &Eigen, rel_tol: f64) -> f64 {
    rel_tol * eig.spectral_radius().max(1.0)
}

/// Moore–Penrose pseudoinverse: eigenvalues with `|λ| > tol` are inverted, the rest dropped.
pub fn pinv(m: &HermitianMatrix, tol: f64) -> HermitianMatrix {
    pinv_from_eigen(&m.eig(), tol)
}

pub(crate) fn pinv_from_eigen(eig: &Eigen, tol: f64) -> HermitianMatrix {
    let n = eig.values.len();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > tol {
            let v = eig.vectors.column(k);
            out += (&v * v.adjoint()).scale(1.0 / lambda);
        }
    }
    HermitianMatrix::hermitize(out)
}

/// `Sinv* M Sinv`; inertia is preserved when `Sinv` is invertible.
pub fn sylvester_conjugate(m: &HermitianMatrix, sinv: &CMatrix) -> Result<HermitianMatrix> {
    let n = m.dim();
    if sinv.nrows() != n || sinv.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "congruence matrix is {}x{}, expected {n}x{n}",
            sinv.nrows(),
            sinv.ncols()
        )));
    }
    let sv = sinv.clone().singular_values();
    let largest = sv.iter().fold(0.0f64, |a, s| a.max(*s));
    let smallest = sv.iter().fold(f64::INFINITY, |a, s| a.min(*s));
    let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
    if ratio <= 1e-10 {
        return Err(Error::SingularCongruence { ratio });
    }
    Ok(HermitianMatrix::hermitize(
        sinv.adjoint() * m.matrix() * sinv,
    ))
}

/// Rank of a set of vectors at relative singular-value threshold.
pub(crate) fn numerical_rank(m: &nalgebra::DMatrix<f64>, rel: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let largest = sv.iter().fold(0.0f64, |a, s| a.max(*s));
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * largest.max(1.0)).count()
}
