//! Hessian of the eigenvalue branch restricted to a finite set of real directions.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::inertia::{numerical_rank, Inertia};
use crate::lateral::{q_operator, PerturbationFamily};

#[derive(Clone, Debug, Serialize)]
pub struct RestrictedHessian {
    #[serde(skip)]
    pub matrix: DMatrix<f64>,
    pub morse_index: usize,
    pub nullity: usize,
    /// Real rank of `{Vⱼ f}`; equals the number of directions when the family is
    /// transversal to the operators annihilating `f`.
    pub projection_rank: usize,
}

/// Classification of a critical point from the signs of a real symmetric Hessian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

impl RestrictedHessian {
    pub fn classify(&self) -> CriticalKind {
        let d = self.matrix.nrows();
        if self.nullity > 0 {
            CriticalKind::Degenerate
        } else if self.morse_index == 0 {
            CriticalKind::Minimum
        } else if self.morse_index == d {
            CriticalKind::Maximum
        } else {
            CriticalKind::Saddle
        }
    }
}

impl std::fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CriticalKind::Minimum => "minimum",
            CriticalKind::Maximum => "maximum",
            CriticalKind::Saddle => "saddle",
            CriticalKind::Degenerate => "degenerate",
        })
    }
}

/// `Hᵢⱼ = Re⟨Vᵢ f, Q Vⱼ f⟩`: the quadratic term of `Λ` on the real span of the
/// directions, realized through the projection `V ↦ V f`.
pub fn restricted_hessian(
    fam: &PerturbationFamily,
    directions: &[CMatrix],
    rel_tol: f64,
) -> Result<RestrictedHessian> {
    let q = q_operator(fam, rel_tol)?;
    Ok(restricted_hessian_with(&q, fam.f(), directions, rel_tol))
}

pub fn restricted_hessian_with(
    q: &HermitianMatrix,
    f: &CVector,
    directions: &[CMatrix],
    rel_tol: f64,
) -> RestrictedHessian {
    let images: Vec<CVector> = directions.iter().map(|v| v * f).collect();
    let d = images.len();
    let qimages: Vec<CVector> = images.iter().map(|x| q.matrix() * x).collect();
    let raw = DMatrix::from_fn(d, d, |i, j| images[i].dotc(&qimages[j]).re);
    let matrix = (&raw + raw.transpose()) * 0.5;

    let (morse_index, nullity) = if d == 0 {
        (0, 0)
    } else {
        let h = HermitianMatrix::from_real(&matrix).expect("symmetrized real matrix");
        let inertia = Inertia::relative(&h, rel_tol);
        (inertia.minus, inertia.zero)
    };

    let k_aux = images.first().map_or(0, |x| x.len());
    let stacked = DMatrix::from_fn(2 * k_aux, d, |r, j| {
        if r < k_aux {
            images[j][r].re
        } else {
            images[j][r - k_aux].im
        }
    });
    RestrictedHessian {
        matrix,
        morse_index,
        nullity,
        projection_rank: numerical_rank(&stacked, 1e-8),
    }
}
