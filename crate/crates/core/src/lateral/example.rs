//! The four-dimensional example family `S + t K(s)* K(s)` with
//! `S = diag(0, 1, −1, −2)` and a fixed rank-two `K₀` annihilating `e₁`.
//!
//! The eigenvalue 0 (eigenvector `e₁`) stays in the spectrum for every `t`, and the
//! spectral shift at 0 is 0, 1 and 2 at `t = 0.1, 1, 2.5`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hermitian::{complex_from_real, CMatrix, HermitianMatrix};
use crate::inertia::DEFAULT_REL_TOL;
use crate::lateral::PerturbationFamily;

pub const S_DIAGONAL: [f64; 4] = [0.0, 1.0, -1.0, -2.0];

pub const K0_ROWS: [[f64; 4]; 2] = [[0.0, 0.5, 0.5, 1.5], [0.0, 1.0, 2.0, 1.0]];

/// Parameter values at which the base point is a minimum, a saddle and a maximum.
pub const PROBE_TIMES: [f64; 3] = [0.1, 1.0, 2.5];

pub fn s() -> HermitianMatrix {
    HermitianMatrix::diagonal(&S_DIAGONAL)
}

pub fn k0() -> CMatrix {
    DMatrix::from_fn(2, 4, |i, j| Complex64::new(K0_ROWS[i][j], 0.0))
}

/// The family at coupling strength `t`, written with `Ω = t I₂`.
pub fn family(t: f64) -> Result<PerturbationFamily> {
    PerturbationFamily::new(
        s(),
        HermitianMatrix::identity(2).scaled(t),
        k0(),
        complex_from_real(&[1.0, 0.0, 0.0, 0.0]),
        0.0,
        DEFAULT_REL_TOL,
    )
}

/// Real Gaussian `2×4` direction matrices `K₁, K₂`.
pub fn random_directions<R: Rng + ?Sized>(rng: &mut R) -> [CMatrix; 2] {
    let mut draw = || {
        DMatrix::from_fn(2, 4, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0)
        })
    };
    [draw(), draw()]
}
