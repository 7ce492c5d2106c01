use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::inertia::{relative_tol_from, Inertia};
use crate::lateral::PerturbationFamily;

/// Minimum overlap between the numerically detected kernel of `H₀ − λ°` and `f`.
pub const KERNEL_OVERLAP_MIN: f64 = 1.0 - 1e-8;

/// `K = K_ψ + K_a` with `K_ψ = ψ f*` (so `K_ψ x = ⟨f, x⟩ ψ`) and `K_a f = 0`.
#[derive(Clone, Debug)]
pub struct LateralDecomposition {
    pub psi: CVector,
    pub k_psi: CMatrix,
    pub k_a: CMatrix,
}

pub fn decompose_k(k: &CMatrix, f: &CVector) -> LateralDecomposition {
    let psi = k * f;
    let k_psi = &psi * f.adjoint();
    let k_a = k - &k_psi;
    LateralDecomposition { psi, k_psi, k_a }
}

/// `σ = i₋(S − λ°) − i₋(H₀ − λ°)`; each inertia at `rel_tol` relative to its own matrix.
pub fn spectral_shift(fam: &PerturbationFamily, rel_tol: f64) -> Result<i64> {
    let below_s = Inertia::relative(&fam.s().shifted(fam.lambda0()), rel_tol).require_unambiguous()?;
    let below_h0 = Inertia::relative(&fam.h0().shifted(fam.lambda0()), rel_tol).require_unambiguous()?;
    Ok(below_s.minus as i64 - below_h0.minus as i64)
}

/// `(H₀ − λ°)⁺`, after checking that its kernel is exactly `span{f}`.
pub(crate) fn reduced_resolvent(fam: &PerturbationFamily, rel_tol: f64) -> Result<HermitianMatrix> {
    let eig = fam.h0().shifted(fam.lambda0()).eig();
    let tol = relative_tol_from(&eig, rel_tol);
    let kernel: Vec<usize> = (0..eig.values.len())
        .filter(|&j| eig.values[j].abs() <= tol)
        .collect();
    if kernel.len() != 1 {
        return Err(Error::SimplicityViolated {
            nullity: kernel.len(),
        });
    }
    let overlap = eig.vector(kernel[0]).dotc(fam.f()).norm();
    if overlap < KERNEL_OVERLAP_MIN {
        return Err(Error::SimplicityViolated { nullity: 1 });
    }
    Ok(crate::inertia::pinv_from_eigen(&eig, tol))
}

/// `Q = Ω − Ω K₀ (H₀ − λ°)⁺ K₀* Ω`, the Hessian of the eigenvalue branch restricted to
/// lateral directions (identified with the auxiliary space via `ψ = δK f`).
pub fn q_operator(fam: &PerturbationFamily, rel_tol: f64) -> Result<HermitianMatrix> {
    let rp = reduced_resolvent(fam, rel_tol)?;
    let om = fam.omega().matrix();
    let coupling = om * fam.k0();
    let q = om - &coupling * rp.matrix() * coupling.adjoint();
    Ok(HermitianMatrix::hermitize(q))
}

/// `A₂(δK) = ⟨δK f, Q δK f⟩`.
pub fn quadratic_term(q: &HermitianMatrix, f: &CVector, dk: &CMatrix) -> f64 {
    q.quadratic_form(&(dk * f))
}

#[derive(Clone, Debug, Serialize)]
pub struct HessianReport {
    #[serde(skip)]
    pub q: HermitianMatrix,
    pub morse_index: usize,
    pub nullity: usize,
    pub sigma: i64,
    pub i_minus_omega: usize,
    pub m: usize,
    pub theorem_index_holds: bool,
    pub theorem_nullity_holds: bool,
}

/// Computes `Q` together with both sides of the index and nullity identities:
/// `i₋(Q) = σ + i₋(Ω)` and `i₀(Q) = m − 1`, where `m` is the multiplicity of `λ°` in `S`.
pub fn hessian_q(fam: &PerturbationFamily, rel_tol: f64) -> Result<HessianReport> {
    let q = q_operator(fam, rel_tol)?;
    let iq = Inertia::relative(&q, rel_tol).require_unambiguous()?;
    let sigma = spectral_shift(fam, rel_tol)?;
    let i_minus_omega = Inertia::relative(fam.omega(), rel_tol).require_unambiguous()?.minus;
    let m = Inertia::relative(&fam.s().shifted(fam.lambda0()), rel_tol).zero;
    Ok(HessianReport {
        morse_index: iq.minus,
        nullity: iq.zero,
        sigma,
        i_minus_omega,
        m,
        theorem_index_holds: iq.minus as i64 == sigma + i_minus_omega as i64,
        theorem_nullity_holds: iq.zero + 1 == m,
        q,
    })
}
