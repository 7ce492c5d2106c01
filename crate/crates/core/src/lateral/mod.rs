//! Eigenvalue branches of `H(K) = S + K* Ω K` near a base point `K₀` with `K₀ f = 0`.
//!
//! The branch `Λ(K)` through `λ°` is critical at `K₀`; its Hessian vanishes on
//! operators annihilating `f` and, on the lateral directions `x ↦ ⟨f, x⟩ ψ`, is the
//! quadratic form of `Q = Ω − Ω K₀ (H₀ − λ°)⁺ K₀* Ω`, whose Morse index equals the
//! spectral shift plus `i₋(Ω)`.

mod branch;
mod equation;
pub mod example;
mod family;
mod fd;
mod hessian;
mod restricted;

pub use branch::{
    branch_track, branch_value, match_eigenpair, track_step, BranchPath, BranchSample,
    OVERLAP_THRESHOLD,
};
pub use equation::{branch_equation_solve, switch_identity_residual, BranchEquationOptions};
pub use family::{assemble_h, PerturbationFamily};
pub use fd::{default_fd_step, fd_gradient, fd_hessian};
pub(crate) use fd::{central_gradient, second_differences};
pub use hessian::{
    decompose_k, hessian_q, q_operator, quadratic_term, spectral_shift, HessianReport,
    LateralDecomposition,
};
pub use restricted::{restricted_hessian, restricted_hessian_with, CriticalKind, RestrictedHessian};
