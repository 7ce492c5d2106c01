//! The scalar branch equation and the resolvent switch identity.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, CVector};
use crate::inertia::relative_tol_from;
use crate::lateral::PerturbationFamily;

#[derive(Clone, Copy, Debug)]
pub struct BranchEquationOptions {
    pub max_iter: usize,
    /// Stop when `|z_{m+1} − z_m| ≤ step_tol (1 + |λ°|)`.
    pub step_tol: f64,
    pub rel_tol: f64,
}

impl Default for BranchEquationOptions {
    fn default() -> Self {
        BranchEquationOptions {
            max_iter: 200,
            step_tol: 1e-12,
            rel_tol: crate::inertia::DEFAULT_REL_TOL,
        }
    }
}

/// Solves `z = λ° + ⟨ψ, (Ω − Ω K_a (H(K_a) − z)⁺ K_a* Ω) ψ⟩` by fixed-point iteration
/// from `z₀ = λ°`. The solution is the eigenvalue of `H(K_a + ψ f*)` continuing `λ°`.
///
/// The pseudoinverse inverts `H(K_a) − z` on the orthogonal complement of
/// `Ker(H(K_a) − λ°)`, which is where `Ran K_a*` lives.
pub fn branch_equation_solve(
    fam: &PerturbationFamily,
    k_a: &CMatrix,
    psi: &CVector,
    opts: &BranchEquationOptions,
) -> Result<f64> {
    let f = fam.f();
    if psi.len() != fam.k() {
        return Err(Error::DimensionMismatch(format!(
            "psi has length {}, expected {}",
            psi.len(),
            fam.k()
        )));
    }
    let h = fam.assemble(k_a)?;
    let kaf = (k_a * f).norm();
    if kaf > 1e-10 * k_a.norm().max(1.0) {
        return Err(Error::InvalidArgument(format!("K_a f must vanish, |K_a f| = {kaf:e}")));
    }

    let lambda0 = fam.lambda0();
    let eig = h.shifted(lambda0).eig();
    let tol = relative_tol_from(&eig, opts.rel_tol);
    let required = 10.0 * tol;
    let (kernel_index, _) = crate::lateral::match_eigenpair(&eig, f, lambda0)?;
    let mut gap = f64::INFINITY;
    // |⟨v_j, K_a* Ω ψ⟩|² and μ_j − λ° for every eigenpair except the one carrying f
    let mut terms = Vec::new();
    let source = k_a.adjoint() * (fam.omega().matrix() * psi);
    for (j, &mu) in eig.values.iter().enumerate() {
        if j == kernel_index {
            continue;
        }
        gap = gap.min(mu.abs());
        let c = eig.vectors.column(j).dotc(&source).norm_sqr();
        terms.push((mu, c));
    }
    if gap <= required {
        return Err(Error::GapTooSmall { gap, required });
    }

    let base = lambda0 + fam.omega().quadratic_form(psi);
    let rhs = |z: f64| -> f64 {
        let shift = z - lambda0;
        base - terms.iter().map(|&(mu, c)| c / (mu - shift)).sum::<f64>()
    };
    let mut z = lambda0;
    let mut step = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let next = rhs(z);
        step = (next - z).abs();
        z = next;
        if !z.is_finite() {
            break;
        }
        if step <= opts.step_tol * (1.0 + lambda0.abs()) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        step,
    })
}

fn resolvent_distance(values: &[f64], z: f64) -> f64 {
    values.iter().map(|v| (v - z).abs()).fold(f64::INFINITY, f64::min)
}

fn inverse(m: CMatrix, what: &str) -> Result<CMatrix> {
    m.try_inverse()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} is not invertible")))
}

/// Frobenius norm of `(Ω⁻¹ + K_a (S − z)⁻¹ K_a*)⁻¹ − (Ω − Ω K_a (H(K_a) − z)⁻¹ K_a* Ω)`,
/// both sides evaluated independently by dense inversion.
pub fn switch_identity_residual(
    fam: &PerturbationFamily,
    k_a: &CMatrix,
    z: f64,
    rel_tol: f64,
) -> Result<f64> {
    let h = fam.assemble(k_a)?;
    let s = fam.s();
    let s_eig = s.eig();
    let h_eig = h.eig();
    for (eig, operator) in [(&s_eig, "S"), (&h_eig, "H(K_a)")] {
        let distance = resolvent_distance(&eig.values, z);
        if distance <= relative_tol_from(eig, rel_tol) {
            return Err(Error::ResolventViolation { z, distance, operator });
        }
    }
    let n = fam.n();
    let id = DMatrix::identity(n, n);
    let zc = num_complex::Complex64::new(z, 0.0);
    let s_res = inverse(s.matrix() - &id * zc, "S - z")?;
    let h_res = inverse(h.matrix() - &id * zc, "H(K_a) - z")?;
    let om = fam.omega().matrix();
    let om_inv = inverse(om.clone(), "Omega")?;

    let lhs = inverse(&om_inv + k_a * s_res * k_a.adjoint(), "Omega^-1 + K_a (S - z)^-1 K_a*")?;
    let rhs = om - om * k_a * h_res * k_a.adjoint() * om;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::complex_from_real;
    use crate::lateral::{branch_value, example, q_operator};
    use num_complex::Complex64;

    #[test]
    fn zero_psi_returns_lambda0() {
        let fam = example::family(1.0).unwrap();
        let z = branch_equation_solve(&fam, fam.k0(), &CVector::zeros(2), &Default::default()).unwrap();
        assert_eq!(z, fam.lambda0());
    }

    #[test]
    fn agrees_with_direct_eigenvalue() {
        for t in example::PROBE_TIMES {
            let fam = example::family(t).unwrap();
            let psi = CVector::from_vec(vec![Complex64::new(0.03, -0.01), Complex64::new(-0.02, 0.015)]);
            let z = branch_equation_solve(&fam, fam.k0(), &psi, &Default::default()).unwrap();
            let k = fam.k0() + &psi * fam.f().adjoint();
            let direct = branch_value(&fam, &k).unwrap();
            assert!((z - direct).abs() <= 1e-10, "t={t}: {z} vs {direct}");
        }
    }

    #[test]
    fn leading_term_is_quadratic_form_of_q() {
        let fam = example::family(2.5).unwrap();
        let q = q_operator(&fam, 1e-8).unwrap();
        let psi = complex_from_real(&[0.02, 0.01]);
        let mut remainders = Vec::new();
        for scale in [1.0, 0.5, 0.25] {
            let p = psi.scale(scale);
            let z = branch_equation_solve(&fam, fam.k0(), &p, &Default::default()).unwrap();
            remainders.push((z - fam.lambda0() - q.quadratic_form(&p)).abs());
        }
        // with K_a = K₀ fixed the remainder is quartic in ψ
        assert!(remainders[0] / remainders[1] > 7.0);
        assert!(remainders[1] / remainders[2] > 7.0);
    }

    #[test]
    fn gap_too_small_is_reported() {
        // λ° = 0 double in H(K_a) when K_a = 0 and S has a double zero
        let fam = crate::lateral::PerturbationFamily::new(
            crate::hermitian::HermitianMatrix::diagonal(&[0.0, 0.0, 1.0]),
            crate::hermitian::HermitianMatrix::identity(1),
            CMatrix::from_row_slice(1, 3, &[0.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0))),
            complex_from_real(&[1.0, 0.0, 0.0]),
            0.0,
            1e-8,
        )
        .unwrap();
        let err = branch_equation_solve(
            &fam,
            &CMatrix::from_row_slice(1, 3, &[0.0, 1e-9, 0.0].map(|x| Complex64::new(x, 0.0))),
            &complex_from_real(&[0.1]),
            &Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::GapTooSmall { .. }));
    }

    #[test]
    fn iteration_budget_exhaustion_is_reported() {
        let fam = example::family(2.5).unwrap();
        let err = branch_equation_solve(
            &fam,
            fam.k0(),
            &complex_from_real(&[0.5, -0.3]),
            &BranchEquationOptions {
                max_iter: 3,
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(Error::NoConvergence { .. })), "{err:?}");
    }

    #[test]
    fn switch_identity_trivial_and_example() {
        let fam = example::family(1.0).unwrap();
        let r0 = switch_identity_residual(&fam, &CMatrix::zeros(2, 4), -0.3, 1e-8).unwrap();
        assert!(r0 < 1e-15);
        let r = switch_identity_residual(&fam, fam.k0(), -0.3, 1e-8).unwrap();
        assert!(r <= 1e-10, "residual {r}");
    }

    #[test]
    fn switch_identity_rejects_spectral_point() {
        let fam = example::family(1.0).unwrap();
        let err = switch_identity_residual(&fam, fam.k0(), 0.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::ResolventViolation { .. }));
    }
}
