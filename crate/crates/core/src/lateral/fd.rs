//! Finite-difference derivatives of the eigenvalue branch `Λ(K)` at `K₀`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hermitian::CMatrix;
use crate::lateral::{branch_value, PerturbationFamily};

/// `h = 1e-4 (1 + ‖K₀‖_F)`.
pub fn default_fd_step(fam: &PerturbationFamily) -> f64 {
    1e-4 * (1.0 + fam.k0().norm())
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")))
    }
}

/// Central differences `(Λ(K₀ + hV) − Λ(K₀ − hV)) / 2h`, one per direction.
pub fn fd_gradient(fam: &PerturbationFamily, directions: &[CMatrix], h: f64) -> Result<Vec<f64>> {
    check_step(h)?;
    central_gradient(directions.len(), h, |c| branch_value(fam, &fam.displaced(directions, c)))
}

/// Second-difference Hessian of `t ↦ Λ(K₀ + Σ tⱼ Vⱼ)` at `t = 0`.
pub fn fd_hessian(fam: &PerturbationFamily, directions: &[CMatrix], h: f64) -> Result<DMatrix<f64>> {
    check_step(h)?;
    second_differences(directions.len(), h, |c| branch_value(fam, &fam.displaced(directions, c)))
}

pub(crate) fn central_gradient<F>(d: usize, h: f64, at: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut coeffs = vec![0.0; d];
    (0..d)
        .map(|i| {
            coeffs[i] = h;
            let plus = at(&coeffs)?;
            coeffs[i] = -h;
            let minus = at(&coeffs)?;
            coeffs[i] = 0.0;
            Ok((plus - minus) / (2.0 * h))
        })
        .collect()
}

/// Diagonal entries use the three-point stencil, off-diagonal entries the four-point
/// stencil `(F₊₊ − F₊₋ − F₋₊ + F₋₋)/4h²`; the result is symmetrized.
pub(crate) fn second_differences<F>(d: usize, h: f64, at: F) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let center = at(&vec![0.0; d])?;
    let mut hess = DMatrix::zeros(d, d);
    let mut coeffs = vec![0.0; d];
    for i in 0..d {
        coeffs[i] = h;
        let plus = at(&coeffs)?;
        coeffs[i] = -h;
        let minus = at(&coeffs)?;
        coeffs[i] = 0.0;
        hess[(i, i)] = (plus - 2.0 * center + minus) / (h * h);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                coeffs[i] = si * h;
                coeffs[j] = sj * h;
                let v = at(&coeffs);
                coeffs[i] = 0.0;
                coeffs[j] = 0.0;
                v
            };
            let pp = corner(1.0, 1.0)?;
            let pm = corner(1.0, -1.0)?;
            let mp = corner(-1.0, 1.0)?;
            let mm = corner(-1.0, -1.0)?;
            let val = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[(i, j)] = val;
            hess[(j, i)] = val;
        }
    }
    Ok((&hess + hess.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::DEFAULT_REL_TOL;
    use crate::lateral::{example, q_operator, quadratic_term};
    use num_complex::Complex64;
    use rand::SeedableRng;

    #[test]
    fn example_is_critical() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let dirs = example::random_directions(&mut rng);
        let fam = example::family(1.0).unwrap();
        for g in fd_gradient(&fam, &dirs, 1e-4).unwrap() {
            assert!(g.abs() <= 1e-6, "gradient {g}");
        }
    }

    #[test]
    fn single_direction_matches_twice_quadratic_term() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let [v, _] = example::random_directions(&mut rng);
        for t in example::PROBE_TIMES {
            let fam = example::family(t).unwrap();
            let q = q_operator(&fam, DEFAULT_REL_TOL).unwrap();
            let analytic = 2.0 * quadratic_term(&q, fam.f(), &v);
            let numeric = fd_hessian(&fam, std::slice::from_ref(&v), 1e-4).unwrap()[(0, 0)];
            assert!(
                (numeric - analytic).abs() <= 1e-4 * analytic.abs(),
                "t={t}: fd {numeric} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn along_directions_have_zero_curvature() {
        let fam = example::family(2.5).unwrap();
        // V f = 0: only the last three columns are populated
        let v = CMatrix::from_fn(2, 4, |i, j| {
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.3 * (i + j) as f64 - 0.4, 0.1 * j as f64)
            }
        });
        let hess = fd_hessian(&fam, &[v], 1e-4).unwrap();
        assert!(hess[(0, 0)].abs() < 1e-6);
    }

    #[test]
    fn nonpositive_step_rejected() {
        let fam = example::family(1.0).unwrap();
        assert!(fd_gradient(&fam, &[fam.k0().clone()], 0.0).is_err());
        assert!(fd_hessian(&fam, &[fam.k0().clone()], -1.0).is_err());
    }
}
