//! Eigenvalue-branch continuation by eigenvector overlap.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, CVector, Eigen, HermitianMatrix};
use crate::inertia::relative_tol_from;
use crate::lateral::PerturbationFamily;

/// Consecutive eigenvectors of a tracked branch must overlap at least this much.
pub const OVERLAP_THRESHOLD: f64 = FRAC_1_SQRT_2;

#[derive(Clone, Debug)]
pub struct BranchSample {
    pub parameter: f64,
    pub lambda: f64,
    pub eigenvector: CVector,
    pub overlap: f64,
}

#[derive(Clone, Debug, Default)]
pub struct BranchPath {
    pub samples: Vec<BranchSample>,
}

impl BranchPath {
    pub fn lambdas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.lambda).collect()
    }

    pub fn min_overlap(&self) -> f64 {
        self.samples.iter().map(|s| s.overlap).fold(1.0, f64::min)
    }
}

/// Picks the eigenpair of `eig` whose eigenvector overlaps `reference` the most.
pub fn match_eigenpair(eig: &Eigen, reference: &CVector, parameter: f64) -> Result<(usize, f64)> {
    let mut best = 0;
    let mut best_overlap = -1.0;
    for j in 0..eig.values.len() {
        let ov = eig.vectors.column(j).dotc(reference).norm();
        if ov > best_overlap {
            best_overlap = ov;
            best = j;
        }
    }
    let scale = reference.norm();
    let overlap = if scale > 0.0 { best_overlap / scale } else { 0.0 };
    if overlap < OVERLAP_THRESHOLD {
        return Err(Error::BranchAmbiguity { parameter, overlap });
    }
    Ok((best, overlap))
}

/// One continuation step: the eigenpair of `h` matching `reference`.
pub fn track_step(h: &HermitianMatrix, reference: &CVector, parameter: f64) -> Result<BranchSample> {
    let eig = h.eig();
    let (j, overlap) = match_eigenpair(&eig, reference, parameter)?;
    Ok(BranchSample {
        parameter,
        lambda: eig.values[j],
        eigenvector: eig.vector(j),
        overlap,
    })
}

/// `Λ(K)`: the eigenvalue of `H(K)` whose eigenvector best matches `f`.
pub fn branch_value(fam: &PerturbationFamily, k: &CMatrix) -> Result<f64> {
    let h = fam.assemble(k)?;
    Ok(track_step(&h, fam.f(), 0.0)?.lambda)
}

/// Follows the continuation of `λ°` along `grid`; the first point picks the eigenvalue
/// nearest `λ°` and every later point the eigenvector closest to its predecessor.
pub fn branch_track<F>(
    fam: &PerturbationFamily,
    k_of: F,
    grid: &[f64],
    rel_tol: f64,
) -> Result<BranchPath>
where
    F: Fn(f64) -> CMatrix,
{
    let Some((&first, rest)) = grid.split_first() else {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    };
    let h = fam.assemble(&k_of(first))?;
    let eig = h.eig();
    let j = eig.nearest(fam.lambda0());
    let gap = eig.gap(j);
    if gap <= relative_tol_from(&eig, rel_tol) {
        return Err(Error::DegenerateStart {
            lambda: eig.values[j],
            gap,
        });
    }
    let v = eig.vector(j);
    let overlap = v.dotc(fam.f()).norm();
    if overlap < OVERLAP_THRESHOLD {
        return Err(Error::BranchAmbiguity {
            parameter: first,
            overlap,
        });
    }
    let mut path = BranchPath {
        samples: vec![BranchSample {
            parameter: first,
            lambda: eig.values[j],
            eigenvector: v,
            overlap,
        }],
    };
    for &t in rest {
        let h = fam.assemble(&k_of(t))?;
        let prev = &path.samples.last().expect("path is nonempty").eigenvector;
        let sample = track_step(&h, prev, t)?;
        path.samples.push(sample);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::DEFAULT_REL_TOL;
    use crate::lateral::example;
    use num_complex::Complex64;
    use rand::SeedableRng;

    #[test]
    fn constant_path_is_constant() {
        let fam = example::family(1.0).unwrap();
        let grid: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let path = branch_track(&fam, |_| fam.k0().clone(), &grid, DEFAULT_REL_TOL).unwrap();
        assert!(path.lambdas().iter().all(|&l| l.abs() < 1e-14));
    }

    #[test]
    fn flow_branch_stays_at_zero() {
        let fam = example::family(1.0).unwrap();
        let grid: Vec<f64> = (0..=60).map(|i| 0.05 * i as f64).collect();
        let path = branch_track(
            &fam,
            |t| fam.k0().map(|z| z * t.sqrt()),
            &grid,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        assert!(path.lambdas().iter().all(|&l| l.abs() < 1e-12));
        assert!(path.min_overlap() > 1.0 - 1e-12);
    }

    #[test]
    fn lateral_ray_at_maximum_decreases() {
        let fam = example::family(2.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let [k1, k2] = example::random_directions(&mut rng);
        let grid: Vec<f64> = (0..=20).map(|i| 0.005 * i as f64).collect();
        let path = branch_track(
            &fam,
            |s| fam.displaced(&[k1.clone(), k2.clone()], &[s, 0.5 * s]),
            &grid,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        let l = path.lambdas();
        assert!(l[0].abs() < 1e-14);
        assert!(l.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn degenerate_start_is_rejected() {
        // K(0) = 0 gives S with λ° = 0 double
        let s = HermitianMatrix::diagonal(&[0.0, 0.0, 1.0]);
        let fam = PerturbationFamily::new(
            s,
            HermitianMatrix::identity(1),
            CMatrix::from_row_slice(1, 3, &[0.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0))),
            crate::hermitian::complex_from_real(&[1.0, 0.0, 0.0]),
            0.0,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        let err = branch_track(&fam, |t| fam.k0().map(|z| z * t), &[0.0, 1.0], DEFAULT_REL_TOL)
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateStart { .. }));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let fam = example::family(1.0).unwrap();
        assert!(branch_track(&fam, |_| fam.k0().clone(), &[], DEFAULT_REL_TOL).is_err());
    }

    #[test]
    fn overlap_below_threshold_is_ambiguous() {
        let eig = HermitianMatrix::diagonal(&[0.0, 1.0, 2.0]).eig();
        let third = 1.0 / 3.0_f64.sqrt();
        let reference = crate::hermitian::complex_from_real(&[third, third, third]);
        let err = match_eigenpair(&eig, &reference, 3.0).unwrap_err();
        assert!(matches!(err, Error::BranchAmbiguity { parameter, .. } if parameter == 3.0));
    }
}
