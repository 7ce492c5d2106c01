//! Flip counts, the spanning-tree factorization `H(α) = S + K(α)* Ω K(α)`, and the
//! comparison of nodal surplus with the Morse index of `α ↦ λ_n(H(α))` at `α°`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{magnetic_h_at, MagneticFrame, WeightedGraph};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::inertia::{Inertia, DEFAULT_REL_TOL};
use crate::lateral::{
    central_gradient, hessian_q, match_eigenpair, restricted_hessian_with, second_differences,
    PerturbationFamily,
};

/// Entries with `|f_v| ≤ NOWHERE_ZERO_TOL · ‖f‖` count as zero.
pub const NOWHERE_ZERO_TOL: f64 = 1e-10;

/// Default step, in radians, for finite differences on the torus.
pub const DEFAULT_TORUS_STEP: f64 = 1e-3;

/// Real symmetric eigendecomposition with ascending eigenvalues.
pub fn real_eig(h: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = h.nrows();
    let dec = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
    let values = order.iter().map(|&k| dec.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| dec.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `H(α°)`, which is real because `α° ∈ {0, π}^β`.
pub fn reference_matrix(g: &WeightedGraph, frame: &MagneticFrame) -> DMatrix<f64> {
    let mut h = g.real_matrix();
    for (&(u, v), &a) in frame.cycle_edges.iter().zip(&frame.alpha0) {
        let c = a.cos().round();
        h[(u, v)] *= c;
        h[(v, u)] *= c;
    }
    h
}

pub fn check_nowhere_zero(f: &[f64]) -> Result<()> {
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    match f.iter().position(|x| x.abs() <= NOWHERE_ZERO_TOL * norm) {
        Some(index) => Err(Error::ZeroEntry {
            index,
            value: f[index],
        }),
        None => Ok(()),
    }
}

/// `#{(u, v) : −f_u f_v H0[u, v] < 0}` over `edges`.
pub fn flip_count(h0: &DMatrix<f64>, edges: &[(usize, usize)], f: &[f64]) -> Result<usize> {
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut count = 0;
    for &(u, v) in edges {
        for w in [u, v] {
            if f[w].abs() <= NOWHERE_ZERO_TOL * norm {
                return Err(Error::ZeroEntry {
                    index: w,
                    value: f[w],
                });
            }
        }
        if -f[u] * f[v] * h0[(u, v)] < 0.0 {
            count += 1;
        }
    }
    Ok(count)
}

/// The rows of `K(α)` and the signs `s_e` for an eigenvector `f` of `H(α°)`.
///
/// For `e = (v₁, v₂)`: `s_e = sign(−H°_{v₁v₂} f_{v₁} f_{v₂})`,
/// `p_e = √|H°_{v₁v₂} f_{v₂} / f_{v₁}|`, `K[e, v₁] = p_e s_e` and
/// `K[e, v₂] = e^{i(α_e − α°_e)} H°_{v₁v₂} / p_e`, so that `K(α°) f = 0`.
pub fn build_k_alpha(
    g: &WeightedGraph,
    frame: &MagneticFrame,
    f: &[f64],
    alpha: &[f64],
) -> Result<(CMatrix, HermitianMatrix)> {
    let n = g.num_vertices();
    if f.len() != n || alpha.len() != frame.beta() {
        return Err(Error::DimensionMismatch(format!(
            "f has length {} (expected {n}), alpha {} (expected {})",
            f.len(),
            alpha.len(),
            frame.beta()
        )));
    }
    check_nowhere_zero(f)?;
    let h0 = reference_matrix(g, frame);
    let fv = nalgebra::DVector::from_column_slice(f);
    let rayleigh = fv.dot(&(&h0 * &fv)) / fv.norm_squared();
    let residual = (&h0 * &fv - &fv * rayleigh).norm();
    if residual > 1e-8 * h0.norm().max(1.0) * fv.norm() {
        return Err(Error::InvalidArgument(format!(
            "f is not an eigenvector of H(alpha0) (residual {residual:e})"
        )));
    }
    let beta = frame.beta();
    let mut k = CMatrix::zeros(beta, n);
    let mut signs = Vec::with_capacity(beta);
    for (e, &(v1, v2)) in frame.cycle_edges.iter().enumerate() {
        let hv = h0[(v1, v2)];
        let s = (-hv * f[v1] * f[v2]).signum();
        let p = (hv * f[v2] / f[v1]).abs().sqrt();
        k[(e, v1)] = Complex64::new(p * s, 0.0);
        k[(e, v2)] = Complex64::from_polar(hv / p, alpha[e] - frame.alpha0[e]);
        signs.push(s);
    }
    Ok((k, HermitianMatrix::diagonal(&signs)))
}

/// `S = H(α) − K(α)* Ω K(α)`, which does not depend on `α`.
pub fn tree_operator(
    g: &WeightedGraph,
    frame: &MagneticFrame,
    f: &[f64],
    alpha: &[f64],
) -> Result<HermitianMatrix> {
    let (k, omega) = build_k_alpha(g, frame, f, alpha)?;
    let h = magnetic_h_at(g, frame, alpha);
    let s = h.matrix() - k.adjoint() * omega.matrix() * &k;
    let mut s = s;
    // the cycle-edge entries cancel exactly in exact arithmetic
    for &(u, v) in &frame.cycle_edges {
        s[(u, v)] = Complex64::new(0.0, 0.0);
        s[(v, u)] = Complex64::new(0.0, 0.0);
    }
    HermitianMatrix::new(s)
}

#[derive(Clone, Copy, Debug)]
pub struct NodalOptions {
    pub fd_step: f64,
    pub rel_tol: f64,
}

impl Default for NodalOptions {
    fn default() -> Self {
        NodalOptions {
            fd_step: DEFAULT_TORUS_STEP,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

/// Everything `nodal_report` learns about one eigenvalue of `H(α°)`.
///
/// Counts that could not be evaluated because a hypothesis failed are `None`.
#[derive(Clone, Debug, Serialize)]
pub struct NodalReport {
    /// 1-based position of the eigenvalue in the spectrum of `H(α°)`.
    pub n: usize,
    pub lambda: f64,
    pub assumptions_met: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub flip_count: Option<usize>,
    pub surplus: Option<i64>,
    pub morse_index_fd: Option<usize>,
    pub morse_index_q: Option<usize>,
    /// Nullity of the finite-difference Hessian.
    pub nullity: Option<usize>,
    /// Eigenvalues of the FD Hessian within this distance of zero are unresolved.
    pub fd_tolerance: Option<f64>,
    /// No FD Hessian eigenvalue lies within ten tolerances of zero. When false the
    /// FD signs are only checked for consistency with the analytic Hessian.
    pub fd_resolved: Option<bool>,
    pub theorem_holds: bool,
    /// 1-based position of `λ` in the spectrum of the tree operator `S`.
    pub m: Option<usize>,
    /// Number of cycle edges with `s_e < 0`.
    pub omega_minus: Option<usize>,
    pub tree_flip_count: Option<usize>,
    pub fd_gradient_norm: Option<f64>,
    pub hessian_fd: Option<Vec<Vec<f64>>>,
    pub hessian_analytic: Option<Vec<Vec<f64>>>,
}

impl NodalReport {
    fn unevaluated(n: usize, lambda: f64, failure: String) -> Self {
        NodalReport {
            n,
            lambda,
            assumptions_met: false,
            failure: Some(failure),
            flip_count: None,
            surplus: None,
            morse_index_fd: None,
            morse_index_q: None,
            nullity: None,
            fd_tolerance: None,
            fd_resolved: None,
            theorem_holds: false,
            m: None,
            omega_minus: None,
            tree_flip_count: None,
            fd_gradient_norm: None,
            hessian_fd: None,
            hessian_analytic: None,
        }
    }

    /// Whether this level is a counterexample: hypotheses met, yet the counts disagree.
    pub fn falsifies(&self) -> bool {
        self.assumptions_met && !self.theorem_holds
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Evaluates the branch through `f` at `α° + t` and returns its eigenvalue and gap.
fn matched_eigenvalue(
    g: &WeightedGraph,
    frame: &MagneticFrame,
    f: &CVector,
    t: &[f64],
) -> Result<(f64, f64)> {
    let alpha: Vec<f64> = frame.alpha0.iter().zip(t).map(|(a, d)| a + d).collect();
    let eig = magnetic_h_at(g, frame, &alpha).eig();
    let (j, _) = match_eigenpair(&eig, f, t.first().copied().unwrap_or(0.0))?;
    Ok((eig.values[j], eig.gap(j)))
}

/// Compares the nodal surplus of the `n`-th eigenvector of `H(α°)` with the Morse index
/// of `α ↦ λ_n(H(α))` at `α°`, computed both by finite differences and through `Q`.
///
/// Failed hypotheses (multiple eigenvalue, zero entry, spectral gap below ten FD steps
/// somewhere on the stencil) are reported in-band. The FD Hessian is the Richardson
/// extrapolation of second differences at steps `h` and `2h`; the stencil reaches `4h`.
pub fn nodal_report(
    g: &WeightedGraph,
    frame: &MagneticFrame,
    n: usize,
    opts: &NodalOptions,
) -> Result<NodalReport> {
    let size = g.num_vertices();
    if n == 0 || n > size {
        return Err(Error::InvalidArgument(format!("level {n} outside 1..={size}")));
    }
    if !(opts.fd_step > 0.0 && opts.fd_step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {}",
            opts.fd_step
        )));
    }
    let h0 = reference_matrix(g, frame);
    let (values, vectors) = real_eig(&h0);
    let lambda = values[n - 1];
    let rho = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = opts.rel_tol * rho.max(1.0);
    let gap = values
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != n - 1)
        .map(|(_, v)| (v - lambda).abs())
        .fold(f64::INFINITY, f64::min);
    if gap <= 10.0 * tol {
        return Ok(NodalReport::unevaluated(n, lambda, format!("eigenvalue is not simple (gap {gap:e})")));
    }
    let f: Vec<f64> = vectors.column(n - 1).iter().copied().collect();
    if let Err(Error::ZeroEntry { index, value }) = check_nowhere_zero(&f) {
        return Ok(NodalReport::unevaluated(
            n,
            lambda,
            format!("eigenvector vanishes at vertex {} ({value:e})", index + 1),
        ));
    }

    let all_edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let phi = flip_count(&h0, &all_edges, &f)?;
    let surplus = phi as i64 - (n as i64 - 1);
    let tree_phi = flip_count(&h0, &frame.tree_edges, &f)?;

    // finite differences on the torus, branch matched by overlap with f
    let fc = crate::hermitian::complex_from_real(&f);
    let beta = frame.beta();
    let h = opts.fd_step;
    let min_gap = std::cell::Cell::new(f64::INFINITY);
    let at = |t: &[f64]| -> Result<f64> {
        let (value, gap) = matched_eigenvalue(g, frame, &fc, t)?;
        min_gap.set(min_gap.get().min(gap));
        Ok(value)
    };
    let d1 = second_differences(beta, h, &at)?;
    let d2 = second_differences(beta, 2.0 * h, &at)?;
    let d4 = second_differences(beta, 4.0 * h, &at)?;
    let gradient = central_gradient(beta, h, &at)?;
    if min_gap.get() <= 10.0 * h {
        return Ok(NodalReport::unevaluated(
            n,
            lambda,
            format!("spectral gap {:e} on the FD stencil is below 10h", min_gap.get()),
        ));
    }
    // Richardson extrapolation from steps h and 2h; the same extrapolation from 2h and
    // 4h carries ~16 times its truncation error, so their difference bounds it. Added
    // to that is the rounding noise of the extrapolated second differences, measured
    // at about 24 ε ρ / h² for eigenvalues of size ρ.
    let hess_fd = (&d1 * 4.0 - &d2) / 3.0;
    let coarse = (&d2 * 4.0 - &d4) / 3.0;
    let noise = 32.0 * f64::EPSILON * rho.max(1.0) / (h * h);
    let fd_tol = (&hess_fd - &coarse).norm() + noise;
    let fd_inertia = Inertia::from_eigenvalues(&real_eig(&hess_fd).0, fd_tol);

    // Q-based index through the lateral machinery
    let (k0, omega) = build_k_alpha(g, frame, &f, &frame.alpha0)?;
    let s = tree_operator(g, frame, &f, &frame.alpha0)?;
    let fam = PerturbationFamily::new(s, omega.clone(), k0, fc.clone(), lambda, opts.rel_tol)?;
    let report = hessian_q(&fam, opts.rel_tol)?;
    let omega_minus = report.i_minus_omega;
    let m = (report.sigma + n as i64) as usize;

    // ∂K/∂α_e at α°: only the (e, v₂) entry, i H°_{v₁v₂} / p_e
    let (k_step, _) = build_k_alpha(
        g,
        frame,
        &f,
        &frame.alpha0.iter().map(|a| a + std::f64::consts::FRAC_PI_2).collect::<Vec<_>>(),
    )?;
    let directions: Vec<CMatrix> = (0..beta)
        .map(|e| {
            let (_, v2) = frame.cycle_edges[e];
            let mut d = CMatrix::zeros(beta, size);
            d[(e, v2)] = k_step[(e, v2)];
            d
        })
        .collect();
    let analytic = restricted_hessian_with(&report.q, &fc, &directions, opts.rel_tol).matrix * 2.0;

    let morse_q = report.morse_index;
    let morse_fd = fd_inertia.minus;
    let resolved = fd_inertia.zero == 0 && fd_inertia.ambiguous.is_none();
    let analytic_scale = analytic.norm().max(1.0);
    let analytic_inertia = Inertia::from_eigenvalues(&real_eig(&analytic).0, opts.rel_tol * analytic_scale);
    let consistent = (&hess_fd - &analytic).norm() <= fd_tol;
    let theorem_holds = surplus == morse_q as i64
        && report.theorem_index_holds
        && analytic_inertia.zero == 0
        && analytic_inertia.minus == morse_q
        && consistent
        && (!resolved || surplus == morse_fd as i64);
    Ok(NodalReport {
        n,
        lambda,
        assumptions_met: true,
        failure: None,
        flip_count: Some(phi),
        surplus: Some(surplus),
        morse_index_fd: Some(morse_fd),
        morse_index_q: Some(morse_q),
        nullity: Some(fd_inertia.zero),
        fd_tolerance: Some(fd_tol),
        fd_resolved: Some(resolved),
        theorem_holds,
        m: Some(m),
        omega_minus: Some(omega_minus),
        tree_flip_count: Some(tree_phi),
        fd_gradient_norm: Some(gradient.iter().map(|x| x * x).sum::<f64>().sqrt()),
        hessian_fd: Some(rows(&hess_fd)),
        hessian_analytic: Some(rows(&analytic)),
    })
}

/// Reports for every level `1..=N`.
pub fn nodal_reports(g: &WeightedGraph, frame: &MagneticFrame, opts: &NodalOptions) -> Result<Vec<NodalReport>> {
    (1..=g.num_vertices()).map(|n| nodal_report(g, frame, n, opts)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FiedlerLevel {
    pub n: usize,
    pub lambda: f64,
    pub assumptions_met: bool,
    pub flip_count: Option<usize>,
    /// `flip_count = n − 1`; false when the assumptions fail.
    pub holds: bool,
}

/// Flip count of every eigenvector of a tree against the baseline `n − 1`.
pub fn fiedler_check(g: &WeightedGraph, rel_tol: f64) -> Result<Vec<FiedlerLevel>> {
    if !g.is_tree() {
        return Err(Error::InvalidGraph(format!("expected a tree, beta = {}", g.beta())));
    }
    let h = g.real_matrix();
    let (values, vectors) = real_eig(&h);
    let rho = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = rel_tol * rho.max(1.0);
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let levels = (0..values.len())
        .map(|j| {
            let gap = values
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| (v - values[j]).abs())
                .fold(f64::INFINITY, f64::min);
            let f: Vec<f64> = vectors.column(j).iter().copied().collect();
            let flips = if gap > 10.0 * tol {
                flip_count(&h, &edges, &f).ok()
            } else {
                None
            };
            FiedlerLevel {
                n: j + 1,
                lambda: values[j],
                assumptions_met: flips.is_some(),
                flip_count: flips,
                holds: flips == Some(j),
            }
        })
        .collect();
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_h, example, magnetic_h, spanning_tree, Edge};

    fn edge_pair() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0])
    }

    #[test]
    fn flip_count_two_vertices() {
        assert_eq!(flip_count(&edge_pair(), &[(0, 1)], &[1.0, 1.0]).unwrap(), 0);
        assert_eq!(flip_count(&edge_pair(), &[(0, 1)], &[1.0, -1.0]).unwrap(), 1);
        assert!(matches!(
            flip_count(&edge_pair(), &[(0, 1)], &[1.0, 0.0]),
            Err(Error::ZeroEntry { index: 1, .. })
        ));
    }

    #[test]
    fn lasso_k_annihilates_ground_state() {
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap();
        let (_, vectors) = real_eig(&g.real_matrix());
        let f: Vec<f64> = vectors.column(0).iter().copied().collect();
        let (k, omega) = build_k_alpha(&g, &frame, &f, &[0.0]).unwrap();
        let kf = &k * crate::hermitian::complex_from_real(&f);
        assert!(kf.norm() <= 1e-12);
        // ground state of a graph with negative weights is positive, so s_e = +1
        assert_eq!(omega, HermitianMatrix::identity(1));
    }

    #[test]
    fn tree_operator_is_alpha_independent() {
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap();
        let (_, vectors) = real_eig(&g.real_matrix());
        for level in 0..4 {
            let f: Vec<f64> = vectors.column(level).iter().copied().collect();
            let (k, omega) = build_k_alpha(&g, &frame, &f, &[0.4]).unwrap();
            let raw = magnetic_h_at(&g, &frame, &[0.4]).matrix() - k.adjoint() * omega.matrix() * &k;
            assert!(raw[(2, 3)].norm() <= 1e-12);
            let s0 = tree_operator(&g, &frame, &f, &[0.0]).unwrap();
            let s1 = tree_operator(&g, &frame, &f, &[1.3]).unwrap();
            assert!((s0.matrix() - s1.matrix()).norm() <= 1e-12);
            // and reassembling gives H(α) back
            let (k1, _) = build_k_alpha(&g, &frame, &f, &[1.3]).unwrap();
            let h1 = s1.matrix() + k1.adjoint() * omega.matrix() * &k1;
            assert!((h1 - magnetic_h_at(&g, &frame, &[1.3]).matrix()).norm() <= 1e-12);
        }
    }

    #[test]
    fn lasso_levels_satisfy_theorem() {
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap();
        let reports = nodal_reports(&g, &frame, &NodalOptions::default()).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.assumptions_met, "level {}: {:?}", r.n, r.failure);
            assert!(r.theorem_holds, "{r:?}");
            let s = r.surplus.unwrap();
            assert!(s == 0 || s == 1);
            assert_eq!(r.tree_flip_count.unwrap() + 1, r.m.unwrap());
            assert_eq!(r.flip_count.unwrap(), r.tree_flip_count.unwrap() + r.omega_minus.unwrap());
            assert!(r.fd_gradient_norm.unwrap() <= 1e-6);
        }
    }

    #[test]
    fn lasso_flip_counts() {
        // oracle: eigenvectors of H(0) computed independently, signs per edge
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap();
        let flips: Vec<usize> = nodal_reports(&g, &frame, &NodalOptions::default())
            .unwrap()
            .iter()
            .map(|r| r.flip_count.unwrap())
            .collect();
        assert_eq!(flips, LASSO_FLIPS);
    }

    const LASSO_FLIPS: [usize; 4] = [0, 1, 3, 3];

    #[test]
    fn pi_reference_point() {
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap().with_alpha0(vec![std::f64::consts::PI]).unwrap();
        for r in nodal_reports(&g, &frame, &NodalOptions::default()).unwrap() {
            if r.assumptions_met {
                assert!(r.theorem_holds, "{r:?}");
            }
        }
    }

    #[test]
    fn zero_entry_reported_in_band() {
        // symmetric star: the antisymmetric eigenvector vanishes at the center
        let g = WeightedGraph::new(
            4,
            vec![
                Edge::new(0, 1, -1.0),
                Edge::new(0, 2, -1.0),
                Edge::new(1, 2, -1.0),
                Edge::new(0, 3, -1.0),
            ],
            vec![0.0, 1.0, 1.0, 3.0],
        )
        .unwrap();
        let frame = spanning_tree(&g).unwrap();
        let reports = nodal_reports(&g, &frame, &NodalOptions::default()).unwrap();
        assert!(reports.iter().any(|r| !r.assumptions_met && r.failure.is_some()));
        assert!(reports.iter().all(|r| !r.falsifies()));
    }

    #[test]
    fn fiedler_on_small_trees() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, -1.0)], vec![0.0; 2]).unwrap();
        let levels = fiedler_check(&g, DEFAULT_REL_TOL).unwrap();
        assert_eq!(levels.iter().map(|l| l.flip_count.unwrap()).collect::<Vec<_>>(), vec![0, 1]);
        assert!(levels.iter().all(|l| l.holds));

        let lasso = example::lasso();
        let frame = spanning_tree(&lasso).unwrap();
        let tree = WeightedGraph::new(
            4,
            frame
                .tree_edges
                .iter()
                .map(|&(u, v)| Edge::new(u, v, lasso.weight(u, v).unwrap()))
                .collect(),
            lasso.potentials().to_vec(),
        )
        .unwrap();
        assert!(fiedler_check(&tree, DEFAULT_REL_TOL).unwrap().iter().all(|l| l.holds));
        assert!(fiedler_check(&lasso, DEFAULT_REL_TOL).is_err());
    }

    #[test]
    fn gauge_symmetry() {
        let g = example::lasso();
        let frame = spanning_tree(&g).unwrap();
        let plus = magnetic_h(&g, &frame.clone().with_alpha(vec![0.9]).unwrap()).eigenvalues();
        let minus = magnetic_h(&g, &frame.with_alpha(vec![-0.9]).unwrap()).eigenvalues();
        for (a, b) in plus.iter().zip(&minus) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert_eq!(build_h(&g).eigenvalues().len(), 4);
    }
}
