//! Seeded random generators for matrices, perturbation families and graphs.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::graph::{Edge, WeightedGraph};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};
use crate::lateral::PerturbationFamily;

pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), normal(rng)))
}

pub fn real_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), 0.0))
}

/// `(A + A*)/2` for a complex Gaussian `A`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let a = complex_gaussian(rng, n, n);
    HermitianMatrix::new((&a + a.adjoint()).scale(0.5)).expect("symmetrized matrix is Hermitian")
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = complex_gaussian(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `U diag(s) V*` with singular values log-uniform in `[1, max_cond]`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> CMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let log_max = max_cond.ln();
    let s = DVector::from_fn(n, |_, _| Complex64::new((rng.random::<f64>() * log_max).exp(), 0.0));
    u * CMatrix::from_diagonal(&s) * v.adjoint()
}

/// `U diag(values) U*` with `U` Haar unitary; returns the matrix and `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> (HermitianMatrix, CMatrix) {
    let n = values.len();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&DVector::from_iterator(n, values.iter().map(|&x| Complex64::new(x, 0.0))));
    let m = &u * d * u.adjoint();
    (HermitianMatrix::hermitize(m), u)
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: usize,
    pub k_max: usize,
    /// Make `λ°` a double eigenvalue of `S` (so `m = 2`).
    pub double: bool,
    /// Use `Ω = I` instead of random signs.
    pub positive_omega: bool,
    pub min_gap: f64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            n_min: 3,
            n_max: 10,
            k_min: 1,
            k_max: 4,
            double: false,
            positive_omega: false,
            min_gap: 1e-3,
        }
    }
}

/// Spectrum of `S` uniform in `[−3, 3]` with pairwise gaps at least `min_gap`.
fn spread_values<R: Rng + ?Sized>(rng: &mut R, n: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return v;
        }
    }
}

/// One draw of a perturbation family: `λ°` the median eigenvalue of a random `S`,
/// `f` its eigenvector, `K₀` complex Gaussian with the `f` direction projected out,
/// and `Ω = diag(±1)`. Draws that fail validation (typically `λ°` not simple in `H₀`)
/// come back as errors so that callers can count and discard them.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, opts: &FamilyOptions) -> Result<PerturbationFamily> {
    let n = rng.random_range(opts.n_min..=opts.n_max);
    let k = rng.random_range(opts.k_min..=opts.k_max);
    let mut values = spread_values(rng, n, opts.min_gap);
    let idx = (n - 1) / 2;
    if opts.double {
        values[idx + 1] = values[idx];
    }
    let lambda0 = values[idx];
    let (s, u) = hermitian_with_spectrum(rng, &values);
    let f: CVector = u.column(idx).into_owned();
    let f = f.unscale(f.norm());
    let g = complex_gaussian(rng, k, n);
    let k0 = &g - (&g * &f) * f.adjoint();
    let signs: Vec<f64> = (0..k)
        .map(|_| if opts.positive_omega || rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    PerturbationFamily::new(s, HermitianMatrix::diagonal(&signs), k0, f, lambda0, crate::inertia::DEFAULT_REL_TOL)
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let magnitude = rng.random_range(0.2..=2.0);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn random_potentials<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=5.0)).collect()
}

/// Erdős–Rényi graph on `3..=max_vertices` vertices conditioned on connectivity and
/// `β ∈ [beta_min, beta_max]`; edge probability targets `N + 1` edges.
/// Weights are uniform in `[−2, −0.2] ∪ [0.2, 2]`, potentials uniform in `[−1, 5]`.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    beta_min: usize,
    beta_max: usize,
) -> WeightedGraph {
    assert!(max_vertices >= 3 && beta_min <= beta_max && beta_max >= 1);
    loop {
        let n = rng.random_range(3..=max_vertices);
        let pairs = n * (n - 1) / 2;
        let p = (2.0 * (n + 1) as f64 / (n * (n - 1)) as f64).min(1.0);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push(Edge::new(u, v, random_weight(rng)));
                }
            }
        }
        debug_assert!(edges.len() <= pairs);
        if edges.len() + 1 < n {
            continue;
        }
        let beta = edges.len() + 1 - n;
        if beta < beta_min || beta > beta_max {
            continue;
        }
        let potentials = random_potentials(rng, n);
        if let Ok(g) = WeightedGraph::new(n, edges, potentials) {
            return g;
        }
    }
}

/// Random labelled tree on `n` vertices with weights uniform in `[−2, −0.2]`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> WeightedGraph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let edges = (1..n)
        .map(|i| {
            let j = rng.random_range(0..i);
            Edge::new(labels[j], labels[i], -rng.random_range(0.2..=2.0))
        })
        .collect();
    let potentials = random_potentials(rng, n);
    WeightedGraph::new(n, edges, potentials).expect("attachment process yields a tree")
}

/// Uniform pattern in `{0, π}^β`.
pub fn random_reference_phases<R: Rng + ?Sized>(rng: &mut R, beta: usize) -> Vec<f64> {
    (0..beta)
        .map(|_| if rng.random_bool(0.5) { std::f64::consts::PI } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(3);
        let u = random_unitary(&mut rng, 6);
        assert!((u.adjoint() * &u - CMatrix::identity(6, 6)).norm() < 1e-12);
    }

    #[test]
    fn families_are_mostly_valid() {
        let mut rng = seeded(4);
        let valid = (0..100)
            .filter(|_| random_family(&mut rng, &FamilyOptions::default()).is_ok())
            .count();
        assert!(valid >= 95, "{valid} valid draws");
    }

    #[test]
    fn double_eigenvalue_mode() {
        let mut rng = seeded(5);
        let opts = FamilyOptions {
            double: true,
            ..Default::default()
        };
        let fam = (0..20).find_map(|_| random_family(&mut rng, &opts).ok()).unwrap();
        let inertia = crate::inertia::Inertia::relative(&fam.s().shifted(fam.lambda0()), 1e-8);
        assert_eq!(inertia.zero, 2);
    }

    #[test]
    fn graphs_respect_constraints() {
        let mut rng = seeded(6);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 8, 1, 3);
            assert!(g.num_vertices() <= 8);
            assert!((1..=3).contains(&g.beta()));
            for e in g.edges() {
                assert!((0.2..=2.0).contains(&e.w.abs()));
            }
        }
    }

    #[test]
    fn trees_are_trees() {
        let mut rng = seeded(7);
        let t = random_tree(&mut rng, 8);
        assert!(t.is_tree());
        assert!(t.edges().iter().all(|e| e.w < 0.0));
    }

    #[test]
    fn same_seed_same_draws() {
        let a = random_graph(&mut seeded(11), 8, 1, 3);
        let b = random_graph(&mut seeded(11), 8, 1, 3);
        assert_eq!(a, b);
    }
}
