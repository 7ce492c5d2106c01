use lateral_core::graph::{
    build_k_alpha, magnetic_h_at, real_eig, reference_matrix, spanning_tree, tree_operator,
};
use lateral_core::io::{matrix_to_string, parse_matrix};
use lateral_core::lateral::{branch_equation_solve, branch_value, hessian_q};
use lateral_core::sample::{
    complex_gaussian, random_family, random_graph, random_hermitian, random_invertible,
    random_reference_phases, seeded, FamilyOptions,
};
use lateral_core::schur::{haynsworth_report, BlockPartition};
use lateral_core::{inertia, pinv, sylvester_conjugate, CMatrix, HermitianMatrix, DEFAULT_REL_TOL};
use proptest::prelude::*;

fn low_rank(seed: u64, n: usize, rank: usize) -> HermitianMatrix {
    let mut rng = seeded(seed);
    let b = complex_gaussian(&mut rng, n, rank);
    let signs = HermitianMatrix::diagonal(&(0..rank).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>());
    HermitianMatrix::new(&b * signs.matrix() * b.adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inertia_counts_add_up(seed in any::<u64>(), n in 1usize..10) {
        let m = random_hermitian(&mut seeded(seed), n);
        let i = inertia(&m, 1e-8);
        prop_assert_eq!(i.minus + i.zero + i.plus, n);
        let neg = inertia(&m.scaled(-1.0), 1e-8);
        prop_assert_eq!((neg.minus, neg.zero, neg.plus), (i.plus, i.zero, i.minus));
    }

    #[test]
    fn pseudoinverse_penrose_conditions(seed in any::<u64>(), n in 2usize..9, r in 1usize..9) {
        let rank = r.min(n);
        let m = low_rank(seed, n, rank);
        let tol = 1e-8 * m.spectral_radius().max(1.0);
        let p = pinv(&m, tol);
        let (a, x) = (m.matrix(), p.matrix());
        let scale = m.norm() * (1.0 + p.norm() * p.norm());
        prop_assert!((a * x * a - a).norm() <= 1e-8 * scale);
        prop_assert!((x * a * x - x).norm() <= 1e-8 * scale * p.norm());
        prop_assert_eq!(inertia(&m, tol).zero, n - rank);
    }

    #[test]
    fn haynsworth_primal_with_invertible_block(seed in any::<u64>(), n in 2usize..10, split in 1usize..9) {
        let m = random_hermitian(&mut seeded(seed), n);
        let k = split.min(n - 1);
        let p = BlockPartition::leading(n, k).unwrap();
        let report = haynsworth_report(&m, &p, 1e-8 * m.spectral_radius().max(1.0)).unwrap();
        prop_assume!(!report.any_ambiguous() && report.kernel_condition_d_holds);
        prop_assert!(report.identity_primal_holds);
        let (md, d, sd) = (report.inertia_m, report.inertia_d, report.inertia_schur_d);
        prop_assert_eq!(md.minus, d.minus + sd.minus);
    }

    #[test]
    fn congruence_preserves_inertia(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = seeded(seed);
        let m = random_hermitian(&mut rng, n);
        let s = random_invertible(&mut rng, n, 10.0);
        let c = sylvester_conjugate(&m, &s).unwrap();
        let (a, b) = (inertia(&m, 1e-8), inertia(&c, 1e-8));
        prop_assume!(!a.is_ambiguous() && !b.is_ambiguous());
        prop_assert_eq!(a.counts(), b.counts());
    }

    #[test]
    fn q_index_equals_shift_plus_omega_index(seed in any::<u64>(), double in any::<bool>()) {
        let opts = FamilyOptions { double, ..Default::default() };
        let fam = random_family(&mut seeded(seed), &opts);
        prop_assume!(fam.is_ok());
        let report = hessian_q(&fam.unwrap(), DEFAULT_REL_TOL);
        prop_assume!(report.is_ok());
        let r = report.unwrap();
        prop_assert!(r.theorem_index_holds, "{:?}", r);
        prop_assert!(r.theorem_nullity_holds, "{:?}", r);
        prop_assert_eq!(r.m, if double { 2 } else { 1 });
    }

    #[test]
    fn branch_equation_matches_eigensolver(seed in any::<u64>(), scale in 1e-3f64..5e-2) {
        let mut rng = seeded(seed);
        let opts = FamilyOptions { min_gap: 0.05, ..Default::default() };
        let fam = random_family(&mut rng, &opts);
        prop_assume!(fam.is_ok());
        let fam = fam.unwrap();
        let eig = fam.h0().eig();
        prop_assume!(eig.gap(eig.nearest(fam.lambda0())) > 0.1);
        let psi = complex_gaussian(&mut rng, fam.k(), 1).column(0).into_owned();
        let psi = psi.scale(scale / psi.norm());
        let z = branch_equation_solve(&fam, fam.k0(), &psi, &Default::default());
        prop_assume!(z.is_ok());
        let direct = branch_value(&fam, &(fam.k0() + &psi * fam.f().adjoint())).unwrap();
        prop_assert!((z.unwrap() - direct).abs() <= 1e-10);
    }

    #[test]
    fn tree_operator_carries_no_phase(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, 8, 1, 3);
        let frame = spanning_tree(&g).unwrap();
        let frame = frame.clone().with_alpha0(random_reference_phases(&mut rng, g.beta())).unwrap();
        let (_, vectors) = real_eig(&reference_matrix(&g, &frame));
        let f: Vec<f64> = vectors.column(0).iter().copied().collect();
        let alpha: Vec<f64> = (0..g.beta()).map(|i| 0.7 * i as f64 - 1.1).collect();
        let built = build_k_alpha(&g, &frame, &f, &alpha);
        prop_assume!(built.is_ok());
        let (k, omega) = built.unwrap();
        let s = tree_operator(&g, &frame, &f, &frame.alpha0).unwrap();
        let rebuilt = s.matrix() + k.adjoint() * omega.matrix() * &k;
        prop_assert!((rebuilt - magnetic_h_at(&g, &frame, &alpha).matrix()).norm() <= 1e-12);
        for &(u, v) in &frame.cycle_edges {
            prop_assert_eq!(s.matrix()[(u, v)].norm(), 0.0);
        }
        let (k0, _) = build_k_alpha(&g, &frame, &f, &frame.alpha0).unwrap();
        let kf = k0 * CMatrix::from_iterator(f.len(), 1, f.iter().map(|&x| x.into()));
        prop_assert!(kf.norm() <= 1e-12);
    }

    #[test]
    fn spectrum_is_gauge_symmetric(seed in any::<u64>(), a in -3.0f64..3.0) {
        let g = random_graph(&mut seeded(seed), 7, 1, 2);
        let frame = spanning_tree(&g).unwrap();
        let alpha = vec![a; g.beta()];
        let neg = vec![-a; g.beta()];
        let x = magnetic_h_at(&g, &frame, &alpha).eigenvalues();
        let y = magnetic_h_at(&g, &frame, &neg).eigenvalues();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() <= 1e-12);
        }
    }

    #[test]
    fn matrix_json_round_trip_is_exact(seed in any::<u64>(), n in 1usize..7) {
        let m = random_hermitian(&mut seeded(seed), n);
        let back = parse_matrix(&matrix_to_string(&m)).unwrap();
        prop_assert_eq!(back.matrix(), m.matrix());
    }
}
