//! Cross-module invariants checked over randomized inputs.

use l1spectral::ndarray::Array2;
use l1spectral::{
    aggregate, brute_force_assignment, connected_components, eig_sym, generate_er, generate_ideal,
    indicators_to_partition, l1_spectral, laplacian, min_cost_assignment, misassignment, perturb,
    random_permutation, solve_bp, Algorithm, BasisPursuitProblem64, BlockSpec, L1Config,
    LaplacianKind, Partition, Representatives, TrialRecord,
};
use proptest::prelude::*;

fn block_spec(k: std::ops::RangeInclusive<usize>, c: std::ops::RangeInclusive<usize>)
    -> impl Strategy<Value = BlockSpec>
{
    prop::collection::vec(c, k).prop_map(|sizes| BlockSpec::from_unsorted(sizes).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn perturbation_is_a_commutative_involution(
        spec in block_spec(1..=4, 2..=6),
        p in 0.0..=1.0f64,
        seed in 0..1000u64,
    ) {
        let a = generate_ideal(&spec);
        let b = generate_er(spec.n(), p, seed).unwrap();
        let ab = perturb(&a, &b).unwrap();
        prop_assert_eq!(perturb(&ab, &b).unwrap(), a.clone());
        prop_assert_eq!(ab, perturb(&b, &a).unwrap());
    }

    #[test]
    fn ideal_components_are_the_blocks(spec in block_spec(1..=6, 2..=8)) {
        let a = generate_ideal(&spec);
        let components = connected_components(&a);
        prop_assert_eq!(components.k(), spec.k());
        prop_assert_eq!(components, spec.partition());
    }

    #[test]
    fn same_seed_reproduces_the_noise(
        n in 2..=30usize,
        p in 0.0..=1.0f64,
        seed in 0..10_000u64,
    ) {
        let first = generate_er(n, p, seed).unwrap();
        let second = generate_er(n, p, seed).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn unnormalized_laplacian_is_positive_semidefinite(
        spec in block_spec(1..=4, 2..=6),
        p in 0.0..=0.5f64,
        seed in 0..1000u64,
    ) {
        let a = perturb(
            &generate_ideal(&spec),
            &generate_er(spec.n(), p, seed).unwrap(),
        )
        .unwrap();
        let l = laplacian::<f64>(&a, LaplacianKind::Unnormalized).unwrap();
        let basis = eig_sym(&l).unwrap();
        for &value in basis.values() {
            prop_assert!(value >= -1e-10, "negative eigenvalue {value}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn ideal_recovery_is_exact_for_any_anchor_choice(
        spec in block_spec(2..=6, 2..=8),
        anchor_picks in prop::collection::vec(0..1000usize, 6),
        order_seed in 0..1000u64,
    ) {
        let k = spec.k();
        let a = generate_ideal(&spec);

        // One anchor somewhere inside each block, visited in a shuffled
        // block order: recovery must not depend on either choice.
        let order = random_permutation(k, order_seed);
        let rep_ids: Vec<usize> = order
            .iter()
            .map(|&b| {
                let range = spec.block_range(b);
                range.start + anchor_picks[b] % spec.sizes()[b]
            })
            .collect();
        let reps = Representatives::new(rep_ids.clone()).unwrap();

        let f = l1_spectral(&a, k, &reps, &L1Config::<f64>::default()).unwrap();
        let mut expected = Array2::<u8>::zeros((spec.n(), k));
        for (col, &b) in order.iter().enumerate() {
            for i in spec.block_range(b) {
                expected[[i, col]] = 1;
            }
        }
        prop_assert_eq!(f.binary(), &expected);

        let labels = indicators_to_partition(&f);
        prop_assert_eq!(misassignment(&spec.partition(), &labels).unwrap(), 0.0);
    }

    #[test]
    fn recovery_is_equivariant_under_node_relabeling(
        spec in block_spec(2..=4, 2..=6),
        perm_seed in 0..1000u64,
    ) {
        let k = spec.k();
        let n = spec.n();
        let a = generate_ideal(&spec);
        let rep_ids: Vec<usize> = (0..k).map(|b| spec.block_range(b).start).collect();

        let perm = random_permutation(n, perm_seed);
        let permuted = a.permuted(&perm).unwrap();
        let permuted_reps: Vec<usize> = rep_ids.iter().map(|&r| perm[r]).collect();

        let base = l1_spectral(
            &a,
            k,
            &Representatives::new(rep_ids).unwrap(),
            &L1Config::<f64>::default(),
        )
        .unwrap();
        let moved = l1_spectral(
            &permuted,
            k,
            &Representatives::new(permuted_reps).unwrap(),
            &L1Config::<f64>::default(),
        )
        .unwrap();

        for i in 0..n {
            for j in 0..k {
                prop_assert_eq!(moved.binary()[[perm[i], j]], base.binary()[[i, j]]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn misassignment_behaves_like_a_pseudometric(
        labels_a in prop::collection::vec(0..4usize, 6..=24),
        shift in 0..4usize,
    ) {
        let n = labels_a.len();
        let a = Partition::from_labels(labels_a.clone()).unwrap();
        // A cyclic relabeling is a bijection on label ids.
        let relabeled = Partition::new(
            labels_a.iter().map(|&l| (l + shift) % 4).collect(),
            4,
        )
        .unwrap();
        prop_assert_eq!(misassignment(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(misassignment(&a, &relabeled).unwrap(), 0.0);

        let flipped = Partition::new(
            labels_a.iter().enumerate().map(|(i, &l)| if i == 0 { (l + 1) % 4 } else { l }).collect(),
            4,
        )
        .unwrap();
        let d = misassignment(&a, &flipped).unwrap();
        let d_rev = misassignment(&flipped, &a).unwrap();
        prop_assert!((d - d_rev).abs() < 1e-12);
        prop_assert!((0.0..=1.0 / n as f64 + 1e-12).contains(&d));
    }

    #[test]
    fn hungarian_matches_exhaustive_search(
        flat in prop::collection::vec(-100.0..100.0f64, 1..=25),
    ) {
        let n = (flat.len() as f64).sqrt() as usize;
        prop_assume!(n >= 1);
        let cost = Array2::from_shape_vec((n, n), flat[..n * n].to_vec()).unwrap();
        let (perm, total) = min_cost_assignment(&cost).unwrap();
        let oracle = brute_force_assignment(&cost).unwrap();
        prop_assert!((total - oracle).abs() < 1e-9, "{total} vs {oracle}");
        let mut seen = vec![false; n];
        for &j in &perm {
            prop_assert!(!seen[j]);
            seen[j] = true;
        }
    }

    #[test]
    fn basis_pursuit_is_scale_invariant(
        seed in 0..10_000u64,
        scale in 0.05..40.0f64,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..4usize);
        let d = rng.gen_range(m..=6usize);
        let coeffs = Array2::from_shape_fn((m, d), |_| rng.gen_range(-1.0..1.0f64));
        let offset = coeffs.dot(
            &l1spectral::ndarray::Array1::from_shape_fn(d, |_| rng.gen_range(-1.0..1.0f64)),
        );
        let base = solve_bp(&BasisPursuitProblem64::new(coeffs.clone(), offset.clone()).unwrap());
        let scaled = solve_bp(
            &BasisPursuitProblem64::new(coeffs.mapv(|x| x * scale), offset.mapv(|x| x * scale))
                .unwrap(),
        );
        prop_assert!(
            (base.objective - scaled.objective).abs() <= 1e-6 * (1.0 + base.objective),
            "objective moved under scaling: {} vs {}",
            base.objective,
            scaled.objective
        );
    }

    #[test]
    fn aggregate_keeps_means_inside_the_interval(
        fractions in prop::collection::vec(0.0..=1.0f64, 1..=40),
        p in 0.0..=1.0f64,
    ) {
        let records: Vec<TrialRecord> = fractions
            .iter()
            .enumerate()
            .map(|(trial, &correct_fraction)| TrialRecord {
                p,
                algorithm: Algorithm::Spectral,
                trial,
                seed: trial as u64,
                k: 2,
                n: 4,
                sizes: vec![2, 2],
                correct_fraction,
                runtime_ms: 0,
            })
            .collect();
        let points = aggregate(&records).unwrap();
        prop_assert_eq!(points.len(), 1);
        let point = &points[0];
        prop_assert!(point.ci95_low <= point.mean_correct + 1e-12);
        prop_assert!(point.mean_correct <= point.ci95_high + 1e-12);
        prop_assert!((0.0..=1.0).contains(&point.mean_correct));
        prop_assert!(point.ci95_low >= 0.0 && point.ci95_high <= 1.0);
    }
}
