use proptest::prelude::*;
use robmeas_core::measurement::{
    exact_success_probabilities, inject_symbol_errors, measure_observable_sequence,
    measure_projective, run_campaign, verify_guarantee, NoiseModel,
};
use robmeas_core::povm::random_ranks;
use robmeas_core::rng::{seeded, stream_rng};
use robmeas_core::{ClassicalCode, ObservableSet, ProjectivePovm, QuantumState};

fn c6_set(dim: usize, seed: u64) -> ObservableSet {
    let mut rng = seeded(seed);
    let ranks = random_ranks(8, dim, &mut rng).unwrap();
    let povm = ProjectivePovm::random(&ranks, &mut rng).unwrap();
    ObservableSet::build(ClassicalCode::shortened_hamming_6(), povm).unwrap()
}

fn random_state(dim: usize, seed: u64) -> QuantumState {
    QuantumState::random(dim, &mut seeded(seed ^ 0x5eed))
}

#[test]
fn born_frequencies_agree_between_measurement_routes() {
    const N: u64 = 4000;
    for seed in 0..4u64 {
        let set = c6_set(8, seed);
        let rho = random_state(8, seed);
        let born: Vec<f64> = set
            .povm()
            .projectors()
            .iter()
            .map(|p| rho.probability(p))
            .collect();
        assert!((born.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        let mut direct = [0u64; 8];
        let mut sequential = [0u64; 8];
        for i in 0..N {
            let k = measure_projective(&rho, set.povm(), &mut stream_rng(seed, 2 * i))
                .unwrap()
                .index;
            direct[k - 1] += 1;
            let seq =
                measure_observable_sequence(&rho, &set, None, &mut stream_rng(seed, 2 * i + 1))
                    .unwrap();
            let k = set
                .code()
                .index_of(&seq.word)
                .expect("clean sequence yields a codeword");
            sequential[k - 1] += 1;
        }
        let mut tv = 0.0;
        for k in 0..8 {
            let p = born[k];
            let se = (p * (1.0 - p) / N as f64).sqrt().max(1.0 / N as f64);
            let fd = direct[k] as f64 / N as f64;
            let fs = sequential[k] as f64 / N as f64;
            assert!((fd - p).abs() <= 5.0 * se, "seed {seed} k {k}: {fd} vs {p}");
            assert!((fs - p).abs() <= 5.0 * se, "seed {seed} k {k}: {fs} vs {p}");
            tv += (fd - fs).abs() / 2.0;
        }
        assert!(tv <= 5.0 / (N as f64).sqrt(), "seed {seed}: tv {tv}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn any_order_collapses_onto_the_measured_projector(
        dim in prop::sample::select(vec![8usize, 12]),
        seed in any::<u64>(),
        perm in Just((1..=6usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let set = c6_set(dim, seed);
        let rho = random_state(dim, seed);
        for order in [None, Some(perm.as_slice())] {
            let seq = measure_observable_sequence(&rho, &set, order, &mut seeded(seed)).unwrap();
            let k = set.code().index_of(&seq.word);
            prop_assert!(k.is_some());
            let pk = &set.povm().projectors()[k.unwrap() - 1];
            let (rho_k, weight) = rho.collapse(pk).unwrap();
            prop_assert!(seq.post_state.distance(&rho_k) < 1e-8);
            let product: f64 = seq.step_probabilities.iter().product();
            prop_assert!((product - weight).abs() < 1e-9);
            prop_assert!((weight - rho.probability(pk)).abs() < 1e-12);
        }
    }

    #[test]
    fn adversarial_noise_hits_exactly_t_positions(
        t in 0usize..=3,
        q in 2usize..=5,
        word in proptest::collection::vec(0u8..5, 6),
        seed in any::<u64>(),
    ) {
        let word: Vec<u8> = word.iter().map(|s| s % q as u8).collect();
        let c = inject_symbol_errors(&word, q, &NoiseModel::Adversarial { t, positions: None }, &mut seeded(seed)).unwrap();
        prop_assert_eq!(c.positions.len(), t);
        for j in 1..=word.len() {
            prop_assert_eq!(c.word[j - 1] != word[j - 1], c.positions.contains(&j));
            prop_assert!((c.word[j - 1] as usize) < q);
        }
    }

    #[test]
    fn guarantee_holds_for_random_povms(dim in prop::sample::select(vec![8usize, 12]), seed in any::<u64>()) {
        let set = c6_set(dim, seed);
        let report = verify_guarantee(&random_state(dim, seed), &set, 1).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert_eq!(report.cases, 8 * 7);
        let beyond = verify_guarantee(&QuantumState::maximally_mixed(dim), &set, 2).unwrap();
        prop_assert!(beyond.decode_failures > 0);
    }
}

#[test]
fn campaigns_are_reproducible_and_prefix_stable() {
    let set = c6_set(8, 3);
    let rho = random_state(8, 3);
    let noise = NoiseModel::Independent { p: 0.1 };
    let a = run_campaign(&rho, &set, &noise, 300, 11, true).unwrap();
    let b = run_campaign(&rho, &set, &noise, 300, 11, true).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.successes, b.successes);
    let prefix = run_campaign(&rho, &set, &noise, 120, 11, true).unwrap();
    assert_eq!(prefix.records[..], a.records[..120]);
    let other = run_campaign(&rho, &set, &noise, 300, 12, true).unwrap();
    assert_ne!(other.records, a.records);
    assert_eq!(a.true_counts.iter().sum::<u64>(), 300);
    assert_eq!(a.decoded_counts.iter().sum::<u64>(), 300);
}

#[test]
fn within_radius_trials_always_succeed() {
    let set = c6_set(12, 5);
    let rho = random_state(12, 5);
    let stats = run_campaign(
        &rho,
        &set,
        &NoiseModel::Adversarial {
            t: 1,
            positions: None,
        },
        500,
        1,
        false,
    )
    .unwrap();
    assert_eq!(stats.successes, 500);
    assert_eq!(stats.guaranteed_trials, 500);
    assert!(stats.max_state_deviation < 1e-8);
    let two = run_campaign(
        &rho,
        &set,
        &NoiseModel::Adversarial {
            t: 2,
            positions: None,
        },
        500,
        1,
        false,
    )
    .unwrap();
    assert_eq!(two.guaranteed_trials, 0);
    assert!(two.successes < 500);
}

#[test]
fn exact_success_limits() {
    let c6 = ClassicalCode::shortened_hamming_6();
    assert!(exact_success_probabilities(&c6, 0.0)
        .unwrap()
        .iter()
        .all(|&s| (s - 1.0).abs() < 1e-15));
    // uniform received words: each word is decoded to exactly one label
    let rep = ClassicalCode::repetition(3, 1).unwrap();
    let s = exact_success_probabilities(&rep, 2.0 / 3.0).unwrap();
    assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{s:?}");
}
