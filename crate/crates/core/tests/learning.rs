use ibg_core::instances::{random_belief, random_belief_row};
use ibg_core::learning::{
    convergence_metrics, intermediate_update, predictive_distribution, social_update, social_update_rearranged,
    SignalGrid,
};
use ibg_core::model::{realize_signal, Belief, DecisionMatrix, SignalModel};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STATES: usize = 5;

/// Random decisions, signals drawn from the true states, and a belief with
/// full support so every update is defined.
fn random_step(seed: u64) -> (Belief, DecisionMatrix, SignalGrid, SignalModel, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=6);
    let m = rng.random_range(1..=4);
    let w = rng.random_range(0.25..0.99);
    let model = SignalModel::symmetric(m, STATES, w).unwrap();
    let truth: Vec<usize> = (0..m).map(|_| rng.random_range(0..STATES)).collect();
    let rows = (0..m)
        .map(|_| (0..STATES).map(|_| rng.random_range(0.05..1.0)).collect::<Vec<f64>>())
        .map(|r| {
            let z: f64 = r.iter().sum();
            r.into_iter().map(|v| v / z).collect()
        })
        .collect();
    let belief = Belief::new(rows).unwrap();
    let mut d = DecisionMatrix::zeros(m, n);
    let mut signals = vec![vec![None; n]; m];
    for j in 0..m {
        for i in 0..n {
            if rng.random_bool(0.5) {
                d.set(j, i, true);
                signals[j][i] = Some(realize_signal(&model, truth[j], j, &mut rng).unwrap());
            }
        }
    }
    (belief, d, signals, model, truth)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn updated_rows_are_distributions(seed in any::<u64>()) {
        let (belief, d, signals, model, _) = random_step(seed);
        let next = social_update(&belief, &d, &signals, &model).unwrap();
        for row in next.rows() {
            prop_assert!(row.iter().all(|&p| p >= 0.0));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn both_update_forms_agree(seed in any::<u64>()) {
        let (belief, d, signals, model, _) = random_step(seed);
        let a = social_update(&belief, &d, &signals, &model).unwrap();
        let b = social_update_rearranged(&belief, &d, &signals, &model).unwrap();
        for (ra, rb) in a.rows().iter().zip(b.rows()) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).abs() < 1e-12, "{} vs {}", x, y);
            }
        }
    }

    #[test]
    fn unrequested_dishes_keep_their_belief(seed in any::<u64>()) {
        let (belief, mut d, mut signals, model, _) = random_step(seed);
        for i in 0..d.customers() {
            d.set(0, i, false);
            signals[0][i] = None;
        }
        let next = social_update(&belief, &d, &signals, &model).unwrap();
        for (x, y) in next.dish(0).iter().zip(belief.dish(0)) {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn expected_posterior_of_truth_never_drops(seed in any::<u64>()) {
        // exact expectation over the signal of a lone requester
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = rng.random_range(0.2..=1.0);
        let model = SignalModel::symmetric(1, STATES, w).unwrap();
        let prior = random_belief_row(&mut rng, STATES);
        let truth = rng.random_range(0..STATES);
        prop_assume!(prior[truth] > 0.0);
        let lambda = predictive_distribution(&prior, &model, 0).unwrap();
        let expected: f64 = (0..STATES)
            .filter(|&s| lambda[s] > 0.0)
            .map(|s| model.likelihood(0, truth, s) * intermediate_update(&prior, s, &model, 0).unwrap()[truth])
            .sum();
        prop_assert!(expected >= prior[truth] - 1e-12, "{} < {}", expected, prior[truth]);
    }
}

#[test]
fn repeated_signals_concentrate_on_the_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = SignalModel::symmetric(3, STATES, 0.6).unwrap();
    let truth = vec![0, 2, 4];
    let mut belief = Belief::uniform(3, STATES);
    let mut trace = Vec::new();
    let d = DecisionMatrix::from_rows(&vec![vec![1, 1, 1, 1]; 3]).unwrap();
    for _ in 0..150 {
        let signals = (0..3)
            .map(|j| {
                let s = realize_signal(&model, truth[j], j, &mut rng).unwrap();
                vec![Some(s); 4]
            })
            .collect();
        belief = social_update(&belief, &d, &signals, &model).unwrap();
        trace.push(belief.clone());
    }
    let report = convergence_metrics(&trace, &truth, &model).unwrap();
    assert!(*report.strong_distance.last().unwrap() < 1e-3);
    assert!(report.strong_first_below(0.2).is_some());
    for j in 0..3 {
        assert!(report.weak_settled_below(j, 0.05).is_some());
    }
}

#[test]
fn perfect_signal_of_a_shared_dish_moves_belief_by_requester_share() {
    // two of four customers request; each posterior is a point mass
    let model = SignalModel::symmetric(1, STATES, 1.0).unwrap();
    let prior = Belief::uniform(1, STATES);
    let d = DecisionMatrix::from_rows(&[vec![1, 0, 1, 0]]).unwrap();
    let signals = vec![vec![Some(3), None, Some(3), None]];
    let next = social_update(&prior, &d, &signals, &model).unwrap();
    let expected = [0.1, 0.1, 0.1, 0.6, 0.1];
    for (p, e) in next.dish(0).iter().zip(expected) {
        assert!((p - e).abs() < 1e-12);
    }
}

#[test]
fn random_beliefs_are_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let b = random_belief(&mut rng, 3, STATES);
        assert!(b.rows().iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }
}
