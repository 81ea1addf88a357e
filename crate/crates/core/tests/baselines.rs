use ibg_core::baselines::{learning_decision, myopic_decision, random_decision};
use ibg_core::equilibrium::{enumerate_candidates, Observation};
use ibg_core::instances::{random_belief, random_instance, InstanceLimits};
use ibg_core::model::GameConfig;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn limits() -> InstanceLimits {
    InstanceLimits {
        max_customers: 8,
        max_dishes: 5,
        max_budget: 4,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn baselines_respect_the_budget(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cfg, belief) = random_instance(&mut rng, limits());
        let customer = rng.random_range(0..cfg.customers);
        let counts = (0..cfg.dishes).map(|_| rng.random_range(0..=customer)).collect();
        let obs = Observation::new(customer, counts);
        let l = cfg.effective_budget();
        let m = myopic_decision(&belief, &obs, &cfg).unwrap();
        prop_assert!(m.iter().filter(|&&r| r).count() <= l);
        let d = learning_decision(&belief, customer, &cfg).unwrap();
        prop_assert!(d.iter().filter(|&&r| r).count() <= l);
        let c = enumerate_candidates(cfg.dishes, cfg.budget).unwrap();
        prop_assert!(random_decision(&mut rng, &c).iter().filter(|&&r| r).count() <= l);
    }

    #[test]
    fn learning_ignores_what_others_requested(seed in any::<u64>()) {
        // the learning rule has no observation argument; its answer for a
        // customer is a function of the belief alone
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cfg, belief) = random_instance(&mut rng, limits());
        let customer = rng.random_range(0..cfg.customers);
        let first = learning_decision(&belief, customer, &cfg).unwrap();
        let mut other = cfg.clone();
        other.true_states = (0..cfg.dishes).map(|_| rng.random_range(0..5)).collect();
        prop_assert_eq!(first, learning_decision(&belief, customer, &other).unwrap());
    }

    #[test]
    fn myopic_ranks_by_the_frozen_prior_only(seed in any::<u64>()) {
        // same observation and prior give the same answer whatever the
        // current belief or true states are
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cfg, _) = random_instance(&mut rng, limits());
        let customer = rng.random_range(0..cfg.customers);
        let counts: Vec<usize> = (0..cfg.dishes).map(|_| rng.random_range(0..=customer)).collect();
        let obs = Observation::new(customer, counts);
        let a = myopic_decision(&cfg.prior, &obs, &cfg).unwrap();
        let mut other = cfg.clone();
        other.true_states = (0..cfg.dishes).map(|_| rng.random_range(0..5)).collect();
        other.slots += 17;
        prop_assert_eq!(a, myopic_decision(&other.prior, &obs, &other).unwrap());
    }
}

#[test]
fn myopic_avoids_dishes_observed_crowded() {
    // E[q] = 3 under the uniform prior; u = 30 / n - 1 turns negative at n = 30
    let cfg = GameConfig::standard(40, 3, &[3.0; 3], 0.5).unwrap().with_budget(2);
    let obs = Observation::new(39, vec![29, 1, 2]);
    assert_eq!(
        myopic_decision(&cfg.prior, &obs, &cfg).unwrap(),
        vec![false, true, true]
    );
}

#[test]
fn learning_prefers_dishes_believed_better() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = GameConfig::standard(3, 4, &[1.0, 2.0, 3.0, 4.0], 0.8)
        .unwrap()
        .with_budget(2)
        .with_learned_prior();
    // point masses on states 1..4: dishes 2 and 3 are the best two
    assert_eq!(
        learning_decision(&cfg.prior, 0, &cfg).unwrap(),
        vec![false, false, true, true]
    );
    let noise = random_belief(&mut rng, 4, 5);
    assert!(
        learning_decision(&noise, 0, &cfg)
            .unwrap()
            .iter()
            .filter(|&&r| r)
            .count()
            <= 2
    );
}

#[test]
fn random_is_uniform_over_legal_requests() {
    // two dishes without a binding budget have four subsets, not five
    for (m, l, expected) in [(2, 1, 3usize), (2, 2, 4), (3, 2, 7)] {
        let c = enumerate_candidates(m, l).unwrap();
        assert_eq!(c.len(), expected);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 100_000;
        let mut hits = vec![0usize; c.len()];
        for _ in 0..draws {
            let v = random_decision(&mut rng, &c);
            let h = (0..c.len()).find(|&h| c.vector(h) == v).unwrap();
            hits[h] += 1;
        }
        let e = draws as f64 / c.len() as f64;
        let chi2: f64 = hits.iter().map(|&k| (k as f64 - e).powi(2) / e).sum();
        // 99.9% quantile of chi-square with 6 degrees of freedom
        assert!(chi2 < 22.5, "m={m} l={l} chi2={chi2} hits={hits:?}");
        if expected == 4 {
            assert!(hits.iter().all(|&k| (k as f64 / draws as f64 - 0.25).abs() < 0.01));
        }
    }
}
