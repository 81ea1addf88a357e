//! Random small games for equivalence sweeps.

use rand::Rng;

use crate::model::{Belief, GameConfig, SignalModel, UtilityModel, DEFAULT_ALPHABET, DEFAULT_REWARD};

/// Size limits of a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceLimits {
    pub max_customers: usize,
    pub max_dishes: usize,
    pub max_budget: usize,
}

impl Default for InstanceLimits {
    fn default() -> Self {
        InstanceLimits {
            max_customers: 4,
            max_dishes: 3,
            max_budget: 2,
        }
    }
}

/// Random non-degenerate belief row: weights drawn uniformly, some states
/// zeroed at random, then normalized.
pub fn random_belief_row<R: Rng + ?Sized>(rng: &mut R, states: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..states)
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() })
        .collect();
    if row.iter().all(|&p| p == 0.0) {
        row[rng.random_range(0..states)] = 1.0;
    }
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= total);
    row
}

pub fn random_belief<R: Rng + ?Sized>(rng: &mut R, dishes: usize, states: usize) -> Belief {
    let rows = (0..dishes).map(|_| random_belief_row(rng, states)).collect();
    Belief::new(rows).expect("normalized rows")
}

/// Random game within `limits` on the default alphabet: random true states,
/// signal quality, gammas in [0, 1], costs in [0.5, 8] and a random belief.
/// The budget is drawn from `1..=max_budget` and may exceed the dish count.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, limits: InstanceLimits) -> (GameConfig, Belief) {
    let n = rng.random_range(1..=limits.max_customers);
    let m = rng.random_range(1..=limits.max_dishes);
    let budget = rng.random_range(1..=limits.max_budget);
    let labels: Vec<f64> = (0..m).map(|_| rng.random_range(1..=DEFAULT_ALPHABET) as f64).collect();
    let w = rng.random_range(1.0 / DEFAULT_ALPHABET as f64..=1.0);
    let mut cfg = GameConfig::standard(n, m, &labels, w)
        .expect("labels come from the default alphabet")
        .with_budget(budget);
    let gamma = (0..n).map(|_| rng.random::<f64>()).collect();
    let costs = (0..m).map(|_| rng.random_range(0.5..8.0)).collect();
    cfg.utility = UtilityModel::new(gamma, DEFAULT_REWARD, costs).expect("finite parameters");
    if rng.random_bool(0.25) {
        // per-dish channels of different quality
        let likelihood = (0..m)
            .map(|_| {
                let wj = rng.random_range(1.0 / DEFAULT_ALPHABET as f64..=1.0);
                let off = (1.0 - wj) / (DEFAULT_ALPHABET - 1) as f64;
                (0..DEFAULT_ALPHABET)
                    .map(|s| (0..DEFAULT_ALPHABET).map(|q| if q == s { wj } else { off }).collect())
                    .collect()
            })
            .collect();
        cfg.signal_model = SignalModel::new(likelihood).expect("symmetric rows");
    }
    let belief = random_belief(rng, m, DEFAULT_ALPHABET);
    (cfg, belief)
}
