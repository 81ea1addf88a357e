//! Comparison strategies: myopic, learning-only and random.
//!
//! All three pick at most `L` dishes per customer. The first two rank dishes
//! by a simplified expected utility and keep the best strictly positive ones,
//! preferring lower dish indices on ties.

use rand::Rng;

use crate::equilibrium::{top_positive, CandidateSet, Observation};
use crate::error::{check_index, GameError, Result};
use crate::model::{expected_utility_unchecked, Belief, GameConfig};

fn check_belief(cfg: &GameConfig, belief: &Belief) -> Result<()> {
    if belief.num_dishes() != cfg.dishes || belief.num_states() != cfg.state_set.num_states() {
        return Err(GameError::invalid("belief", "shape does not match the game"));
    }
    Ok(())
}

/// Ranks dishes by the expected utility of joining the observed requesters,
/// under the frozen initial belief and without predicting later customers.
/// `obs.customer` is the deciding customer's index.
pub fn myopic_decision(initial: &Belief, obs: &Observation, cfg: &GameConfig) -> Result<Vec<bool>> {
    check_belief(cfg, initial)?;
    check_index("customer", obs.customer, cfg.customers)?;
    if obs.counts.len() != cfg.dishes {
        return Err(GameError::invalid("observation", "need one count per dish"));
    }
    if obs.counts.iter().any(|&n| n >= cfg.customers) {
        return Err(GameError::Contract(
            "observed more requesters than other customers".into(),
        ));
    }
    let values: Vec<f64> = (0..cfg.dishes)
        .map(|j| expected_utility_unchecked(cfg, initial, obs.customer, j, obs.counts[j] + 1))
        .collect();
    Ok(top_positive(&values, cfg.effective_budget()))
}

/// Ranks dishes by the expected utility of having them alone, under the
/// current belief.
pub fn learning_decision(belief: &Belief, customer: usize, cfg: &GameConfig) -> Result<Vec<bool>> {
    check_belief(cfg, belief)?;
    check_index("customer", customer, cfg.customers)?;
    let values: Vec<f64> = (0..cfg.dishes)
        .map(|j| expected_utility_unchecked(cfg, belief, customer, j, 1))
        .collect();
    Ok(top_positive(&values, cfg.effective_budget()))
}

/// Uniform draw from the legal requests, the empty one included.
pub fn random_decision<R: Rng + ?Sized>(rng: &mut R, candidates: &CandidateSet) -> Vec<bool> {
    candidates.vector(rng.random_range(0..candidates.len()))
}
