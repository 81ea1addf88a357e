//! Sequential best responses and their verification.
//!
//! Customers decide one after another. Each predicts how every later
//! customer will react to its own choice, which makes the resulting path a
//! subgame perfect equilibrium. Without a binding budget the dishes decouple
//! and each is solved as a single-dish game; with a budget the recursion runs
//! jointly over the legal request vectors.

mod candidates;
mod checks;
mod oracle;
mod solver;

pub use candidates::{candidate_count, enumerate_candidates, CandidateSet, MAX_CANDIDATES};
pub use checks::{compute_n_t, equal_share_check, threshold_check, verify_nash, NashReport, Violation, NASH_TOLERANCE};
pub use oracle::{spne_oracle, ORACLE_TREE_LIMIT};
pub use solver::{
    br_eibg, br_ibg, solve_equilibrium, solve_equilibrium_ordered, solve_joint, solve_per_dish, Memoization,
    MAX_JOINT_CUSTOMERS, MAX_JOINT_DISHES,
};

pub(crate) use solver::{check_order, top_positive};

use crate::error::{GameError, Result};
use crate::model::GameConfig;

/// What `customer` saw before deciding: requests per dish by its predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub customer: usize,
    pub counts: Vec<usize>,
}

impl Observation {
    pub fn new(customer: usize, counts: Vec<usize>) -> Self {
        Observation { customer, counts }
    }

    /// Nothing observed yet.
    pub fn empty(customer: usize, dishes: usize) -> Self {
        Observation::new(customer, vec![0; dishes])
    }

    pub(crate) fn check(&self, cfg: &GameConfig) -> Result<()> {
        crate::error::check_index("customer", self.customer, cfg.customers)?;
        if self.counts.len() != cfg.dishes {
            return Err(GameError::invalid("observation", "need one count per dish"));
        }
        if let Some(&n) = self.counts.iter().find(|&&n| n > self.customer) {
            return Err(GameError::Contract(format!(
                "customer {} cannot observe {n} earlier requests",
                self.customer
            )));
        }
        Ok(())
    }
}

/// Predicted requests per dish by the customers after the decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub counts: Vec<usize>,
}

/// Single-dish decision and the number of later customers predicted to
/// request the dish under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementaryResponse {
    pub request: bool,
    pub successors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetResponse {
    pub request: Vec<bool>,
    pub prediction: Prediction,
}
