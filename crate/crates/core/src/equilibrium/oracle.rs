//! Exhaustive backward induction over the full game tree.
//!
//! Shares nothing with the recursive solver beyond the expected-utility
//! evaluation: strategies are enumerated from bitmasks, subgames are never
//! cached, and each customer's payoff is read off the terminal profile.

use crate::error::{GameError, Result};
use crate::model::{expected_utility_unchecked, Belief, DecisionMatrix, GameConfig, UTILITY_DEADBAND};

/// Largest tree (strategies^customers) the oracle will walk.
pub const ORACLE_TREE_LIMIT: f64 = 1e7;

struct Tree<'a> {
    cfg: &'a GameConfig,
    beliefs: &'a Belief,
    strategies: Vec<Vec<usize>>,
}

impl Tree<'_> {
    /// Subgame perfect continuation from `pos`: the strategy index each
    /// remaining customer plays.
    fn solve(&self, pos: usize, counts: &mut [usize]) -> Vec<usize> {
        let n = self.cfg.customers;
        let mut branches: Vec<(f64, Vec<usize>)> = Vec::with_capacity(self.strategies.len());
        for dishes in &self.strategies {
            for &j in dishes {
                counts[j] += 1;
            }
            let rest = if pos + 1 < n {
                self.solve(pos + 1, counts)
            } else {
                Vec::new()
            };
            let mut totals = counts.to_vec();
            for &g in &rest {
                for &j in &self.strategies[g] {
                    totals[j] += 1;
                }
            }
            let payoff: f64 = dishes
                .iter()
                .map(|&j| expected_utility_unchecked(self.cfg, self.beliefs, pos, j, totals[j]))
                .sum();
            for &j in dishes {
                counts[j] -= 1;
            }
            branches.push((payoff, rest));
        }
        let top = branches.iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
        let h = branches
            .iter()
            .position(|b| b.0 >= top - UTILITY_DEADBAND)
            .expect("strategy set is not empty");
        let mut rest = branches.swap_remove(h).1;
        rest.insert(0, h);
        rest
    }
}

/// Backward induction over every sequence of legal requests, customers in
/// index order. Each customer takes the first request, in size-then-lexicographic
/// order, whose payoff is within the dead-band of the best one.
pub fn spne_oracle(cfg: &GameConfig, beliefs: &Belief) -> Result<DecisionMatrix> {
    cfg.validate()?;
    let budget = cfg.effective_budget();
    if cfg.dishes > 20 {
        return Err(GameError::Capacity(format!(
            "{} dishes is too many for the oracle",
            cfg.dishes
        )));
    }
    let mut strategies: Vec<Vec<usize>> = (0u32..1 << cfg.dishes)
        .filter(|mask| mask.count_ones() as usize <= budget)
        .map(|mask| (0..cfg.dishes).filter(|&j| mask & (1 << j) != 0).collect())
        .collect();
    strategies.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let tree_size = (strategies.len() as f64).powi(cfg.customers as i32);
    if tree_size > ORACLE_TREE_LIMIT {
        return Err(GameError::Capacity(format!(
            "game tree has {tree_size:.3e} leaves, limit is {ORACLE_TREE_LIMIT:e}"
        )));
    }
    let tree = Tree {
        cfg,
        beliefs,
        strategies,
    };
    let path = tree.solve(0, &mut vec![0; cfg.dishes]);
    let mut out = DecisionMatrix::zeros(cfg.dishes, cfg.customers);
    for (i, h) in path.into_iter().enumerate() {
        for &j in &tree.strategies[h] {
            out.set(j, i, true);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GameConfig, UtilityModel};

    #[test]
    fn crowded_single_dish_by_hand() {
        // u = 10 / n - 5 on one dish, three customers
        let mut cfg = GameConfig::standard(3, 1, &[1.0], 1.0).unwrap();
        cfg.utility = UtilityModel::homogeneous(3, 1, 1.0, 10.0, 5.0).unwrap();
        let cfg = cfg.with_learned_prior();
        let d = spne_oracle(&cfg, &cfg.prior).unwrap();
        assert_eq!(d.row(0), &[true, false, false]);
    }

    #[test]
    fn single_customer_takes_positive_dishes_up_to_budget() {
        let mut cfg = GameConfig::standard(1, 3, &[1.0, 1.0, 1.0], 1.0)
            .unwrap()
            .with_budget(2);
        cfg.utility = UtilityModel::new(vec![1.0], 10.0, vec![4.0, 12.0, 1.0]).unwrap();
        let cfg = cfg.with_learned_prior();
        let d = spne_oracle(&cfg, &cfg.prior).unwrap();
        assert_eq!(d.column(0), vec![true, false, true]);
    }

    #[test]
    fn refuses_huge_trees() {
        let cfg = GameConfig::standard(12, 5, &[1.0; 5], 0.5).unwrap();
        assert!(matches!(spne_oracle(&cfg, &cfg.prior), Err(GameError::Capacity(_))));
    }
}
