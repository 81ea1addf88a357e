use std::collections::HashMap;

use super::candidates::{enumerate_candidates, CandidateSet};
use super::{BudgetResponse, ElementaryResponse, Observation, Prediction};
use crate::error::{check_index, GameError, Result};
use crate::model::{expected_utility_unchecked, Belief, DecisionMatrix, GameConfig, UTILITY_DEADBAND};

/// Dish count supported by the joint (budgeted) recursion.
pub const MAX_JOINT_DISHES: usize = 16;
/// Customer count supported by the joint recursion (counts are stored as bytes).
pub const MAX_JOINT_CUSTOMERS: usize = 254;

const DENSE_MEMO_LIMIT: usize = 1 << 26;
const UNKNOWN: u8 = u8::MAX;

type Counts = [u8; MAX_JOINT_DISHES];

pub(crate) fn positive(value: f64) -> bool {
    value > UTILITY_DEADBAND
}

/// Marks up to `limit` entries with the largest strictly positive values;
/// ties go to the lower index.
pub(crate) fn top_positive_into(values: &[f64], limit: usize, chosen: &mut [bool]) {
    chosen.fill(false);
    for j in bits(top_positive_mask(values, limit)) {
        chosen[j] = true;
    }
}

/// Indices of the best `limit` strictly positive entries as a bit mask.
#[inline]
fn top_positive_mask(values: &[f64], limit: usize) -> u32 {
    let limit = limit.min(MAX_JOINT_DISHES);
    if limit == 0 {
        return 0;
    }
    let mut top_v = [0.0f64; MAX_JOINT_DISHES];
    let mut top_i = [0u8; MAX_JOINT_DISHES];
    let mut len = 0;
    for (j, &v) in values.iter().enumerate() {
        if !positive(v) || (len == limit && v <= top_v[len - 1]) {
            continue;
        }
        // later indices sit behind earlier ones of equal value
        let mut k = len.min(limit - 1);
        while k > 0 && top_v[k - 1] < v {
            top_v[k] = top_v[k - 1];
            top_i[k] = top_i[k - 1];
            k -= 1;
        }
        top_v[k] = v;
        top_i[k] = j as u8;
        len = (len + 1).min(limit);
    }
    top_i[..len].iter().fold(0, |m, &j| m | 1 << j)
}

pub(crate) fn top_positive(values: &[f64], limit: usize) -> Vec<bool> {
    let mut chosen = vec![false; values.len()];
    top_positive_into(values, limit, &mut chosen);
    chosen
}

/// Indices of the set bits of `mask`, ascending.
#[inline(always)]
fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            j
        })
    })
}

pub(crate) fn check_order(order: &[usize], customers: usize) -> Result<()> {
    if order.len() != customers {
        return Err(GameError::invalid(
            "decision order",
            format!("expected {customers} entries"),
        ));
    }
    let mut seen = vec![false; customers];
    for &c in order {
        check_index("customer", c, customers)?;
        if std::mem::replace(&mut seen[c], true) {
            return Err(GameError::invalid(
                "decision order",
                format!("customer {c} appears twice"),
            ));
        }
    }
    Ok(())
}

/// Expected utilities indexed by decision position, dish and sharer count.
pub(crate) struct UtilityTable {
    customers: usize,
    dishes: usize,
    values: Vec<f64>,
    /// Every value is non-increasing in the sharer count.
    monotone: bool,
}

impl UtilityTable {
    pub(crate) fn build(cfg: &GameConfig, belief: &Belief, order: &[usize]) -> Self {
        let (n, m) = (cfg.customers, cfg.dishes);
        let mut values = Vec::with_capacity(n * m * n);
        for &c in order {
            for j in 0..m {
                for k in 1..=n {
                    values.push(expected_utility_unchecked(cfg, belief, c, j, k));
                }
            }
        }
        let monotone = values.chunks(n).all(|c| c.windows(2).all(|w| w[1] <= w[0]));
        UtilityTable {
            customers: n,
            dishes: m,
            values,
            monotone,
        }
    }

    #[inline]
    pub(crate) fn get(&self, pos: usize, dish: usize, sharers: usize) -> f64 {
        self.values[(pos * self.dishes + dish) * self.customers + sharers - 1]
    }

    /// Values of position `pos`, laid out as `[dish * customers + sharers - 1]`.
    #[inline]
    fn position(&self, pos: usize) -> &[f64] {
        let len = self.dishes * self.customers;
        &self.values[pos * len..(pos + 1) * len]
    }
}

/// Single-dish recursion. Memoized on (position, observed requesters), which
/// makes it quadratic in the number of customers.
struct ElementarySolver<'a> {
    table: &'a UtilityTable,
    dish: usize,
    customers: usize,
    memo: Vec<Option<(bool, usize)>>,
}

impl<'a> ElementarySolver<'a> {
    fn new(table: &'a UtilityTable, dish: usize) -> Self {
        let customers = table.customers;
        ElementarySolver {
            table,
            dish,
            customers,
            memo: vec![None; customers * (customers + 1)],
        }
    }

    /// Returns `(d_i, m_i)` for the customer at `pos` after `observed`
    /// predecessors requested the dish.
    fn respond(&mut self, pos: usize, observed: usize) -> (bool, usize) {
        let key = pos * (self.customers + 1) + observed;
        if let Some(hit) = self.memo[key] {
            return hit;
        }
        let result = if pos + 1 == self.customers {
            (positive(self.table.get(pos, self.dish, observed + 1)), 0)
        } else {
            let (next, after) = self.respond(pos + 1, observed + 1);
            let successors = after + usize::from(next);
            if positive(self.table.get(pos, self.dish, observed + successors + 1)) {
                (true, successors)
            } else {
                // declined: successors now face one requester fewer
                let (next, after) = self.respond(pos + 1, observed);
                (false, after + usize::from(next))
            }
        };
        self.memo[key] = Some(result);
        result
    }
}

/// Whether the joint recursion caches subgame outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memoization {
    Enabled,
    /// Re-run every subgame each time it is needed, as the literal recursion does.
    Disabled,
}

enum Memo {
    Off,
    /// Position `p` owns `(p + 1)^M` cells starting at `starts[p]`.
    Dense {
        starts: Vec<usize>,
        cells: Vec<u8>,
    },
    Sparse(HashMap<(usize, Counts), Counts>),
}

/// Joint recursion over candidate request vectors for budgeted games.
struct JointSolver<'a> {
    table: &'a UtilityTable,
    budget: usize,
    customers: usize,
    dishes: usize,
    by_mask: Vec<usize>,
    masks: Vec<u32>,
    memo: Memo,
    scratch: Vec<Vec<f64>>,
}

impl<'a> JointSolver<'a> {
    fn new(table: &'a UtilityTable, candidates: &'a CandidateSet, memo: Memoization) -> Result<Self> {
        Self::with_dense_limit(table, candidates, memo, DENSE_MEMO_LIMIT)
    }

    fn with_dense_limit(
        table: &'a UtilityTable,
        candidates: &'a CandidateSet,
        memo: Memoization,
        dense_limit: usize,
    ) -> Result<Self> {
        let (customers, dishes) = (table.customers, table.dishes);
        if dishes > MAX_JOINT_DISHES || customers > MAX_JOINT_CUSTOMERS {
            return Err(GameError::Capacity(format!(
                "joint recursion supports at most {MAX_JOINT_DISHES} dishes and {MAX_JOINT_CUSTOMERS} customers"
            )));
        }
        // counts seen by the customer at position p never exceed p
        let mut starts = Vec::with_capacity(customers + 1);
        let mut total = Some(0usize);
        for p in 0..=customers {
            starts.push(total.unwrap_or(usize::MAX));
            total = total
                .zip((p + 1).checked_pow(dishes as u32))
                .and_then(|(t, n)| t.checked_add(n));
        }
        let dense_cells = total.and_then(|t| t.checked_mul(dishes));
        let memo = match (memo, dense_cells) {
            (Memoization::Disabled, _) => Memo::Off,
            (Memoization::Enabled, Some(cells)) if cells <= dense_limit => Memo::Dense {
                starts,
                cells: vec![UNKNOWN; cells],
            },
            (Memoization::Enabled, _) => Memo::Sparse(HashMap::new()),
        };
        let masks: Vec<u32> = candidates.iter().map(|c| c.iter().map(|&j| 1u32 << j).sum()).collect();
        let mut by_mask = vec![usize::MAX; 1 << dishes];
        for (h, &mask) in masks.iter().enumerate() {
            by_mask[mask as usize] = h;
        }
        Ok(JointSolver {
            table,
            budget: candidates.budget(),
            customers,
            dishes,
            by_mask,
            masks,
            memo,
            scratch: vec![vec![f64::NAN; candidates.len()]; customers],
        })
    }

    fn cell(&self, starts: &[usize], pos: usize, counts: &Counts) -> usize {
        let base = pos + 1;
        let idx = counts[..self.dishes]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * base + c as usize);
        (starts[pos] + idx) * self.dishes
    }

    fn lookup(&self, pos: usize, counts: &Counts) -> Option<Counts> {
        match &self.memo {
            Memo::Off => None,
            Memo::Dense { starts, cells } => {
                let at = self.cell(starts, pos, counts);
                let slot = &cells[at..at + self.dishes];
                (slot[0] != UNKNOWN).then(|| {
                    let mut out = [0; MAX_JOINT_DISHES];
                    for (o, &c) in out.iter_mut().zip(slot) {
                        *o = c;
                    }
                    out
                })
            }
            Memo::Sparse(map) => map.get(&(pos, *counts)).copied(),
        }
    }

    fn store(&mut self, pos: usize, counts: &Counts, value: Counts) {
        let dishes = self.dishes;
        let at = match &self.memo {
            Memo::Dense { starts, .. } => self.cell(starts, pos, counts),
            _ => 0,
        };
        match &mut self.memo {
            Memo::Off => {}
            Memo::Dense { cells, .. } => {
                for (c, &v) in cells[at..at + dishes].iter_mut().zip(&value) {
                    *c = v;
                }
            }
            Memo::Sparse(map) => {
                map.insert((pos, *counts), value);
            }
        }
    }

    /// Requests made by customers at positions `pos..` given `counts` from
    /// the predecessors.
    fn outcome(&mut self, pos: usize, counts: &Counts) -> Counts {
        // the last customer is cheaper to recompute than to cache
        if pos + 1 == self.customers {
            return self.last_response(counts);
        }
        if let Some(hit) = self.lookup(pos, counts) {
            return hit;
        }
        let (h, mut total) = self.respond(pos, counts);
        for j in bits(self.masks[h]) {
            total[j] += 1;
        }
        self.store(pos, counts, total);
        total
    }

    /// The last customer's request as 0/1 counts: its best positive dishes.
    fn last_response(&self, counts: &Counts) -> Counts {
        let row = self.table.position(self.customers - 1);
        let stride = self.table.customers;
        let mut alone = [0.0; MAX_JOINT_DISHES];
        for (j, v) in alone.iter_mut().enumerate().take(self.dishes) {
            *v = row[j * stride + counts[j] as usize];
        }
        let mask = top_positive_mask(&alone[..self.dishes], self.budget);
        let mut out = [0; MAX_JOINT_DISHES];
        for (j, o) in out.iter_mut().enumerate().take(self.dishes) {
            *o = (mask >> j & 1) as u8;
        }
        out
    }

    /// Best candidate for the customer at `pos` and the predicted requests of
    /// its successors under that choice.
    fn respond(&mut self, pos: usize, counts: &Counts) -> (usize, Counts) {
        let table = self.table;
        let stride = table.customers;
        let row = table.position(pos);
        let mut alone = [0.0; MAX_JOINT_DISHES];
        for (j, v) in alone.iter_mut().enumerate().take(self.dishes) {
            *v = row[j * stride + counts[j] as usize];
        }
        let greedy = self.by_mask[top_positive_mask(&alone[..self.dishes], self.budget) as usize];
        if pos + 1 == self.customers {
            return (greedy, [0; MAX_JOINT_DISHES]);
        }

        // values[h] stays NaN for candidates ruled out without evaluation
        let mut values = std::mem::take(&mut self.scratch[pos]);
        values.fill(f64::NAN);
        values[0] = 0.0;
        let mut best_value = 0.0f64;
        // the greedy request usually scores close to the best, which makes the
        // bound below effective from the start
        for h in std::iter::once(greedy).chain(1..self.masks.len()) {
            if h == 0 || !values[h].is_nan() {
                continue;
            }
            let mask = self.masks[h];
            // successors only add sharers, so the values seen now bound the outcome
            if table.monotone {
                let bound: f64 = bits(mask).map(|j| alone[j]).sum();
                if bound < best_value - UTILITY_DEADBAND {
                    continue;
                }
            }
            let future = self.child_outcome(pos, counts, h);
            let value: f64 = bits(mask)
                .map(|j| row[j * stride + counts[j] as usize + future[j] as usize])
                .sum();
            values[h] = value;
            best_value = best_value.max(value);
        }
        // first candidate within the dead-band of the best: fewer dishes win ties
        let h = values
            .iter()
            .position(|&v| v >= best_value - UTILITY_DEADBAND)
            .expect("the maximum itself qualifies");
        self.scratch[pos] = values;
        (h, self.child_outcome(pos, counts, h))
    }

    /// Requests by positions after `pos` when the customer at `pos` plays `h`.
    fn child_outcome(&mut self, pos: usize, counts: &Counts, h: usize) -> Counts {
        let mut child = *counts;
        for j in bits(self.masks[h]) {
            child[j] += 1;
        }
        self.outcome(pos + 1, &child)
    }

    /// Candidate chosen at each position along the equilibrium path.
    fn play(&mut self) -> Vec<usize> {
        let mut counts = [0u8; MAX_JOINT_DISHES];
        let mut path = Vec::with_capacity(self.customers);
        for pos in 0..self.customers {
            let (h, _) = self.respond(pos, &counts);
            for j in bits(self.masks[h]) {
                counts[j] += 1;
            }
            path.push(h);
        }
        path
    }
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_belief(cfg: &GameConfig, beliefs: &Belief) -> Result<()> {
    if beliefs.num_dishes() != cfg.dishes || beliefs.num_states() != cfg.state_set.num_states() {
        return Err(GameError::invalid("belief", "shape does not match the game"));
    }
    Ok(())
}

/// Single-dish best response of `customer` after `observed` predecessors
/// requested `dish`.
pub fn br_eibg(
    cfg: &GameConfig,
    beliefs: &Belief,
    dish: usize,
    observed: usize,
    customer: usize,
) -> Result<ElementaryResponse> {
    check_index("customer", customer, cfg.customers)?;
    check_index("dish", dish, cfg.dishes)?;
    check_belief(cfg, beliefs)?;
    if observed > customer {
        return Err(GameError::Contract(format!(
            "customer {customer} cannot observe {observed} earlier requests"
        )));
    }
    let table = UtilityTable::build(cfg, beliefs, &identity(cfg.customers));
    let (request, successors) = ElementarySolver::new(&table, dish).respond(customer, observed);
    Ok(ElementaryResponse { request, successors })
}

/// Best response of `obs.customer` over the budgeted candidate set, with the
/// predicted requests of all later customers.
pub fn br_ibg(cfg: &GameConfig, beliefs: &Belief, obs: &Observation) -> Result<BudgetResponse> {
    check_belief(cfg, beliefs)?;
    obs.check(cfg)?;
    let table = UtilityTable::build(cfg, beliefs, &identity(cfg.customers));
    let candidates = enumerate_candidates(cfg.dishes, cfg.budget)?;
    let mut solver = JointSolver::new(&table, &candidates, Memoization::Enabled)?;
    let mut counts = [0u8; MAX_JOINT_DISHES];
    for (j, &n) in obs.counts.iter().enumerate() {
        counts[j] = n as u8;
    }
    let (h, future) = solver.respond(obs.customer, &counts);
    Ok(BudgetResponse {
        request: candidates.vector(h),
        prediction: Prediction {
            counts: future[..cfg.dishes].iter().map(|&c| c as usize).collect(),
        },
    })
}

/// Subgame perfect equilibrium path with customers deciding in index order.
pub fn solve_equilibrium(cfg: &GameConfig, beliefs: &Belief) -> Result<DecisionMatrix> {
    solve_equilibrium_ordered(cfg, beliefs, &identity(cfg.customers))
}

/// Equilibrium path when `order[k]` is the customer deciding k-th. Columns of
/// the result are indexed by customer, not by position.
///
/// Without a binding budget every dish is solved on its own; otherwise the
/// joint recursion runs over the candidate set.
pub fn solve_equilibrium_ordered(cfg: &GameConfig, beliefs: &Belief, order: &[usize]) -> Result<DecisionMatrix> {
    if cfg.has_budget() {
        solve_joint(cfg, beliefs, order, Memoization::Enabled)
    } else {
        solve_per_dish(cfg, beliefs, order)
    }
}

/// Runs the single-dish recursion on every dish independently.
pub fn solve_per_dish(cfg: &GameConfig, beliefs: &Belief, order: &[usize]) -> Result<DecisionMatrix> {
    check_belief(cfg, beliefs)?;
    check_order(order, cfg.customers)?;
    let table = UtilityTable::build(cfg, beliefs, order);
    let mut out = DecisionMatrix::zeros(cfg.dishes, cfg.customers);
    for dish in 0..cfg.dishes {
        let mut solver = ElementarySolver::new(&table, dish);
        let mut observed = 0;
        for (pos, &customer) in order.iter().enumerate() {
            let (request, _) = solver.respond(pos, observed);
            if request {
                out.set(dish, customer, true);
                observed += 1;
            }
        }
    }
    Ok(out)
}

/// Runs the joint recursion regardless of whether the budget binds.
pub fn solve_joint(cfg: &GameConfig, beliefs: &Belief, order: &[usize], memo: Memoization) -> Result<DecisionMatrix> {
    check_belief(cfg, beliefs)?;
    check_order(order, cfg.customers)?;
    let table = UtilityTable::build(cfg, beliefs, order);
    let candidates = enumerate_candidates(cfg.dishes, cfg.budget)?;
    let path = JointSolver::new(&table, &candidates, memo)?.play();
    let mut out = DecisionMatrix::zeros(cfg.dishes, cfg.customers);
    for (pos, h) in path.into_iter().enumerate() {
        out.set_column(order[pos], &candidates.vector(h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Belief, GameConfig};

    /// One dish whose point-mass belief gives `u = a / n - c`.
    fn single_dish(customers: usize, a: f64, cost: f64) -> GameConfig {
        let mut cfg = GameConfig::standard(customers, 1, &[1.0], 1.0).unwrap();
        cfg.utility = crate::model::UtilityModel::homogeneous(customers, 1, 1.0, a, cost).unwrap();
        cfg.with_learned_prior()
    }

    #[test]
    fn top_positive_prefers_low_index_on_ties() {
        assert_eq!(top_positive(&[1.0, 3.0, 3.0, 2.0], 2), vec![false, true, true, false]);
        assert_eq!(top_positive(&[2.0, 2.0, 2.0], 2), vec![true, true, false]);
        assert_eq!(top_positive(&[-1.0, 0.0, 5e-13], 3), vec![false, false, false]);
    }

    #[test]
    fn elementary_all_request_when_always_profitable() {
        // u = 3 * 10 / n - 1 > 0 for every n <= 10
        let mut cfg = GameConfig::standard(10, 1, &[5.0], 0.2).unwrap();
        cfg = cfg.with_learned_prior();
        let d = solve_equilibrium(&cfg, &cfg.prior).unwrap();
        assert_eq!(d.row_sum(0), 10);
        for i in 0..10 {
            let r = br_eibg(&cfg, &cfg.prior, 0, i, i).unwrap();
            assert!(r.request);
            assert_eq!(r.successors, 9 - i);
        }
    }

    #[test]
    fn elementary_only_first_when_crowding_kills_value() {
        // u = 10 / n - 5: positive only alone
        let cfg = single_dish(6, 10.0, 5.0);
        let d = solve_equilibrium(&cfg, &cfg.prior).unwrap();
        assert_eq!(d.row(0), &[true, false, false, false, false, false]);
    }

    #[test]
    fn elementary_last_customer_base_case() {
        let cfg = single_dish(4, 10.0, 1.0);
        let r = br_eibg(&cfg, &cfg.prior, 0, 3, 3).unwrap();
        assert!(r.request);
        assert_eq!(r.successors, 0);
        let cfg = single_dish(4, 10.0, 5.0);
        let r = br_eibg(&cfg, &cfg.prior, 0, 1, 3).unwrap();
        assert!(!r.request);
    }

    #[test]
    fn elementary_rejects_inconsistent_observation() {
        let cfg = single_dish(4, 10.0, 1.0);
        assert!(br_eibg(&cfg, &cfg.prior, 0, 3, 2).is_err());
        assert!(br_eibg(&cfg, &cfg.prior, 0, 0, 4).is_err());
        assert!(br_eibg(&cfg, &cfg.prior, 1, 0, 0).is_err());
    }

    #[test]
    fn budget_single_customer_picks_best_dish() {
        // dish values at n = 1: 9 and 4
        let mut cfg = GameConfig::standard(1, 2, &[1.0, 1.0], 1.0).unwrap().with_budget(1);
        cfg.utility = crate::model::UtilityModel::new(vec![1.0], 10.0, vec![1.0, 6.0]).unwrap();
        let cfg = cfg.with_learned_prior();
        let r = br_ibg(&cfg, &cfg.prior, &Observation::new(0, vec![0, 0])).unwrap();
        assert_eq!(r.request, vec![true, false]);
        assert_eq!(r.prediction.counts, vec![0, 0]);
    }

    #[test]
    fn all_negative_gives_empty_request() {
        let mut cfg = GameConfig::standard(3, 3, &[1.0, 2.0, 3.0], 0.9)
            .unwrap()
            .with_budget(2);
        cfg.utility = crate::model::UtilityModel::homogeneous(3, 3, 1.0, 10.0, 100.0).unwrap();
        let d = solve_equilibrium(&cfg, &cfg.prior).unwrap();
        assert_eq!(d.row_sums(), vec![0, 0, 0]);
        let r = br_ibg(&cfg, &cfg.prior, &Observation::new(1, vec![0, 0, 0])).unwrap();
        assert_eq!(r.request, vec![false; 3]);
    }

    #[test]
    fn memoized_joint_matches_literal_recursion() {
        let beliefs = Belief::new(vec![
            vec![0.1, 0.2, 0.3, 0.2, 0.2],
            vec![0.5, 0.1, 0.1, 0.1, 0.2],
            vec![0.0, 0.0, 0.2, 0.3, 0.5],
        ])
        .unwrap();
        for (budget, gamma) in [(1, vec![0.3, 0.9, 0.5, 0.2]), (2, vec![0.1, 0.4, 0.8, 0.6])] {
            let mut cfg = GameConfig::standard(4, 3, &[2.0, 3.0, 5.0], 0.7)
                .unwrap()
                .with_budget(budget)
                .with_gamma(gamma)
                .unwrap();
            cfg.utility =
                crate::model::UtilityModel::new(cfg.utility.gammas().to_vec(), 10.0, vec![2.0, 1.5, 3.0]).unwrap();
            for order in [vec![0, 1, 2, 3], vec![2, 0, 3, 1]] {
                let a = solve_joint(&cfg, &beliefs, &order, Memoization::Enabled).unwrap();
                let b = solve_joint(&cfg, &beliefs, &order, Memoization::Disabled).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn sparse_memo_matches_dense() {
        let mut cfg = GameConfig::standard(7, 4, &[1.0, 3.0, 4.0, 5.0], 0.8)
            .unwrap()
            .with_budget(2);
        cfg.utility =
            crate::model::UtilityModel::new(vec![0.9, 0.2, 0.5, 0.7, 0.4, 1.0, 0.3], 10.0, vec![1.0, 2.0, 3.0, 1.5])
                .unwrap();
        let cfg = cfg.with_learned_prior();
        let order: Vec<usize> = (0..7).rev().collect();
        let table = UtilityTable::build(&cfg, &cfg.prior, &order);
        let candidates = enumerate_candidates(4, 2).unwrap();
        let dense = JointSolver::new(&table, &candidates, Memoization::Enabled)
            .unwrap()
            .play();
        let mut sparse = JointSolver::with_dense_limit(&table, &candidates, Memoization::Enabled, 0).unwrap();
        assert!(matches!(sparse.memo, Memo::Sparse(_)));
        assert_eq!(sparse.play(), dense);
    }

    #[test]
    fn order_validation() {
        assert!(check_order(&[0, 1, 2], 3).is_ok());
        assert!(check_order(&[0, 0, 2], 3).is_err());
        assert!(check_order(&[0, 1], 3).is_err());
        assert!(check_order(&[0, 1, 3], 3).is_err());
    }
}
