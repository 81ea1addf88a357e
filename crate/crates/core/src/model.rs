//! Domain types of the game: state and signal alphabets, beliefs, the signal
//! likelihood, the utility rule, decision matrices and the game configuration.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{check_index, GameError, Result};

/// Tolerance on probability vectors summing to one.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Expected utilities at or below this value count as non-positive.
pub const UTILITY_DEADBAND: f64 = 1e-12;

/// Finite state alphabet and signal (quality) alphabet.
///
/// Signals double as dish qualities: the label value is the `q` that enters
/// the utility rule.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    states: Vec<f64>,
    signals: Vec<f64>,
}

impl StateSet {
    pub fn new(states: Vec<f64>, signals: Vec<f64>) -> Result<Self> {
        check_labels("states", &states)?;
        check_labels("signals", &signals)?;
        Ok(StateSet { states, signals })
    }

    /// States and signals both labelled `1..=size`.
    pub fn numeric(size: usize) -> Result<Self> {
        let labels: Vec<f64> = (1..=size).map(|k| k as f64).collect();
        StateSet::new(labels.clone(), labels)
    }

    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn signals(&self) -> &[f64] {
        &self.signals
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn state_index(&self, label: f64) -> Option<usize> {
        self.states.iter().position(|&s| s == label)
    }

    pub fn signal_index(&self, label: f64) -> Option<usize> {
        self.signals.iter().position(|&s| s == label)
    }
}

impl Default for StateSet {
    fn default() -> Self {
        StateSet::numeric(5).expect("default alphabet is valid")
    }
}

fn check_labels(what: &'static str, labels: &[f64]) -> Result<()> {
    if labels.is_empty() {
        return Err(GameError::invalid(what, "alphabet is empty"));
    }
    if let Some(bad) = labels.iter().find(|v| !v.is_finite()) {
        return Err(GameError::invalid(what, format!("label {bad} is not finite")));
    }
    for (k, a) in labels.iter().enumerate() {
        if labels[..k].contains(a) {
            return Err(GameError::invalid(what, format!("duplicate label {a}")));
        }
    }
    Ok(())
}

/// Checks that `row` is a probability vector.
pub fn check_distribution(what: &'static str, row: &[f64]) -> Result<()> {
    if row.is_empty() {
        return Err(GameError::invalid(what, "empty probability vector"));
    }
    if let Some(p) = row.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(GameError::invalid(what, format!("entry {p} is not a probability")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(GameError::invalid(what, format!("entries sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Shared belief: one distribution over the state alphabet per dish.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    rows: Vec<Vec<f64>>,
}

impl Belief {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(GameError::invalid("belief", "no dishes"));
        }
        let width = rows[0].len();
        for row in &rows {
            if row.len() != width {
                return Err(GameError::invalid("belief", "rows have different lengths"));
            }
            check_distribution("belief", row)?;
        }
        Ok(Belief { rows })
    }

    pub fn uniform(dishes: usize, states: usize) -> Self {
        Belief {
            rows: vec![vec![1.0 / states as f64; states]; dishes],
        }
    }

    /// All mass on the given state index of each dish (a fully learned belief).
    pub fn point_mass(states: usize, true_states: &[usize]) -> Result<Self> {
        let rows = true_states
            .iter()
            .map(|&s| {
                check_index("state", s, states)?;
                let mut row = vec![0.0; states];
                row[s] = 1.0;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Belief::new(rows)
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Self {
        Belief { rows }
    }

    pub fn dish(&self, dish: usize) -> &[f64] {
        &self.rows[dish]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_dishes(&self) -> usize {
        self.rows.len()
    }

    pub fn num_states(&self) -> usize {
        self.rows[0].len()
    }
}

/// Conditional signal distributions `f_j(s | theta)`, one matrix per dish with
/// rows indexed by state and columns by signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalModel {
    likelihood: Vec<Vec<Vec<f64>>>,
    quality: Option<f64>,
}

impl SignalModel {
    pub fn new(likelihood: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let first = likelihood
            .first()
            .ok_or_else(|| GameError::invalid("signal model", "no dishes"))?;
        let states = first.len();
        let signals = first.first().map_or(0, Vec::len);
        for matrix in &likelihood {
            if matrix.len() != states || matrix.iter().any(|r| r.len() != signals) {
                return Err(GameError::invalid("signal model", "dish matrices differ in shape"));
            }
            for row in matrix {
                check_distribution("signal likelihood", row)?;
            }
        }
        Ok(SignalModel {
            likelihood,
            quality: None,
        })
    }

    /// The symmetric channel: the signal equals the state with probability
    /// `w`, every other signal is equally likely.
    pub fn symmetric(dishes: usize, size: usize, w: f64) -> Result<Self> {
        if size == 0 || dishes == 0 {
            return Err(GameError::invalid("signal model", "empty alphabet or no dishes"));
        }
        let floor = 1.0 / size as f64;
        if !(w.is_finite() && w + PROB_TOLERANCE >= floor && w <= 1.0) {
            return Err(GameError::invalid(
                "signal quality",
                format!("w = {w} must lie in [1/{size}, 1]"),
            ));
        }
        let off = if size > 1 { (1.0 - w) / (size - 1) as f64 } else { 0.0 };
        let matrix: Vec<Vec<f64>> = (0..size)
            .map(|s| (0..size).map(|q| if q == s { w } else { off }).collect())
            .collect();
        Ok(SignalModel {
            likelihood: vec![matrix; dishes],
            quality: Some(w),
        })
    }

    pub fn likelihood(&self, dish: usize, state: usize, signal: usize) -> f64 {
        self.likelihood[dish][state][signal]
    }

    pub fn row(&self, dish: usize, state: usize) -> &[f64] {
        &self.likelihood[dish][state]
    }

    /// `w` when built by [`SignalModel::symmetric`].
    pub fn signal_quality(&self) -> Option<f64> {
        self.quality
    }

    pub fn num_dishes(&self) -> usize {
        self.likelihood.len()
    }

    pub fn num_states(&self) -> usize {
        self.likelihood[0].len()
    }

    pub fn num_signals(&self) -> usize {
        self.likelihood[0][0].len()
    }
}

/// Arbitrary utility `u(customer, dish, quality, sharers)`; must be
/// decreasing in the number of sharers.
pub type UtilityFn = dyn Fn(usize, usize, f64, usize) -> f64 + Send + Sync;

/// Utility of a requested dish: `gamma_i * q * R / n - c_j` unless a custom
/// rule is installed.
#[derive(Clone)]
pub struct UtilityModel {
    gamma: Vec<f64>,
    reward: f64,
    costs: Vec<f64>,
    custom: Option<Arc<UtilityFn>>,
}

impl UtilityModel {
    pub fn new(gamma: Vec<f64>, reward: f64, costs: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() || costs.is_empty() {
            return Err(GameError::invalid("utility", "no customers or no dishes"));
        }
        if gamma.iter().chain(&costs).chain([&reward]).any(|v| !v.is_finite()) {
            return Err(GameError::invalid("utility", "parameters must be finite"));
        }
        Ok(UtilityModel {
            gamma,
            reward,
            costs,
            custom: None,
        })
    }

    pub fn homogeneous(customers: usize, dishes: usize, gamma: f64, reward: f64, cost: f64) -> Result<Self> {
        UtilityModel::new(vec![gamma; customers], reward, vec![cost; dishes])
    }

    /// Replaces the linear rule. The linear parameters are kept for reporting
    /// but no longer used for evaluation.
    pub fn with_custom<F>(mut self, rule: F) -> Self
    where
        F: Fn(usize, usize, f64, usize) -> f64 + Send + Sync + 'static,
    {
        self.custom = Some(Arc::new(rule));
        self
    }

    /// Utility of customer `customer` sharing `dish` of quality `quality`
    /// with `sharers` requesters in total (including itself). `sharers >= 1`.
    pub fn evaluate(&self, customer: usize, dish: usize, quality: f64, sharers: usize) -> f64 {
        debug_assert!(sharers >= 1);
        match &self.custom {
            Some(rule) => rule(customer, dish, quality, sharers),
            None => self.gamma[customer] * quality * self.reward / sharers as f64 - self.costs[dish],
        }
    }

    pub fn gamma(&self, customer: usize) -> f64 {
        self.gamma[customer]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    pub fn cost(&self, dish: usize) -> f64 {
        self.costs[dish]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn is_custom(&self) -> bool {
        self.custom.is_some()
    }

    /// All customers share one utility function.
    pub fn is_homogeneous(&self) -> bool {
        self.custom.is_none() && self.gamma.iter().all(|&g| g == self.gamma[0])
    }

    pub fn num_customers(&self) -> usize {
        self.gamma.len()
    }

    pub fn num_dishes(&self) -> usize {
        self.costs.len()
    }
}

impl fmt::Debug for UtilityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UtilityModel")
            .field("gamma", &self.gamma)
            .field("reward", &self.reward)
            .field("costs", &self.costs)
            .field("custom", &self.custom.is_some())
            .finish()
    }
}

impl PartialEq for UtilityModel {
    fn eq(&self, other: &Self) -> bool {
        let same_rule = match (&self.custom, &other.custom) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        };
        same_rule && self.gamma == other.gamma && self.reward == other.reward && self.costs == other.costs
    }
}

/// `dishes x customers` binary request matrix; column `i` is customer `i`'s
/// request vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecisionMatrix {
    dishes: usize,
    customers: usize,
    cells: Vec<bool>,
}

impl DecisionMatrix {
    pub fn zeros(dishes: usize, customers: usize) -> Self {
        DecisionMatrix {
            dishes,
            customers,
            cells: vec![false; dishes * customers],
        }
    }

    /// Builds a matrix from 0/1 rows, one row per dish.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let dishes = rows.len();
        let customers = rows.first().map_or(0, Vec::len);
        if dishes == 0 || customers == 0 {
            return Err(GameError::invalid("decision matrix", "empty matrix"));
        }
        let mut m = DecisionMatrix::zeros(dishes, customers);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != customers {
                return Err(GameError::invalid("decision matrix", "ragged rows"));
            }
            for (i, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(j, i, true),
                    other => {
                        return Err(GameError::invalid(
                            "decision matrix",
                            format!("entry ({j}, {i}) = {other} is not binary"),
                        ))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn dishes(&self) -> usize {
        self.dishes
    }

    pub fn customers(&self) -> usize {
        self.customers
    }

    pub fn get(&self, dish: usize, customer: usize) -> bool {
        self.cells[dish * self.customers + customer]
    }

    pub fn set(&mut self, dish: usize, customer: usize, value: bool) {
        self.cells[dish * self.customers + customer] = value;
    }

    pub fn column(&self, customer: usize) -> Vec<bool> {
        (0..self.dishes).map(|j| self.get(j, customer)).collect()
    }

    pub fn set_column(&mut self, customer: usize, column: &[bool]) {
        for (j, &v) in column.iter().enumerate() {
            self.set(j, customer, v);
        }
    }

    pub fn row(&self, dish: usize) -> &[bool] {
        &self.cells[dish * self.customers..(dish + 1) * self.customers]
    }

    pub fn row_sum(&self, dish: usize) -> usize {
        self.row(dish).iter().filter(|&&v| v).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.dishes).map(|j| self.row_sum(j)).collect()
    }

    pub fn column_sum(&self, customer: usize) -> usize {
        (0..self.dishes).filter(|&j| self.get(j, customer)).count()
    }

    pub fn rows_u8(&self) -> Vec<Vec<u8>> {
        (0..self.dishes)
            .map(|j| self.row(j).iter().map(|&v| u8::from(v)).collect())
            .collect()
    }

    /// Reorders columns: column `k` of the result is column `order[k]` of self.
    pub fn permute_columns(&self, order: &[usize]) -> DecisionMatrix {
        let mut out = DecisionMatrix::zeros(self.dishes, self.customers);
        for (k, &c) in order.iter().enumerate() {
            out.set_column(k, &self.column(c));
        }
        out
    }
}

impl fmt::Display for DecisionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dishes {
            let row: Vec<&str> = self.row(j).iter().map(|&v| if v { "1" } else { "0" }).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Full description of one game instance.
///
/// `budget >= dishes` means no budget. `true_states` holds indices into
/// `state_set.states()`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub customers: usize,
    pub dishes: usize,
    pub budget: usize,
    pub true_states: Vec<usize>,
    pub state_set: StateSet,
    pub signal_model: SignalModel,
    pub utility: UtilityModel,
    pub prior: Belief,
    pub slots: usize,
    pub rotation_period: usize,
    pub seed: u64,
}

pub const DEFAULT_REWARD: f64 = 10.0;
pub const DEFAULT_COST: f64 = 1.0;
pub const DEFAULT_ALPHABET: usize = 5;
pub const DEFAULT_SLOTS: usize = 100;
pub const DEFAULT_ROTATION_PERIOD: usize = 100;

impl GameConfig {
    /// Five states and qualities `1..=5`, `R = 10`, `c_j = 1`, `gamma_i = 1`,
    /// uniform prior, no budget. `true_states` are state labels.
    pub fn standard(customers: usize, dishes: usize, true_states: &[f64], w: f64) -> Result<Self> {
        let state_set = StateSet::default();
        let true_states = true_states
            .iter()
            .map(|&label| {
                state_set
                    .state_index(label)
                    .ok_or_else(|| GameError::invalid("true states", format!("unknown state label {label}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = GameConfig {
            customers,
            dishes,
            budget: dishes,
            true_states,
            signal_model: SignalModel::symmetric(dishes, DEFAULT_ALPHABET, w)?,
            utility: UtilityModel::homogeneous(customers, dishes, 1.0, DEFAULT_REWARD, DEFAULT_COST)?,
            prior: Belief::uniform(dishes, DEFAULT_ALPHABET),
            state_set,
            slots: DEFAULT_SLOTS,
            rotation_period: DEFAULT_ROTATION_PERIOD,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_gamma(mut self, gamma: Vec<f64>) -> Result<Self> {
        self.utility = UtilityModel::new(gamma, self.utility.reward(), self.utility.costs().to_vec())?;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Prior concentrated on the true states.
    pub fn with_learned_prior(mut self) -> Self {
        self.prior =
            Belief::point_mass(self.state_set.num_states(), &self.true_states).expect("true states already validated");
        self
    }

    /// The same game with the symmetric signal channel of quality `w`.
    pub fn with_signal_quality(mut self, w: f64) -> Result<Self> {
        self.signal_model = SignalModel::symmetric(self.dishes, self.state_set.num_states(), w)?;
        self.validate()?;
        Ok(self)
    }

    /// `min(L, M)`.
    pub fn effective_budget(&self) -> usize {
        self.budget.min(self.dishes)
    }

    pub fn has_budget(&self) -> bool {
        self.budget < self.dishes
    }

    pub fn validate(&self) -> Result<()> {
        if self.customers == 0 {
            return Err(GameError::invalid("customers", "need at least one customer"));
        }
        if self.dishes == 0 {
            return Err(GameError::invalid("dishes", "need at least one dish"));
        }
        if self.budget == 0 {
            return Err(GameError::invalid("budget", "budget must be at least 1"));
        }
        if self.rotation_period == 0 {
            return Err(GameError::invalid("rotation period", "must be at least 1"));
        }
        let states = self.state_set.num_states();
        if self.true_states.len() != self.dishes {
            return Err(GameError::invalid("true states", "need one state per dish"));
        }
        if let Some(&s) = self.true_states.iter().find(|&&s| s >= states) {
            return Err(GameError::invalid(
                "true states",
                format!("state index {s} out of range"),
            ));
        }
        let sm = &self.signal_model;
        if sm.num_dishes() != self.dishes
            || sm.num_states() != states
            || sm.num_signals() != self.state_set.num_signals()
        {
            return Err(GameError::invalid("signal model", "shape does not match the game"));
        }
        if self.utility.num_customers() != self.customers || self.utility.num_dishes() != self.dishes {
            return Err(GameError::invalid("utility", "shape does not match the game"));
        }
        if self.prior.num_dishes() != self.dishes || self.prior.num_states() != states {
            return Err(GameError::invalid("prior", "shape does not match the game"));
        }
        Ok(())
    }
}

/// Expected utility of `customer` requesting `dish` when `n_total` customers
/// (itself included) end up sharing it:
/// `sum_theta sum_q u(q, n_total) f(q | theta) p(theta)`.
pub fn expected_utility(
    cfg: &GameConfig,
    belief: &Belief,
    customer: usize,
    dish: usize,
    n_total: usize,
) -> Result<f64> {
    check_index("customer", customer, cfg.customers)?;
    check_index("dish", dish, cfg.dishes)?;
    if n_total == 0 || n_total > cfg.customers {
        return Err(GameError::Contract(format!(
            "sharer count {n_total} outside 1..={}",
            cfg.customers
        )));
    }
    Ok(expected_utility_unchecked(cfg, belief, customer, dish, n_total))
}

pub(crate) fn expected_utility_unchecked(
    cfg: &GameConfig,
    belief: &Belief,
    customer: usize,
    dish: usize,
    n_total: usize,
) -> f64 {
    let qualities = cfg.state_set.signals();
    if !cfg.utility.is_custom() {
        // linear in q: evaluate once at the predictive mean quality
        let mut mean = 0.0;
        for (theta, &p) in belief.dish(dish).iter().enumerate() {
            let row = cfg.signal_model.row(dish, theta);
            mean += p * row.iter().zip(qualities).map(|(&f, &q)| f * q).sum::<f64>();
        }
        return cfg.utility.evaluate(customer, dish, mean, n_total);
    }
    let mut total = 0.0;
    for (theta, &p) in belief.dish(dish).iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let row = cfg.signal_model.row(dish, theta);
        let inner: f64 = row
            .iter()
            .zip(qualities)
            .map(|(&f, &q)| cfg.utility.evaluate(customer, dish, q, n_total) * f)
            .sum();
        total += inner * p;
    }
    total
}

/// Draws a signal index from `f_dish(. | true_state)`.
pub fn realize_signal<R: Rng + ?Sized>(
    model: &SignalModel,
    true_state: usize,
    dish: usize,
    rng: &mut R,
) -> Result<usize> {
    check_index("dish", dish, model.num_dishes())?;
    check_index("state", true_state, model.num_states())?;
    let row = model.row(dish, true_state);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (s, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(s);
        }
    }
    // rounding left the cumulative sum just under one
    Ok(row.iter().rposition(|&p| p > 0.0).unwrap_or(row.len() - 1))
}

/// Realized utility of one dish for one customer in a slot.
pub fn realized_utility(
    utility: &UtilityModel,
    quality: f64,
    n_total: usize,
    customer: usize,
    dish: usize,
    requested: bool,
) -> Result<f64> {
    check_index("customer", customer, utility.num_customers())?;
    check_index("dish", dish, utility.num_dishes())?;
    if !requested {
        return Ok(0.0);
    }
    if n_total == 0 {
        return Err(GameError::Contract("requested dish with zero sharers".into()));
    }
    Ok(utility.evaluate(customer, dish, quality, n_total))
}
