//! Slot-by-slot simulation and multi-realization experiments.
//!
//! A slot has three phases: customers decide in the current order, every dish
//! realizes one quality that all its requesters observe, and the shared
//! belief is updated from those observations.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{learning_decision, myopic_decision, random_decision};
use crate::equilibrium::{check_order, enumerate_candidates, solve_equilibrium_ordered, CandidateSet, Observation};
use crate::error::{GameError, Result};
use crate::learning::{convergence_metrics, social_update, ConvergenceReport, SignalGrid};
use crate::model::{realize_signal, realized_utility, Belief, DecisionMatrix, GameConfig};

/// RNG stream drawing dish qualities.
pub const NATURE_STREAM: u64 = 0;
/// RNG stream for the random baseline's choices.
pub const CHOICE_STREAM: u64 = 1;
/// RNG stream used when randomizing a scenario.
pub const CONFIG_STREAM: u64 = 2;
const SEED_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    BestResponse,
    Myopic,
    Learning,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::BestResponse,
        Strategy::Myopic,
        Strategy::Learning,
        Strategy::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::BestResponse => "best-response",
            Strategy::Myopic => "myopic",
            Strategy::Learning => "learning",
            Strategy::Random => "random",
        }
    }

    /// Whether the shared belief is updated after each slot. Myopic customers
    /// stay on the initial belief.
    pub fn learns(self) -> bool {
        !matches!(self, Strategy::Myopic)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GameError::invalid("strategy", format!("unknown strategy {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotTrace {
    pub slot: usize,
    /// `order[k]` is the customer deciding k-th.
    pub order: Vec<usize>,
    pub decisions: DecisionMatrix,
    /// Realized quality (signal index) of each dish in this slot.
    pub qualities: Vec<usize>,
    pub signals: SignalGrid,
    /// Realized utility per customer.
    pub utilities: Vec<f64>,
    /// Belief after this slot's learning phase.
    pub belief: Belief,
    pub welfare: f64,
}

/// Order after `slot` slots have been played: shifted left by one at every
/// multiple of `period` (the first decider moves to the back).
pub fn rotate_order(order: &[usize], period: usize, slot: usize) -> Vec<usize> {
    let mut next = order.to_vec();
    if period > 0 && slot > 0 && slot.is_multiple_of(period) && !next.is_empty() {
        next.rotate_left(1);
    }
    next
}

/// One seeded run of a game under one strategy.
pub struct Simulation {
    cfg: GameConfig,
    strategy: Strategy,
    belief: Belief,
    order: Vec<usize>,
    slot: usize,
    nature: ChaCha8Rng,
    choices: ChaCha8Rng,
    candidates: CandidateSet,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl Simulation {
    pub fn new(cfg: GameConfig, strategy: Strategy) -> Result<Self> {
        cfg.validate()?;
        if cfg.rotation_period == 0 {
            return Err(GameError::invalid("rotation period", "must be at least 1"));
        }
        let candidates = enumerate_candidates(cfg.dishes, cfg.budget)?;
        Ok(Simulation {
            belief: cfg.prior.clone(),
            order: (0..cfg.customers).collect(),
            slot: 0,
            nature: stream(cfg.seed, NATURE_STREAM),
            choices: stream(cfg.seed, CHOICE_STREAM),
            candidates,
            strategy,
            cfg,
        })
    }

    /// Starts from `order` instead of the index order.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        check_order(&order, self.cfg.customers)?;
        self.order = order;
        Ok(self)
    }

    pub fn belief(&self) -> &Belief {
        &self.belief
    }

    pub fn config(&self) -> &GameConfig {
        &self.cfg
    }

    fn decide(&mut self) -> Result<DecisionMatrix> {
        let cfg = &self.cfg;
        if self.strategy == Strategy::BestResponse {
            return solve_equilibrium_ordered(cfg, &self.belief, &self.order);
        }
        let mut d = DecisionMatrix::zeros(cfg.dishes, cfg.customers);
        let mut counts = vec![0; cfg.dishes];
        for &c in &self.order {
            let column = match self.strategy {
                Strategy::Myopic => myopic_decision(&cfg.prior, &Observation::new(c, counts.clone()), cfg)?,
                Strategy::Learning => learning_decision(&self.belief, c, cfg)?,
                Strategy::Random => random_decision(&mut self.choices, &self.candidates),
                Strategy::BestResponse => unreachable!(),
            };
            for (n, &r) in counts.iter_mut().zip(&column) {
                *n += usize::from(r);
            }
            d.set_column(c, &column);
        }
        Ok(d)
    }

    pub fn run_slot(&mut self) -> Result<SlotTrace> {
        self.order = rotate_order(&self.order, self.cfg.rotation_period, self.slot);
        let decisions = self.decide()?;
        let cfg = &self.cfg;

        let qualities = (0..cfg.dishes)
            .map(|j| realize_signal(&cfg.signal_model, cfg.true_states[j], j, &mut self.nature))
            .collect::<Result<Vec<_>>>()?;
        let signals: SignalGrid = (0..cfg.dishes)
            .map(|j| {
                (0..cfg.customers)
                    .map(|i| decisions.get(j, i).then_some(qualities[j]))
                    .collect()
            })
            .collect();

        let sharers = decisions.row_sums();
        let labels = cfg.state_set.signals();
        let mut utilities = vec![0.0; cfg.customers];
        for (i, u) in utilities.iter_mut().enumerate() {
            for j in 0..cfg.dishes {
                *u += realized_utility(
                    &cfg.utility,
                    labels[qualities[j]],
                    sharers[j],
                    i,
                    j,
                    decisions.get(j, i),
                )?;
            }
        }
        let welfare = utilities.iter().sum();

        if self.strategy.learns() {
            self.belief = social_update(&self.belief, &decisions, &signals, &cfg.signal_model)?;
        }
        let trace = SlotTrace {
            slot: self.slot,
            order: self.order.clone(),
            decisions,
            qualities,
            signals,
            utilities,
            belief: self.belief.clone(),
            welfare,
        };
        self.slot += 1;
        Ok(trace)
    }

    /// Plays the configured number of slots.
    pub fn run(mut self) -> Result<RunResult> {
        let traces = (0..self.cfg.slots)
            .map(|_| self.run_slot())
            .collect::<Result<Vec<_>>>()?;
        RunResult::from_traces(traces, &self.cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub traces: Vec<SlotTrace>,
    pub convergence: ConvergenceReport,
    /// Running total of each customer's utility, indexed `[slot][customer]`.
    pub cumulative: Vec<Vec<f64>>,
    /// Social welfare averaged over slots.
    pub mean_welfare: f64,
}

impl RunResult {
    pub fn from_traces(traces: Vec<SlotTrace>, cfg: &GameConfig) -> Result<Self> {
        if traces.is_empty() {
            return Err(GameError::invalid("run", "no slots were played"));
        }
        let beliefs: Vec<Belief> = traces.iter().map(|t| t.belief.clone()).collect();
        let convergence = convergence_metrics(&beliefs, &cfg.true_states, &cfg.signal_model)?;
        let mut total = vec![0.0; cfg.customers];
        let cumulative = traces
            .iter()
            .map(|t| {
                total.iter_mut().zip(&t.utilities).for_each(|(a, u)| *a += u);
                total.clone()
            })
            .collect();
        let mean_welfare = traces.iter().map(|t| t.welfare).sum::<f64>() / traces.len() as f64;
        Ok(RunResult {
            traces,
            convergence,
            cumulative,
            mean_welfare,
        })
    }
}

/// Deterministic sub-seed of realization `index` under `master`.
pub fn derive_seed(master: u64, index: usize) -> u64 {
    stream(master, SEED_STREAM_BASE + index as u64).next_u64()
}

/// A game template plus what to redraw for each realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub base: GameConfig,
    /// Draw every dish state uniformly from the state set.
    pub random_states: bool,
    /// Draw every customer's gamma uniformly from this range.
    pub gamma_range: Option<(f64, f64)>,
    /// Initial decision order; index order when absent.
    pub order: Option<Vec<usize>>,
}

impl Scenario {
    pub fn fixed(base: GameConfig) -> Self {
        Scenario {
            base,
            random_states: false,
            gamma_range: None,
            order: None,
        }
    }

    /// Config of realization `index`, seeded with `derive_seed(base.seed, index)`.
    pub fn realize(&self, index: usize) -> Result<GameConfig> {
        let seed = derive_seed(self.base.seed, index);
        let mut cfg = self.base.clone().with_seed(seed);
        let mut rng = stream(seed, CONFIG_STREAM);
        if self.random_states {
            let k = cfg.state_set.num_states();
            cfg.true_states = (0..cfg.dishes).map(|_| rng.random_range(0..k)).collect();
        }
        if let Some((lo, hi)) = self.gamma_range {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(GameError::invalid("gamma range", format!("[{lo}, {hi}] is empty")));
            }
            let gamma = (0..cfg.customers)
                .map(|_| lo + (hi - lo) * rng.random::<f64>())
                .collect();
            cfg = cfg.with_gamma(gamma)?;
        }
        Ok(cfg)
    }

    pub fn with_signal_quality(&self, w: f64) -> Result<Self> {
        Ok(Scenario {
            base: self.base.clone().with_signal_quality(w)?,
            ..self.clone()
        })
    }

    /// Plays realization `index` to the end.
    pub fn run(&self, strategy: Strategy, index: usize) -> Result<RunResult> {
        let mut sim = Simulation::new(self.realize(index)?, strategy)?;
        if let Some(order) = &self.order {
            sim = sim.with_order(order.clone())?;
        }
        sim.run()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub strategy: Strategy,
    /// Runs in realization order.
    pub runs: Vec<RunResult>,
    /// Mean over realizations of the per-run slot-averaged welfare.
    pub mean_welfare: f64,
    /// Standard error of `mean_welfare`.
    pub stderr: f64,
}

impl ExperimentResult {
    pub fn from_runs(strategy: Strategy, runs: Vec<RunResult>) -> Result<Self> {
        if runs.is_empty() {
            return Err(GameError::invalid("experiment", "no realizations"));
        }
        let welfare: Vec<f64> = runs.iter().map(|r| r.mean_welfare).collect();
        let (mean_welfare, stderr) = mean_and_stderr(&welfare);
        Ok(ExperimentResult {
            strategy,
            runs,
            mean_welfare,
            stderr,
        })
    }

    pub fn realizations(&self) -> usize {
        self.runs.len()
    }
}

/// Sample mean and its standard error (0 for a single sample).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `realizations` independent realizations in parallel; results are
/// ordered by realization index, so the outcome does not depend on threads.
pub fn run_experiment(scenario: &Scenario, strategy: Strategy, realizations: usize) -> Result<ExperimentResult> {
    if realizations == 0 {
        return Err(GameError::invalid("realizations", "need at least one"));
    }
    let runs = (0..realizations)
        .into_par_iter()
        .map(|k| scenario.run(strategy, k))
        .collect::<Result<Vec<_>>>()?;
    ExperimentResult::from_runs(strategy, runs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfareRow {
    pub w: f64,
    pub strategy: Strategy,
    pub mean_welfare: f64,
    pub stderr: f64,
    pub realizations: usize,
}

/// Mean welfare for every (signal quality, strategy) pair, rows ordered by
/// `ws` and then by `strategies`.
pub fn sweep_signal_quality(
    scenario: &Scenario,
    ws: &[f64],
    strategies: &[Strategy],
    realizations: usize,
) -> Result<Vec<WelfareRow>> {
    let mut rows = Vec::with_capacity(ws.len() * strategies.len());
    for &w in ws {
        let at_w = scenario.with_signal_quality(w)?;
        for &strategy in strategies {
            let result = run_experiment(&at_w, strategy, realizations)?;
            rows.push(WelfareRow {
                w,
                strategy,
                mean_welfare: result.mean_welfare,
                stderr: result.stderr,
                realizations,
            });
        }
    }
    Ok(rows)
}
