//! TOML game configuration.
//!
//! A minimal file names the game size, true states, signal quality and seed:
//!
//! ```toml
//! schema_version = 1
//! customers = 10
//! dishes = 5
//! budget = 3
//! true_states = [1, 2, 3, 4, 5]
//! w = 0.8
//! seed = 7
//! ```
//!
//! Everything else defaults to five states and qualities `1..=5`, `R = 10`,
//! `c_j = 1`, `gamma_i = 1`, a uniform prior, 100 slots and a rotation period
//! of 100.

use ibg_core::harness::Scenario;
use ibg_core::model::{Belief, GameConfig, SignalModel, StateSet, UtilityModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// A config problem, located by its field path (`utility.cost[2]`).
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        ConfigError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// One value for everyone or one value each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerItem {
    Same(f64),
    Each(Vec<f64>),
}

impl PerItem {
    fn expand(&self, path: &str, len: usize) -> Result<Vec<f64>, ConfigError> {
        match self {
            PerItem::Same(v) => Ok(vec![*v; len]),
            PerItem::Each(v) if v.len() == len => Ok(v.clone()),
            PerItem::Each(v) => Err(ConfigError::at(
                path,
                format!("expected {len} values, found {}", v.len()),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorName {
    Uniform,
    /// Point mass on the true states.
    Converged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriorSpec {
    Named(PriorName),
    Rows(Vec<Vec<f64>>),
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec::Named(PriorName::Uniform)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitySection {
    #[serde(default = "one")]
    pub gamma: PerItem,
    #[serde(default = "default_reward")]
    pub reward: f64,
    #[serde(default = "one")]
    pub cost: PerItem,
}

impl Default for UtilitySection {
    fn default() -> Self {
        UtilitySection {
            gamma: one(),
            reward: default_reward(),
            cost: one(),
        }
    }
}

/// What each realization of an experiment redraws.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(default)]
    pub random_states: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub customers: usize,
    pub dishes: usize,
    /// Dishes per customer; absent means no budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// State labels, one per dish.
    pub true_states: Vec<f64>,
    pub w: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_slots")]
    pub slots: usize,
    #[serde(default = "default_period")]
    pub rotation_period: usize,
    /// Initial decision order as 0-based customer indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    /// State alphabet; signals use the same labels.
    #[serde(default = "default_states")]
    pub states: Vec<f64>,
    #[serde(default)]
    pub prior: PriorSpec,
    #[serde(default)]
    pub utility: UtilitySection,
    #[serde(default)]
    pub scenario: ScenarioSection,
}

fn one() -> PerItem {
    PerItem::Same(1.0)
}

fn default_reward() -> f64 {
    10.0
}

fn default_slots() -> usize {
    100
}

fn default_period() -> usize {
    100
}

fn default_states() -> Vec<f64> {
    StateSet::default().states().to_vec()
}

/// Parses and validates a config file.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::at("(file)", e.message()))?;
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::at(
            if path == "." { "(file)".into() } else { path },
            e.into_inner().message(),
        )
    })?;
    file.game()?;
    Ok(file)
}

/// TOML text that [`parse_config`] reads back to an equal config.
pub fn emit_config(file: &ConfigFile) -> String {
    toml::to_string(file).expect("config fields are plain TOML values")
}

impl ConfigFile {
    /// Builds the validated game.
    pub fn game(&self) -> Result<GameConfig, ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::at(
                "schema_version",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        if self.customers == 0 {
            return Err(ConfigError::at("customers", "need at least one customer"));
        }
        if self.dishes == 0 {
            return Err(ConfigError::at("dishes", "need at least one dish"));
        }
        let state_set =
            StateSet::new(self.states.clone(), self.states.clone()).map_err(|e| ConfigError::at("states", e))?;
        let k = state_set.num_states();
        // below 1/|Q| a signal says less than guessing and the state cannot be learned
        if !(self.w.is_finite() && self.w * k as f64 >= 1.0 - 1e-12 && self.w <= 1.0) {
            return Err(ConfigError::at(
                "w",
                format!("signal quality {} must satisfy 1/{k} <= w <= 1", self.w),
            ));
        }
        if self.true_states.len() != self.dishes {
            return Err(ConfigError::at(
                "true_states",
                format!("expected {} states, found {}", self.dishes, self.true_states.len()),
            ));
        }
        let true_states = self
            .true_states
            .iter()
            .enumerate()
            .map(|(j, &label)| {
                state_set
                    .state_index(label)
                    .ok_or_else(|| ConfigError::at(format!("true_states[{j}]"), format!("unknown state label {label}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let budget = self.budget.unwrap_or(self.dishes);
        if budget == 0 {
            return Err(ConfigError::at("budget", "must be at least 1"));
        }
        if self.rotation_period == 0 {
            return Err(ConfigError::at("rotation_period", "must be at least 1"));
        }
        let gamma = self.utility.gamma.expand("utility.gamma", self.customers)?;
        let costs = self.utility.cost.expand("utility.cost", self.dishes)?;
        let utility =
            UtilityModel::new(gamma, self.utility.reward, costs).map_err(|e| ConfigError::at("utility", e))?;
        let signal_model = SignalModel::symmetric(self.dishes, k, self.w).map_err(|e| ConfigError::at("w", e))?;
        let prior = match &self.prior {
            PriorSpec::Named(PriorName::Uniform) => Belief::uniform(self.dishes, k),
            PriorSpec::Named(PriorName::Converged) => {
                Belief::point_mass(k, &true_states).map_err(|e| ConfigError::at("prior", e))?
            }
            PriorSpec::Rows(rows) => {
                if rows.len() != self.dishes {
                    return Err(ConfigError::at(
                        "prior",
                        format!("expected {} rows, found {}", self.dishes, rows.len()),
                    ));
                }
                for (j, row) in rows.iter().enumerate() {
                    Belief::new(vec![row.clone()]).map_err(|e| ConfigError::at(format!("prior[{j}]"), e))?;
                }
                Belief::new(rows.clone()).map_err(|e| ConfigError::at("prior", e))?
            }
        };
        let cfg = GameConfig {
            customers: self.customers,
            dishes: self.dishes,
            budget,
            true_states,
            state_set,
            signal_model,
            utility,
            prior,
            slots: self.slots,
            rotation_period: self.rotation_period,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| ConfigError::at("(file)", e))?;
        if let Some(order) = &self.order {
            let mut seen = vec![false; self.customers];
            for (k, &c) in order.iter().enumerate() {
                if c >= self.customers || std::mem::replace(&mut seen[c], true) {
                    return Err(ConfigError::at(
                        format!("order[{k}]"),
                        format!("{c} repeats or is out of range"),
                    ));
                }
            }
            if order.len() != self.customers {
                return Err(ConfigError::at("order", "must list every customer once"));
            }
        }
        if let Some([lo, hi]) = self.scenario.gamma_range {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(ConfigError::at(
                    "scenario.gamma_range",
                    format!("[{lo}, {hi}] is not a range"),
                ));
            }
        }
        Ok(cfg)
    }

    /// The experiment template: the game plus what each realization redraws.
    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        Ok(Scenario {
            base: self.game()?,
            random_states: self.scenario.random_states,
            gamma_range: self.scenario.gamma_range.map(|[lo, hi]| (lo, hi)),
            order: self.order.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "schema_version = 1\ncustomers = 10\ndishes = 5\nbudget = 3\n\
                           true_states = [5, 5, 5, 5, 5]\nw = 0.8\nseed = 7\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let file = parse_config(MINIMAL).unwrap();
        let cfg = file.game().unwrap();
        assert_eq!(cfg.budget, 3);
        assert_eq!(cfg.slots, 100);
        assert_eq!(cfg.rotation_period, 100);
        assert_eq!(cfg.state_set.num_states(), 5);
        assert_eq!(cfg.utility.reward(), 10.0);
        assert!(cfg.utility.costs().iter().all(|&c| c == 1.0));
        assert!(cfg.utility.gammas().iter().all(|&g| g == 1.0));
        assert_eq!(cfg.prior, Belief::uniform(5, 5));
        assert_eq!(cfg.true_states, vec![4; 5]);
    }

    #[test]
    fn uninformative_signals_are_rejected() {
        let err = parse_config(&MINIMAL.replace("w = 0.8", "w = 0.1")).unwrap_err();
        assert_eq!(err.path, "w");
        assert!(parse_config(&MINIMAL.replace("w = 0.8", "w = 0.2")).is_ok());
    }

    #[test]
    fn errors_carry_field_paths() {
        let err = parse_config(&format!("{MINIMAL}[utility]\ncost = [1, 2]\n")).unwrap_err();
        assert_eq!(err.path, "utility.cost");
        let err = parse_config(&format!("{MINIMAL}prior = [[0.5, 0.5, 0, 0, 0.1], [1, 0, 0, 0, 0]]\n")).unwrap_err();
        assert_eq!(err.path, "prior");
        let rows = "[[0.5, 0.5, 0, 0, 0.1], [1, 0, 0, 0, 0], [1, 0, 0, 0, 0], [1, 0, 0, 0, 0], [1, 0, 0, 0, 0]]";
        let err = parse_config(&format!("{MINIMAL}prior = {rows}\n")).unwrap_err();
        assert_eq!(err.path, "prior[0]");
        let err = parse_config(&MINIMAL.replace("dishes = 5", "dishes = \"five\"")).unwrap_err();
        assert_eq!(err.path, "dishes");
        let err = parse_config(&format!("{MINIMAL}colour = 1\n")).unwrap_err();
        assert!(err.message.contains("colour"), "{err}");
        let err = parse_config(&MINIMAL.replace("true_states = [5, 5, 5, 5, 5]", "true_states = [5, 5, 9, 5, 5]"))
            .unwrap_err();
        assert_eq!(err.path, "true_states[2]");
        let err = parse_config(&MINIMAL.replace("schema_version = 1", "schema_version = 2")).unwrap_err();
        assert_eq!(err.path, "schema_version");
    }

    #[test]
    fn emit_then_parse_round_trips() {
        let text = format!(
            "{MINIMAL}order = [9, 8, 7, 6, 5, 4, 3, 2, 1, 0]\nprior = \"converged\"\n\
             [utility]\ngamma = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]\ncost = 2.5\n\
             [scenario]\nrandom_states = true\ngamma_range = [0.0, 1.0]\n"
        );
        let file = parse_config(&text).unwrap();
        let again = parse_config(&emit_config(&file)).unwrap();
        assert_eq!(file, again);
        assert_eq!(file.game().unwrap(), again.game().unwrap());
        assert_eq!(file.scenario().unwrap(), again.scenario().unwrap());
    }
}
