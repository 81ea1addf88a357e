//! Indian Buffet Game: customers pick subsets of shared dishes one after
//! another, lose utility to co-requesters, and learn the unknown dish states
//! from what they eat.

pub mod baselines;
pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod instances;
pub mod learning;
pub mod model;

pub use error::{GameError, Result};
pub use model::{Belief, DecisionMatrix, GameConfig, SignalModel, StateSet, UtilityModel};
