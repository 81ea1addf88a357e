use super::candidates::enumerate_candidates;
use crate::error::{check_index, GameError, Result};
use crate::model::{expected_utility_unchecked, Belief, DecisionMatrix, GameConfig, UTILITY_DEADBAND};

/// Utility gain a deviation must exceed to count as profitable.
pub const NASH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Column requests more dishes than the budget allows.
    OverBudget { customer: usize, requested: usize },
    /// Switching to `deviation` raises the customer's expected utility from
    /// `current` to `improved` with everyone else held fixed.
    Deviation {
        customer: usize,
        deviation: Vec<bool>,
        current: f64,
        improved: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub violation: Option<Violation>,
}

impl NashReport {
    pub fn is_nash(&self) -> bool {
        self.violation.is_none()
    }
}

fn check_shape(d: &DecisionMatrix, cfg: &GameConfig) -> Result<()> {
    if d.dishes() != cfg.dishes || d.customers() != cfg.customers {
        return Err(GameError::invalid(
            "decision matrix",
            format!(
                "{}x{} matrix for a game with {} dishes and {} customers",
                d.dishes(),
                d.customers(),
                cfg.dishes,
                cfg.customers
            ),
        ));
    }
    Ok(())
}

/// Checks every customer against every legal alternative request, holding
/// the other columns fixed. Stops at the first violation.
pub fn verify_nash(d: &DecisionMatrix, beliefs: &Belief, cfg: &GameConfig) -> Result<NashReport> {
    check_shape(d, cfg)?;
    cfg.validate()?;
    let candidates = enumerate_candidates(cfg.dishes, cfg.budget)?;
    let totals = d.row_sums();
    for i in 0..cfg.customers {
        let column = d.column(i);
        let requested = column.iter().filter(|&&r| r).count();
        if requested > cfg.effective_budget() {
            return Ok(NashReport {
                violation: Some(Violation::OverBudget { customer: i, requested }),
            });
        }
        // value of holding dish j given the others' requests
        let value = |j: usize| {
            let others = totals[j] - usize::from(column[j]);
            expected_utility_unchecked(cfg, beliefs, i, j, others + 1)
        };
        let values: Vec<f64> = (0..cfg.dishes).map(value).collect();
        let current: f64 = (0..cfg.dishes).filter(|&j| column[j]).map(|j| values[j]).sum();
        for alt in candidates.iter() {
            let improved: f64 = alt.iter().map(|&j| values[j]).sum();
            if improved > current + NASH_TOLERANCE {
                return Ok(NashReport {
                    violation: Some(Violation::Deviation {
                        customer: i,
                        deviation: candidates.vector(candidates.iter().position(|c| c == alt).unwrap()),
                        current,
                        improved,
                    }),
                });
            }
        }
    }
    Ok(NashReport { violation: None })
}

/// True iff every row is a run of requests followed only by abstentions.
/// Columns must be in decision order.
pub fn threshold_check(d: &DecisionMatrix) -> bool {
    (0..d.dishes()).all(|j| d.row(j).windows(2).all(|w| w[0] || !w[1]))
}

fn ensure_homogeneous(cfg: &GameConfig) -> Result<()> {
    if !cfg.utility.is_homogeneous() {
        return Err(GameError::NotHomogeneous("customers differ in their utility".into()));
    }
    Ok(())
}

/// Largest sharer count (at most N) at which requesting `dish` still has
/// strictly positive expected utility; 0 if even a lone requester loses.
pub fn compute_n_t(cfg: &GameConfig, beliefs: &Belief, dish: usize) -> Result<usize> {
    check_index("dish", dish, cfg.dishes)?;
    ensure_homogeneous(cfg)?;
    Ok((1..=cfg.customers)
        .take_while(|&n| expected_utility_unchecked(cfg, beliefs, 0, dish, n) > UTILITY_DEADBAND)
        .count())
}

/// Row sums of a budgeted homogeneous equilibrium with identical dishes:
/// exactly `n_t` when the budget leaves room for everyone who profits,
/// otherwise the floor or ceiling of `N L / M`.
pub fn equal_share_check(d: &DecisionMatrix, n_t: usize, cfg: &GameConfig) -> Result<bool> {
    check_shape(d, cfg)?;
    ensure_homogeneous(cfg)?;
    let same_dishes =
        cfg.true_states.windows(2).all(|w| w[0] == w[1]) && cfg.utility.costs().windows(2).all(|w| w[0] == w[1]);
    if !same_dishes {
        return Err(GameError::NotHomogeneous("dishes differ in state or cost".into()));
    }
    let seats = cfg.customers * cfg.effective_budget();
    let (lo, hi) = (seats / cfg.dishes, seats.div_ceil(cfg.dishes));
    let sums = d.row_sums();
    Ok(if n_t <= lo {
        sums.iter().all(|&s| s == n_t)
    } else {
        sums.iter().all(|&s| s == lo || s == hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UtilityModel;

    fn crowded(customers: usize) -> GameConfig {
        let mut cfg = GameConfig::standard(customers, 1, &[1.0], 1.0).unwrap();
        cfg.utility = UtilityModel::homogeneous(customers, 1, 1.0, 10.0, 5.0).unwrap();
        cfg.with_learned_prior()
    }

    #[test]
    fn all_ones_is_not_nash_when_crowded() {
        let cfg = crowded(3);
        let d = DecisionMatrix::from_rows(&[vec![1, 1, 1]]).unwrap();
        let report = verify_nash(&d, &cfg.prior, &cfg).unwrap();
        match report.violation {
            Some(Violation::Deviation {
                customer, deviation, ..
            }) => {
                assert_eq!(customer, 0);
                assert_eq!(deviation, vec![false]);
            }
            other => panic!("expected a deviation, got {other:?}"),
        }
    }

    #[test]
    fn over_budget_column_is_flagged() {
        let cfg = GameConfig::standard(2, 2, &[5.0, 5.0], 0.8).unwrap().with_budget(1);
        let d = DecisionMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        let report = verify_nash(&d, &cfg.prior, &cfg).unwrap();
        assert_eq!(
            report.violation,
            Some(Violation::OverBudget {
                customer: 0,
                requested: 2
            })
        );
    }

    #[test]
    fn threshold_rows() {
        let ok = DecisionMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        assert!(threshold_check(&ok));
        let bad = DecisionMatrix::from_rows(&[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert!(!threshold_check(&bad));
    }

    #[test]
    fn n_t_values() {
        let cfg = GameConfig::standard(50, 1, &[5.0], 0.6).unwrap().with_learned_prior();
        assert_eq!(compute_n_t(&cfg, &cfg.prior, 0).unwrap(), 39);
        let cfg = GameConfig::standard(50, 1, &[5.0], 0.6)
            .unwrap()
            .with_gamma(vec![0.0; 50])
            .unwrap();
        assert_eq!(compute_n_t(&cfg, &cfg.prior, 0).unwrap(), 0);
        let cfg = crowded(6);
        assert_eq!(compute_n_t(&cfg, &cfg.prior, 0).unwrap(), 1);
    }

    #[test]
    fn n_t_needs_homogeneous_customers() {
        let cfg = GameConfig::standard(2, 1, &[5.0], 0.6)
            .unwrap()
            .with_gamma(vec![0.5, 1.0])
            .unwrap();
        assert!(matches!(
            compute_n_t(&cfg, &cfg.prior, 0),
            Err(GameError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn equal_share_cases() {
        let cfg = GameConfig::standard(10, 5, &[5.0; 5], 0.8).unwrap().with_budget(3);
        let six = DecisionMatrix::from_rows(&vec![vec![1, 1, 1, 1, 1, 1, 0, 0, 0, 0]; 5]).unwrap();
        assert!(equal_share_check(&six, 39, &cfg).unwrap());
        assert!(!equal_share_check(&six, 2, &cfg).unwrap());
        let mut uneven = six.clone();
        uneven.set(0, 6, true);
        uneven.set(1, 5, false);
        assert!(!equal_share_check(&uneven, 39, &cfg).unwrap());
        let het = cfg
            .clone()
            .with_gamma(vec![0.5; 9].into_iter().chain([1.0]).collect())
            .unwrap();
        assert!(equal_share_check(&six, 6, &het).is_err());
    }
}
