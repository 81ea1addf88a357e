//! Non-Bayesian social learning of the dish states.
//!
//! Each requester first forms a private Bayesian posterior from its own
//! signal. The shared belief is then the plain average over all customers of
//! their posteriors, with non-requesters contributing the old belief.

use crate::error::{check_index, GameError, Result};
use crate::model::{Belief, DecisionMatrix, SignalModel};

/// Signals indexed `[dish][customer]`; `None` where the customer did not
/// request the dish.
pub type SignalGrid = Vec<Vec<Option<usize>>>;

/// Posterior of one dish after one signal:
/// `mu(theta) = f(s | theta) p(theta) / sum_theta' f(s | theta') p(theta')`.
pub fn intermediate_update(prior: &[f64], signal: usize, model: &SignalModel, dish: usize) -> Result<Vec<f64>> {
    check_index("dish", dish, model.num_dishes())?;
    check_index("signal", signal, model.num_signals())?;
    if prior.len() != model.num_states() {
        return Err(GameError::invalid("belief", "length differs from the state count"));
    }
    let mut mu: Vec<f64> = prior
        .iter()
        .enumerate()
        .map(|(theta, &p)| model.likelihood(dish, theta, signal) * p)
        .collect();
    let z: f64 = mu.iter().sum();
    if z <= 0.0 {
        return Err(GameError::DegenerateUpdate { dish, signal });
    }
    mu.iter_mut().for_each(|v| *v /= z);
    Ok(mu)
}

/// Intermediate beliefs of every customer, one `Belief` per customer. Rows of
/// dishes a customer did not request are copies of the prior.
pub fn intermediate_beliefs(
    prior: &Belief,
    decisions: &DecisionMatrix,
    signals: &SignalGrid,
    model: &SignalModel,
) -> Result<Vec<Belief>> {
    check_dimensions(prior, decisions, signals)?;
    (0..decisions.customers())
        .map(|i| {
            let rows = (0..decisions.dishes())
                .map(|j| match requested_signal(decisions, signals, j, i)? {
                    Some(s) => intermediate_update(prior.dish(j), s, model, j),
                    None => Ok(prior.dish(j).to_vec()),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Belief::from_rows_unchecked(rows))
        })
        .collect()
}

/// `p'(theta) = (1/N) sum_i [d_i mu_i(theta) + (1 - d_i) p(theta)]`, per dish.
pub fn combine(prior: &Belief, decisions: &DecisionMatrix, intermediates: &[Belief]) -> Result<Belief> {
    let n = decisions.customers();
    if intermediates.len() != n || decisions.dishes() != prior.num_dishes() {
        return Err(GameError::invalid("belief combination", "inputs disagree in size"));
    }
    let rows = (0..prior.num_dishes())
        .map(|j| {
            let p = prior.dish(j);
            let mut out = vec![0.0; p.len()];
            for (i, mu) in intermediates.iter().enumerate() {
                let source = if decisions.get(j, i) { mu.dish(j) } else { p };
                for (o, &v) in out.iter_mut().zip(source) {
                    *o += v;
                }
            }
            out.iter_mut().for_each(|v| *v /= n as f64);
            out
        })
        .collect();
    Ok(Belief::from_rows_unchecked(rows))
}

/// One learning step: Bayesian posteriors of the requesters, then the average.
pub fn social_update(
    prior: &Belief,
    decisions: &DecisionMatrix,
    signals: &SignalGrid,
    model: &SignalModel,
) -> Result<Belief> {
    let intermediates = intermediate_beliefs(prior, decisions, signals, model)?;
    combine(prior, decisions, &intermediates)
}

/// The same step written as a correction of the prior:
/// `p'(theta) = p(theta) + (1/N) sum_i d_i (f(s_i | theta) / lambda(s_i) - 1) p(theta)`.
pub fn social_update_rearranged(
    prior: &Belief,
    decisions: &DecisionMatrix,
    signals: &SignalGrid,
    model: &SignalModel,
) -> Result<Belief> {
    check_dimensions(prior, decisions, signals)?;
    let n = decisions.customers() as f64;
    let mut rows = Vec::with_capacity(prior.num_dishes());
    for j in 0..prior.num_dishes() {
        let p = prior.dish(j);
        let lambda = predictive_distribution(p, model, j)?;
        let mut ratio_sum = vec![0.0; p.len()];
        for i in 0..decisions.customers() {
            if let Some(s) = requested_signal(decisions, signals, j, i)? {
                if lambda[s] <= 0.0 {
                    return Err(GameError::DegenerateUpdate { dish: j, signal: s });
                }
                for (theta, r) in ratio_sum.iter_mut().enumerate() {
                    *r += model.likelihood(j, theta, s) / lambda[s] - 1.0;
                }
            }
        }
        rows.push(p.iter().zip(&ratio_sum).map(|(&pt, &r)| pt + r * pt / n).collect());
    }
    Ok(Belief::from_rows_unchecked(rows))
}

/// `lambda(s) = sum_theta f(s | theta) p(theta)`: the signal distribution the
/// belief predicts for one dish.
pub fn predictive_distribution(belief: &[f64], model: &SignalModel, dish: usize) -> Result<Vec<f64>> {
    check_index("dish", dish, model.num_dishes())?;
    if belief.len() != model.num_states() {
        return Err(GameError::invalid("belief", "length differs from the state count"));
    }
    let mut lambda = vec![0.0; model.num_signals()];
    for (theta, &p) in belief.iter().enumerate() {
        for (l, &f) in lambda.iter_mut().zip(model.row(dish, theta)) {
            *l += f * p;
        }
    }
    Ok(lambda)
}

/// Distances of a belief sequence from the truth, one entry per belief.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `||p_j - e_theta_j||_2`, indexed `[slot][dish]`.
    pub strong_per_dish: Vec<Vec<f64>>,
    /// `||P - P_true||_2` over all dishes, per slot.
    pub strong_distance: Vec<f64>,
    /// `max_s |lambda_j(s) - f_j(s | theta_j)|`, indexed `[slot][dish]`.
    pub weak_distance: Vec<Vec<f64>>,
}

impl ConvergenceReport {
    /// First index at which the total strong distance is below `threshold`.
    pub fn strong_first_below(&self, threshold: f64) -> Option<usize> {
        self.strong_distance.iter().position(|&d| d < threshold)
    }

    /// First index from which the weak distance of `dish` stays below
    /// `threshold` for the rest of the sequence.
    pub fn weak_settled_below(&self, dish: usize, threshold: f64) -> Option<usize> {
        let last_above = self.weak_distance.iter().rposition(|row| row[dish] >= threshold);
        match last_above {
            None => Some(0),
            Some(t) if t + 1 < self.weak_distance.len() => Some(t + 1),
            Some(_) => None,
        }
    }
}

pub fn convergence_metrics(
    beliefs: &[Belief],
    true_states: &[usize],
    model: &SignalModel,
) -> Result<ConvergenceReport> {
    if beliefs.is_empty() {
        return Err(GameError::invalid("belief trace", "no beliefs to measure"));
    }
    let mut report = ConvergenceReport {
        strong_per_dish: Vec::with_capacity(beliefs.len()),
        strong_distance: Vec::with_capacity(beliefs.len()),
        weak_distance: Vec::with_capacity(beliefs.len()),
    };
    for belief in beliefs {
        if belief.num_dishes() != true_states.len() {
            return Err(GameError::invalid(
                "belief trace",
                "dish count differs from the true states",
            ));
        }
        let mut strong = Vec::with_capacity(true_states.len());
        let mut weak = Vec::with_capacity(true_states.len());
        for (j, &truth) in true_states.iter().enumerate() {
            check_index("state", truth, belief.num_states())?;
            let row = belief.dish(j);
            let sq: f64 = row
                .iter()
                .enumerate()
                .map(|(theta, &p)| {
                    let e = if theta == truth { 1.0 } else { 0.0 };
                    (p - e) * (p - e)
                })
                .sum();
            strong.push(sq.sqrt());
            let lambda = predictive_distribution(row, model, j)?;
            let gap = lambda
                .iter()
                .zip(model.row(j, truth))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            weak.push(gap);
        }
        report
            .strong_distance
            .push(strong.iter().map(|d| d * d).sum::<f64>().sqrt());
        report.strong_per_dish.push(strong);
        report.weak_distance.push(weak);
    }
    Ok(report)
}

fn check_dimensions(prior: &Belief, decisions: &DecisionMatrix, signals: &SignalGrid) -> Result<()> {
    if decisions.dishes() != prior.num_dishes()
        || signals.len() != decisions.dishes()
        || signals.iter().any(|row| row.len() != decisions.customers())
    {
        return Err(GameError::invalid(
            "learning input",
            "beliefs, decisions and signals disagree in size",
        ));
    }
    Ok(())
}

fn requested_signal(
    decisions: &DecisionMatrix,
    signals: &SignalGrid,
    dish: usize,
    customer: usize,
) -> Result<Option<usize>> {
    match (decisions.get(dish, customer), signals[dish][customer]) {
        (true, Some(s)) => Ok(Some(s)),
        (false, _) => Ok(None),
        (true, None) => Err(GameError::Contract(format!(
            "customer {customer} requested dish {dish} but received no signal"
        ))),
    }
}
