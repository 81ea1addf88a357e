use itertools::Itertools;

use crate::error::{GameError, Result};

/// Largest candidate set the solvers will build.
pub const MAX_CANDIDATES: usize = 1 << 20;

/// Legal request vectors of one customer under a budget: the empty request
/// followed by every non-empty subset of at most `budget` dishes, ordered by
/// size and then lexicographically by dish indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    dishes: usize,
    budget: usize,
    members: Vec<Vec<usize>>,
}

/// Builds the candidate set for `dishes` dishes and budget `budget`
/// (`budget >= dishes` allows every subset).
pub fn enumerate_candidates(dishes: usize, budget: usize) -> Result<CandidateSet> {
    if dishes == 0 || budget == 0 {
        return Err(GameError::invalid(
            "candidate set",
            "need at least one dish and a budget of at least one",
        ));
    }
    let budget = budget.min(dishes);
    let size = candidate_count(dishes, budget);
    if size > MAX_CANDIDATES as u128 {
        return Err(GameError::Capacity(format!(
            "{size} candidate requests for {dishes} dishes and budget {budget}"
        )));
    }
    let mut members = Vec::with_capacity(size as usize);
    members.push(Vec::new());
    for l in 1..=budget {
        members.extend((0..dishes).combinations(l));
    }
    Ok(CandidateSet {
        dishes,
        budget,
        members,
    })
}

/// `1 + sum_{l=1}^{budget} C(dishes, l)`.
pub fn candidate_count(dishes: usize, budget: usize) -> u128 {
    let mut total: u128 = 1;
    let mut binom: u128 = 1;
    for l in 1..=budget.min(dishes) {
        binom = binom * (dishes - l + 1) as u128 / l as u128;
        total += binom;
    }
    total
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dishes(&self) -> usize {
        self.dishes
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Dish indices requested by candidate `h`.
    pub fn get(&self, h: usize) -> &[usize] {
        &self.members[h]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }

    /// Candidate `h` as a 0/1 request vector.
    pub fn vector(&self, h: usize) -> Vec<bool> {
        let mut v = vec![false; self.dishes];
        for &j in &self.members[h] {
            v[j] = true;
        }
        v
    }

    pub fn position(&self, request: &[bool]) -> Option<usize> {
        let dishes: Vec<usize> = request
            .iter()
            .enumerate()
            .filter_map(|(j, &r)| r.then_some(j))
            .collect();
        self.members.iter().position(|m| *m == dishes)
    }
}
