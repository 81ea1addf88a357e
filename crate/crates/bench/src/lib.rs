//! Fixtures shared by the solver benchmarks in benches/.

use ibg_core::GameConfig;

/// Homogeneous all-5 game with point-mass beliefs, optionally budgeted.
pub fn homogeneous(customers: usize, dishes: usize, budget: Option<usize>) -> GameConfig {
    let cfg = GameConfig::standard(customers, dishes, &vec![5.0; dishes], 0.8)
        .expect("valid game")
        .with_learned_prior();
    match budget {
        Some(l) => cfg.with_budget(l),
        None => cfg,
    }
}

/// States `1..=5` cycled over the dishes, spread gammas and a uniform prior.
pub fn heterogeneous(customers: usize, dishes: usize, budget: usize) -> GameConfig {
    let states: Vec<f64> = (0..dishes).map(|j| (j % 5 + 1) as f64).collect();
    let gamma = (0..customers).map(|i| (i + 1) as f64 / customers as f64).collect();
    GameConfig::standard(customers, dishes, &states, 0.8)
        .and_then(|c| c.with_gamma(gamma))
        .expect("valid game")
        .with_budget(budget)
}
