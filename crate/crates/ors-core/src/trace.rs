//! Per-run convergence bookkeeping.

/// Best-so-far objective value after each iteration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTrace {
    pub run_id: u64,
    /// Best objective value in the freshly initialized population,
    /// before any iteration ran.
    pub initial_best: f64,
    /// One entry per iteration; non-increasing for minimization.
    pub best_per_iteration: Vec<f64>,
    pub final_best_point: Vec<f64>,
}

impl ConvergenceTrace {
    pub fn is_monotone_non_increasing(&self) -> bool {
        self.best_per_iteration.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn final_best(&self) -> Option<f64> {
        self.best_per_iteration.last().copied()
    }
}

/// A point in the search space together with its objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub point: Vec<f64>,
    pub value: f64,
}
