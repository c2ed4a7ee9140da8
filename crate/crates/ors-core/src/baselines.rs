//! Reference optimizers run under the same budget accounting as ORS:
//! differential evolution (rand/1/bin) and uniform random search.

use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::trace::{ConvergenceTrace, Solution};

/// Differential evolution settings. The strategy is fixed to
/// rand/1/bin with greedy selection and bound clamping.
#[derive(Clone, Debug, PartialEq)]
pub struct DeParams {
    pub population_size: usize,
    pub max_iterations: usize,
    /// Differential weight F.
    pub differential_weight: f64,
    /// Crossover rate CR.
    pub crossover_rate: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            population_size: 30,
            max_iterations: 1000,
            differential_weight: 0.5,
            crossover_rate: 0.9,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            // rand/1 needs three donors distinct from the target.
            return Err(Error::PopulationTooSmall {
                min: 4,
                got: self.population_size,
            });
        }
        if self.differential_weight <= 0.0 {
            return Err(Error::InvalidParameter(
                "differential weight must be > 0".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidParameter(
                "crossover rate must lie in [0, 1]".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// One generation of rand/1/bin over the whole population. Each
/// member's objective value never worsens (greedy selection).
fn de_generation(
    objective: &ObjectiveSpec,
    params: &DeParams,
    rng: &mut RandomSource,
    population: &mut [Vec<f64>],
    values: &mut [f64],
) -> Result<()> {
    let n = population.len();
    let dim = objective.space().dimension();
    let lower = objective.space().lower();
    let upper = objective.space().upper();

    for i in 0..n {
        let mut pick = || loop {
            let c = rng.index(n);
            if c != i {
                return c;
            }
        };
        let a = pick();
        let b = loop {
            let c = pick();
            if c != a {
                break c;
            }
        };
        let c = loop {
            let d = pick();
            if d != a && d != b {
                break d;
            }
        };

        let forced = rng.index(dim);
        let mut trial = population[i].clone();
        for j in 0..dim {
            if j == forced || rng.uniform() < params.crossover_rate {
                let mutant = population[a][j]
                    + params.differential_weight * (population[b][j] - population[c][j]);
                trial[j] = mutant.clamp(lower[j], upper[j]);
            }
        }

        let trial_value = objective.evaluate(&trial, rng)?;
        if trial_value <= values[i] {
            population[i] = trial;
            values[i] = trial_value;
        }
    }
    Ok(())
}

/// Run differential evolution and return the best solution plus the
/// per-generation best trace.
pub fn de_optimize(
    objective: &ObjectiveSpec,
    params: &DeParams,
    rng: &mut RandomSource,
) -> Result<(Solution, ConvergenceTrace)> {
    params.validate()?;
    let n = params.population_size;
    let mut population: Vec<Vec<f64>> = (0..n).map(|_| objective.space().sample(rng)).collect();
    let mut values = Vec::with_capacity(n);
    for member in &population {
        values.push(objective.evaluate(member, rng)?);
    }

    let best_index = |values: &[f64]| -> usize {
        let mut best = 0;
        for (i, v) in values.iter().enumerate() {
            if *v < values[best] || (!values[best].is_finite() && v.is_finite()) {
                best = i;
            }
        }
        best
    };

    let initial_best = values[best_index(&values)];
    let mut trace = Vec::with_capacity(params.max_iterations);
    for _ in 0..params.max_iterations {
        de_generation(objective, params, rng, &mut population, &mut values)?;
        trace.push(values[best_index(&values)]);
    }

    let idx = best_index(&values);
    let solution = Solution {
        point: population[idx].clone(),
        value: values[idx],
    };
    let trace = ConvergenceTrace {
        run_id: 0,
        initial_best,
        best_per_iteration: trace,
        final_best_point: solution.point.clone(),
    };
    Ok((solution, trace))
}

/// Uniform random search with the same evaluation budget shape as the
/// population optimizers: `population_size` samples at initialization
/// plus `population_size` per iteration.
pub fn random_search(
    objective: &ObjectiveSpec,
    population_size: usize,
    max_iterations: usize,
    rng: &mut RandomSource,
) -> Result<(Solution, ConvergenceTrace)> {
    if population_size == 0 {
        return Err(Error::PopulationTooSmall { min: 1, got: 0 });
    }
    let mut best: Option<Solution> = None;
    let sample_batch = |rng: &mut RandomSource, best: &mut Option<Solution>| -> Result<()> {
        for _ in 0..population_size {
            let x = objective.space().sample(rng);
            let value = objective.evaluate(&x, rng)?;
            let better = match best.as_ref() {
                None => true,
                Some(b) => value.is_finite() && (!b.value.is_finite() || value < b.value),
            };
            if better {
                *best = Some(Solution { point: x, value });
            }
        }
        Ok(())
    };

    sample_batch(rng, &mut best)?;
    let initial_best = best.as_ref().map(|b| b.value).unwrap_or(f64::NAN);
    let mut trace = Vec::with_capacity(max_iterations);
    for _ in 0..max_iterations {
        sample_batch(rng, &mut best)?;
        trace.push(best.as_ref().map(|b| b.value).unwrap_or(f64::NAN));
    }
    let solution = best.expect("population_size >= 1 guarantees a sample");
    let trace = ConvergenceTrace {
        run_id: 0,
        initial_best,
        best_per_iteration: trace,
        final_best_point: solution.point.clone(),
    };
    Ok((solution, trace))
}
