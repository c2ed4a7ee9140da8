//! The ORS optimizer: environmental and trajectory velocity impacts,
//! survival-factor driven updates, and the main loop.
//!
//! Each iteration perturbs every hatchling's velocity twice. The
//! environmental impact combines sand temperature, emergence order and
//! time of day into one delta; over-temperature kills the hatchling
//! outright and its slot is re-seeded uniformly. The trajectory impact
//! models obstacle avoidance as a tangential speed change. Hatchlings
//! with a low survival factor add the combined delta (explore), the
//! rest subtract it and contract toward the best-known velocity
//! (exploit).

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::hatchling::{initialize_population, EmergenceAssignment, EmergenceOrder, Hatchling};
use crate::objective::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::space::SearchSpace;
use crate::trace::ConvergenceTrace;

/// Tunables of the ORS optimizer.
///
/// The multiplicative factors `omega1..omega5` must all exceed 1; the
/// emergence coefficients `k`, `k1`, `k2` must be positive. `k1`/`k2`
/// are additive offsets in decision-space units, so the defaults scale
/// them to the search range (see [`OrsParams::for_space`]).
#[derive(Clone, Debug, PartialEq)]
pub struct OrsParams {
    /// Speed-up multiplier below the tolerable sand temperature.
    pub omega1: f64,
    /// Slow-down divisor between tolerable and lethal temperature.
    pub omega2: f64,
    /// Morning speed-up multiplier.
    pub omega3: f64,
    /// Midday slow-down divisor.
    pub omega4: f64,
    /// Night multiplier.
    pub omega5: f64,
    /// Emergence-order velocity multiplier.
    pub k: f64,
    /// Additive boost for early emergers.
    pub k1: f64,
    /// Additive drag for late emergers.
    pub k2: f64,
    /// Tolerable sand temperature, degrees Celsius.
    pub temp_tol: f64,
    /// Lethal sand temperature, degrees Celsius.
    pub temp_max: f64,
    /// Sand temperature is drawn uniformly from this range for every
    /// hatchling at every iteration.
    pub temp_sample_range: (f64, f64),
    /// Length of the model day in hours.
    pub day_length: f64,
    /// Day-segment boundaries `(t1, t2, t3)` on the cyclic day.
    pub day_segments: (f64, f64, f64),
    /// Model hours advanced per iteration.
    pub hours_per_iteration: f64,
    /// Survival-factor threshold separating explorers from exploiters.
    pub survival_cutoff: f64,
    /// When true the cutoff comparison is `<=` instead of `<`.
    pub inclusive_cutoff: bool,
    pub emergence_assignment: EmergenceAssignment,
    pub population_size: usize,
    pub max_iterations: usize,
}

impl OrsParams {
    /// Defaults with the additive emergence offsets scaled to the given
    /// search space: `k1 = 0.1 * mean_width`, `k2 = 0.05 * mean_width`.
    pub fn for_space(space: &SearchSpace) -> Self {
        let width = space.mean_width();
        Self {
            omega1: 1.10,
            omega2: 1.25,
            omega3: 1.20,
            omega4: 1.25,
            omega5: 1.10,
            k: 1.0,
            k1: 0.1 * width,
            k2: 0.05 * width,
            temp_tol: 37.0,
            temp_max: 40.0,
            temp_sample_range: (25.0, 42.0),
            day_length: 24.0,
            day_segments: (8.0, 12.0, 16.0),
            hours_per_iteration: 0.5,
            survival_cutoff: 0.3,
            inclusive_cutoff: false,
            emergence_assignment: EmergenceAssignment::IndexTerciles,
            population_size: 30,
            max_iterations: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(msg.into()))
            }
        };
        check(self.omega1 > 1.0, "omega1 must be > 1")?;
        check(self.omega2 > 1.0, "omega2 must be > 1")?;
        check(self.omega3 > 1.0, "omega3 must be > 1")?;
        check(self.omega4 > 1.0, "omega4 must be > 1")?;
        check(self.omega5 > 1.0, "omega5 must be > 1")?;
        check(self.k > 0.0, "k must be > 0")?;
        check(self.k1 > 0.0, "k1 must be > 0")?;
        check(self.k2 > 0.0, "k2 must be > 0")?;
        check(
            self.temp_tol < self.temp_max,
            "temp_tol must be below temp_max",
        )?;
        check(
            self.temp_sample_range.0 < self.temp_sample_range.1,
            "temperature sample range must be non-empty",
        )?;
        let (t1, t2, t3) = self.day_segments;
        check(
            0.0 <= t1 && t1 < t2 && t2 < t3 && t3 < self.day_length,
            "day segments must satisfy 0 <= t1 < t2 < t3 < day_length",
        )?;
        check(
            self.hours_per_iteration > 0.0,
            "hours_per_iteration must be > 0",
        )?;
        check(
            self.survival_cutoff > 0.0 && self.survival_cutoff < 1.0,
            "survival_cutoff must lie in (0, 1)",
        )?;
        if self.population_size < 2 {
            return Err(Error::PopulationTooSmall {
                min: 2,
                got: self.population_size,
            });
        }
        check(self.max_iterations >= 1, "max_iterations must be >= 1")?;
        Ok(())
    }

    /// Model-day time for a 1-based iteration counter.
    pub fn day_time_at(&self, iteration: usize) -> f64 {
        (iteration as f64 * self.hours_per_iteration) % self.day_length
    }
}

/// Environment seen by one hatchling during one iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvironmentState {
    pub sand_temp: f64,
    pub day_time: f64,
}

/// A velocity perturbation, or the death of the hatchling when the
/// sand temperature is lethal.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvDelta {
    Delta(Vec<f64>),
    Death,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TempBand {
    SpeedUp,
    SlowDown,
    Lethal,
}

fn temp_band(temp: f64, params: &OrsParams) -> TempBand {
    if temp <= params.temp_tol {
        TempBand::SpeedUp
    } else if temp < params.temp_max {
        TempBand::SlowDown
    } else {
        TempBand::Lethal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DayWindow {
    Morning,
    Midday,
    Night,
}

fn day_window(day_time: f64, params: &OrsParams) -> DayWindow {
    let (t1, t2, t3) = params.day_segments;
    if (t1..t2).contains(&day_time) {
        DayWindow::Morning
    } else if (t2..t3).contains(&day_time) {
        DayWindow::Midday
    } else {
        DayWindow::Night
    }
}

/// Velocity change due to sand temperature: a speed-up below the
/// tolerable temperature, a slow-down between tolerable and lethal,
/// death at or above the lethal temperature.
pub fn temperature_delta(velocity: &[f64], temp: f64, params: &OrsParams) -> EnvDelta {
    match temp_band(temp, params) {
        TempBand::SpeedUp => {
            EnvDelta::Delta(velocity.iter().map(|v| v * (params.omega1 - 1.0)).collect())
        }
        TempBand::SlowDown => EnvDelta::Delta(
            velocity
                .iter()
                .map(|v| v * (1.0 - params.omega2) / params.omega2)
                .collect(),
        ),
        TempBand::Lethal => EnvDelta::Death,
    }
}

/// Velocity change due to emergence order. The additive offsets `k1`
/// and `k2` apply to every component.
pub fn emergence_delta(velocity: &[f64], order: EmergenceOrder, params: &OrsParams) -> Vec<f64> {
    let offset = match order {
        EmergenceOrder::Early => params.k1,
        EmergenceOrder::Middle => 0.0,
        EmergenceOrder::Late => -params.k2,
    };
    velocity
        .iter()
        .map(|v| v * (params.k - 1.0) + offset)
        .collect()
}

/// Velocity change due to the time of day: morning speed-up, midday
/// slow-down, night speed-up (the night window wraps around the day).
pub fn time_of_day_delta(velocity: &[f64], day_time: f64, params: &OrsParams) -> Vec<f64> {
    let factor = match day_window(day_time, params) {
        DayWindow::Morning => params.omega3 - 1.0,
        DayWindow::Midday => (1.0 - params.omega4) / params.omega4,
        DayWindow::Night => params.omega5 - 1.0,
    };
    velocity.iter().map(|v| v * factor).collect()
}

/// Combined environmental impact: the sum of the temperature, emergence
/// and time-of-day deltas scaled by a fresh uniform weight in `[0, 1)`.
/// A lethal temperature short-circuits to `Death`.
pub fn environmental_delta(
    h: &Hatchling,
    env: &EnvironmentState,
    params: &OrsParams,
    rng: &mut RandomSource,
) -> EnvDelta {
    let temp = match temperature_delta(&h.velocity, env.sand_temp, params) {
        EnvDelta::Death => return EnvDelta::Death,
        EnvDelta::Delta(d) => d,
    };
    let emergence = emergence_delta(&h.velocity, h.emergence_order, params);
    let time = time_of_day_delta(&h.velocity, env.day_time, params);
    let p1 = rng.uniform();
    EnvDelta::Delta(
        temp.iter()
            .zip(&emergence)
            .zip(&time)
            .map(|((a, b), c)| p1 * (a + b + c))
            .collect(),
    )
}

/// Tangential speed change from one obstacle deflection, plus the
/// angular change, for a scalar speed decomposed at angle `theta1` and
/// re-emerging at `theta2` with speed-retention factor `rho`.
///
/// The planar magnitude is recovered from the decomposed components, so
/// it is independent of `theta1` up to rounding.
pub(crate) fn trajectory_components(
    speed: f64,
    theta1: f64,
    theta2: f64,
    rho: f64,
    p2: f64,
) -> (f64, f64) {
    let planar = planar_speed(speed, theta1);
    (p2 * (rho * planar - planar), theta2 - theta1)
}

/// Magnitude of the planar decomposition `(s cos θ, s sin θ)`.
pub fn planar_speed(speed: f64, theta: f64) -> f64 {
    (speed * theta.cos()).hypot(speed * theta.sin())
}

/// Trajectory impact for one hatchling.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryDelta {
    /// Per-dimension tangential speed change, already scaled by the
    /// uniform weight `p2`.
    pub delta: Vec<f64>,
    /// Angular change `theta2 - theta1`, exposed for diagnostics only.
    pub angle_change: f64,
}

/// Sample one obstacle deflection for a hatchling: obstacle angle and
/// post-obstacle angle in `[0, pi/2)`, a speed-retention factor in
/// `[0.8, 1.2)` shared across dimensions, and the scaling weight `p2`.
pub fn trajectory_delta(h: &Hatchling, rng: &mut RandomSource) -> TrajectoryDelta {
    let theta1 = rng.uniform_in(0.0, FRAC_PI_2);
    let theta2 = rng.uniform_in(0.0, FRAC_PI_2);
    let rho = rng.uniform_in(0.8, 1.2);
    let p2 = rng.uniform();
    let mut angle_change = 0.0;
    let delta = h
        .velocity
        .iter()
        .map(|v| {
            let (d, dtheta) = trajectory_components(v.abs(), theta1, theta2, rho, p2);
            angle_change = dtheta;
            d
        })
        .collect();
    TrajectoryDelta {
        delta,
        angle_change,
    }
}

/// Survival factor of the value at `index` within a population's
/// objective values: `(f_max - f_i) / (f_max - f_min)`, so the best
/// member scores 1 and the worst 0. A population with no spread scores
/// 1 everywhere; non-finite values always score 0.
pub fn survival_factor(values: &[f64], index: usize) -> f64 {
    survival_factors(values)[index]
}

/// Survival factors for a whole population. See [`survival_factor`].
pub fn survival_factors(values: &[f64]) -> Vec<f64> {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in finite {
        min = min.min(v);
        max = max.max(v);
    }
    values
        .iter()
        .map(|v| {
            if !v.is_finite() {
                0.0
            } else if min == max || !min.is_finite() {
                1.0
            } else {
                (max - v) / (max - min)
            }
        })
        .collect()
}

/// The velocity update rule, before clamping: explorers (survival
/// factor below the cutoff) add the resultant delta, exploiters
/// subtract it; both then shift by the best velocity and scale by the
/// hatchling's mass.
pub fn updated_velocity(
    h: &Hatchling,
    best_velocity: &[f64],
    resultant: &[f64],
    cutoff: f64,
    inclusive_cutoff: bool,
) -> Vec<f64> {
    let explores = if inclusive_cutoff {
        h.survival_factor <= cutoff
    } else {
        h.survival_factor < cutoff
    };
    h.velocity
        .iter()
        .zip(resultant)
        .zip(best_velocity)
        .map(|((v, dv), vb)| {
            let moved = if explores { v + dv } else { v - dv };
            h.mass * (moved + vb)
        })
        .collect()
}

/// Apply the velocity update to a hatchling: compute the new velocity,
/// clamp it to the bounds and re-evaluate the objective. The survival
/// factor is carried over until the population is re-ranked.
pub fn update_hatchling(
    h: &Hatchling,
    best_velocity: &[f64],
    resultant: &[f64],
    params: &OrsParams,
    objective: &ObjectiveSpec,
    rng: &mut RandomSource,
) -> Result<Hatchling> {
    let mut velocity = updated_velocity(
        h,
        best_velocity,
        resultant,
        params.survival_cutoff,
        params.inclusive_cutoff,
    );
    objective.space().clamp(&mut velocity);
    let objective_value = objective.evaluate(&velocity, rng)?;
    Ok(Hatchling {
        velocity,
        objective_value,
        ..*h
    })
}

/// Replace a dead hatchling with a fresh uniform sample. The emergence
/// slot is preserved; mass and velocity are re-drawn.
pub fn handle_death(
    h: &Hatchling,
    objective: &ObjectiveSpec,
    rng: &mut RandomSource,
) -> Result<Hatchling> {
    let velocity = objective.space().sample(rng);
    let mass = 1.0 - rng.uniform(); // (0, 1]
    let objective_value = objective.evaluate(&velocity, rng)?;
    Ok(Hatchling {
        mass,
        velocity,
        objective_value,
        survival_factor: 0.0,
        emergence_order: h.emergence_order,
        alive: true,
    })
}

/// Counts of how often each rule branch fired during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCoverage {
    pub temp_speed_up: u64,
    pub temp_slow_down: u64,
    pub temp_lethal: u64,
    pub emergence_early: u64,
    pub emergence_middle: u64,
    pub emergence_late: u64,
    pub day_morning: u64,
    pub day_midday: u64,
    pub day_night: u64,
}

impl BranchCoverage {
    pub fn all_branches_hit(&self) -> bool {
        [
            self.temp_speed_up,
            self.temp_slow_down,
            self.temp_lethal,
            self.emergence_early,
            self.emergence_middle,
            self.emergence_late,
            self.day_morning,
            self.day_midday,
            self.day_night,
        ]
        .iter()
        .all(|&c| c > 0)
    }
}

/// A stepping ORS run. [`optimize`] drives this to completion; tests
/// can step it manually to inspect the population between iterations.
pub struct OrsRun<'a> {
    objective: &'a ObjectiveSpec,
    params: OrsParams,
    rng: &'a mut RandomSource,
    population: Vec<Hatchling>,
    best: Hatchling,
    initial_best: f64,
    iteration: usize,
    trace: Vec<f64>,
    coverage: BranchCoverage,
}

fn better(candidate: f64, incumbent: f64) -> bool {
    candidate.is_finite() && (!incumbent.is_finite() || candidate < incumbent)
}

impl<'a> OrsRun<'a> {
    pub fn new(
        objective: &'a ObjectiveSpec,
        params: &OrsParams,
        rng: &'a mut RandomSource,
    ) -> Result<Self> {
        params.validate()?;
        let population = initialize_population(
            objective,
            params.population_size,
            rng,
            params.emergence_assignment,
        )?;
        let mut best = population[0].clone();
        for h in &population[1..] {
            if better(h.objective_value, best.objective_value) {
                best = h.clone();
            }
        }
        Ok(Self {
            objective,
            params: params.clone(),
            rng,
            initial_best: best.objective_value,
            best,
            population,
            iteration: 0,
            trace: Vec::with_capacity(params.max_iterations),
            coverage: BranchCoverage::default(),
        })
    }

    pub fn population(&self) -> &[Hatchling] {
        &self.population
    }

    pub fn best(&self) -> &Hatchling {
        &self.best
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn coverage(&self) -> BranchCoverage {
        self.coverage
    }

    /// Run one iteration: perturb or replace every hatchling, re-rank
    /// the population, and advance the best-so-far record.
    pub fn step(&mut self) -> Result<()> {
        self.iteration += 1;
        let day_time = self.params.day_time_at(self.iteration);
        let best_velocity = self.best.velocity.clone();
        let (lo, hi) = self.params.temp_sample_range;

        for i in 0..self.population.len() {
            let env = EnvironmentState {
                sand_temp: self.rng.uniform_in(lo, hi),
                day_time,
            };
            self.record_branches(&env, self.population[i].emergence_order);
            match environmental_delta(&self.population[i], &env, &self.params, self.rng) {
                EnvDelta::Death => {
                    self.population[i].alive = false;
                    self.population[i] =
                        handle_death(&self.population[i], self.objective, self.rng)?;
                }
                EnvDelta::Delta(env_delta) => {
                    let trajectory = trajectory_delta(&self.population[i], self.rng);
                    let resultant: Vec<f64> = env_delta
                        .iter()
                        .zip(&trajectory.delta)
                        .map(|(a, b)| a + b)
                        .collect();
                    self.population[i] = update_hatchling(
                        &self.population[i],
                        &best_velocity,
                        &resultant,
                        &self.params,
                        self.objective,
                        self.rng,
                    )?;
                }
            }
        }

        let values: Vec<f64> = self.population.iter().map(|h| h.objective_value).collect();
        for (h, s) in self.population.iter_mut().zip(survival_factors(&values)) {
            h.survival_factor = s;
        }
        for h in &self.population {
            if better(h.objective_value, self.best.objective_value) {
                self.best = h.clone();
            }
        }
        self.trace.push(self.best.objective_value);
        Ok(())
    }

    fn record_branches(&mut self, env: &EnvironmentState, order: EmergenceOrder) {
        match temp_band(env.sand_temp, &self.params) {
            TempBand::SpeedUp => self.coverage.temp_speed_up += 1,
            TempBand::SlowDown => self.coverage.temp_slow_down += 1,
            TempBand::Lethal => self.coverage.temp_lethal += 1,
        }
        match order {
            EmergenceOrder::Early => self.coverage.emergence_early += 1,
            EmergenceOrder::Middle => self.coverage.emergence_middle += 1,
            EmergenceOrder::Late => self.coverage.emergence_late += 1,
        }
        match day_window(env.day_time, &self.params) {
            DayWindow::Morning => self.coverage.day_morning += 1,
            DayWindow::Midday => self.coverage.day_midday += 1,
            DayWindow::Night => self.coverage.day_night += 1,
        }
    }

    pub fn finish(self) -> (Hatchling, ConvergenceTrace) {
        let trace = ConvergenceTrace {
            run_id: 0,
            initial_best: self.initial_best,
            best_per_iteration: self.trace,
            final_best_point: self.best.velocity.clone(),
        };
        (self.best, trace)
    }
}

/// Run the full ORS loop and return the best hatchling found together
/// with the per-iteration best trace.
pub fn optimize(
    objective: &ObjectiveSpec,
    params: &OrsParams,
    rng: &mut RandomSource,
) -> Result<(Hatchling, ConvergenceTrace)> {
    let mut run = OrsRun::new(objective, params, rng)?;
    for _ in 0..params.max_iterations {
        run.step()?;
    }
    Ok(run.finish())
}
