//! Batch experiment runner: executes an algorithm-by-problem grid over
//! seeded runs and writes machine-readable reports.
//!
//! Run `r` of every cell uses seed `base_seed + r`, so campaigns are
//! reproducible and paired across algorithms. Cells are independent
//! and execute on a worker pool; reports are written once all cells
//! finish. Reruns of the same configuration produce byte-identical
//! output files.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{de_optimize, random_search, DeParams};
use crate::benchmarks::{self, BenchmarkEntry};
use crate::engineering::ConstrainedProblem;
use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::optimizer::{optimize, OrsParams};
use crate::rng::RandomSource;
use crate::stats::{self, RunSample, WilcoxonMethod};
use crate::trace::ConvergenceTrace;

/// Campaign description: which problems, which algorithms, how many
/// seeded runs, and where reports go.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub problems: Vec<String>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "defaults::runs")]
    pub runs: usize,
    #[serde(default = "defaults::iterations")]
    pub iterations: usize,
    #[serde(default = "defaults::population")]
    pub population: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
}

mod defaults {
    pub fn runs() -> usize {
        20
    }
    pub fn iterations() -> usize {
        1000
    }
    pub fn population() -> usize {
        30
    }
}

/// Algorithm selection with optional parameter overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "lowercase")]
pub enum AlgorithmSpec {
    Ors(Box<OrsOverrides>),
    De(DeOverrides),
    Random,
}

impl AlgorithmSpec {
    pub fn id(&self) -> &'static str {
        match self {
            Self::Ors(_) => "ors",
            Self::De(_) => "de",
            Self::Random => "random",
        }
    }

    pub fn ors() -> Self {
        Self::Ors(Box::default())
    }

    pub fn de() -> Self {
        Self::De(DeOverrides::default())
    }
}

/// Optional overrides of [`OrsParams`] fields; unset fields keep the
/// space-derived defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrsOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega4: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega5: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_sample_range: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day_segments: Option<(f64, f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hours_per_iteration: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survival_cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusive_cutoff: Option<bool>,
}

impl OrsOverrides {
    fn apply(&self, p: &mut OrsParams) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { p.$field = v; })*
            };
        }
        set!(
            omega1,
            omega2,
            omega3,
            omega4,
            omega5,
            k,
            k1,
            k2,
            temp_tol,
            temp_max,
            temp_sample_range,
            day_length,
            day_segments,
            hours_per_iteration,
            survival_cutoff,
            inclusive_cutoff
        );
    }
}

/// Optional overrides of [`DeParams`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differential_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_rate: Option<f64>,
}

impl DeOverrides {
    fn apply(&self, p: &mut DeParams) {
        if let Some(v) = self.differential_weight {
            p.differential_weight = v;
        }
        if let Some(v) = self.crossover_rate {
            p.crossover_rate = v;
        }
    }
}

/// Everything a problem id can resolve to.
#[derive(Clone, Debug)]
pub enum ProblemKind {
    Benchmark(BenchmarkEntry),
    Engineering(ConstrainedProblem),
}

pub fn resolve_problem(id: &str) -> Result<ProblemKind> {
    if let Some(entry) = benchmarks::by_id(id) {
        return Ok(ProblemKind::Benchmark(entry));
    }
    if let Some(problem) = ConstrainedProblem::by_id(id) {
        return Ok(ProblemKind::Engineering(problem));
    }
    Err(Error::UnknownProblem(id.to_string()))
}

/// All problem ids the runner accepts, with a short description.
pub fn list_problems() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = benchmarks::all()
        .iter()
        .map(|e| {
            (
                e.id.to_string(),
                format!(
                    "{} (d={}, [-{}, {}])",
                    e.label, e.dimension, e.range, e.range
                ),
            )
        })
        .collect();
    for p in ConstrainedProblem::all() {
        out.push((
            p.id.to_string(),
            format!("{} (d={}, constrained)", p.name, p.space().dimension()),
        ));
    }
    out
}

pub fn list_algorithms() -> Vec<(String, String)> {
    vec![
        ("ors".into(), "Olive Ridley Survival optimizer".into()),
        ("de".into(), "differential evolution, rand/1/bin".into()),
        (
            "random".into(),
            "uniform random search at equal budget".into(),
        ),
    ]
}

/// Outcome of one seeded run of one cell.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    /// Reported optimum: for constrained problems the best feasible
    /// candidate if one was visited, otherwise the best penalized
    /// value (then `feasible` is false).
    pub final_best: f64,
    pub best_point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    pub evaluations: u64,
    #[serde(skip)]
    pub trace: ConvergenceTrace,
}

/// All runs of one (algorithm, problem) cell plus their summary.
#[derive(Clone, Debug, Serialize)]
pub struct CellResult {
    pub algorithm: String,
    pub problem: String,
    pub mean: f64,
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub runs: Vec<RunRecord>,
}

impl CellResult {
    pub fn final_bests(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.final_best).collect()
    }

    pub fn sample(&self) -> RunSample {
        RunSample {
            algorithm_id: self.algorithm.clone(),
            problem_id: self.problem.clone(),
            final_bests: self.final_bests(),
        }
    }
}

/// One pairwise test of the first-listed algorithm against another.
#[derive(Clone, Debug, Serialize)]
pub struct WilcoxonRow {
    pub problem: String,
    pub baseline: String,
    pub w: f64,
    pub p_value: f64,
    pub n_effective: usize,
    pub method: WilcoxonMethod,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub cells: Vec<CellResult>,
    pub wilcoxon: Vec<WilcoxonRow>,
}

impl CampaignResult {
    pub fn cell(&self, algorithm: &str, problem: &str) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.problem == problem)
    }
}

fn validate_config(config: &CampaignConfig) -> Result<Vec<ProblemKind>> {
    if config.problems.is_empty() {
        return Err(Error::InvalidParameter("no problems configured".into()));
    }
    if config.algorithms.is_empty() {
        return Err(Error::InvalidParameter("no algorithms configured".into()));
    }
    if config.runs == 0 {
        return Err(Error::InvalidParameter("runs must be >= 1".into()));
    }
    let mut problem_ids = config.problems.clone();
    problem_ids.sort();
    problem_ids.dedup();
    if problem_ids.len() != config.problems.len() {
        return Err(Error::InvalidParameter("duplicate problem id".into()));
    }
    let mut algorithm_ids: Vec<&str> = config.algorithms.iter().map(|a| a.id()).collect();
    algorithm_ids.sort_unstable();
    algorithm_ids.dedup();
    if algorithm_ids.len() != config.algorithms.len() {
        return Err(Error::InvalidParameter("duplicate algorithm id".into()));
    }

    let problems: Vec<ProblemKind> = config
        .problems
        .iter()
        .map(|id| resolve_problem(id))
        .collect::<Result<_>>()?;

    // Build every parameter set once up front so bad settings fail
    // before any run starts.
    for problem in &problems {
        let space = match problem {
            ProblemKind::Benchmark(e) => e.space(),
            ProblemKind::Engineering(p) => p.space().clone(),
        };
        for alg in &config.algorithms {
            match alg {
                AlgorithmSpec::Ors(overrides) => {
                    let mut p = OrsParams::for_space(&space);
                    p.population_size = config.population;
                    p.max_iterations = config.iterations;
                    overrides.apply(&mut p);
                    p.validate()?;
                }
                AlgorithmSpec::De(overrides) => {
                    let mut p = DeParams {
                        population_size: config.population,
                        max_iterations: config.iterations,
                        ..DeParams::default()
                    };
                    overrides.apply(&mut p);
                    p.validate()?;
                }
                AlgorithmSpec::Random => {
                    if config.population == 0 || config.iterations == 0 {
                        return Err(Error::InvalidParameter(
                            "population and iterations must be >= 1".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(problems)
}

fn dispatch(
    alg: &AlgorithmSpec,
    objective: &ObjectiveSpec,
    config: &CampaignConfig,
    rng: &mut RandomSource,
) -> Result<(f64, Vec<f64>, ConvergenceTrace)> {
    match alg {
        AlgorithmSpec::Ors(overrides) => {
            let mut params = OrsParams::for_space(objective.space());
            params.population_size = config.population;
            params.max_iterations = config.iterations;
            overrides.apply(&mut params);
            let (best, trace) = optimize(objective, &params, rng)?;
            Ok((best.objective_value, best.velocity, trace))
        }
        AlgorithmSpec::De(overrides) => {
            let mut params = DeParams {
                population_size: config.population,
                max_iterations: config.iterations,
                ..DeParams::default()
            };
            overrides.apply(&mut params);
            let (solution, trace) = de_optimize(objective, &params, rng)?;
            Ok((solution.value, solution.point, trace))
        }
        AlgorithmSpec::Random => {
            let (solution, trace) =
                random_search(objective, config.population, config.iterations, rng)?;
            Ok((solution.value, solution.point, trace))
        }
    }
}

fn run_cell(
    alg: &AlgorithmSpec,
    problem: &ProblemKind,
    config: &CampaignConfig,
    run: usize,
) -> Result<RunRecord> {
    let seed = config.base_seed.wrapping_add(run as u64);
    let mut rng = RandomSource::new(seed);
    match problem {
        ProblemKind::Benchmark(entry) => {
            let objective = entry.objective();
            let (final_best, best_point, mut trace) = dispatch(alg, &objective, config, &mut rng)?;
            trace.run_id = run as u64;
            Ok(RunRecord {
                run,
                seed,
                final_best,
                best_point,
                feasible: None,
                evaluations: objective.eval_count(),
                trace,
            })
        }
        ProblemKind::Engineering(problem) => {
            let (objective, tracker) = problem.tracked_objective();
            let (penalized_best, penalized_point, mut trace) =
                dispatch(alg, &objective, config, &mut rng)?;
            trace.run_id = run as u64;
            let (final_best, best_point, feasible) = match tracker.best() {
                Some(s) => (s.value, s.point, true),
                None => (penalized_best, penalized_point, false),
            };
            Ok(RunRecord {
                run,
                seed,
                final_best,
                best_point,
                feasible: Some(feasible),
                evaluations: objective.eval_count(),
                trace,
            })
        }
    }
}

/// Execute every (algorithm, problem, run) cell, write the report
/// files, and return the in-memory result.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    let problems = validate_config(config)?;
    prepare_output_dir(&config.output_dir)?;

    let mut jobs = Vec::new();
    for ai in 0..config.algorithms.len() {
        for pi in 0..config.problems.len() {
            for run in 0..config.runs {
                jobs.push((ai, pi, run));
            }
        }
    }
    let records: Vec<RunRecord> = jobs
        .into_par_iter()
        .map(|(ai, pi, run)| run_cell(&config.algorithms[ai], &problems[pi], config, run))
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(config.algorithms.len() * config.problems.len());
    let mut record_iter = records.into_iter();
    for alg in &config.algorithms {
        for problem_id in &config.problems {
            let runs: Vec<RunRecord> = record_iter.by_ref().take(config.runs).collect();
            let final_bests: Vec<f64> = runs.iter().map(|r| r.final_best).collect();
            let (mean, std) = if final_bests.len() >= 2 {
                let s = stats::summarize(&final_bests)?;
                (s.mean, s.std)
            } else {
                (final_bests[0], 0.0)
            };
            cells.push(CellResult {
                algorithm: alg.id().to_string(),
                problem: problem_id.clone(),
                mean,
                std,
                best: final_bests.iter().copied().fold(f64::INFINITY, f64::min),
                worst: final_bests
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max),
                runs,
            });
        }
    }

    let mut wilcoxon = Vec::new();
    if config.algorithms.len() >= 2 {
        let reference = config.algorithms[0].id();
        for problem_id in &config.problems {
            let first = cells
                .iter()
                .find(|c| c.algorithm == reference && &c.problem == problem_id)
                .expect("cell exists");
            let first_bests = first.final_bests();
            for alg in &config.algorithms[1..] {
                let other = cells
                    .iter()
                    .find(|c| c.algorithm == alg.id() && &c.problem == problem_id)
                    .expect("cell exists");
                let test = stats::wilcoxon_signed_rank(&first_bests, &other.final_bests())?;
                wilcoxon.push(WilcoxonRow {
                    problem: problem_id.clone(),
                    baseline: alg.id().to_string(),
                    w: test.statistic_w,
                    p_value: test.p_value,
                    n_effective: test.n_effective,
                    method: test.method,
                });
            }
        }
    }

    let result = CampaignResult {
        config: config.clone(),
        cells,
        wilcoxon,
    };
    emit_reports(&result, &config.output_dir)?;
    Ok(result)
}

fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    // Probe writability now rather than after hours of runs.
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"probe")?;
    fs::remove_file(&probe)?;
    Ok(())
}

/// Fixed 17-significant-digit float formatting; parses back to the
/// identical bits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `summary.csv`, `wilcoxon.csv`, per-run trace files and
/// `campaign.json` into `dir`. On failure every file written so far is
/// removed. Returns the written paths.
pub fn emit_reports(result: &CampaignResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match write_reports(result, dir, &mut written) {
        Ok(()) => Ok(written),
        Err(e) => {
            for path in &written {
                let _ = fs::remove_file(path);
            }
            Err(e)
        }
    }
}

fn write_file(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    written.push(path.clone());
    fs::write(&path, contents)?;
    Ok(())
}

fn write_reports(result: &CampaignResult, dir: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir)?;

    let mut summary = String::from("algorithm,problem,mean,std,best,worst\n");
    for cell in &result.cells {
        summary.push_str(&format!(
            "{},{},{},{},{},{}\n",
            cell.algorithm,
            cell.problem,
            format_float(cell.mean),
            format_float(cell.std),
            format_float(cell.best),
            format_float(cell.worst),
        ));
    }
    write_file(dir.join("summary.csv"), &summary, written)?;

    let mut wilcoxon = String::from("problem,baseline,W,p_value,n_effective,method\n");
    for row in &result.wilcoxon {
        wilcoxon.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.problem,
            row.baseline,
            format_float(row.w),
            format_float(row.p_value),
            row.n_effective,
            row.method,
        ));
    }
    write_file(dir.join("wilcoxon.csv"), &wilcoxon, written)?;

    for cell in &result.cells {
        for record in &cell.runs {
            let mut trace = String::from("iteration,best_so_far\n");
            for (i, value) in record.trace.best_per_iteration.iter().enumerate() {
                trace.push_str(&format!("{},{}\n", i + 1, format_float(*value)));
            }
            let name = format!(
                "trace_{}_{}_{}.csv",
                cell.algorithm, cell.problem, record.run
            );
            write_file(dir.join(name), &trace, written)?;
        }
    }

    let mut json = serde_json::to_string_pretty(result)?;
    json.push('\n');
    write_file(dir.join("campaign.json"), &json, written)?;
    Ok(())
}
