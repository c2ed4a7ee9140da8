//! The 14 classical benchmark functions with their bounds, dimensions
//! and known minima.
//!
//! All functions are minimized. `Fn1`-`Fn12` are the standard scalable
//! suite at dimension 30; `Fn13` (Kowalik) and `Fn14` (Branin) are
//! fixed-dimension problems. `Fn7` adds uniform `[0, 1)` noise drawn
//! from the caller's random source; every other function is
//! deterministic.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::space::SearchSpace;

/// `sin(pi * x)` with exact zeros at integer `x`. The naive form keeps
/// a rounding residue of order `1e-16` at integers because `pi` itself
/// is rounded; reducing the argument first avoids that.
fn sin_pi(x: f64) -> f64 {
    let k = x.round();
    let s = (PI * (x - k)).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Sphere.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Sum of absolute values plus their product (Schwefel 2.22).
pub fn schwefel_222(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v.abs()).sum();
    let prod: f64 = x.iter().map(|v| v.abs()).product();
    sum + prod
}

/// Sum of squared prefix sums (Schwefel 1.2).
pub fn schwefel_12(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for v in x {
        prefix += v;
        total += prefix * prefix;
    }
    total
}

/// Maximum absolute component (Schwefel 2.21).
pub fn schwefel_221(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Rosenbrock valley.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

/// Step function: squared floors of the shifted components.
pub fn step(x: &[f64]) -> f64 {
    x.iter().map(|v| (v + 0.5).floor().powi(2)).sum()
}

/// Weighted quartic without its noise term.
pub fn quartic(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(j, v)| (j + 1) as f64 * v.powi(4))
        .sum()
}

/// Rastrigin.
pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

/// Ackley. Grouped so both terms cancel exactly at the origin.
pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let mean_cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    20.0 * (1.0 - (-0.2 * rms).exp()) + (E - mean_cos.exp())
}

/// Griewank.
pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(j, v)| (v / ((j + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

/// Boundary penalty used by the penalized functions: zero inside
/// `[-a, a]`, quartic growth outside.
pub fn penalty_u(p: f64, a: f64, k: f64, m: f64) -> f64 {
    if p > a {
        k * (p - a).powf(m)
    } else if p < -a {
        k * (-p - a).powf(m)
    } else {
        0.0
    }
}

/// First penalized function, over `q_j = 1 + (p_j + 1) / 4`.
pub fn penalized_1(x: &[f64]) -> f64 {
    let n = x.len();
    let q: Vec<f64> = x.iter().map(|p| 1.0 + (p + 1.0) / 4.0).collect();
    let mut sum = 10.0 * sin_pi(q[0]).powi(2);
    for j in 0..n - 1 {
        sum += (q[j] - 1.0).powi(2) * (1.0 + 10.0 * sin_pi(q[j + 1]).powi(2));
    }
    sum += (q[n - 1] - 1.0).powi(2);
    PI / n as f64 * sum
        + x.iter()
            .map(|&p| penalty_u(p, 10.0, 100.0, 4.0))
            .sum::<f64>()
}

/// Second penalized function.
pub fn penalized_2(x: &[f64]) -> f64 {
    let n = x.len();
    let mut sum = sin_pi(3.0 * x[0]).powi(2);
    for j in 0..n - 1 {
        sum += (x[j] - 1.0).powi(2) * (1.0 + sin_pi(3.0 * x[j + 1]).powi(2));
    }
    sum += (x[n - 1] - 1.0).powi(2) * (1.0 + sin_pi(2.0 * x[n - 1]).powi(2));
    0.1 * sum
        + x.iter()
            .map(|&p| penalty_u(p, 5.0, 100.0, 4.0))
            .sum::<f64>()
}

/// Measured responses of the Kowalik rational-fit problem.
pub const KOWALIK_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];

/// Regressor values `b_i` of the Kowalik problem; the reciprocals
/// `1/b_i` are 0.25, 0.5, 1, 2, 4, 6, 8, 10, 12, 14, 16.
pub const KOWALIK_B: [f64; 11] = [
    4.0,
    2.0,
    1.0,
    0.5,
    0.25,
    1.0 / 6.0,
    1.0 / 8.0,
    1.0 / 10.0,
    1.0 / 12.0,
    1.0 / 14.0,
    1.0 / 16.0,
];

/// Kowalik sum of squared residuals over the standard 11-point dataset.
pub fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(&KOWALIK_B)
        .map(|(a, b)| {
            let num = x[0] * (b * b + b * x[1]);
            let den = b * b + b * x[2] + x[3];
            (a - num / den).powi(2)
        })
        .sum()
}

/// Branin.
pub fn branin(x: &[f64]) -> f64 {
    let (p1, p2) = (x[0], x[1]);
    (p2 - 5.1 / (4.0 * PI * PI) * p1 * p1 + 5.0 / PI * p1 - 6.0).powi(2)
        + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * p1.cos()
        + 10.0
}

/// Rough shape of a benchmark's landscape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modality {
    Unimodal,
    Multimodal,
    FixedDimMultimodal,
}

/// One registry entry: identity, domain and known minimum of a
/// benchmark function.
#[derive(Clone, Debug)]
pub struct BenchmarkEntry {
    pub id: &'static str,
    pub label: &'static str,
    pub dimension: usize,
    /// Symmetric bound: the domain is `[-range, range]` per dimension.
    pub range: f64,
    pub fmin: f64,
    pub modality: Modality,
    pub noisy: bool,
    function: fn(&[f64]) -> f64,
    minimizer: MinimizerKind,
}

#[derive(Clone, Copy, Debug)]
enum MinimizerKind {
    Origin,
    AllOnes,
    AllMinusOnes,
    Point(&'static [f64]),
    // The noisy quartic has no deterministic minimizer to evaluate.
    NoiseOnly,
}

impl BenchmarkEntry {
    pub fn space(&self) -> SearchSpace {
        SearchSpace::symmetric(self.dimension, self.range)
            .expect("registry entries have valid bounds")
    }

    /// Build a fresh objective (with its own evaluation counter).
    pub fn objective(&self) -> ObjectiveSpec {
        let f = self.function;
        if self.noisy {
            ObjectiveSpec::new(self.id, self.space(), Some(self.fmin), move |x, rng| {
                f(x) + rng.uniform()
            })
        } else {
            ObjectiveSpec::new(self.id, self.space(), Some(self.fmin), move |x, _| f(x))
        }
    }

    /// The deterministic part of the function (noise stripped).
    pub fn deterministic_value(&self, x: &[f64]) -> f64 {
        (self.function)(x)
    }

    /// Standard minimizer, when the function has a canonical one worth
    /// asserting against.
    pub fn known_minimizer(&self) -> Option<Vec<f64>> {
        match self.minimizer {
            MinimizerKind::Origin | MinimizerKind::NoiseOnly => Some(vec![0.0; self.dimension]),
            MinimizerKind::AllOnes => Some(vec![1.0; self.dimension]),
            MinimizerKind::AllMinusOnes => Some(vec![-1.0; self.dimension]),
            MinimizerKind::Point(p) => Some(p.to_vec()),
        }
    }
}

const BRANIN_MINIMIZER: [f64; 2] = [PI, 2.275];
const KOWALIK_MINIMIZER: [f64; 4] = [0.1928, 0.1908, 0.1231, 0.1358];

/// The registry, in suite order `Fn1`..`Fn14`.
pub fn all() -> Vec<BenchmarkEntry> {
    use MinimizerKind::*;
    use Modality::*;
    vec![
        entry(
            "Fn1", "sphere", 30, 100.0, 0.0, Unimodal, false, sphere, Origin,
        ),
        entry(
            "Fn2",
            "abs-sum-plus-product",
            30,
            10.0,
            0.0,
            Unimodal,
            false,
            schwefel_222,
            Origin,
        ),
        entry(
            "Fn3",
            "squared prefix sums",
            30,
            100.0,
            0.0,
            Unimodal,
            false,
            schwefel_12,
            Origin,
        ),
        entry(
            "Fn4",
            "max absolute component",
            30,
            100.0,
            0.0,
            Unimodal,
            false,
            schwefel_221,
            Origin,
        ),
        entry(
            "Fn5",
            "rosenbrock",
            30,
            30.0,
            0.0,
            Unimodal,
            false,
            rosenbrock,
            AllOnes,
        ),
        entry("Fn6", "step", 30, 100.0, 0.0, Unimodal, false, step, Origin),
        entry(
            "Fn7",
            "noisy quartic",
            30,
            1.28,
            0.0,
            Unimodal,
            true,
            quartic,
            NoiseOnly,
        ),
        entry(
            "Fn8",
            "rastrigin",
            30,
            5.12,
            0.0,
            Multimodal,
            false,
            rastrigin,
            Origin,
        ),
        entry(
            "Fn9", "ackley", 30, 32.0, 0.0, Multimodal, false, ackley, Origin,
        ),
        entry(
            "Fn10", "griewank", 30, 600.0, 0.0, Multimodal, false, griewank, Origin,
        ),
        entry(
            "Fn11",
            "penalized-1",
            30,
            50.0,
            0.0,
            Multimodal,
            false,
            penalized_1,
            AllMinusOnes,
        ),
        entry(
            "Fn12",
            "penalized-2",
            30,
            50.0,
            0.0,
            Multimodal,
            false,
            penalized_2,
            AllOnes,
        ),
        entry(
            "Fn13",
            "kowalik",
            4,
            5.0,
            0.00030,
            FixedDimMultimodal,
            false,
            kowalik,
            Point(&KOWALIK_MINIMIZER),
        ),
        entry(
            "Fn14",
            "branin",
            2,
            5.0,
            0.398,
            FixedDimMultimodal,
            false,
            branin,
            Point(&BRANIN_MINIMIZER),
        ),
    ]
}

#[allow(clippy::too_many_arguments)]
fn entry(
    id: &'static str,
    label: &'static str,
    dimension: usize,
    range: f64,
    fmin: f64,
    modality: Modality,
    noisy: bool,
    function: fn(&[f64]) -> f64,
    minimizer: MinimizerKind,
) -> BenchmarkEntry {
    BenchmarkEntry {
        id,
        label,
        dimension,
        range,
        fmin,
        modality,
        noisy,
        function,
        minimizer,
    }
}

pub fn by_id(id: &str) -> Option<BenchmarkEntry> {
    all().into_iter().find(|e| e.id == id)
}

/// Evaluate a benchmark by id. Noisy functions draw from `rng`.
pub fn evaluate(id: &str, x: &[f64], rng: &mut RandomSource) -> Result<f64> {
    let entry = by_id(id).ok_or_else(|| Error::UnknownProblem(id.to_string()))?;
    entry.objective().evaluate(x, rng)
}
