//! Descriptive statistics over multi-run campaigns and the two-sided
//! Wilcoxon signed-rank test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Final best values of one algorithm on one problem, one entry per
/// independent run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSample {
    pub algorithm_id: String,
    pub problem_id: String,
    pub final_bests: Vec<f64>,
}

impl RunSample {
    pub fn summarize(&self) -> Result<Summary> {
        summarize(&self.final_bests)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
}

/// Mean and sample standard deviation. Needs at least two values for
/// the standard deviation to be defined.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.len() < 2 {
        return Err(Error::SampleTooSmall {
            min: 2,
            got: values.len(),
        });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Summary {
        mean,
        std: var.sqrt(),
    })
}

/// Largest pair count handled by exact enumeration; larger samples use
/// the normal approximation.
pub const EXACT_ENUMERATION_LIMIT: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WilcoxonMethod {
    #[serde(rename = "exact_enumeration")]
    ExactEnumeration,
    #[serde(rename = "normal_approximation")]
    NormalApproximation,
}

impl std::fmt::Display for WilcoxonMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ExactEnumeration => write!(f, "exact_enumeration"),
            Self::NormalApproximation => write!(f, "normal_approximation"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`: the smaller of the signed-rank sums.
    pub statistic_w: f64,
    pub p_value: f64,
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    pub method: WilcoxonMethod,
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped; tied absolute differences receive
/// average ranks. Up to [`EXACT_ENUMERATION_LIMIT`] effective pairs the
/// p-value enumerates the exact null distribution of the rank sum;
/// beyond that a tie-corrected normal approximation with continuity
/// correction is used. All differences zero yields the degenerate
/// result `p = 1`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    let ranks = SignedRanks::compute(a, b)?;
    if ranks.n_effective == 0 {
        return Ok(WilcoxonResult {
            statistic_w: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method: WilcoxonMethod::ExactEnumeration,
        });
    }
    let method = if ranks.n_effective <= EXACT_ENUMERATION_LIMIT {
        WilcoxonMethod::ExactEnumeration
    } else {
        WilcoxonMethod::NormalApproximation
    };
    wilcoxon_with(&ranks, method)
}

/// Same test with the p-value method forced, regardless of sample
/// size. Used to compare the exact and approximate branches.
pub fn wilcoxon_signed_rank_with_method(
    a: &[f64],
    b: &[f64],
    method: WilcoxonMethod,
) -> Result<WilcoxonResult> {
    let ranks = SignedRanks::compute(a, b)?;
    if ranks.n_effective == 0 {
        return Ok(WilcoxonResult {
            statistic_w: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method,
        });
    }
    wilcoxon_with(&ranks, method)
}

struct SignedRanks {
    /// Rank of each nonzero |difference| (average ranks on ties).
    ranks: Vec<f64>,
    /// Sign of each difference, aligned with `ranks`.
    positive: Vec<bool>,
    /// Sizes of tie groups among the |differences|.
    tie_sizes: Vec<usize>,
    n_effective: usize,
}

impl SignedRanks {
    fn compute(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let diffs: Vec<f64> = a
            .iter()
            .zip(b)
            .map(|(x, y)| x - y)
            .filter(|d| *d != 0.0)
            .collect();
        let n = diffs.len();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            diffs[i]
                .abs()
                .partial_cmp(&diffs[j].abs())
                .expect("finite differences")
        });

        let mut ranks = vec![0.0; n];
        let mut tie_sizes = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
                j += 1;
            }
            // Positions i..=j (0-based) share the average rank.
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &order[i..=j] {
                ranks[k] = avg;
            }
            tie_sizes.push(j - i + 1);
            i = j + 1;
        }

        Ok(Self {
            ranks,
            positive: diffs.iter().map(|d| *d > 0.0).collect(),
            tie_sizes,
            n_effective: n,
        })
    }

    fn rank_sums(&self) -> (f64, f64) {
        let mut plus = 0.0;
        let mut minus = 0.0;
        for (r, pos) in self.ranks.iter().zip(&self.positive) {
            if *pos {
                plus += r;
            } else {
                minus += r;
            }
        }
        (plus, minus)
    }
}

fn wilcoxon_with(ranks: &SignedRanks, method: WilcoxonMethod) -> Result<WilcoxonResult> {
    let (plus, minus) = ranks.rank_sums();
    let w = plus.min(minus);
    let p_value = match method {
        WilcoxonMethod::ExactEnumeration => exact_p(&ranks.ranks, w),
        WilcoxonMethod::NormalApproximation => normal_p(ranks.n_effective, &ranks.tie_sizes, w),
    };
    Ok(WilcoxonResult {
        statistic_w: w,
        p_value,
        n_effective: ranks.n_effective,
        method,
    })
}

/// Exact two-sided p-value: enumerate the null distribution of `W+`
/// over all 2^n sign assignments and fold it by symmetry,
/// `p = min(1, 2 * P(W+ <= w))`.
///
/// Average ranks are half-integers, so doubling them makes every
/// achievable rank sum an integer; counting subsets per achievable sum
/// covers the full enumeration without walking all 2^n assignments
/// one by one.
fn exact_p(ranks: &[f64], w: f64) -> f64 {
    let n = ranks.len();
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();

    // counts[s] = number of sign assignments with doubled W+ equal to s.
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &q in &doubled {
        reach += q;
        for s in (q..=reach).rev() {
            counts[s] += counts[s - q];
        }
    }

    let cutoff = (2.0 * w).round() as usize;
    let below: f64 = counts[..=cutoff.min(total)].iter().sum();
    (2.0 * below / (n as f64).exp2()).min(1.0)
}

/// Normal approximation with tie-corrected variance and continuity
/// correction.
fn normal_p(n: usize, tie_sizes: &[usize], w: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_correction: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum::<f64>()
        / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_correction;
    let z = ((w - mean).abs() - 0.5).max(0.0) / var.sqrt();
    libm::erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
