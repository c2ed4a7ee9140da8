//! Objective function interface with built-in evaluation accounting.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

type EvalFn = dyn Fn(&[f64], &mut RandomSource) -> f64 + Send + Sync;

/// A named objective over a [`SearchSpace`], always minimized.
///
/// The evaluation closure receives a random source so that noisy
/// objectives can draw from the caller's stream; deterministic
/// objectives ignore it. Every call is counted, which lets the harness
/// audit that competing algorithms consumed identical budgets.
pub struct ObjectiveSpec {
    name: String,
    space: SearchSpace,
    known_optimum: Option<f64>,
    eval: Box<EvalFn>,
    calls: AtomicU64,
}

impl ObjectiveSpec {
    pub fn new(
        name: impl Into<String>,
        space: SearchSpace,
        known_optimum: Option<f64>,
        eval: impl Fn(&[f64], &mut RandomSource) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            space,
            known_optimum,
            eval: Box::new(eval),
            calls: AtomicU64::new(0),
        }
    }

    /// Convenience constructor for objectives that do not use randomness.
    pub fn deterministic(
        name: impl Into<String>,
        space: SearchSpace,
        known_optimum: Option<f64>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, space, known_optimum, move |x, _| f(x))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn known_optimum(&self) -> Option<f64> {
        self.known_optimum
    }

    pub fn evaluate(&self, x: &[f64], rng: &mut RandomSource) -> Result<f64> {
        if x.len() != self.space.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dimension(),
                got: x.len(),
            });
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok((self.eval)(x, rng))
    }

    /// Number of evaluations performed so far.
    pub fn eval_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_eval_count(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dimension", &self.space.dimension())
            .field("known_optimum", &self.known_optimum)
            .field("evaluations", &self.eval_count())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_spec() -> ObjectiveSpec {
        let space = SearchSpace::symmetric(2, 1.0).unwrap();
        ObjectiveSpec::deterministic("sphere", space, Some(0.0), |x| {
            x.iter().map(|v| v * v).sum()
        })
    }

    #[test]
    fn evaluates_and_counts() {
        let obj = sphere_spec();
        let mut rng = RandomSource::new(0);
        assert_eq!(obj.evaluate(&[0.5, 0.5], &mut rng).unwrap(), 0.5);
        assert_eq!(obj.evaluate(&[0.0, 0.0], &mut rng).unwrap(), 0.0);
        assert_eq!(obj.eval_count(), 2);
        obj.reset_eval_count();
        assert_eq!(obj.eval_count(), 0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let obj = sphere_spec();
        let mut rng = RandomSource::new(0);
        let err = obj.evaluate(&[1.0], &mut rng).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        ));
        assert_eq!(obj.eval_count(), 0);
    }
}
