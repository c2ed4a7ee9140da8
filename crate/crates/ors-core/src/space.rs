//! Box-constrained search spaces.

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// A rectangular search domain: per-dimension lower/upper bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidParameter(
                "search space needs at least one dimension".into(),
            ));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidParameter(format!(
                    "bounds for dimension {j} must satisfy lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[-half_width, half_width]` in every dimension.
    pub fn symmetric(dimension: usize, half_width: f64) -> Result<Self> {
        Self::new(vec![-half_width; dimension], vec![half_width; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Mean of the per-dimension widths `upper - lower`.
    pub fn mean_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .sum::<f64>()
            / self.dimension() as f64
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Clamp every component to its bounds, in place.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// One uniform sample from the box.
    pub fn sample(&self, rng: &mut RandomSource) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| rng.uniform_in(*lo, *hi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(SearchSpace::new(vec![], vec![]).is_err());
        assert!(SearchSpace::new(vec![0.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![1.0], vec![-1.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn clamp_pins_to_bounds() {
        let space = SearchSpace::symmetric(3, 1.0).unwrap();
        let mut x = vec![-5.0, 0.25, 7.0];
        space.clamp(&mut x);
        assert_eq!(x, vec![-1.0, 0.25, 1.0]);
        assert!(space.contains(&x));
    }

    #[test]
    fn samples_stay_inside() {
        let space = SearchSpace::new(vec![-2.0, 10.0], vec![-1.0, 20.0]).unwrap();
        let mut rng = RandomSource::new(3);
        for _ in 0..1000 {
            assert!(space.contains(&space.sample(&mut rng)));
        }
    }

    #[test]
    fn mean_width() {
        let space = SearchSpace::new(vec![0.0, 0.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(space.mean_width(), 2.0);
    }
}
