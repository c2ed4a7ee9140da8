//! Candidate solutions and population initialization.

use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::optimizer::survival_factors;
use crate::rng::RandomSource;

/// Relative order in which a hatchling left the nest. Early emergers
/// move faster than late ones, which the optimizer turns into distinct
/// perturbation offsets per group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmergenceOrder {
    Early,
    Middle,
    Late,
}

/// How emergence orders are assigned across the population.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmergenceAssignment {
    /// First third of the population indices is `Early`, second third
    /// `Middle`, remainder `Late` (group sizes differing by at most one).
    #[default]
    IndexTerciles,
    /// The same balanced label multiset, randomly permuted.
    Random,
}

/// One candidate solution: a scalar mass plus a velocity vector that
/// doubles as the decision vector. Objective values are cached so the
/// population can be ranked without re-evaluating.
#[derive(Clone, Debug, PartialEq)]
pub struct Hatchling {
    /// Per-candidate weight in `(0, 1]`, sampled once at initialization.
    pub mass: f64,
    /// The decision vector; always within the search-space bounds.
    pub velocity: Vec<f64>,
    pub objective_value: f64,
    /// Normalized rank in `[0, 1]`; 1 is the best of the population.
    pub survival_factor: f64,
    pub emergence_order: EmergenceOrder,
    pub alive: bool,
}

/// Momentum of a hatchling: mass times velocity, elementwise.
pub fn momentum_fitness(h: &Hatchling) -> Vec<f64> {
    h.velocity.iter().map(|v| h.mass * v).collect()
}

/// Balanced emergence labels for a population of `n`, in index order:
/// an `Early` block, then `Middle`, then `Late`, sizes differing by at
/// most one.
pub fn tercile_orders(n: usize) -> Vec<EmergenceOrder> {
    let early = n.div_ceil(3);
    let middle = (n - early).div_ceil(2);
    let mut orders = vec![EmergenceOrder::Late; n];
    orders[..early].fill(EmergenceOrder::Early);
    orders[early..early + middle].fill(EmergenceOrder::Middle);
    orders
}

/// Draw `n` hatchlings uniformly from the objective's search space,
/// evaluate them, and compute the initial survival factors.
///
/// Needs `n >= 2` so the survival factor's min/max normalization is
/// defined.
pub fn initialize_population(
    objective: &ObjectiveSpec,
    n: usize,
    rng: &mut RandomSource,
    assignment: EmergenceAssignment,
) -> Result<Vec<Hatchling>> {
    if n < 2 {
        return Err(Error::PopulationTooSmall { min: 2, got: n });
    }
    let mut orders = tercile_orders(n);
    if assignment == EmergenceAssignment::Random {
        // Fisher-Yates over the balanced label multiset.
        for i in (1..n).rev() {
            orders.swap(i, rng.index(i + 1));
        }
    }

    let mut population = Vec::with_capacity(n);
    for order in orders {
        let velocity = objective.space().sample(rng);
        let mass = 1.0 - rng.uniform(); // (0, 1]
        let objective_value = objective.evaluate(&velocity, rng)?;
        population.push(Hatchling {
            mass,
            velocity,
            objective_value,
            survival_factor: 0.0,
            emergence_order: order,
            alive: true,
        });
    }

    let values: Vec<f64> = population.iter().map(|h| h.objective_value).collect();
    for (h, s) in population.iter_mut().zip(survival_factors(&values)) {
        h.survival_factor = s;
    }
    Ok(population)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SearchSpace;
    use proptest::prelude::*;

    fn test_objective(dimension: usize, half_width: f64) -> ObjectiveSpec {
        let space = SearchSpace::symmetric(dimension, half_width).unwrap();
        ObjectiveSpec::deterministic("sphere", space, Some(0.0), |x| {
            x.iter().map(|v| v * v).sum()
        })
    }

    #[test]
    fn momentum_is_mass_times_velocity() {
        let mut h = Hatchling {
            mass: 2.0,
            velocity: vec![1.0, -3.0],
            objective_value: 0.0,
            survival_factor: 1.0,
            emergence_order: EmergenceOrder::Early,
            alive: true,
        };
        assert_eq!(momentum_fitness(&h), vec![2.0, -6.0]);

        h.mass = 1.0;
        assert_eq!(momentum_fitness(&h), h.velocity);

        h.mass = 0.5;
        h.velocity = vec![4.0, 4.0, 4.0];
        assert_eq!(momentum_fitness(&h), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn init_respects_bounds_and_mass_range() {
        let obj = test_objective(2, 1.0);
        let mut rng = RandomSource::new(42);
        let pop =
            initialize_population(&obj, 3, &mut rng, EmergenceAssignment::IndexTerciles).unwrap();
        assert_eq!(pop.len(), 3);
        for h in &pop {
            assert!(obj.space().contains(&h.velocity));
            assert!(h.mass > 0.0 && h.mass <= 1.0);
            assert!(h.alive);
            assert!((0.0..=1.0).contains(&h.survival_factor));
        }
    }

    #[test]
    fn nine_members_split_three_ways() {
        let obj = test_objective(2, 1.0);
        let mut rng = RandomSource::new(1);
        let pop =
            initialize_population(&obj, 9, &mut rng, EmergenceAssignment::IndexTerciles).unwrap();
        let orders: Vec<_> = pop.iter().map(|h| h.emergence_order).collect();
        assert_eq!(&orders[..3], &[EmergenceOrder::Early; 3]);
        assert_eq!(&orders[3..6], &[EmergenceOrder::Middle; 3]);
        assert_eq!(&orders[6..], &[EmergenceOrder::Late; 3]);
    }

    #[test]
    fn same_seed_same_population() {
        let obj = test_objective(4, 10.0);
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        let pa =
            initialize_population(&obj, 5, &mut a, EmergenceAssignment::IndexTerciles).unwrap();
        let pb =
            initialize_population(&obj, 5, &mut b, EmergenceAssignment::IndexTerciles).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn population_of_one_is_rejected() {
        let obj = test_objective(2, 1.0);
        let mut rng = RandomSource::new(0);
        let err = initialize_population(&obj, 1, &mut rng, EmergenceAssignment::IndexTerciles)
            .unwrap_err();
        assert!(matches!(err, Error::PopulationTooSmall { min: 2, got: 1 }));
    }

    #[test]
    fn random_assignment_keeps_the_label_multiset() {
        let obj = test_objective(2, 1.0);
        let mut rng = RandomSource::new(11);
        let pop = initialize_population(&obj, 10, &mut rng, EmergenceAssignment::Random).unwrap();
        let count = |o: EmergenceOrder| pop.iter().filter(|h| h.emergence_order == o).count();
        assert_eq!(count(EmergenceOrder::Early), 4);
        assert_eq!(count(EmergenceOrder::Middle), 3);
        assert_eq!(count(EmergenceOrder::Late), 3);
    }

    proptest! {
        #[test]
        fn tercile_counts_differ_by_at_most_one(n in 2usize..300) {
            let orders = tercile_orders(n);
            prop_assert_eq!(orders.len(), n);
            let count = |o: EmergenceOrder| orders.iter().filter(|&&x| x == o).count();
            let (e, m, l) = (
                count(EmergenceOrder::Early),
                count(EmergenceOrder::Middle),
                count(EmergenceOrder::Late),
            );
            let max = e.max(m).max(l);
            let min = e.min(m).min(l);
            prop_assert!(max - min <= 1, "unbalanced split {}/{}/{} for n={}", e, m, l, n);
        }
    }
}
