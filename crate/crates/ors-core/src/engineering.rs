//! Constrained engineering design problems, handled through a static
//! quadratic exterior penalty.
//!
//! Three classical problems: pressure vessel design (`pvd`), welded
//! beam design (`wbd`) and compression spring design (`sd`). Each has
//! a raw cost objective and a set of inequality constraints
//! `g_i(z) <= 0`; the optimizer minimizes
//! `cost(z) + c * sum(max(0, g_i(z))^2)`.
//!
//! Because the penalized optimum sits on the active constraint
//! boundary, the reported optimum of a run is the best *feasible*
//! candidate seen during the search, not the final penalized value.
//! [`ConstrainedProblem::tracked_objective`] wires that bookkeeping
//! into the objective itself.

use std::sync::{Arc, Mutex};

use crate::objective::ObjectiveSpec;
use crate::space::SearchSpace;
use crate::trace::Solution;

/// A constraint value counts as satisfied when it is at most this far
/// above zero.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

/// Default quadratic penalty coefficient.
pub const DEFAULT_PENALTY_COEFFICIENT: f64 = 1e6;

// Welded-beam physical constants (pound/inch/psi units).
pub const WBD_LOAD: f64 = 6000.0;
pub const WBD_BEAM_LENGTH: f64 = 14.0;
pub const WBD_YOUNG_MODULUS: f64 = 30e6;
pub const WBD_SHEAR_MODULUS: f64 = 12e6;
pub const WBD_MAX_SHEAR_STRESS: f64 = 13_600.0;
pub const WBD_MAX_BENDING_STRESS: f64 = 30_000.0;
pub const WBD_MAX_DEFLECTION: f64 = 0.25;

/// A constrained minimization problem with box bounds.
#[derive(Clone, Debug)]
pub struct ConstrainedProblem {
    pub id: &'static str,
    pub name: &'static str,
    space: SearchSpace,
    objective: fn(&[f64]) -> f64,
    constraints: &'static [fn(&[f64]) -> f64],
    pub penalty_coefficient: f64,
}

/// Value and status of one constraint at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub index: usize,
    pub value: f64,
    pub satisfied: bool,
}

impl ConstrainedProblem {
    /// Pressure vessel design: shell thickness, head thickness, inner
    /// radius and cylinder length; minimizes material, forming and
    /// welding cost. Four constraints: both thicknesses proportional
    /// to the radius, a minimum enclosed volume, and a length cap.
    pub fn pvd() -> Self {
        Self {
            id: "pvd",
            name: "pressure vessel design",
            space: SearchSpace::new(vec![0.0, 0.0, 10.0, 10.0], vec![99.0, 99.0, 200.0, 200.0])
                .expect("static bounds"),
            objective: pvd_cost,
            constraints: &PVD_CONSTRAINTS,
            penalty_coefficient: DEFAULT_PENALTY_COEFFICIENT,
        }
    }

    /// Welded beam design: weld thickness, weld length, bar height and
    /// bar thickness; minimizes fabrication cost subject to shear
    /// stress, bending stress, deflection, buckling and side limits.
    pub fn wbd() -> Self {
        Self {
            id: "wbd",
            name: "welded beam design",
            space: SearchSpace::new(vec![0.1, 0.1, 0.1, 0.1], vec![2.0, 10.0, 10.0, 2.0])
                .expect("static bounds"),
            objective: wbd_cost,
            constraints: &WBD_CONSTRAINTS,
            penalty_coefficient: DEFAULT_PENALTY_COEFFICIENT,
        }
    }

    /// Compression spring design: wire diameter, mean coil diameter
    /// and number of active coils; minimizes spring weight subject to
    /// deflection, shear stress, surge frequency and a geometry limit.
    pub fn sd() -> Self {
        Self {
            id: "sd",
            name: "compression spring design",
            space: SearchSpace::new(vec![0.05, 0.25, 2.0], vec![2.0, 1.3, 15.0])
                .expect("static bounds"),
            objective: sd_weight,
            constraints: &SD_CONSTRAINTS,
            penalty_coefficient: DEFAULT_PENALTY_COEFFICIENT,
        }
    }

    pub fn all() -> Vec<Self> {
        vec![Self::pvd(), Self::wbd(), Self::sd()]
    }

    pub fn by_id(id: &str) -> Option<Self> {
        Self::all().into_iter().find(|p| p.id == id)
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn raw_objective(&self, z: &[f64]) -> f64 {
        (self.objective)(z)
    }

    pub fn constraint_values(&self, z: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|g| g(z)).collect()
    }

    /// Raw objective plus the quadratic exterior penalty.
    pub fn penalized_objective(&self, z: &[f64]) -> f64 {
        let violation: f64 = self.constraints.iter().map(|g| g(z).max(0.0).powi(2)).sum();
        (self.objective)(z) + self.penalty_coefficient * violation
    }

    /// Per-constraint values with their satisfied flags.
    pub fn feasibility_report(&self, z: &[f64]) -> Vec<ConstraintCheck> {
        self.constraint_values(z)
            .into_iter()
            .enumerate()
            .map(|(index, value)| ConstraintCheck {
                index,
                value,
                satisfied: value <= FEASIBILITY_TOLERANCE,
            })
            .collect()
    }

    pub fn is_feasible(&self, z: &[f64]) -> bool {
        self.constraints
            .iter()
            .all(|g| g(z) <= FEASIBILITY_TOLERANCE)
    }

    /// The penalized objective as an [`ObjectiveSpec`].
    pub fn objective_spec(&self) -> ObjectiveSpec {
        let problem = self.clone();
        ObjectiveSpec::deterministic(self.id, self.space.clone(), None, move |z| {
            problem.penalized_objective(z)
        })
    }

    /// The penalized objective plus a tracker that remembers the best
    /// feasible candidate the optimizer ever evaluated.
    pub fn tracked_objective(&self) -> (ObjectiveSpec, FeasibleTracker) {
        let tracker = FeasibleTracker::default();
        let shared = tracker.clone();
        let problem = self.clone();
        let spec = ObjectiveSpec::deterministic(self.id, self.space.clone(), None, move |z| {
            let raw = problem.raw_objective(z);
            let mut violation = 0.0;
            let mut feasible = true;
            for g in problem.constraints {
                let v = g(z);
                feasible &= v <= FEASIBILITY_TOLERANCE;
                violation += v.max(0.0).powi(2);
            }
            if feasible && raw.is_finite() {
                shared.offer(raw, z);
            }
            raw + problem.penalty_coefficient * violation
        });
        (spec, tracker)
    }
}

/// Best feasible candidate observed through a tracked objective.
#[derive(Clone, Debug, Default)]
pub struct FeasibleTracker(Arc<Mutex<Option<Solution>>>);

impl FeasibleTracker {
    fn offer(&self, value: f64, point: &[f64]) {
        let mut slot = self.0.lock().expect("tracker lock");
        if slot.as_ref().is_none_or(|s| value < s.value) {
            *slot = Some(Solution {
                point: point.to_vec(),
                value,
            });
        }
    }

    pub fn best(&self) -> Option<Solution> {
        self.0.lock().expect("tracker lock").clone()
    }
}

fn pvd_cost(z: &[f64]) -> f64 {
    0.6224 * z[0] * z[2] * z[3]
        + 1.7781 * z[1] * z[2] * z[2]
        + 3.1661 * z[0] * z[0] * z[3]
        + 19.84 * z[0] * z[0] * z[2]
}

static PVD_CONSTRAINTS: [fn(&[f64]) -> f64; 4] = [
    |z| -z[0] + 0.0193 * z[2],
    |z| -z[1] + 0.00954 * z[2],
    |z| {
        -std::f64::consts::PI * z[2] * z[2] * z[3] - 4.0 / 3.0 * std::f64::consts::PI * z[2].powi(3)
            + 1_296_000.0
    },
    |z| z[3] - 240.0,
];

fn wbd_cost(z: &[f64]) -> f64 {
    1.10471 * z[0] * z[0] * z[1] + 0.04811 * z[2] * z[3] * (14.0 + z[1])
}

/// Combined shear stress in the weld.
pub fn wbd_shear_stress(z: &[f64]) -> f64 {
    let (h, l, t, _) = (z[0], z[1], z[2], z[3]);
    let tau_primary = WBD_LOAD / (2.0f64.sqrt() * h * l);
    let moment = WBD_LOAD * (WBD_BEAM_LENGTH + l / 2.0);
    let radius = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
    let polar = 2.0 * (2.0f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
    let tau_secondary = moment * radius / polar;
    (tau_primary * tau_primary
        + 2.0 * tau_primary * tau_secondary * l / (2.0 * radius)
        + tau_secondary * tau_secondary)
        .sqrt()
}

/// Bending stress at the beam root.
pub fn wbd_bending_stress(z: &[f64]) -> f64 {
    6.0 * WBD_LOAD * WBD_BEAM_LENGTH / (z[3] * z[2] * z[2])
}

/// End deflection of the beam.
pub fn wbd_deflection(z: &[f64]) -> f64 {
    6.0 * WBD_LOAD * WBD_BEAM_LENGTH.powi(3) / (WBD_YOUNG_MODULUS * z[2].powi(3) * z[3])
}

/// Buckling load of the bar.
pub fn wbd_buckling_load(z: &[f64]) -> f64 {
    let (t, b) = (z[2], z[3]);
    4.013 * WBD_YOUNG_MODULUS * (t * t * b.powi(6) / 36.0).sqrt()
        / (WBD_BEAM_LENGTH * WBD_BEAM_LENGTH)
        * (1.0
            - t / (2.0 * WBD_BEAM_LENGTH) * (WBD_YOUNG_MODULUS / (4.0 * WBD_SHEAR_MODULUS)).sqrt())
}

static WBD_CONSTRAINTS: [fn(&[f64]) -> f64; 7] = [
    |z| wbd_shear_stress(z) - WBD_MAX_SHEAR_STRESS,
    |z| wbd_bending_stress(z) - WBD_MAX_BENDING_STRESS,
    |z| wbd_deflection(z) - WBD_MAX_DEFLECTION,
    |z| z[0] - z[3],
    |z| WBD_LOAD - wbd_buckling_load(z),
    |z| 0.125 - z[0],
    |z| wbd_cost(z) - 5.0,
];

fn sd_weight(z: &[f64]) -> f64 {
    (z[2] + 2.0) * z[1] * z[0] * z[0]
}

static SD_CONSTRAINTS: [fn(&[f64]) -> f64; 4] = [
    |z| 1.0 - z[1].powi(3) * z[2] / (71_785.0 * z[0].powi(4)),
    |z| {
        (4.0 * z[1] * z[1] - z[0] * z[1]) / (12_566.0 * (z[1] * z[0].powi(3) - z[0].powi(4)))
            + 1.0 / (5108.0 * z[0] * z[0])
            - 1.0
    },
    |z| 1.0 - 140.45 * z[0] / (z[1] * z[1] * z[2]),
    |z| (z[0] + z[1]) / 1.5 - 1.0,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::random_search;
    use crate::rng::RandomSource;
    use approx::assert_abs_diff_eq;

    // Literature design points, evaluated independently beforehand;
    // the expected numbers below are frozen from that evaluation.
    const PVD_POINT: [f64; 4] = [0.8125, 0.4375, 42.0984, 176.6366];
    const WBD_POINT: [f64; 4] = [0.205_730, 3.470_489, 9.036_624, 0.205_730];
    const SD_POINT: [f64; 3] = [0.05169, 0.356_737, 11.288_85];

    #[test]
    fn problem_shapes() {
        let pvd = ConstrainedProblem::pvd();
        assert_eq!(pvd.space().dimension(), 4);
        assert_eq!(pvd.constraint_values(&PVD_POINT).len(), 4);

        let wbd = ConstrainedProblem::wbd();
        assert_eq!(wbd.space().dimension(), 4);
        assert_eq!(wbd.constraint_values(&WBD_POINT).len(), 7);

        let sd = ConstrainedProblem::sd();
        assert_eq!(sd.space().dimension(), 3);
        assert_eq!(sd.constraint_values(&SD_POINT).len(), 4);

        assert!(ConstrainedProblem::by_id("pvd").is_some());
        assert!(ConstrainedProblem::by_id("nope").is_none());
    }

    #[test]
    fn pvd_literature_point() {
        let pvd = ConstrainedProblem::pvd();
        assert_abs_diff_eq!(
            pvd.raw_objective(&PVD_POINT),
            6059.706775750789,
            epsilon = 1e-8
        );
        let g = pvd.constraint_values(&PVD_POINT);
        assert_abs_diff_eq!(g[0], -8.8e-7, epsilon = 1e-9);
        assert_abs_diff_eq!(g[1], -0.035881264, epsilon = 1e-9);
        // The four-decimal rounding of the literature point overshoots
        // the active volume constraint by ~3 (on a 1.3e6 scale).
        assert_abs_diff_eq!(g[2], 3.1226749981287867, epsilon = 1e-6);
        assert_abs_diff_eq!(g[3], -63.3634, epsilon = 1e-9);
    }

    #[test]
    fn pvd_feasible_point_has_no_penalty() {
        // Slightly longer cylinder than the literature point, which
        // clears the volume constraint; all constraints hold and the
        // penalized objective equals the raw one exactly.
        let z = [0.8125, 0.4375, 42.0984, 176.65];
        let pvd = ConstrainedProblem::pvd();
        let report = pvd.feasibility_report(&z);
        assert!(report.iter().all(|c| c.satisfied), "{report:?}");
        assert!(pvd.is_feasible(&z));
        assert_eq!(pvd.penalized_objective(&z), pvd.raw_objective(&z));
    }

    #[test]
    fn pvd_length_cap_violation() {
        let pvd = ConstrainedProblem::pvd();
        let z = [1.0, 1.0, 50.0, 250.0];
        let report = pvd.feasibility_report(&z);
        assert_abs_diff_eq!(report[3].value, 10.0, epsilon = 1e-12);
        assert!(!report[3].satisfied);
    }

    #[test]
    fn wbd_auxiliaries_at_the_literature_optimum() {
        // Hand-computed beforehand at the classic optimum; stresses sit
        // right on their limits and the buckling load on the applied load.
        assert_abs_diff_eq!(wbd_shear_stress(&WBD_POINT), 13599.9746, epsilon = 1e-3);
        assert_abs_diff_eq!(wbd_bending_stress(&WBD_POINT), 29999.946878, epsilon = 1e-4);
        assert_abs_diff_eq!(wbd_deflection(&WBD_POINT), 0.021689, epsilon = 1e-6);
        assert_abs_diff_eq!(wbd_buckling_load(&WBD_POINT), 6000.031556, epsilon = 1e-4);

        let wbd = ConstrainedProblem::wbd();
        assert_abs_diff_eq!(
            wbd.raw_objective(&WBD_POINT),
            1.7248556738155942,
            epsilon = 1e-12
        );
        assert!(wbd.is_feasible(&WBD_POINT));
    }

    #[test]
    fn wbd_thin_weld_violates_the_minimum_thickness() {
        let wbd = ConstrainedProblem::wbd();
        let z = [0.1, 3.0, 8.0, 0.3];
        let report = wbd.feasibility_report(&z);
        assert_abs_diff_eq!(report[5].value, 0.025, epsilon = 1e-12);
        assert!(!report[5].satisfied);
    }

    #[test]
    fn sd_literature_point_is_feasible() {
        let sd = ConstrainedProblem::sd();
        let f = sd.raw_objective(&SD_POINT);
        assert_abs_diff_eq!(f, 0.012666266441243376, epsilon = 1e-12);
        assert_abs_diff_eq!(f, 0.0127, epsilon = 5e-3);
        assert!(sd.is_feasible(&SD_POINT));
        assert_eq!(sd.penalized_objective(&SD_POINT), f);
    }

    #[test]
    fn penalty_grows_with_violation() {
        let pvd = ConstrainedProblem::pvd();
        // Push the length cap further and further past its limit.
        let mut prev = pvd.penalized_objective(&[1.0, 1.0, 60.0, 241.0]);
        for z4 in [242.0, 245.0, 260.0] {
            let cur = pvd.penalized_objective(&[1.0, 1.0, 60.0, z4]);
            assert!(cur > prev, "penalty must grow with the violation");
            prev = cur;
        }
    }

    #[test]
    fn penalty_is_continuous_across_the_boundary() {
        let pvd = ConstrainedProblem::pvd();
        let at = |z4: f64| pvd.penalized_objective(&[1.0, 1.0, 60.0, z4]);
        let eps = 1e-7;
        let jump = (at(240.0 + eps) - at(240.0 - eps)).abs();
        // Quadratic penalty: the jump vanishes with eps, leaving only
        // the smooth cost slope (~1e2 per unit length here).
        assert!(jump < 1e-3, "jump {jump}");
    }

    #[test]
    fn tracker_records_the_best_feasible_candidate() {
        let sd = ConstrainedProblem::sd();
        let (obj, tracker) = sd.tracked_objective();
        let mut rng = RandomSource::new(5);
        assert!(tracker.best().is_none());
        let (_, _) = random_search(&obj, 20, 50, &mut rng).unwrap();
        let best = tracker
            .best()
            .expect("random search visits feasible points");
        assert!(sd.is_feasible(&best.point));
        assert_abs_diff_eq!(best.value, sd.raw_objective(&best.point), epsilon = 0.0);
    }
}
