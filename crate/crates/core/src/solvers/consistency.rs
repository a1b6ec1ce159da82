use crate::error::Result;
use crate::resistance::ResistanceDataSet;
use crate::specimen::{MachineCoupling, SpecimenModel};

use super::{admissible, Best, SolverState, StepResult, StepSolver};

/// Consistency-condition step: among admissible points that also satisfy
/// `G_R_hat >= G(DeltaT, a_hat)`, minimize `|(G - G_R_hat)(a_k - a_hat)|`.
/// An empty candidate set means unstable propagation.
pub fn consistency_step(
    state: &SolverState,
    delta_t: f64,
    dataset: &ResistanceDataSet,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
) -> Result<StepResult> {
    let mut best = None;
    for i in admissible(dataset, state.a) {
        let p = &dataset.points[i];
        let g = specimen.energy_release_rate_raw(coupling, delta_t, p.a);
        if p.g_r < g {
            continue;
        }
        Best::offer(&mut best, ((g - p.g_r) * (state.a - p.a)).abs(), p.a, i);
    }
    Ok(match best {
        Some(b) => {
            let mut r = StepResult::at(specimen, coupling, delta_t, b.a);
            r.dissipative = b.a > state.a;
            r
        }
        None => {
            let mut r = StepResult::at(specimen, coupling, delta_t, state.a);
            r.failed = true;
            r
        }
    })
}

#[derive(Debug, Clone)]
pub struct ConsistencySolver<'a> {
    pub dataset: &'a ResistanceDataSet,
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
}

impl StepSolver for ConsistencySolver<'_> {
    fn name(&self) -> &'static str {
        "consistency"
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult> {
        consistency_step(state, delta_t, self.dataset, self.specimen, self.coupling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{nondimensionalize, PhysicalParams};
    use crate::resistance::DataPoint;

    fn setup() -> (SpecimenModel, MachineCoupling) {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        (s, c)
    }

    fn data(points: &[(f64, f64)]) -> ResistanceDataSet {
        ResistanceDataSet::from_points(points.iter().map(|&(a, g_r)| DataPoint { a, f_r: a, g_r }).collect()).unwrap()
    }

    #[test]
    fn overloaded_everywhere_fails() {
        let (s, c) = setup();
        let d = data(&[(0.2, 0.01), (0.6, 0.01)]);
        let r = consistency_step(&SolverState::new(0.1), 3e-3, &d, &s, &c).unwrap();
        assert!(r.failed);
        assert_eq!(r.a_next, 0.1);
    }

    #[test]
    fn arrest_at_current_point() {
        let (s, c) = setup();
        let d = data(&[(0.4, 1.0), (0.3, 1.0), (0.5, 1.0)]);
        let r = consistency_step(&SolverState::new(0.3), 1e-3, &d, &s, &c).unwrap();
        assert_eq!(r.a_next, 0.3);
        assert!(!r.dissipative && !r.failed);
    }

    #[test]
    fn zero_load_objective() {
        let (s, c) = setup();
        // Objective reduces to G_R_hat * (a_hat - a_k); brute force below.
        let pts = [(0.5, 0.2), (0.15, 2.0), (0.3, 0.5), (0.12, 4.0)];
        let d = data(&pts);
        let a_k = 0.1;
        let expected = pts
            .iter()
            .map(|&(a, g)| (g * (a - a_k), a))
            .min_by(|x, y| x.0.total_cmp(&y.0))
            .unwrap()
            .1;
        let r = consistency_step(&SolverState::new(a_k), 0.0, &d, &s, &c).unwrap();
        assert_eq!(r.a_next, expected);
    }
}
