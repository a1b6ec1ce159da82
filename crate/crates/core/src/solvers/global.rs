use crate::error::{Error, Result};
use crate::resistance::ResistanceDataSet;
use crate::specimen::{MachineCoupling, SpecimenModel};

use super::{admissible, Best, SolverState, StepResult, StepSolver};

/// Picks the admissible point minimizing `E(DeltaT, a_hat) + F_R_hat`.
///
/// Never signals unstable propagation; an empty admissible set is an error.
pub fn global_step(
    state: &SolverState,
    delta_t: f64,
    dataset: &ResistanceDataSet,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
) -> Result<StepResult> {
    let mut best = None;
    for i in admissible(dataset, state.a) {
        let p = &dataset.points[i];
        let phi = specimen.reduced_energy_raw(coupling, delta_t, p.a) + p.f_r;
        Best::offer(&mut best, phi, p.a, i);
    }
    let best = best.ok_or(Error::DatasetExhausted { a_k: state.a })?;
    let mut r = StepResult::at(specimen, coupling, delta_t, best.a);
    r.dissipative = best.a > state.a;
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct GlobalSolver<'a> {
    pub dataset: &'a ResistanceDataSet,
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
}

impl StepSolver for GlobalSolver<'_> {
    fn name(&self) -> &'static str {
        "global"
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult> {
        global_step(state, delta_t, self.dataset, self.specimen, self.coupling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{nondimensionalize, PhysicalParams};
    use crate::resistance::{DataPoint, ResistanceModel};

    fn setup() -> (SpecimenModel, MachineCoupling) {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        (s, c)
    }

    fn griffith(abscissae: &[f64], b: f64) -> ResistanceDataSet {
        ResistanceDataSet::from_points(
            abscissae
                .iter()
                .map(|&a| DataPoint {
                    a,
                    f_r: ResistanceModel::Griffith.f_r(a, b).unwrap(),
                    g_r: 1.0,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_load_takes_nearest_admissible_point() {
        let (s, c) = setup();
        let d = griffith(&[0.5, 0.05, 0.13, 0.11, 0.9], s.params.b);
        let r = global_step(&SolverState::new(0.1), 0.0, &d, &s, &c).unwrap();
        assert_eq!(r.a_next, 0.11);
        assert!(r.dissipative);
        assert_eq!(r.p, 0.0);
    }

    #[test]
    fn singleton_at_current_length() {
        let (s, c) = setup();
        let d = griffith(&[0.3], s.params.b);
        let r = global_step(&SolverState::new(0.3), 1e-3, &d, &s, &c).unwrap();
        assert_eq!(r.a_next, 0.3);
        assert!(!r.dissipative);
    }

    #[test]
    fn exhausted() {
        let (s, c) = setup();
        let d = griffith(&[0.2, 0.3], s.params.b);
        let e = global_step(&SolverState::new(0.35), 1e-3, &d, &s, &c).unwrap_err();
        assert!(matches!(e, Error::DatasetExhausted { .. }));
    }
}
