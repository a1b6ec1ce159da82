use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SPECIMEN_LENGTH;
use crate::reference::{RefGlobalSolver, RefLocalSolver, ReferenceConfig};
use crate::resistance::{ResistanceDataSet, ResistanceModel};
use crate::solvers::{
    ConsistencySolver, CppConfig, CppSolver, GR0Rule, GlobalSolver, SolverKind, StepSolver,
};
use crate::specimen::{MachineCoupling, SpecimenModel};
use crate::trace::{SolutionTrace, TraceMeta, TraceStep};

/// Solver choice plus its tuning knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub kind: SolverKind,
    /// Closest-point failure tolerance; derived from the data set when absent.
    pub tol: Option<f64>,
    pub accuracy: f64,
    pub g_r0: GR0Rule,
    pub reference: ReferenceConfig,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            kind: SolverKind::Cpp,
            tol: None,
            accuracy: 1e-8,
            g_r0: GR0Rule::default(),
            reference: ReferenceConfig::default(),
        }
    }
}

impl SolverSpec {
    pub fn of(kind: SolverKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }
}

/// Where the fracture resistance comes from.
#[derive(Debug, Clone, Copy)]
pub enum Material<'a> {
    Data(&'a ResistanceDataSet),
    Model(&'a ResistanceModel),
}

pub fn make_solver<'a>(
    spec: &SolverSpec,
    material: Material<'a>,
    specimen: &'a SpecimenModel,
    coupling: &'a MachineCoupling,
) -> Result<Box<dyn StepSolver + 'a>> {
    Ok(match (spec.kind, material) {
        (SolverKind::Global, Material::Data(dataset)) => Box::new(GlobalSolver {
            dataset,
            specimen,
            coupling,
        }),
        (SolverKind::Consistency, Material::Data(dataset)) => Box::new(ConsistencySolver {
            dataset,
            specimen,
            coupling,
        }),
        (SolverKind::Cpp, Material::Data(dataset)) => {
            let mut cfg = match spec.tol {
                Some(tol) => CppConfig::new(tol)?,
                None => CppConfig::for_dataset(dataset)?,
            };
            cfg.accuracy = spec.accuracy;
            Box::new(CppSolver {
                dataset,
                specimen,
                coupling,
                cfg,
                g_r0: spec.g_r0,
            })
        }
        (SolverKind::RefGlobal, Material::Model(model)) => {
            spec.reference.validate()?;
            Box::new(RefGlobalSolver {
                model,
                specimen,
                coupling,
                cfg: spec.reference,
            })
        }
        (SolverKind::RefLocal, Material::Model(model)) => {
            spec.reference.validate()?;
            Box::new(RefLocalSolver {
                model,
                specimen,
                coupling,
                cfg: spec.reference,
            })
        }
        (kind, Material::Data(_)) => {
            return Err(Error::invalid("solver", format!("{kind} needs an analytic resistance model")))
        }
        (kind, Material::Model(_)) => {
            return Err(Error::invalid("solver", format!("{kind} needs a material data set")))
        }
    })
}

/// Runs `solver` over the load schedule starting from crack length `a0`.
///
/// The trace ends early, with `failed` set on its last step, when the solver
/// reports unstable propagation or the crack reaches the specimen length.
pub fn run_trace(solver: &dyn StepSolver, schedule: &[f64], a0: f64, meta: TraceMeta) -> Result<SolutionTrace> {
    let mut trace = SolutionTrace::new(meta);
    let mut state = solver.initial_state(a0)?;
    for (i, &delta_t) in schedule.iter().enumerate() {
        let k = i + 1;
        let r = solver.step(&state, delta_t).map_err(|e| Error::AtStep {
            step: k,
            source: Box::new(e),
        })?;
        let failed = r.failed || r.a_next >= SPECIMEN_LENGTH;
        trace.steps.push(TraceStep {
            k,
            delta_t,
            a: r.a_next,
            delta: r.delta,
            p: r.p,
            g_dd: r.g_dd,
            dissipative: r.dissipative,
            failed,
        });
        if failed {
            break;
        }
        state = r.next_state();
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::LoadProgram;
    use crate::params::{nondimensionalize, PhysicalParams};
    use crate::resistance::{sample_dataset, Sampling};

    fn setup() -> (SpecimenModel, MachineCoupling) {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        (s, c)
    }

    #[test]
    fn zero_program_keeps_initial_crack() {
        let (s, c) = setup();
        let d = sample_dataset(&ResistanceModel::Griffith, 200, (0.0, 1.1), 4, s.params.b, Sampling::Uniform).unwrap();
        let schedule = vec![0.0; 20];
        let solver = make_solver(&SolverSpec::of(SolverKind::Cpp), Material::Data(&d), &s, &c).unwrap();
        let t = run_trace(solver.as_ref(), &schedule, 0.1, TraceMeta::default()).unwrap();
        assert_eq!(t.steps.len(), 20);
        assert!(t.steps.iter().all(|st| st.a == 0.1 && st.p == 0.0 && !st.dissipative));
    }

    #[test]
    fn monotone_ramp_never_shrinks_crack() {
        let (s, c) = setup();
        let d = sample_dataset(&ResistanceModel::Griffith, 300, (0.0, 1.1), 5, s.params.b, Sampling::Uniform).unwrap();
        let schedule = LoadProgram::default().schedule().unwrap();
        for kind in [SolverKind::Global, SolverKind::Cpp, SolverKind::Consistency] {
            let solver = make_solver(&SolverSpec::of(kind), Material::Data(&d), &s, &c).unwrap();
            let t = run_trace(solver.as_ref(), &schedule, 0.1, TraceMeta::default()).unwrap();
            assert!(t.final_crack_length().unwrap() >= 0.1);
            assert!(t.steps.windows(2).all(|w| w[1].a >= w[0].a));
            assert!(t.steps.iter().filter(|st| st.failed).count() <= 1);
        }
    }

    #[test]
    fn material_kind_mismatch() {
        let (s, c) = setup();
        let m = ResistanceModel::Griffith;
        assert!(make_solver(&SolverSpec::of(SolverKind::Cpp), Material::Model(&m), &s, &c).is_err());
        let d = sample_dataset(&m, 10, (0.0, 1.1), 5, s.params.b, Sampling::Uniform).unwrap();
        assert!(make_solver(&SolverSpec::of(SolverKind::RefLocal), Material::Data(&d), &s, &c).is_err());
    }

    #[test]
    fn exhausted_data_reports_step() {
        let (s, c) = setup();
        let d = sample_dataset(&ResistanceModel::Griffith, 10, (0.0, 0.05), 5, s.params.b, Sampling::Uniform).unwrap();
        let solver = make_solver(&SolverSpec::of(SolverKind::Global), Material::Data(&d), &s, &c).unwrap();
        let err = run_trace(solver.as_ref(), &[1e-4, 2e-4], 0.1, TraceMeta::default()).unwrap_err();
        assert!(matches!(err, Error::AtStep { step: 1, .. }));
        assert!(matches!(err.root(), Error::DatasetExhausted { .. }));
    }
}
