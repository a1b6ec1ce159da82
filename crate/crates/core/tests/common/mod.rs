#![allow(dead_code)]

use ddfrac::harness::{make_solver, run_trace, Material, SolverSpec};
use ddfrac::solvers::GR0Rule;
use ddfrac::{
    nondimensionalize, apply_noise, sample_dataset, NoiseDistribution, PhysicalParams, ResistanceDataSet,
    ResistanceModel, Sampling, SolutionTrace, SolverKind, SpecimenModel, TraceMeta,
};

pub fn dcb() -> SpecimenModel {
    let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
    SpecimenModel::standard(p).unwrap()
}

pub fn noisy(model: &ResistanceModel, n: usize, amplitude: f64, seed: u64, b: f64) -> ResistanceDataSet {
    let d = sample_dataset(model, n, (0.0, 1.1), seed, b, Sampling::Uniform).unwrap();
    apply_noise(&d, amplitude, seed.wrapping_add(1_000_003), NoiseDistribution::Uniform).unwrap()
}

pub fn reference(kind: SolverKind, model: &ResistanceModel, s: &SpecimenModel, schedule: &[f64]) -> SolutionTrace {
    let c = s.coupling();
    let solver = make_solver(&SolverSpec::of(kind), Material::Model(model), s, &c).unwrap();
    run_trace(solver.as_ref(), schedule, 0.1, TraceMeta::default()).unwrap()
}

/// Data-driven trace; a closest-point run whose initial crack is not
/// bracketed by the data starts from a zero resistance instead.
pub fn data_driven(kind: SolverKind, d: &ResistanceDataSet, s: &SpecimenModel, schedule: &[f64]) -> SolutionTrace {
    let c = s.coupling();
    let run = |spec: SolverSpec| {
        let solver = make_solver(&spec, Material::Data(d), s, &c).unwrap();
        run_trace(solver.as_ref(), schedule, 0.1, TraceMeta::default())
    };
    match run(SolverSpec::of(kind)) {
        Ok(t) => t,
        Err(ddfrac::Error::Bracketing { .. }) => run(SolverSpec {
            g_r0: GR0Rule::Zero,
            ..SolverSpec::of(kind)
        })
        .unwrap(),
        Err(e) => panic!("{e}"),
    }
}

/// Longest run of consecutive steps sharing one crack length that satisfies `at`.
pub fn longest_plateau(t: &SolutionTrace, at: impl Fn(f64) -> bool) -> usize {
    let (mut best, mut run, mut prev) = (0, 0, f64::NAN);
    for s in &t.steps {
        run = if !at(s.a) {
            0
        } else if s.a == prev {
            run + 1
        } else {
            1
        };
        prev = s.a;
        best = best.max(run);
    }
    best
}

pub fn first_growth(t: &SolutionTrace, a0: f64) -> Option<(usize, f64, f64)> {
    t.steps.iter().find(|s| s.a > a0).map(|s| (s.k, s.delta_t, s.a))
}
