//! Model-based reference solutions.
//!
//! The global reference minimizes `Phi(a) = E(DeltaT, a) + F_R(a)` over an
//! equispaced grid on `[0, 1]`. The local reference enforces the Kuhn-Tucker
//! conditions `a_dot >= 0`, `G - G_R <= 0`, `(G - G_R) a_dot = 0`; when the
//! current state is overloaded it moves to the first crack length beyond `a_k`
//! where `G - G_R` drops to zero or below, which is the nearest accessible
//! local minimizer of `Phi` (continuous growth and unstable jumps alike).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SPECIMEN_LENGTH;
use crate::resistance::ResistanceModel;
use crate::solvers::{Best, SolverState, StepResult, StepSolver};
use crate::specimen::{MachineCoupling, SpecimenModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReferenceConfig {
    /// Number of equispaced nodes on `[0, 1]` for the global search.
    pub grid: usize,
    /// Bisection tolerance on the crack length.
    pub root_tol: f64,
    /// Resolution of the scan bracketing `G = G_R`.
    pub scan_step: f64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            grid: 1000,
            root_tol: 1e-10,
            scan_step: 1e-3,
        }
    }
}

impl ReferenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::invalid("grid", "at least two nodes required"));
        }
        if !(self.root_tol > 0.0 && self.scan_step > 0.0) {
            return Err(Error::invalid("root_tol", "tolerances must be positive"));
        }
        Ok(())
    }

    pub fn node(&self, i: usize) -> f64 {
        SPECIMEN_LENGTH * i as f64 / (self.grid - 1) as f64
    }
}

/// Outcome of one reference step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefStep {
    pub a: f64,
    /// No admissible state short of the specimen length.
    pub failed: bool,
}

/// Grid argmin of `Phi` over `{a_k} U {grid nodes >= a_k}`.
pub fn reference_global_step(
    a_k: f64,
    delta_t: f64,
    model: &ResistanceModel,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
    cfg: &ReferenceConfig,
) -> RefStep {
    let b = specimen.params.b;
    let phi = |a: f64| specimen.reduced_energy_raw(coupling, delta_t, a) + model.f_r_raw(a, b);
    let mut best = None;
    Best::offer(&mut best, phi(a_k), a_k, 0);
    for i in 0..cfg.grid {
        let a = cfg.node(i);
        if a >= a_k {
            Best::offer(&mut best, phi(a), a, i + 1);
        }
    }
    let a = best.map_or(a_k, |b| b.a);
    RefStep {
        a,
        failed: a >= SPECIMEN_LENGTH,
    }
}

pub fn reference_local_step(
    a_k: f64,
    delta_t: f64,
    model: &ResistanceModel,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
    cfg: &ReferenceConfig,
) -> RefStep {
    let f = |a: f64| specimen.energy_release_rate_raw(coupling, delta_t, a) - model.g_r_raw(a);
    if f(a_k) <= 0.0 {
        return RefStep { a: a_k, failed: false };
    }
    let mut lo = a_k;
    loop {
        let hi = (lo + cfg.scan_step).min(SPECIMEN_LENGTH);
        if f(hi) <= 0.0 {
            return RefStep {
                a: bisect(f, lo, hi, cfg.root_tol),
                failed: false,
            };
        }
        if hi >= SPECIMEN_LENGTH {
            return RefStep {
                a: SPECIMEN_LENGTH,
                failed: true,
            };
        }
        lo = hi;
    }
}

/// Shrinks `[lo, hi]` with `f(lo) > 0 >= f(hi)` and returns the admissible end.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn to_result(
    step: RefStep,
    a_k: f64,
    delta_t: f64,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
) -> StepResult {
    let mut r = StepResult::at(specimen, coupling, delta_t, step.a);
    r.dissipative = step.a > a_k;
    r.failed = step.failed;
    r
}

#[derive(Debug, Clone)]
pub struct RefGlobalSolver<'a> {
    pub model: &'a ResistanceModel,
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
    pub cfg: ReferenceConfig,
}

impl StepSolver for RefGlobalSolver<'_> {
    fn name(&self) -> &'static str {
        "ref-global"
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult> {
        let s = reference_global_step(state.a, delta_t, self.model, self.specimen, self.coupling, &self.cfg);
        Ok(to_result(s, state.a, delta_t, self.specimen, self.coupling))
    }
}

#[derive(Debug, Clone)]
pub struct RefLocalSolver<'a> {
    pub model: &'a ResistanceModel,
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
    pub cfg: ReferenceConfig,
}

impl StepSolver for RefLocalSolver<'_> {
    fn name(&self) -> &'static str {
        "ref-local"
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult> {
        let s = reference_local_step(state.a, delta_t, self.model, self.specimen, self.coupling, &self.cfg);
        Ok(to_result(s, state.a, delta_t, self.specimen, self.coupling))
    }
}
