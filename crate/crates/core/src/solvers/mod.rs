//! Single-step data-driven solvers.
//!
//! Each solver advances the history variables by one load step given the new
//! machine displacement. Candidate states are always restricted to data points
//! with `a_hat >= a_k` (irreversibility). Exact ties in any argmin are broken by
//! the smaller crack length, then by the position in the data set.

mod consistency;
mod cpp;
mod global;
mod projection;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resistance::ResistanceDataSet;
use crate::specimen::{MachineCoupling, SpecimenModel};

pub use consistency::{consistency_step, ConsistencySolver};
pub use cpp::{cpp_step, init_g_r0, CppConfig, CppSolver, GR0Rule};
pub use global::{global_step, GlobalSolver};
pub use projection::{project_distance, ProjectionCurve, COARSE_NODES};

/// History variables carried between load steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverState {
    pub a: f64,
    /// Current resistance threshold; only the closest-point solver uses it.
    pub g_r: Option<f64>,
}

impl SolverState {
    pub fn new(a: f64) -> Self {
        Self { a, g_r: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub a_next: f64,
    pub g_r_next: Option<f64>,
    pub delta: f64,
    pub p: f64,
    pub g_dd: Option<f64>,
    pub dissipative: bool,
    pub failed: bool,
}

impl StepResult {
    pub fn next_state(&self) -> SolverState {
        SolverState {
            a: self.a_next,
            g_r: self.g_r_next,
        }
    }

    pub(crate) fn at(
        specimen: &SpecimenModel,
        coupling: &MachineCoupling,
        delta_t: f64,
        a_next: f64,
    ) -> Self {
        let (delta, p) = specimen.equilibrium_split_raw(coupling, delta_t, a_next);
        Self {
            a_next,
            g_r_next: None,
            delta,
            p,
            g_dd: None,
            dissipative: false,
            failed: false,
        }
    }
}

/// Anything that can advance a trace by one load step.
pub trait StepSolver: Sync {
    fn name(&self) -> &'static str;

    fn initial_state(&self, a0: f64) -> Result<SolverState> {
        Ok(SolverState::new(a0))
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Global,
    Cpp,
    Consistency,
    RefGlobal,
    RefLocal,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Global,
        SolverKind::Cpp,
        SolverKind::Consistency,
        SolverKind::RefGlobal,
        SolverKind::RefLocal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Global => "global",
            SolverKind::Cpp => "cpp",
            SolverKind::Consistency => "consistency",
            SolverKind::RefGlobal => "ref-global",
            SolverKind::RefLocal => "ref-local",
        }
    }

    pub fn is_reference(&self) -> bool {
        matches!(self, SolverKind::RefGlobal | SolverKind::RefLocal)
    }

    /// Reference solver a data-driven solver is compared against.
    pub fn matching_reference(&self) -> SolverKind {
        match self {
            SolverKind::Global | SolverKind::RefGlobal => SolverKind::RefGlobal,
            _ => SolverKind::RefLocal,
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid("solver", format!("unknown solver `{s}`")))
    }
}

/// Running argmin with the crate-wide tie rule.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Best {
    pub value: f64,
    pub a: f64,
    pub index: usize,
}

impl Best {
    pub fn offer(best: &mut Option<Best>, value: f64, a: f64, index: usize) {
        let better = match best {
            None => true,
            Some(b) => match value.total_cmp(&b.value) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (a, index) < (b.a, b.index),
            },
        };
        if better {
            *best = Some(Best { value, a, index });
        }
    }
}

/// Indices of points with `a_hat >= a_k`.
pub(crate) fn admissible(dataset: &ResistanceDataSet, a_k: f64) -> impl Iterator<Item = usize> + '_ {
    dataset
        .points
        .iter()
        .enumerate()
        .filter(move |(_, p)| p.a >= a_k)
        .map(|(i, _)| i)
}
