//! Data-driven fracture mechanics for double cantilever beam specimens.
//!
//! Quantities are dimensionless throughout: lengths are scaled by the specimen
//! length, energies per unit area by the toughness.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod params;
pub mod reference;
pub mod resistance;
pub mod solvers;
pub mod specimen;
pub mod trace;

pub use error::{Error, Result};
pub use harness::{error_metric, run_trace, ConvergenceReport, LoadProgram, Material, SolverSpec, Study};
pub use params::{nondimensionalize, DimensionlessParams, PhysicalParams, Scaled};
pub use reference::ReferenceConfig;
pub use resistance::{
    apply_noise, sample_dataset, DataPoint, NoiseDistribution, ResistanceDataSet, ResistanceModel, Sampling,
};
pub use solvers::{SolverKind, SolverState, StepResult, StepSolver};
pub use specimen::{Geometry, MachineCoupling, SpecimenModel, Taper};
pub use trace::{SolutionTrace, TraceMeta, TraceStep};
