//! Load programs, incremental runs, error metric and convergence studies.

mod convergence;
mod metric;
mod program;
mod run;

pub use convergence::{
    compensated_sum, envelope, replication_seeds, ConfigurationResult, ConvergenceReport, EnvelopePoint, Histogram,
    Study, HISTOGRAM_BINS,
};
pub use metric::{error_metric, residuals, Residual};
pub use program::{LoadProgram, Leg, DEFAULT_INCREMENT, DEFAULT_STEPS};
pub use run::{make_solver, run_trace, Material, SolverSpec};
