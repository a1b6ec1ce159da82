use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resistance::ResistanceDataSet;
use crate::specimen::{MachineCoupling, SpecimenModel};

use super::projection::ProjectionCurve;
use super::{admissible, Best, SolverState, StepResult, StepSolver};

/// Multiple of the mean abscissa spacing used as the default failure tolerance.
pub const DEFAULT_TOL_FACTOR: f64 = 7.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CppConfig {
    /// Projection distance above which propagation is declared unstable.
    pub tol: f64,
    /// Relative accuracy of the projection minimizer.
    pub accuracy: f64,
}

impl CppConfig {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        Ok(Self { tol, accuracy: 1e-8 })
    }

    pub fn for_dataset(dataset: &ResistanceDataSet) -> Result<Self> {
        Self::new(DEFAULT_TOL_FACTOR * dataset.mean_spacing())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GR0Rule {
    /// Value at `a0` if sampled, otherwise the mean of the two bracketing points.
    #[default]
    BracketAverage,
    Zero,
}

pub fn init_g_r0(dataset: &ResistanceDataSet, a0: f64, rule: GR0Rule) -> Result<f64> {
    if rule == GR0Rule::Zero {
        return Ok(0.0);
    }
    if let Some(p) = dataset.points.iter().find(|p| (p.a - a0).abs() <= 1e-12) {
        return Ok(p.g_r);
    }
    let below = dataset
        .points
        .iter()
        .filter(|p| p.a < a0)
        .max_by(|x, y| x.a.total_cmp(&y.a));
    let above = dataset
        .points
        .iter()
        .filter(|p| p.a > a0)
        .min_by(|x, y| x.a.total_cmp(&y.a));
    match (below, above) {
        (Some(l), Some(r)) => Ok(0.5 * (l.g_r + r.g_r)),
        _ => Err(Error::Bracketing { a0 }),
    }
}

/// Closest-point projection step.
///
/// Elastic when the stored threshold exceeds `G(DeltaT, a_k)`; otherwise the
/// admissible point nearest to the energy-release-rate curve becomes the new
/// state, and a distance above `cfg.tol` flags unstable propagation.
pub fn cpp_step(
    state: &SolverState,
    delta_t: f64,
    dataset: &ResistanceDataSet,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
    cfg: &CppConfig,
) -> Result<StepResult> {
    let g_r_k = state
        .g_r
        .ok_or_else(|| Error::invalid("g_r", "closest-point state needs an initial resistance"))?;
    let g_k = specimen.energy_release_rate_raw(coupling, delta_t, state.a);
    if g_r_k > g_k {
        let mut r = StepResult::at(specimen, coupling, delta_t, state.a);
        r.g_r_next = Some(g_r_k);
        r.g_dd = Some(g_k);
        return Ok(r);
    }

    let curve = ProjectionCurve::new(specimen, coupling, delta_t, state.a);
    // Vertical offsets are attainable distances (a = a_hat is feasible), so the
    // smallest one bounds the optimum; only points whose lower bound beats it
    // need an exact projection.
    let vertical: Vec<(usize, f64)> = admissible(dataset, state.a)
        .map(|i| {
            let p = &dataset.points[i];
            (i, (p.g_r - curve.g(p.a)).abs())
        })
        .collect();
    let Some(bound) = vertical.iter().map(|v| v.1).min_by(f64::total_cmp) else {
        // Nothing left to propagate into.
        let mut r = StepResult::at(specimen, coupling, delta_t, state.a);
        r.g_r_next = Some(g_r_k);
        r.g_dd = Some(g_k);
        r.failed = true;
        return Ok(r);
    };

    let mut best = None;
    for &(i, v) in &vertical {
        if curve.lower_bound(v) > bound {
            continue;
        }
        let p = &dataset.points[i];
        let (d, _) = curve.project(p.a, p.g_r, cfg.accuracy);
        Best::offer(&mut best, d.min(v), p.a, i);
    }
    let best = best.expect("candidate set contains the bounding point");
    let g_hat = dataset.points[best.index].g_r;
    let mut r = StepResult::at(specimen, coupling, delta_t, best.a);
    r.g_r_next = Some(g_hat);
    r.g_dd = Some(g_hat);
    r.dissipative = true;
    r.failed = best.value > cfg.tol;
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct CppSolver<'a> {
    pub dataset: &'a ResistanceDataSet,
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
    pub cfg: CppConfig,
    pub g_r0: GR0Rule,
}

impl<'a> CppSolver<'a> {
    /// Solver with the default tolerance derived from the data set spacing.
    pub fn new(dataset: &'a ResistanceDataSet, specimen: &'a SpecimenModel, coupling: &'a MachineCoupling) -> Result<Self> {
        Ok(Self {
            dataset,
            specimen,
            coupling,
            cfg: CppConfig::for_dataset(dataset)?,
            g_r0: GR0Rule::default(),
        })
    }
}

impl StepSolver for CppSolver<'_> {
    fn name(&self) -> &'static str {
        "cpp"
    }

    fn initial_state(&self, a0: f64) -> Result<SolverState> {
        Ok(SolverState {
            a: a0,
            g_r: Some(init_g_r0(self.dataset, a0, self.g_r0)?),
        })
    }

    fn step(&self, state: &SolverState, delta_t: f64) -> Result<StepResult> {
        cpp_step(state, delta_t, self.dataset, self.specimen, self.coupling, &self.cfg)
    }
}
