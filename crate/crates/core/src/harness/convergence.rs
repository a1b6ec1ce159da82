//! Monte Carlo convergence studies against a model-based reference.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resistance::{apply_noise, sample_dataset, NoiseDistribution, ResistanceModel, Sampling};
use crate::solvers::{GR0Rule, SolverKind};
use crate::specimen::{MachineCoupling, SpecimenModel};
use crate::trace::{SolutionTrace, TraceMeta};

use super::metric::error_metric;
use super::run::{make_solver, run_trace, Material, SolverSpec};

/// Number of regular histogram bins; each is a tenth of the mean wide.
pub const HISTOGRAM_BINS: usize = 20;

/// Sample and noise seeds of replication `r`.
///
/// They depend only on the base seed and the replication index so that every
/// configuration of a study sees the same abscissae for a given `r`.
pub fn replication_seeds(seed: u64, r: usize) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    (rng.next_u64(), rng.next_u64())
}

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<usize>,
    /// Values at or above `HISTOGRAM_BINS * bin_width`.
    pub overflow: usize,
}

impl Histogram {
    pub fn new(values: &[f64], mean: f64) -> Self {
        let bin_width = 0.1 * mean;
        let mut counts = vec![0; HISTOGRAM_BINS];
        let mut overflow = 0;
        for &v in values {
            if bin_width <= 0.0 {
                counts[0] += 1;
                continue;
            }
            let i = (v / bin_width).floor();
            if i >= HISTOGRAM_BINS as f64 {
                overflow += 1;
            } else {
                counts[i.max(0.0) as usize] += 1;
            }
        }
        Self {
            bin_width,
            counts,
            overflow,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.overflow
    }
}

/// Spread of crack lengths over the replications still running at step `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub k: usize,
    #[serde(rename = "DeltaT")]
    pub delta_t: f64,
    pub min: f64,
    pub max: f64,
}

pub fn envelope(traces: &[SolutionTrace]) -> Vec<EnvelopePoint> {
    let len = traces.iter().map(|t| t.steps.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let mut pt = EnvelopePoint {
                k: i + 1,
                delta_t: f64::NAN,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            };
            for s in traces.iter().filter_map(|t| t.steps.get(i)) {
                pt.delta_t = s.delta_t;
                pt.min = pt.min.min(s.a);
                pt.max = pt.max.max(s.a);
            }
            pt
        })
        .collect()
}

/// Statistics of one `(N, amplitude)` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationResult {
    pub n_points: usize,
    pub amplitude: f64,
    pub errors: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub histogram: Histogram,
    pub envelope: Vec<EnvelopePoint>,
    /// Replications whose trace ended in failure.
    pub failures: usize,
    /// Step at which each replication failed, if it did.
    pub failure_steps: Vec<Option<usize>>,
    /// Replications whose closest-point solver started from a zero resistance
    /// because no data point brackets the initial crack.
    pub g_r0_fallbacks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub solver: SolverKind,
    pub reference: SolverKind,
    pub model: ResistanceModel,
    pub seed: u64,
    pub replications: usize,
    pub reference_failed: bool,
    pub configurations: Vec<ConfigurationResult>,
}

impl ConvergenceReport {
    pub fn means(&self) -> Vec<f64> {
        self.configurations.iter().map(|c| c.mean).collect()
    }
}

/// Everything held fixed across the configurations of one study.
#[derive(Debug, Clone)]
pub struct Study<'a> {
    pub specimen: &'a SpecimenModel,
    pub coupling: &'a MachineCoupling,
    pub model: &'a ResistanceModel,
    pub schedule: &'a [f64],
    pub a0: f64,
    pub solver: SolverSpec,
    pub interval: (f64, f64),
    pub sampling: Sampling,
    pub noise: NoiseDistribution,
    pub replications: usize,
    pub seed: u64,
}

impl Study<'_> {
    pub fn reference_kind(&self) -> SolverKind {
        self.solver.kind.matching_reference()
    }

    pub fn reference_trace(&self) -> Result<SolutionTrace> {
        let spec = SolverSpec {
            kind: self.reference_kind(),
            ..self.solver
        };
        let solver = make_solver(&spec, Material::Model(self.model), self.specimen, self.coupling)?;
        run_trace(
            solver.as_ref(),
            self.schedule,
            self.a0,
            TraceMeta {
                solver: spec.kind.to_string(),
                dataset: Some(self.model.name().to_string()),
                seed: None,
            },
        )
    }

    /// Data-driven trace of replication `r`.
    pub fn replicate(&self, n: usize, amplitude: f64, r: usize) -> Result<SolutionTrace> {
        self.replicate_counted(n, amplitude, r).map(|(t, _)| t)
    }

    /// Like [`Study::replicate`], also reporting whether the initial
    /// resistance fell back to zero because no data point brackets `a0`.
    fn replicate_counted(&self, n: usize, amplitude: f64, r: usize) -> Result<(SolutionTrace, bool)> {
        match self.replicate_with(n, amplitude, r, self.solver) {
            Err(e) if matches!(e, Error::Bracketing { .. }) && self.solver.g_r0 != GR0Rule::Zero => {
                let spec = SolverSpec {
                    g_r0: GR0Rule::Zero,
                    ..self.solver
                };
                Ok((self.replicate_with(n, amplitude, r, spec)?, true))
            }
            other => other.map(|t| (t, false)),
        }
    }

    fn replicate_with(&self, n: usize, amplitude: f64, r: usize, spec: SolverSpec) -> Result<SolutionTrace> {
        let (sample_seed, noise_seed) = replication_seeds(self.seed, r);
        let clean = sample_dataset(
            self.model,
            n,
            self.interval,
            sample_seed,
            self.specimen.params.b,
            self.sampling,
        )?;
        let data = apply_noise(&clean, amplitude, noise_seed, self.noise)?;
        let solver = make_solver(&spec, Material::Data(&data), self.specimen, self.coupling)?;
        run_trace(
            solver.as_ref(),
            self.schedule,
            self.a0,
            TraceMeta {
                solver: spec.kind.to_string(),
                dataset: None,
                seed: Some(sample_seed),
            },
        )
    }

    pub fn configuration(&self, n: usize, amplitude: f64, reference: &SolutionTrace) -> Result<ConfigurationResult> {
        if self.replications == 0 {
            return Err(Error::invalid("replications", "must be at least one"));
        }
        let runs = (0..self.replications)
            .into_par_iter()
            .map(|r| self.replicate_counted(n, amplitude, r))
            .collect::<Result<Vec<_>>>()?;
        let g_r0_fallbacks = runs.iter().filter(|r| r.1).count();
        let traces: Vec<SolutionTrace> = runs.into_iter().map(|r| r.0).collect();
        let errors = traces
            .iter()
            .map(|t| error_metric(t, reference))
            .collect::<Result<Vec<_>>>()?;
        let count = errors.len() as f64;
        let mean = compensated_sum(errors.iter().copied()) / count;
        let var = compensated_sum(errors.iter().map(|e| (e - mean) * (e - mean))) / count;
        let failure_steps: Vec<Option<usize>> = traces
            .iter()
            .map(|t| t.steps.last().filter(|s| s.failed).map(|s| s.k))
            .collect();
        Ok(ConfigurationResult {
            n_points: n,
            amplitude,
            histogram: Histogram::new(&errors, mean),
            envelope: envelope(&traces),
            failures: failure_steps.iter().flatten().count(),
            failure_steps,
            g_r0_fallbacks,
            mean,
            std: var.sqrt(),
            errors,
        })
    }

    fn report(&self, reference: &SolutionTrace, configurations: Vec<ConfigurationResult>) -> ConvergenceReport {
        ConvergenceReport {
            solver: self.solver.kind,
            reference: self.reference_kind(),
            model: self.model.clone(),
            seed: self.seed,
            replications: self.replications,
            reference_failed: reference.failed(),
            configurations,
        }
    }

    /// Noise-free study over increasing data-set sizes.
    pub fn vs_points(&self, sizes: &[usize]) -> Result<ConvergenceReport> {
        let reference = self.reference_trace()?;
        let configs = sizes
            .iter()
            .map(|&n| self.configuration(n, 0.0, &reference))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.report(&reference, configs))
    }

    /// Fixed-size study over decreasing relative noise amplitudes.
    pub fn vs_noise(&self, n: usize, amplitudes: &[f64]) -> Result<ConvergenceReport> {
        let reference = self.reference_trace()?;
        let configs = amplitudes
            .iter()
            .map(|&amp| self.configuration(n, amp, &reference))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.report(&reference, configs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::LoadProgram;
    use crate::params::{nondimensionalize, PhysicalParams};
    use proptest::prelude::*;

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        assert_eq!(replication_seeds(7, 3), replication_seeds(7, 3));
        assert_ne!(replication_seeds(7, 3), replication_seeds(7, 4));
        assert_ne!(replication_seeds(7, 3), replication_seeds(8, 3));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn histogram_zero_mean() {
        let h = Histogram::new(&[0.0; 5], 0.0);
        assert_eq!(h.counts[0], 5);
        assert_eq!(h.total(), 5);
    }

    proptest! {
        #[test]
        fn histogram_counts_everything(xs in proptest::collection::vec(0.0..10.0f64, 1..100)) {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let h = Histogram::new(&xs, mean);
            prop_assert_eq!(h.total(), xs.len());
        }
    }

    fn study<'a>(
        s: &'a SpecimenModel,
        c: &'a MachineCoupling,
        m: &'a ResistanceModel,
        schedule: &'a [f64],
        replications: usize,
    ) -> Study<'a> {
        Study {
            specimen: s,
            coupling: c,
            model: m,
            schedule,
            a0: 0.1,
            solver: SolverSpec::of(SolverKind::Global),
            interval: (0.0, 1.1),
            sampling: Sampling::Uniform,
            noise: NoiseDistribution::Uniform,
            replications,
            seed: 11,
        }
    }

    #[test]
    fn zero_noise_matches_point_study_and_envelope_contains_traces() {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        let m = ResistanceModel::Griffith;
        let schedule = LoadProgram::monotone(5e-5, 120).schedule().unwrap();
        let st = study(&s, &c, &m, &schedule, 4);
        let by_n = st.vs_points(&[80]).unwrap();
        let by_noise = st.vs_noise(80, &[0.0]).unwrap();
        assert_eq!(by_n.configurations[0].errors, by_noise.configurations[0].errors);

        let cfg = &by_n.configurations[0];
        for r in 0..4 {
            let t = st.replicate(80, 0.0, r).unwrap();
            for (e, step) in cfg.envelope.iter().zip(&t.steps) {
                assert!(e.min <= step.a && step.a <= e.max);
            }
        }
    }

    #[test]
    fn unbracketed_initial_crack_falls_back_to_zero_resistance() {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        let m = ResistanceModel::Griffith;
        let schedule = LoadProgram::monotone(5e-5, 40).schedule().unwrap();
        let mut st = study(&s, &c, &m, &schedule, 3);
        st.solver = SolverSpec::of(SolverKind::Cpp);
        st.interval = (0.2, 1.1);
        let r = st.vs_points(&[30]).unwrap();
        assert_eq!(r.configurations[0].g_r0_fallbacks, 3);
    }

    #[test]
    fn single_replication_has_zero_spread() {
        let p = nondimensionalize(&PhysicalParams::reference_dcb()).unwrap().params;
        let s = SpecimenModel::standard(p).unwrap();
        let c = s.coupling();
        let m = ResistanceModel::Griffith;
        let schedule = LoadProgram::monotone(5e-5, 60).schedule().unwrap();
        let r = study(&s, &c, &m, &schedule, 1).vs_points(&[50]).unwrap();
        assert_eq!(r.configurations[0].std, 0.0);
        assert_eq!(r.configurations[0].histogram.total(), 1);
    }
}
