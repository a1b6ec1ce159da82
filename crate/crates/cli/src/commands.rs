use std::path::{Path, PathBuf};

use ddfrac::harness::{
    make_solver, residuals, run_trace, ConfigurationResult, ConvergenceReport, Material, Study,
};
use ddfrac::harness::replication_seeds;
use ddfrac::{
    apply_noise, sample_dataset, ResistanceDataSet, SolutionTrace, SolverKind, TraceMeta,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, Resolved, StudyKind};
use crate::error::CliError;
use crate::output::{write_atomic, write_json, write_rows};

pub struct Context {
    pub cfg: ExperimentConfig,
    pub resolved: Resolved,
    pub out: PathBuf,
}

impl Context {
    /// Effective configuration, overrides included, next to the outputs.
    pub fn record(&self) -> Result<(), CliError> {
        let json = self.cfg.to_json();
        write_atomic(&self.out.join("config.json"), |buf| {
            buf.extend_from_slice(json.as_bytes());
            Ok(())
        })
    }

    fn a0(&self) -> f64 {
        self.resolved.specimen.params.a0
    }

    /// Sampled and perturbed data set; the same one replication 0 of a study sees.
    fn sample(&self) -> Result<ResistanceDataSet, CliError> {
        let d = &self.cfg.dataset;
        let (sample_seed, noise_seed) = replication_seeds(d.seed, 0);
        let clean = sample_dataset(
            &self.cfg.resistance,
            d.n,
            (d.interval[0], d.interval[1]),
            sample_seed,
            self.resolved.specimen.params.b,
            d.sampling,
        )?;
        Ok(apply_noise(&clean, d.amplitude, noise_seed, d.noise)?)
    }

    fn dataset(&self) -> Result<(ResistanceDataSet, String), CliError> {
        match &self.cfg.dataset.path {
            Some(path) => {
                let f = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
                Ok((ResistanceDataSet::read_csv(f)?, path.display().to_string()))
            }
            None => Ok((self.sample()?, format!("sampled, seed {}", self.cfg.dataset.seed))),
        }
    }

    fn write_trace(&self, name: &str, trace: &SolutionTrace) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        write_atomic(&path, |buf| Ok(trace.write_csv(buf)?))?;
        Ok(path)
    }
}

fn finish(trace: &SolutionTrace, path: &Path) -> Result<(), CliError> {
    println!("wrote {} ({} steps)", path.display(), trace.steps.len());
    match trace.steps.last() {
        Some(s) if s.failed => Err(CliError::SpecimenFailed { step: s.k }),
        _ => Ok(()),
    }
}

pub fn generate(ctx: &Context) -> Result<(), CliError> {
    let d = ctx.sample()?;
    let csv = ctx.out.join("dataset.csv");
    write_atomic(&csv, |buf| Ok(d.write_csv(buf)?))?;
    write_json(&ctx.out.join("dataset.json"), &d.meta)?;
    println!("wrote {} ({} points)", csv.display(), d.len());
    Ok(())
}

pub fn solve(ctx: &Context) -> Result<(), CliError> {
    let spec = ctx.cfg.solver;
    if spec.kind.is_reference() {
        return model_trace(ctx, "trace.csv");
    }
    let (data, source) = ctx.dataset()?;
    let specimen = &ctx.resolved.specimen;
    let coupling = specimen.coupling();
    let solver = make_solver(&spec, Material::Data(&data), specimen, &coupling)?;
    let meta = TraceMeta {
        solver: spec.kind.to_string(),
        dataset: Some(source),
        seed: Some(ctx.cfg.dataset.seed),
    };
    let trace = run_trace(solver.as_ref(), &ctx.resolved.schedule, ctx.a0(), meta)?;
    let path = ctx.write_trace("trace.csv", &trace)?;
    finish(&trace, &path)
}

pub fn reference(ctx: &Context) -> Result<(), CliError> {
    model_trace(ctx, "reference.csv")
}

fn model_trace(ctx: &Context, name: &str) -> Result<(), CliError> {
    let spec = ddfrac::SolverSpec {
        kind: ctx.cfg.solver.kind.matching_reference(),
        ..ctx.cfg.solver
    };
    let specimen = &ctx.resolved.specimen;
    let coupling = specimen.coupling();
    let solver = make_solver(&spec, Material::Model(&ctx.cfg.resistance), specimen, &coupling)?;
    let meta = TraceMeta {
        solver: spec.kind.to_string(),
        dataset: Some(ctx.cfg.resistance.name().to_string()),
        seed: None,
    };
    let trace = run_trace(solver.as_ref(), &ctx.resolved.schedule, ctx.a0(), meta)?;
    let path = ctx.write_trace(name, &trace)?;
    finish(&trace, &path)
}

#[derive(Serialize)]
struct HistogramRow {
    lo: f64,
    hi: f64,
    count: usize,
}

fn histogram_rows(c: &ConfigurationResult) -> Vec<HistogramRow> {
    let h = &c.histogram;
    let mut rows: Vec<HistogramRow> = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramRow {
            lo: i as f64 * h.bin_width,
            hi: (i + 1) as f64 * h.bin_width,
            count,
        })
        .collect();
    rows.push(HistogramRow {
        lo: h.counts.len() as f64 * h.bin_width,
        hi: f64::INFINITY,
        count: h.overflow,
    });
    rows
}

pub fn converge(ctx: &Context) -> Result<(), CliError> {
    let kind = ctx.cfg.solver.kind;
    if kind.is_reference() {
        return Err(CliError::Config(format!("converge needs a data-driven solver, got {kind}")));
    }
    let specimen = &ctx.resolved.specimen;
    let coupling = specimen.coupling();
    let d = &ctx.cfg.dataset;
    let conv = &ctx.cfg.convergence;
    let study = Study {
        specimen,
        coupling: &coupling,
        model: &ctx.cfg.resistance,
        schedule: &ctx.resolved.schedule,
        a0: ctx.a0(),
        solver: ctx.cfg.solver,
        interval: (d.interval[0], d.interval[1]),
        sampling: d.sampling,
        noise: d.noise,
        replications: conv.replications,
        seed: d.seed,
    };
    let report: ConvergenceReport = match conv.study {
        StudyKind::Points => study.vs_points(&conv.points)?,
        StudyKind::Noise => study.vs_noise(d.n, &conv.amplitudes)?,
    };
    write_json(&ctx.out.join("report.json"), &report)?;
    let reference = study.reference_trace()?;
    ctx.write_trace("reference.csv", &reference)?;
    for (i, c) in report.configurations.iter().enumerate() {
        let stem = format!("config{i:02}_n{}_amp{}", c.n_points, c.amplitude);
        write_rows(&ctx.out.join(format!("{stem}_histogram.csv")), &["lo", "hi", "count"], &histogram_rows(c))?;
        write_rows(&ctx.out.join(format!("{stem}_envelope.csv")), &["k", "DeltaT", "min", "max"], &c.envelope)?;
        println!(
            "n = {:>6}  amplitude = {:<8}  mu = {:.6e}  sigma = {:.6e}  failures = {}",
            c.n_points, c.amplitude, c.mean, c.std, c.failures
        );
    }
    println!("wrote {}", ctx.out.join("report.json").display());
    Ok(())
}

pub fn compare(a: &Path, b: &Path, out: &Path) -> Result<(), CliError> {
    let read = |p: &Path| -> Result<SolutionTrace, CliError> {
        let f = std::fs::File::open(p).map_err(|e| CliError::io(p, e))?;
        Ok(SolutionTrace::read_csv(f)?)
    };
    let (ta, tb) = (read(a)?, read(b)?);
    let rows = residuals(&ta, &tb)?;
    let eps = rows.iter().map(|r| r.residual * r.residual).sum::<f64>().sqrt();
    write_rows(&out.join("residuals.csv"), &["k", "DeltaT", "a", "a_ref", "residual"], &rows)?;
    println!("epsilon = {eps:e} over {} common steps", rows.len());
    Ok(())
}

pub fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: ddfrac::Error| e.to_string())
}
