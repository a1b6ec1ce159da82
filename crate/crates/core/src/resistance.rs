//! Crack-resistance models and the discrete material data sets sampled from them.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DEFAULT_A_MAX;

/// One constant-resistance interval `(previous upper, upper]` of a piecewise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub upper: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResistanceModel {
    /// Constant unit resistance.
    Griffith,
    /// Rising resistance `1 + (a - 0.1)^2 / ((a - 0.1)^2 + 0.2 (a - 0.1))`.
    RCurve,
    /// Right-closed constant intervals partitioning `(0, 1]`; the last level
    /// extends to the end of the admissible interval.
    Piecewise { segments: Vec<Segment> },
}

impl ResistanceModel {
    /// Weak half first: the crack arrests at the interface.
    pub fn stable_bimaterial() -> Self {
        Self::Piecewise {
            segments: vec![
                Segment { upper: 0.5, level: 1.0 },
                Segment { upper: 1.0, level: 5.0 },
            ],
        }
    }

    /// Strong half first.
    pub fn unstable_bimaterial() -> Self {
        Self::Piecewise {
            segments: vec![
                Segment { upper: 0.5, level: 5.0 },
                Segment { upper: 1.0, level: 1.0 },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Self::Piecewise { segments } = self {
            if segments.is_empty() {
                return Err(Error::invalid("segments", "at least one segment required"));
            }
            let mut lo = 0.0;
            for s in segments {
                if !(s.upper > lo) {
                    return Err(Error::invalid("segments", "upper bounds must increase from 0"));
                }
                if !(s.level > 0.0 && s.level.is_finite()) {
                    return Err(Error::invalid("segments", "levels must be positive"));
                }
                lo = s.upper;
            }
            if (lo - 1.0).abs() > 1e-12 {
                return Err(Error::invalid("segments", "segments must partition (0, 1]"));
            }
        }
        Ok(())
    }

    /// Crack lengths where the model is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Piecewise { segments } => segments.iter().map(|s| s.upper).collect(),
            _ => Vec::new(),
        }
    }

    fn check(a: f64) -> Result<()> {
        if (0.0..=DEFAULT_A_MAX).contains(&a) {
            Ok(())
        } else {
            Err(Error::Domain {
                a,
                lo: 0.0,
                hi: DEFAULT_A_MAX,
            })
        }
    }

    /// Critical energy release rate at crack length `a`.
    pub fn g_r(&self, a: f64) -> Result<f64> {
        Self::check(a)?;
        Ok(self.g_r_raw(a))
    }

    pub(crate) fn g_r_raw(&self, a: f64) -> f64 {
        match self {
            Self::Griffith => 1.0,
            // Algebraically equal to the rational form and free of the 0/0 at a = 0.1.
            Self::RCurve => 2.0 * a / (a + 0.1),
            Self::Piecewise { segments } => segments
                .iter()
                .find(|s| a <= s.upper)
                .or_else(|| segments.last())
                .map_or(1.0, |s| s.level),
        }
    }

    /// Resistance energy `F_R(a)` for thickness `b`, with `dF_R/da = b G_R`.
    pub fn f_r(&self, a: f64, b: f64) -> Result<f64> {
        Self::check(a)?;
        Ok(self.f_r_raw(a, b))
    }

    pub(crate) fn f_r_raw(&self, a: f64, b: f64) -> f64 {
        b * match self {
            Self::Griffith => a,
            Self::RCurve => 0.2 * (10.0 * a - ((a + 0.1) / 0.1).ln()),
            Self::Piecewise { segments } => {
                let mut lo = 0.0;
                let mut acc = 0.0;
                for s in segments {
                    if a <= lo {
                        break;
                    }
                    acc += s.level * (a.min(s.upper) - lo);
                    lo = s.upper;
                }
                if let Some(last) = segments.last() {
                    if a > last.upper {
                        acc += last.level * (a - last.upper);
                    }
                }
                acc
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Griffith => "griffith",
            Self::RCurve => "r-curve",
            Self::Piecewise { .. } => "piecewise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Independent uniform draws on the interval.
    #[default]
    Uniform,
    /// One uniform draw in each of `n` equal sub-intervals.
    Stratified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseDistribution {
    /// Relative deviation uniform on `[-amplitude, amplitude]`.
    #[default]
    Uniform,
    /// Relative deviation normal with standard deviation `amplitude`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    #[serde(rename = "a")]
    pub a: f64,
    #[serde(rename = "F_R")]
    pub f_r: f64,
    #[serde(rename = "G_R")]
    pub g_r: f64,
}

/// Provenance stored next to a data set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub model: Option<ResistanceModel>,
    pub n: usize,
    pub interval: Option<[f64; 2]>,
    pub amplitude: f64,
    pub sampling: Sampling,
    pub noise: NoiseDistribution,
    pub seed: Option<u64>,
    pub noise_seed: Option<u64>,
}

/// Discrete resistance data: pairs `(a, F_R)` and `(a, G_R)` at shared abscissae.
/// The stored order is never altered.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceDataSet {
    pub points: Vec<DataPoint>,
    pub meta: DatasetMeta,
}

impl ResistanceDataSet {
    pub fn from_points(points: Vec<DataPoint>) -> Result<Self> {
        for p in &points {
            if !(0.0..=DEFAULT_A_MAX).contains(&p.a) {
                return Err(Error::Domain {
                    a: p.a,
                    lo: 0.0,
                    hi: DEFAULT_A_MAX,
                });
            }
            if !(p.f_r.is_finite() && p.g_r.is_finite()) {
                return Err(Error::invalid("points", "non-finite resistance value"));
            }
        }
        let n = points.len();
        Ok(Self {
            points,
            meta: DatasetMeta {
                n,
                ..DatasetMeta::default()
            },
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean spacing between consecutive abscissae, `(max - min) / (n - 1)`.
    pub fn mean_spacing(&self) -> f64 {
        if self.points.len() < 2 {
            return 0.0;
        }
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.a), hi.max(p.a)));
        (hi - lo) / (self.points.len() - 1) as f64
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for p in &self.points {
            wr.serialize(p)?;
        }
        if self.points.is_empty() {
            wr.write_record(["a", "F_R", "G_R"])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["a", "F_R", "G_R"] {
            return Err(Error::invalid("csv", "expected header `a,F_R,G_R`"));
        }
        let points = rd.deserialize().collect::<Result<Vec<DataPoint>, _>>()?;
        Self::from_points(points)
    }
}

pub fn sample_dataset(
    model: &ResistanceModel,
    n: usize,
    interval: (f64, f64),
    seed: u64,
    b: f64,
    sampling: Sampling,
) -> Result<ResistanceDataSet> {
    model.validate()?;
    let (lo, hi) = interval;
    if n < 2 {
        return Err(Error::invalid("n", "at least two points required"));
    }
    if !(lo <= hi) || lo < 0.0 || hi > DEFAULT_A_MAX {
        return Err(Error::invalid(
            "interval",
            format!("[{lo}, {hi}] is empty or outside [0, {DEFAULT_A_MAX}]"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = hi - lo;
    let points = (0..n)
        .map(|i| {
            let a = match sampling {
                Sampling::Uniform => rng.random_range(lo..=hi),
                Sampling::Stratified => {
                    let s = lo + width * i as f64 / n as f64;
                    (s + rng.random::<f64>() * width / n as f64).min(hi)
                }
            };
            DataPoint {
                a,
                f_r: model.f_r_raw(a, b),
                g_r: model.g_r_raw(a),
            }
        })
        .collect();
    Ok(ResistanceDataSet {
        points,
        meta: DatasetMeta {
            model: Some(model.clone()),
            n,
            interval: Some([lo, hi]),
            amplitude: 0.0,
            sampling,
            noise: NoiseDistribution::Uniform,
            seed: Some(seed),
            noise_seed: None,
        },
    })
}

/// Perturbs every point by one relative deviation shared by its `F_R` and `G_R`.
pub fn apply_noise(
    d: &ResistanceDataSet,
    amplitude: f64,
    seed: u64,
    dist: NoiseDistribution,
) -> Result<ResistanceDataSet> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::invalid("amplitude", "must be >= 0"));
    }
    let mut out = d.clone();
    out.meta.amplitude = amplitude;
    out.meta.noise = dist;
    out.meta.noise_seed = Some(seed);
    if amplitude == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, amplitude).map_err(|e| Error::invalid("amplitude", e.to_string()))?;
    for p in &mut out.points {
        let u = match dist {
            NoiseDistribution::Uniform => rng.random_range(-amplitude..=amplitude),
            NoiseDistribution::Gaussian => normal.sample(&mut rng),
        };
        p.f_r *= 1.0 + u;
        p.g_r *= 1.0 + u;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const B: f64 = 1.0 / 30.0;

    #[test]
    fn g_r_values() {
        assert_eq!(ResistanceModel::Griffith.g_r(0.77).unwrap(), 1.0);
        assert_relative_eq!(ResistanceModel::RCurve.g_r(0.1).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(ResistanceModel::RCurve.g_r(0.3).unwrap(), 1.5, max_relative = 1e-15);
        let u = ResistanceModel::unstable_bimaterial();
        assert_eq!(u.g_r(0.25).unwrap(), 5.0);
        assert_eq!(u.g_r(0.75).unwrap(), 1.0);
        let s = ResistanceModel::stable_bimaterial();
        assert_eq!(s.g_r(0.5).unwrap(), 1.0);
        assert_eq!(s.g_r(0.5 + 1e-12).unwrap(), 5.0);
        assert_eq!(s.g_r(1.05).unwrap(), 5.0);
        assert_eq!(s.g_r(0.0).unwrap(), 1.0);
        assert!(ResistanceModel::Griffith.g_r(1.2).is_err());
        assert!(ResistanceModel::Griffith.g_r(-0.01).is_err());
    }

    #[test]
    fn r_curve_matches_rational_form() {
        for i in 1..110 {
            let a = 0.01 * i as f64;
            if (a - 0.1).abs() < 1e-9 {
                continue;
            }
            let x = a - 0.1;
            let rational = 1.0 + x * x / (x * x + 0.2 * x);
            assert_relative_eq!(ResistanceModel::RCurve.g_r(a).unwrap(), rational, max_relative = 1e-12);
        }
    }

    #[test]
    fn f_r_values() {
        assert_relative_eq!(ResistanceModel::Griffith.f_r(0.4, B).unwrap(), 0.4 / 30.0, max_relative = 1e-15);
        assert_eq!(ResistanceModel::RCurve.f_r(0.0, B).unwrap(), 0.0);
        let s = ResistanceModel::stable_bimaterial();
        assert_relative_eq!(s.f_r(0.5, B).unwrap(), 0.5 * B, max_relative = 1e-14);
        assert_relative_eq!(s.f_r(0.5 + 1e-12, B).unwrap(), 0.5 * B, max_relative = 1e-10);
        assert_relative_eq!(s.f_r(0.8, B).unwrap(), (5.0 * 0.8 - 2.0) * B, max_relative = 1e-14);
        let u = ResistanceModel::unstable_bimaterial();
        assert_relative_eq!(u.f_r(0.3, B).unwrap(), 1.5 * B, max_relative = 1e-14);
        assert_relative_eq!(u.f_r(0.9, B).unwrap(), 2.9 * B, max_relative = 1e-14);
    }

    #[test]
    fn validate_piecewise() {
        let bad = ResistanceModel::Piecewise {
            segments: vec![Segment { upper: 0.5, level: 1.0 }],
        };
        assert!(bad.validate().is_err());
        let neg = ResistanceModel::Piecewise {
            segments: vec![Segment { upper: 1.0, level: -1.0 }],
        };
        assert!(neg.validate().is_err());
        ResistanceModel::stable_bimaterial().validate().unwrap();
    }

    #[test]
    fn griffith_sample_is_flat() {
        let d = sample_dataset(&ResistanceModel::Griffith, 50, (0.0, 1.1), 3, B, Sampling::Uniform).unwrap();
        assert_eq!(d.len(), 50);
        assert!(d.points.iter().all(|p| p.g_r == 1.0 && (0.0..=1.1).contains(&p.a)));
    }

    #[test]
    fn degenerate_interval() {
        let d = sample_dataset(&ResistanceModel::Griffith, 2, (0.1, 0.1), 3, B, Sampling::Uniform).unwrap();
        assert!(d.points.iter().all(|p| p.a == 0.1));
        assert!(sample_dataset(&ResistanceModel::Griffith, 2, (0.5, 0.1), 3, B, Sampling::Uniform).is_err());
        assert!(sample_dataset(&ResistanceModel::Griffith, 1, (0.0, 1.0), 3, B, Sampling::Uniform).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_dataset(&ResistanceModel::RCurve, 100, (0.0, 1.1), 42, B, Sampling::Uniform).unwrap();
        let b = sample_dataset(&ResistanceModel::RCurve, 100, (0.0, 1.1), 42, B, Sampling::Uniform).unwrap();
        let c = sample_dataset(&ResistanceModel::RCurve, 100, (0.0, 1.1), 43, B, Sampling::Uniform).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn stratified_has_one_point_per_stratum() {
        let d = sample_dataset(&ResistanceModel::Griffith, 40, (0.0, 1.0), 9, B, Sampling::Stratified).unwrap();
        for (i, p) in d.points.iter().enumerate() {
            assert!(p.a >= i as f64 / 40.0 && p.a <= (i + 1) as f64 / 40.0);
        }
    }

    #[test]
    fn uniform_sampling_ks() {
        let d = sample_dataset(&ResistanceModel::Griffith, 100_000, (0.0, 1.1), 11, B, Sampling::Uniform).unwrap();
        let mut a: Vec<f64> = d.points.iter().map(|p| p.a / 1.1).collect();
        a.sort_by(f64::total_cmp);
        let n = a.len() as f64;
        let ks = a
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n - x).abs().max((x - i as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS statistic {ks}");
    }

    #[test]
    fn zero_noise_is_identity() {
        let d = sample_dataset(&ResistanceModel::RCurve, 30, (0.0, 1.1), 1, B, Sampling::Uniform).unwrap();
        let n = apply_noise(&d, 0.0, 5, NoiseDistribution::Uniform).unwrap();
        assert_eq!(d.points, n.points);
    }

    #[test]
    fn noise_bounds_and_shared_deviation() {
        let d = sample_dataset(&ResistanceModel::RCurve, 500, (0.0, 1.1), 1, B, Sampling::Uniform).unwrap();
        let n = apply_noise(&d, 0.025, 5, NoiseDistribution::Uniform).unwrap();
        for (p, q) in d.points.iter().zip(&n.points) {
            assert_eq!(p.a, q.a);
            if p.g_r == 0.0 || p.f_r == 0.0 {
                continue;
            }
            let ug = q.g_r / p.g_r - 1.0;
            let uf = q.f_r / p.f_r - 1.0;
            assert!(ug.abs() <= 0.025 + 1e-12);
            assert!((ug - uf).abs() <= 1e-12);
        }
        let g = sample_dataset(&ResistanceModel::Griffith, 500, (0.0, 1.1), 1, B, Sampling::Uniform).unwrap();
        let gn = apply_noise(&g, 0.025, 8, NoiseDistribution::Uniform).unwrap();
        assert!(gn.points.iter().all(|p| (0.975..=1.025).contains(&p.g_r)));
        assert_eq!(gn, apply_noise(&g, 0.025, 8, NoiseDistribution::Uniform).unwrap());
    }

    #[test]
    fn noise_is_unbiased() {
        let d = sample_dataset(&ResistanceModel::Griffith, 100_000, (0.0, 1.1), 2, B, Sampling::Uniform).unwrap();
        let n = apply_noise(&d, 0.025, 3, NoiseDistribution::Uniform).unwrap();
        let mean = n.points.iter().map(|p| p.g_r - 1.0).sum::<f64>() / n.len() as f64;
        assert!(mean.abs() < 5e-4, "mean deviation {mean}");
    }

    #[test]
    fn gaussian_noise_runs() {
        let d = sample_dataset(&ResistanceModel::Griffith, 20_000, (0.0, 1.1), 2, B, Sampling::Uniform).unwrap();
        let n = apply_noise(&d, 0.01, 3, NoiseDistribution::Gaussian).unwrap();
        let var = n.points.iter().map(|p| (p.g_r - 1.0).powi(2)).sum::<f64>() / n.len() as f64;
        assert_relative_eq!(var.sqrt(), 0.01, max_relative = 0.05);
    }

    #[test]
    fn csv_round_trip() {
        let d = sample_dataset(&ResistanceModel::RCurve, 25, (0.0, 1.1), 7, B, Sampling::Uniform).unwrap();
        let d = apply_noise(&d, 0.05, 1, NoiseDistribution::Uniform).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("a,F_R,G_R\n"));
        assert_eq!(text.lines().count(), 26);
        let back = ResistanceDataSet::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.points, d.points);
    }

    #[test]
    fn csv_rejects_wrong_header() {
        let text = "x,F_R,G_R\n0.1,0.1,1\n";
        assert!(ResistanceDataSet::read_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn mean_spacing() {
        let pts = [0.0, 0.5, 0.25, 1.0]
            .iter()
            .map(|&a| DataPoint { a, f_r: a, g_r: 1.0 })
            .collect();
        let d = ResistanceDataSet::from_points(pts).unwrap();
        assert_relative_eq!(d.mean_spacing(), 1.0 / 3.0);
    }
}
