use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::SolutionTrace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub k: usize,
    #[serde(rename = "DeltaT")]
    pub delta_t: f64,
    pub a: f64,
    pub a_ref: f64,
    pub residual: f64,
}

/// Step-wise crack-length differences over the common prefix of two traces.
pub fn residuals(trace: &SolutionTrace, reference: &SolutionTrace) -> Result<Vec<Residual>> {
    trace
        .steps
        .iter()
        .zip(&reference.steps)
        .map(|(s, r)| {
            let scale = s.delta_t.abs().max(r.delta_t.abs()).max(f64::MIN_POSITIVE);
            if s.k != r.k || (s.delta_t - r.delta_t).abs() > 1e-12 * scale {
                return Err(Error::ScheduleMismatch { step: s.k });
            }
            Ok(Residual {
                k: s.k,
                delta_t: s.delta_t,
                a: s.a,
                a_ref: r.a,
                residual: s.a - r.a,
            })
        })
        .collect()
}

/// Root of the summed squared crack-length differences, truncated to the
/// common prefix when either trace ended early.
pub fn error_metric(trace: &SolutionTrace, reference: &SolutionTrace) -> Result<f64> {
    Ok(residuals(trace, reference)?
        .iter()
        .map(|r| r.residual * r.residual)
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::TraceStep;
    use proptest::prelude::*;

    fn trace(a: &[f64]) -> SolutionTrace {
        SolutionTrace {
            steps: a
                .iter()
                .enumerate()
                .map(|(i, &a)| TraceStep {
                    k: i + 1,
                    delta_t: 5e-5 * (i + 1) as f64,
                    a,
                    delta: 0.0,
                    p: 0.0,
                    g_dd: None,
                    dissipative: false,
                    failed: false,
                })
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn identical_is_zero() {
        let t = trace(&[0.1, 0.2, 0.3]);
        assert_eq!(error_metric(&t, &t).unwrap(), 0.0);
    }

    #[test]
    fn single_offset() {
        let a = trace(&[0.1, 0.2, 0.3]);
        let b = trace(&[0.1, 0.3, 0.3]);
        assert!((error_metric(&b, &a).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn truncates_to_common_prefix() {
        let a = trace(&[0.1, 0.2, 0.3, 0.9]);
        let b = trace(&[0.1, 0.2]);
        assert_eq!(error_metric(&b, &a).unwrap(), 0.0);
    }

    #[test]
    fn schedule_mismatch() {
        let a = trace(&[0.1, 0.2]);
        let mut b = trace(&[0.1, 0.2]);
        b.steps[1].delta_t = 7e-5;
        assert!(matches!(error_metric(&a, &b), Err(Error::ScheduleMismatch { step: 2 })));
    }

    proptest! {
        #[test]
        fn matches_direct_summation(xs in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..200)) {
            let a: Vec<f64> = xs.iter().map(|x| x.0).collect();
            let b: Vec<f64> = xs.iter().map(|x| x.1).collect();
            let mut acc = 0.0;
            for (x, y) in a.iter().zip(&b) {
                acc += (x - y) * (x - y);
            }
            let eps = error_metric(&trace(&a), &trace(&b)).unwrap();
            prop_assert!((eps - acc.sqrt()).abs() <= 1e-12);
        }
    }
}
