use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Machine-displacement increment of the reference test (dimensionless).
pub const DEFAULT_INCREMENT: f64 = 5e-5;
/// Length of the default monotone ramp.
pub const DEFAULT_STEPS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Leg {
    /// Machine displacement at the end of the leg.
    pub to: f64,
}

/// Piecewise-linear machine displacement history starting from zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadProgram {
    pub increment: f64,
    pub segments: Vec<Leg>,
}

impl Default for LoadProgram {
    fn default() -> Self {
        Self::monotone(DEFAULT_INCREMENT, DEFAULT_STEPS)
    }
}

impl LoadProgram {
    pub fn monotone(increment: f64, steps: usize) -> Self {
        Self {
            increment,
            segments: vec![Leg {
                to: increment * steps as f64,
            }],
        }
    }

    /// Ramp to `peak`, unload to zero, reload to `peak`, then continue to `end`.
    pub fn unload_reload(increment: f64, peak: f64, end: f64) -> Self {
        Self {
            increment,
            segments: [peak, 0.0, peak, end].into_iter().map(|to| Leg { to }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.increment > 0.0 && self.increment.is_finite()) {
            return Err(Error::invalid("increment", "must be positive"));
        }
        let mut from = 0.0;
        for leg in &self.segments {
            if !(leg.to >= 0.0 && leg.to.is_finite()) {
                return Err(Error::invalid("segments", "displacements must be >= 0"));
            }
            let n = (leg.to - from).abs() / self.increment;
            if (n - n.round()).abs() > 1e-6 {
                return Err(Error::invalid(
                    "segments",
                    format!("leg {from} -> {} is not a whole number of increments", leg.to),
                ));
            }
            from = leg.to;
        }
        Ok(())
    }

    /// Machine displacement at every load step `k = 1, 2, ...`.
    pub fn schedule(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let mut out = Vec::new();
        let mut from = 0.0;
        for leg in &self.segments {
            let n = ((leg.to - from).abs() / self.increment).round() as usize;
            let sign = if leg.to >= from { 1.0 } else { -1.0 };
            out.extend((1..=n).map(|j| if j == n { leg.to } else { from + sign * self.increment * j as f64 }));
            from = leg.to;
        }
        Ok(out)
    }
}
