//! Physical test parameters and the dimensionless scheme used by every solver.
//!
//! Lengths are scaled by the specimen length `L`, energies per unit area by the
//! reference toughness `gamma`. Solvers only ever see dimensionless values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound of the admissible crack-length interval.
pub const DEFAULT_A_MAX: f64 = 1.1;

/// Dimensionless specimen length; crack lengths at or beyond it mean the specimen is cut through.
pub const SPECIMEN_LENGTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Young's modulus (force/area).
    pub young: f64,
    /// Specimen length.
    pub length: f64,
    /// Arm height.
    pub height: f64,
    pub thickness: f64,
    /// Initial crack length.
    pub a0: f64,
    /// Machine displacement increment per load step.
    pub delta_t: f64,
    /// Machine compliance (length/force).
    pub machine_compliance: f64,
    /// Reference critical energy release rate (force/length).
    pub gamma: f64,
}

impl PhysicalParams {
    /// Parameters of the reference DCB test: 70 GPa, 3 x 30 x 1 mm, a0 = 3 mm.
    pub fn reference_dcb() -> Self {
        Self {
            young: 70_000.0,
            length: 30.0,
            height: 3.0,
            thickness: 1.0,
            a0: 3.0,
            delta_t: 1.5e-3,
            machine_compliance: 2e-3,
            gamma: 0.06,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("young", self.young),
            ("length", self.length),
            ("height", self.height),
            ("thickness", self.thickness),
            ("a0", self.a0),
            ("delta_t", self.delta_t),
            ("machine_compliance", self.machine_compliance),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.a0 >= self.length {
            return Err(Error::invalid("a0", "must be shorter than the specimen"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessParams {
    pub h: f64,
    pub a0: f64,
    pub b: f64,
    pub c_m: f64,
    pub y: f64,
}

impl DimensionlessParams {
    /// Always 1; kept for readability where the specimen length appears in formulas.
    pub const L: f64 = 1.0;

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h", self.h), ("a0", self.a0), ("b", self.b)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(name, format!("must lie in (0, 1), got {v}")));
            }
        }
        if !(self.y.is_finite() && self.y > 0.0) {
            return Err(Error::invalid("y", "must be positive"));
        }
        if !(self.c_m.is_finite() && self.c_m >= 0.0) {
            return Err(Error::invalid("c_m", "must be non-negative"));
        }
        Ok(())
    }
}

/// Output of [`nondimensionalize`]: geometry/material set plus the scaled load increment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub params: DimensionlessParams,
    pub delta_t: f64,
}

pub fn nondimensionalize(p: &PhysicalParams) -> Result<Scaled> {
    p.validate()?;
    let l = p.length;
    Ok(Scaled {
        params: DimensionlessParams {
            h: p.height / l,
            a0: p.a0 / l,
            b: p.thickness / l,
            c_m: p.machine_compliance * p.gamma,
            y: p.young * l / p.gamma,
        },
        delta_t: p.delta_t / l,
    })
}

/// Reference scales for converting dimensionless results back to physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub length: f64,
    pub gamma: f64,
}

impl Scales {
    pub fn length(&self, v: f64) -> f64 {
        v * self.length
    }

    pub fn force(&self, v: f64) -> f64 {
        v * self.gamma * self.length
    }

    pub fn compliance(&self, v: f64) -> f64 {
        v / self.gamma
    }

    pub fn modulus(&self, v: f64) -> f64 {
        v * self.gamma / self.length
    }

    pub fn energy(&self, v: f64) -> f64 {
        v * self.gamma * self.length * self.length
    }

    pub fn energy_release_rate(&self, v: f64) -> f64 {
        v * self.gamma
    }
}
