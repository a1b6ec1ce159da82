//! DCB compliance models coupled to a linear loading machine.
//!
//! Each arm is an Euler-Bernoulli cantilever of length `a`, so the opening
//! compliance is `C(a) = 24/(Y b) * int_0^a x^2 / h(x)^3 dx` and its derivative
//! is simply `24 a^2 / (Y b h(a)^3)`. The standard specimen has constant `h`;
//! the tapered one has a linear transition between two constant-height parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DimensionlessParams, DEFAULT_A_MAX};

/// Linear taper between two constant-height regions (all lengths dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Taper {
    pub h1: f64,
    pub h2: f64,
    pub l1: f64,
    pub lt: f64,
    pub l2: f64,
    /// Slope of the transition region, `dh/dx`.
    pub m: f64,
}

impl Taper {
    pub fn new(h1: f64, h2: f64, l1: f64, lt: f64, l2: f64, m: f64) -> Result<Self> {
        let t = Self {
            h1,
            h2,
            l1,
            lt,
            l2,
            m,
        };
        t.validate()?;
        Ok(t)
    }

    /// Increasing height (h 0.10 -> 0.15).
    pub fn case1() -> Self {
        Self {
            h1: 0.10,
            h2: 0.15,
            l1: 0.50,
            lt: 0.10,
            l2: 0.40,
            m: 0.5,
        }
    }

    /// Gentle decrease (h 0.10 -> 0.05).
    pub fn case2() -> Self {
        Self {
            h1: 0.10,
            h2: 0.05,
            l1: 0.45,
            lt: 0.30,
            l2: 0.25,
            m: -1.0 / 6.0,
        }
    }

    /// Steep decrease (h 0.10 -> 0.04), producing a second instability at `l1`.
    pub fn case3() -> Self {
        Self {
            h1: 0.10,
            h2: 0.04,
            l1: 0.45,
            lt: 0.10,
            l2: 0.45,
            m: -0.6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0.0 || !self.m.is_finite() {
            return Err(Error::invalid(
                "m",
                "taper slope must be non-zero (use the standard specimen)",
            ));
        }
        for (name, v) in [
            ("h1", self.h1),
            ("h2", self.h2),
            ("l1", self.l1),
            ("lt", self.lt),
            ("l2", self.l2),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(name, format!("must lie in (0, 1), got {v}")));
            }
        }
        if ((self.l1 + self.lt + self.l2) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("l2", "l1 + lt + l2 must equal 1"));
        }
        if (self.h1 + self.m * self.lt - self.h2).abs() > 1e-12 {
            return Err(Error::invalid("h2", "h2 must equal h1 + m * lt"));
        }
        Ok(())
    }

    /// Intercept of the transition line, `h(x) = p + m x`.
    pub fn p(&self) -> f64 {
        self.h1 - self.m * self.l1
    }

    /// End of the transition region.
    pub fn l12(&self) -> f64 {
        self.l1 + self.lt
    }

    pub fn height(&self, x: f64) -> f64 {
        if x <= self.l1 {
            self.h1
        } else if x <= self.l12() {
            self.p() + self.m * x
        } else {
            self.h2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    StandardDcb,
    TaperedDcb(Taper),
}

/// Machine compliance in series with the specimen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineCoupling {
    pub c_m: f64,
}

impl MachineCoupling {
    pub fn new(c_m: f64) -> Result<Self> {
        if !(c_m.is_finite() && c_m >= 0.0) {
            return Err(Error::invalid("c_m", "machine compliance must be >= 0"));
        }
        Ok(Self { c_m })
    }

    pub fn rigid() -> Self {
        Self { c_m: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecimenModel {
    pub params: DimensionlessParams,
    pub geometry: Geometry,
    /// Upper end of the admissible crack-length interval.
    pub a_max: f64,
}

impl SpecimenModel {
    pub fn standard(params: DimensionlessParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            geometry: Geometry::StandardDcb,
            a_max: DEFAULT_A_MAX,
        })
    }

    /// Tapered specimen; the arm height of `params` is replaced by `taper.h1`.
    pub fn tapered(mut params: DimensionlessParams, taper: Taper) -> Result<Self> {
        taper.validate()?;
        params.h = taper.h1;
        params.validate()?;
        Ok(Self {
            params,
            geometry: Geometry::TaperedDcb(taper),
            a_max: DEFAULT_A_MAX,
        })
    }

    pub fn with_a_max(mut self, a_max: f64) -> Self {
        self.a_max = a_max;
        self
    }

    pub fn coupling(&self) -> MachineCoupling {
        MachineCoupling {
            c_m: self.params.c_m,
        }
    }

    fn check(&self, a: f64) -> Result<()> {
        if (0.0..=self.a_max).contains(&a) {
            Ok(())
        } else {
            Err(Error::Domain {
                a,
                lo: 0.0,
                hi: self.a_max,
            })
        }
    }

    /// Arm height at distance `x` from the loaded end.
    pub fn height(&self, x: f64) -> f64 {
        match &self.geometry {
            Geometry::StandardDcb => self.params.h,
            Geometry::TaperedDcb(t) => t.height(x),
        }
    }

    pub fn compliance(&self, a: f64) -> Result<f64> {
        self.check(a)?;
        Ok(self.compliance_raw(a))
    }

    pub(crate) fn compliance_raw(&self, a: f64) -> f64 {
        let DimensionlessParams { y, b, h, .. } = self.params;
        match &self.geometry {
            Geometry::StandardDcb => 8.0 * a.powi(3) / (y * b * h.powi(3)),
            Geometry::TaperedDcb(t) => {
                if a <= t.l1 {
                    return 8.0 * a.powi(3) / (y * b * t.h1.powi(3));
                }
                let m = t.m;
                let p = t.p();
                let l1 = t.l1;
                let l12 = t.l12();
                let k = 12.0 / (y * b * m.powi(3));
                // ln(r)^2 in the closed form reads ln(r^2) = 2 ln r.
                let shape = |x: f64| (p * p - 2.0 * m * m * x * x) / (m * x + p).powi(2);
                let base = -shape(l1) + 2.0 * m.powi(3) * l1.powi(3) / (3.0 * t.h1.powi(3));
                if a <= l12 {
                    k * (2.0 * ((m * a + p) / (m * l1 + p)).ln() + shape(a) + base)
                } else {
                    k * (2.0 * ((m * l12 + p) / (m * l1 + p)).ln()
                        + shape(l12)
                        + base
                        + 2.0 * m.powi(3) * (a.powi(3) - l12.powi(3)) / (3.0 * t.h2.powi(3)))
                }
            }
        }
    }

    /// dC/da, analytic on every branch.
    pub fn compliance_derivative(&self, a: f64) -> Result<f64> {
        self.check(a)?;
        Ok(self.compliance_derivative_raw(a))
    }

    pub(crate) fn compliance_derivative_raw(&self, a: f64) -> f64 {
        let DimensionlessParams { y, b, .. } = self.params;
        24.0 * a * a / (y * b * self.height(a).powi(3))
    }

    /// Energy release rate per unit thickness at fixed machine displacement,
    /// `G = DeltaT^2 C'(a) / (2 b (C(a) + C_M)^2)`.
    pub fn energy_release_rate(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::Domain {
                a,
                lo: 0.0,
                hi: self.a_max,
            });
        }
        self.check(a)?;
        Ok(self.energy_release_rate_raw(c, delta_t, a))
    }

    pub(crate) fn energy_release_rate_raw(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> f64 {
        if delta_t == 0.0 {
            return 0.0;
        }
        let total = self.compliance_raw(a) + c.c_m;
        0.5 * delta_t * delta_t * self.compliance_derivative_raw(a) / (self.params.b * total * total)
    }

    /// Elastic energy stored in specimen and machine, `DeltaT^2 / (2 (C + C_M))`.
    pub fn reduced_energy(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> Result<f64> {
        self.check(a)?;
        Ok(self.reduced_energy_raw(c, delta_t, a))
    }

    pub(crate) fn reduced_energy_raw(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> f64 {
        if delta_t == 0.0 {
            return 0.0;
        }
        0.5 * delta_t * delta_t / (self.compliance_raw(a) + c.c_m)
    }

    /// Splits the machine displacement into specimen opening and load.
    pub fn equilibrium_split(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> Result<(f64, f64)> {
        self.check(a)?;
        Ok(self.equilibrium_split_raw(c, delta_t, a))
    }

    pub(crate) fn equilibrium_split_raw(&self, c: &MachineCoupling, delta_t: f64, a: f64) -> (f64, f64) {
        let ca = self.compliance_raw(a);
        let total = ca + c.c_m;
        if total == 0.0 {
            // Rigid specimen in a rigid machine: no opening, load undetermined.
            return (0.0, if delta_t == 0.0 { 0.0 } else { f64::INFINITY });
        }
        let p = delta_t / total;
        // Delta = DeltaT - C_M P keeps the series identity exact.
        (delta_t - c.c_m * p, p)
    }
}

/// Closed-form energy release rate of the standard DCB,
/// `12 a^2 Y h^3 [DeltaT / (8 a^3 + C_M Y b h^3)]^2`.
pub fn dcb_closed_form_g(p: &DimensionlessParams, c_m: f64, delta_t: f64, a: f64) -> f64 {
    let h3 = p.h.powi(3);
    let r = delta_t / (8.0 * a.powi(3) + c_m * p.y * p.b * h3);
    12.0 * a * a * p.y * h3 * r * r
}
