use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Growth profile `a_α(r)` of the cavity examples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// `a_α = v₀ r`
    #[default]
    Linear,
    /// `a_α = v₀ eʳ`
    Exponential,
}

/// Weight `c + c_t t + c_x x` carried along a branch curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineWeight {
    pub c: f64,
    #[serde(default)]
    pub c_t: f64,
    #[serde(default)]
    pub c_x: f64,
}

impl AffineWeight {
    pub const fn new(c: f64, c_t: f64, c_x: f64) -> Self {
        Self { c, c_t, c_x }
    }

    pub fn field(&self) -> ScalarField {
        ScalarField::constant(self.c)
            + ScalarField::coord(0) * self.c_t
            + ScalarField::coord(1) * self.c_x
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        self.c + self.c_t * p[0] + self.c_x * p[1]
    }
}

/// Constants and chart bounds shared by all scenarios. Every field has a
/// default, so a config only names what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub a_t: f64,
    pub a_x: f64,
    pub rho0: f64,
    pub v0: f64,
    pub r0: f64,
    pub t0: f64,
    pub time: (f64, f64),
    pub x_range: (f64, f64),
    pub r_range: (f64, f64),
    pub growth: Growth,
    /// Weights on the curves A→B, B→E₂, B→E₃.
    pub weights: [AffineWeight; 3],
    pub start: [f64; 2],
    pub branch: [f64; 2],
    pub ends: [[f64; 2]; 2],
    /// Added to the source as a multiple of the spatial coordinate volume
    /// form; nonzero values break the balance on purpose.
    pub source_perturbation: f64,
    /// Replace analytic coefficients by opaque closures, so every partial is
    /// taken by finite differences.
    pub fd_partials: bool,
    /// Interval (x or r) of the integral-balance region; scenario default when
    /// absent.
    pub region: Option<(f64, f64)>,
    /// Worldline seeds in spacetime coordinates; scenario default when absent.
    pub seeds: Option<Vec<Vec<f64>>>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            a_t: 1.0,
            a_x: 2.0,
            rho0: 1.0,
            v0: 1.0,
            r0: 1.0,
            t0: 1.0,
            time: (0.0, 2.0),
            x_range: (-2.0, 2.0),
            r_range: (0.2, 4.0),
            growth: Growth::Linear,
            weights: [
                AffineWeight::new(1.0, 1.0, 0.0),
                AffineWeight::new(0.5, 0.0, 0.0),
                AffineWeight::new(0.5, 0.0, 0.0),
            ],
            start: [0.0, 0.0],
            branch: [1.0, 0.0],
            ends: [[2.0, 1.0], [2.0, -1.0]],
            source_perturbation: 0.0,
            fd_partials: false,
            region: None,
            seeds: None,
        }
    }
}

impl ScenarioParams {
    pub(crate) fn validate(&self) -> Result<()> {
        let finite = [
            self.a_t, self.a_x, self.rho0, self.v0, self.r0, self.t0,
            self.source_perturbation,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(invalid("constants must be finite"));
        }
        for (name, v) in [("rho0", self.rho0), ("t0", self.t0), ("r0", self.r0)] {
            if !(v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, (lo, hi)) in [
            ("time", self.time),
            ("x_range", self.x_range),
            ("r_range", self.r_range),
        ] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(invalid(format!("{name}: need finite lower < upper")));
            }
        }
        if let Some((lo, hi)) = self.region {
            if !(lo < hi) {
                return Err(invalid("region: need lower < upper"));
            }
        }
        Ok(())
    }

    /// Polar charts need the origin excluded.
    pub(crate) fn check_polar(&self) -> Result<()> {
        if !(self.r_range.0 > 0.0) {
            return Err(invalid(format!(
                "polar chart needs r_min > 0, got {}",
                self.r_range.0
            )));
        }
        Ok(())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
