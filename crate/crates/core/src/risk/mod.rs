//! VaR and CVaR through the objective `G(x) = x + E[(L - x)^+] / (1 - alpha)`.
//!
//! `min G` is the CVaR and the lower end of the minimizer set is the VaR.
//! Four routes are provided:
//!
//! * [`Algorithm::Alg1`] solves `P(L <= q) = alpha` for `q`, then evaluates `G(q)`;
//! * [`Algorithm::Alg2`] minimizes `G` by golden-section search;
//! * [`Algorithm::Alg3Fft`] / [`Algorithm::Alg3Frft`] evaluate `G` on a grid with one
//!   transform and take the smallest value;
//! * [`Algorithm::Hybrid`] refines the FRFT grid minimizer with a local search.
//!
//! Exponential losses `L = V0 e^{rT} - V0 e^{X_T}` are handled on `L / V0`
//! and scaled back at the end.

mod algorithms;
mod kernels;
mod optimize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Kernel, ModelSpec};
use crate::transforms::{Truncation, WeightRule};

pub use algorithms::{compute, g_objective, var_cvar_alg1, var_cvar_alg2, var_cvar_alg3, var_cvar_hybrid};
pub use kernels::{
    call_expectation, cdf_bar, cdf_body, default_truncation, exp_payoff_body, put_expectation, stop_loss,
    stop_loss_body, Integration,
};
pub use optimize::{brent_root, golden_section_minimize, Minimum, Root};

/// What is being measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "loss", rename_all = "snake_case")]
pub enum LossSpec {
    /// `L = Y` with `Y` described by `model`.
    Direct { model: ModelSpec },
    /// `L = V0 e^{rT} - V0 e^{X_T}` with `X_T` described by `model`.
    Exponential { v0: f64, r: f64, t: f64, model: ModelSpec },
}

impl LossSpec {
    pub fn model(&self) -> &ModelSpec {
        match self {
            LossSpec::Direct { model } | LossSpec::Exponential { model, .. } => model,
        }
    }

    pub fn model_mut(&mut self) -> &mut ModelSpec {
        match self {
            LossSpec::Direct { model } | LossSpec::Exponential { model, .. } => model,
        }
    }

    /// Unit in which the computation runs: `V0` for exponential losses.
    pub fn scale(&self) -> f64 {
        match *self {
            LossSpec::Direct { .. } => 1.0,
            LossSpec::Exponential { v0, .. } => v0,
        }
    }

    /// Largest possible loss, `V0 e^{rT}`, in loss units.
    pub fn cap(&self) -> Option<f64> {
        match *self {
            LossSpec::Direct { .. } => None,
            LossSpec::Exponential { v0, r, t, .. } => Some(v0 * (r * t).exp()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model().validate()?;
        if let LossSpec::Exponential { v0, r, t, model } = self {
            if !model.is_log_return() {
                return Err(Error::InvalidParameter(format!(
                    "{} is not a log-return model; use a direct loss",
                    model.name()
                )));
            }
            if !(v0.is_finite() && *v0 > 0.0) {
                return Err(Error::InvalidParameter(format!("V0 must be > 0, got {v0}")));
            }
            if !r.is_finite() {
                return Err(Error::InvalidParameter(format!("r must be finite, got {r}")));
            }
            if !(t.is_finite() && *t > 0.0) {
                return Err(Error::InvalidParameter(format!("T must be > 0, got {t}")));
            }
            if let Some(h) = model.horizon() {
                if (h - t).abs() > 1e-12 * t.max(1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "loss horizon {t} differs from model horizon {h}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "alg1")]
    Alg1,
    #[serde(rename = "alg2")]
    Alg2,
    #[serde(rename = "alg3-fft")]
    Alg3Fft,
    #[serde(rename = "alg3-frft")]
    Alg3Frft,
    #[serde(rename = "hybrid")]
    Hybrid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Alg1,
        Algorithm::Alg2,
        Algorithm::Alg3Fft,
        Algorithm::Alg3Frft,
        Algorithm::Hybrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg3Fft => "alg3-fft",
            Algorithm::Alg3Frft => "alg3-frft",
            Algorithm::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm '{s}'")))
    }
}

/// Grid used by the transform-based algorithms.
///
/// For exponential losses the grid lives in the log-threshold variable
/// `k = log(e^{rT} - x / V0)`; by default its right end point is `rT`, and
/// `x1` (when set) is its left end point instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSettings {
    pub n: usize,
    /// Frequency range `Delta N`; defaults to the model's fixed truncation,
    /// or 100 where the quadrature would use the tail rule.
    pub upper: Option<f64>,
    pub x1: Option<f64>,
    /// Spacing of the FRFT grid; ignored (derived) in FFT mode.
    pub gamma: Option<f64>,
    pub rule: WeightRule,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            n: 1024,
            upper: None,
            x1: None,
            gamma: None,
            rule: WeightRule::Trapezoidal,
        }
    }
}

/// Numerical settings shared by all algorithms. Tolerances on `x` and on
/// the objective are in units of `L / V0` for exponential losses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskConfig {
    /// Absolute quadrature tolerance on `G` (and on the CDF in Alg1).
    pub quad_tol: f64,
    /// Golden-section bracket length at termination.
    pub x_tol: f64,
    pub root_tol: f64,
    /// Damping of the stop-loss kernel (direct losses, `< 0`).
    pub nu_sl: Option<f64>,
    /// Damping of the CDF kernel (`> 0`).
    pub nu_cdf: Option<f64>,
    /// Damping of the exponential payoff kernel (`> 1` for the put, `< 0`
    /// for the call plus parity).
    pub nu_exp: Option<f64>,
    pub truncation: Option<Truncation>,
    /// Search bracket in loss units.
    pub bracket: Option<(f64, f64)>,
    pub grid: GridSettings,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self {
            quad_tol: 1e-13,
            x_tol: 1e-8,
            root_tol: 1e-12,
            nu_sl: None,
            nu_cdf: None,
            nu_exp: None,
            truncation: None,
            bracket: None,
            grid: GridSettings::default(),
        }
    }
}

impl RiskConfig {
    /// Damping for the objective's kernel.
    pub fn objective_nu(&self, loss: &LossSpec) -> Result<f64> {
        let model = loss.model();
        match loss {
            LossSpec::Direct { .. } => match self.nu_sl {
                Some(nu) => Ok(nu),
                None => model.default_damping(Kernel::StopLoss),
            },
            LossSpec::Exponential { .. } => match self.nu_exp {
                Some(nu) => Ok(nu),
                None => model.default_damping(Kernel::Put),
            },
        }
    }

    pub fn cdf_nu(&self, loss: &LossSpec) -> Result<f64> {
        match self.nu_cdf {
            Some(nu) => Ok(nu),
            None => loss.model().default_damping(Kernel::Cdf),
        }
    }

    pub fn truncation_for(&self, model: &ModelSpec) -> Truncation {
        self.truncation.unwrap_or_else(|| default_truncation(model))
    }

    pub fn grid_upper(&self, model: &ModelSpec) -> f64 {
        self.grid.upper.unwrap_or(match default_truncation(model) {
            Truncation::Fixed(u) => u,
            Truncation::Auto { start, .. } => start,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Optimizer or root-finder iterations (0 for a pure grid search).
    pub iterations: usize,
    /// GCF-based integrand evaluations.
    pub evaluations: usize,
    /// Damping of the objective's kernel.
    pub nu: f64,
    pub nu_cdf: Option<f64>,
    /// Frequency truncation used by the quadrature or the grid.
    pub upper: f64,
    pub n_grid: Option<usize>,
    pub x1: Option<f64>,
    pub gamma: Option<f64>,
    /// Final search bracket, loss units.
    pub bracket: Option<(f64, f64)>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskResult {
    pub alpha: f64,
    pub var: f64,
    pub cvar: f64,
    pub algorithm: Algorithm,
    pub diagnostics: Diagnostics,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("alg4".parse::<Algorithm>().is_err());
    }

    #[test]
    fn loss_validation() {
        let ok = LossSpec::Exponential {
            v0: 100.0,
            r: 0.0,
            t: 0.25,
            model: ModelSpec::LogNormalReturn { mu: 0.0, sigma: 0.2, t: 0.25 },
        };
        assert!(ok.validate().is_ok());
        assert_eq!(ok.cap(), Some(100.0));
        let bad_model = LossSpec::Exponential {
            v0: 100.0,
            r: 0.0,
            t: 0.25,
            model: ModelSpec::Gaussian { mu: 0.0, sigma: 1.0 },
        };
        assert!(bad_model.validate().is_err());
        let bad_t = LossSpec::Exponential {
            v0: 100.0,
            r: 0.0,
            t: 0.5,
            model: ModelSpec::LogNormalReturn { mu: 0.0, sigma: 0.2, t: 0.25 },
        };
        assert!(bad_t.validate().is_err());
    }
}
