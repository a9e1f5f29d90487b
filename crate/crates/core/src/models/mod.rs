//! Generalized characteristic functions `phi(z) = E[exp(i z Y)]` for the
//! supported distributions and log-return processes.
//!
//! A point `z = u + i nu` of the complex plane is only admissible when the
//! exponential moment `E[exp(-nu Y)]` is finite. [`ModelSpec::moment_strip`]
//! returns that set of `nu`, and [`ModelSpec::damping_strip`] intersects it
//! with the sign constraint of each Fourier payoff kernel.

mod heston;
mod linalg;
mod rsjd;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use heston::heston_gcf;
pub use linalg::{matrix_exp, CMatrix};
pub use rsjd::{gcf_rsjd_general, gcf_rsjd_two_state, Regime, RsjdParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point `z = u + i nu` in the frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub u: f64,
    pub nu: f64,
}

impl ComplexPoint {
    pub fn new(u: f64, nu: f64) -> Result<Self> {
        if !u.is_finite() || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "complex point must be finite, got {u} + {nu}i"
            )));
        }
        Ok(Self { u, nu })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.u, self.nu)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.z()
    }
}

/// Open interval `(lo, hi)` of damping values; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingStrip {
    pub lo: f64,
    pub hi: f64,
}

impl DampingStrip {
    pub const REAL_LINE: DampingStrip = DampingStrip {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyStrip(format!("({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, nu: f64) -> bool {
        nu > self.lo && nu < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }

    pub fn intersect(&self, other: &DampingStrip) -> Result<Self> {
        Self::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn check(&self, nu: f64) -> Result<()> {
        if self.contains(nu) {
            Ok(())
        } else {
            Err(Error::StripViolation {
                nu,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Moves `nu` inside the strip, keeping a margin of `frac` times the
    /// width from finite ends. Half-infinite strips keep a unit-scaled margin.
    pub fn clamp_with_margin(&self, nu: f64, frac: f64) -> f64 {
        let w = self.width();
        let margin = if w.is_finite() { frac * w } else { frac.max(0.05) * 5.0 };
        let lo = self.lo + margin;
        let hi = self.hi - margin;
        if lo >= hi {
            return 0.5 * (self.lo + self.hi);
        }
        nu.clamp(lo, hi)
    }
}

/// Fourier payoff kernels and their damping sign constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kernel {
    /// `(y - v)^+`, needs `nu < 0`.
    StopLoss,
    /// `1{y <= v}`, needs `nu > 0`.
    Cdf,
    /// `(e^x - e^k)^+`, needs `nu < 0` and `E[exp((1 - nu) X)]` finite.
    Call,
    /// `(e^k - e^x)^+`, needs `nu > 1` and `E[exp((1 - nu) X)]` finite.
    Put,
}

impl Kernel {
    fn sign_constraint(self) -> DampingStrip {
        match self {
            Kernel::StopLoss | Kernel::Call => DampingStrip {
                lo: f64::NEG_INFINITY,
                hi: 0.0,
            },
            Kernel::Cdf => DampingStrip {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            Kernel::Put => DampingStrip {
                lo: 1.0,
                hi: f64::INFINITY,
            },
        }
    }

    /// Damping used when the caller does not pick one.
    pub fn default_damping(self) -> f64 {
        match self {
            Kernel::StopLoss | Kernel::Call => -1.5,
            Kernel::Cdf => 1.5,
            Kernel::Put => 1.75,
        }
    }
}

/// The supported loss / log-return laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    Binomial {
        n: u32,
        p: f64,
    },
    /// `X_T = (mu - sigma^2/2) T + sigma W_T`.
    LogNormalReturn {
        mu: f64,
        sigma: f64,
        t: f64,
    },
    /// Diffusion plus compound Poisson jumps with `N(a, b^2)` sizes.
    MertonJd {
        mu: f64,
        sigma: f64,
        lambda: f64,
        a: f64,
        b: f64,
        t: f64,
    },
    /// Brownian motion with drift `theta` run on a gamma clock of variance rate `nu`.
    VarianceGamma {
        theta: f64,
        sigma: f64,
        nu: f64,
        t: f64,
    },
    Heston {
        mu: f64,
        v0: f64,
        kappa: f64,
        theta: f64,
        sigma_v: f64,
        rho: f64,
        t: f64,
    },
    Rsjd(RsjdParams),
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

/// `exp(i mu z - sigma^2 z^2 / 2)`
fn normal_gcf(mean: f64, var: f64, z: Complex64) -> Complex64 {
    (I * mean * z - 0.5 * var * z * z).exp()
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Gaussian { .. } => "gaussian",
            ModelSpec::Binomial { .. } => "binomial",
            ModelSpec::LogNormalReturn { .. } => "lognormal",
            ModelSpec::MertonJd { .. } => "merton",
            ModelSpec::VarianceGamma { .. } => "vg",
            ModelSpec::Heston { .. } => "heston",
            ModelSpec::Rsjd(_) => "rsjd",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Gaussian { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            ModelSpec::Binomial { n, p } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("n must be >= 1".into()));
                }
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::InvalidParameter(format!("p must be in (0,1), got {p}")));
                }
                Ok(())
            }
            ModelSpec::LogNormalReturn { mu, sigma, t } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                positive("T", t)
            }
            ModelSpec::MertonJd {
                mu,
                sigma,
                lambda,
                a,
                b,
                t,
            } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                non_negative("lambda", lambda)?;
                finite("a", a)?;
                non_negative("b", b)?;
                positive("T", t)
            }
            ModelSpec::VarianceGamma { theta, sigma, nu, t } => {
                finite("theta", theta)?;
                positive("sigma", sigma)?;
                positive("nu", nu)?;
                positive("T", t)
            }
            ModelSpec::Heston {
                mu,
                v0,
                kappa,
                theta,
                sigma_v,
                rho,
                t,
            } => {
                finite("mu", mu)?;
                positive("v0", v0)?;
                positive("kappa", kappa)?;
                positive("theta", theta)?;
                positive("sigma_v", sigma_v)?;
                if !(rho > -1.0 && rho <= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "rho must be in (-1, 0], got {rho}"
                    )));
                }
                positive("T", t)
            }
            ModelSpec::Rsjd(ref p) => p.validate(),
        }
    }

    /// True for models describing a log-return `X_T`, usable inside an
    /// exponential loss.
    pub fn is_log_return(&self) -> bool {
        !matches!(self, ModelSpec::Gaussian { .. } | ModelSpec::Binomial { .. })
    }

    /// False for laws with atoms (the binomial).
    pub fn has_continuous_cdf(&self) -> bool {
        !matches!(self, ModelSpec::Binomial { .. })
    }

    pub fn horizon(&self) -> Option<f64> {
        match *self {
            ModelSpec::Gaussian { .. } | ModelSpec::Binomial { .. } => None,
            ModelSpec::LogNormalReturn { t, .. }
            | ModelSpec::MertonJd { t, .. }
            | ModelSpec::VarianceGamma { t, .. }
            | ModelSpec::Heston { t, .. } => Some(t),
            ModelSpec::Rsjd(ref p) => Some(p.t),
        }
    }

    /// `Some(2 kappa theta > sigma_v^2)` for Heston, `None` otherwise.
    pub fn feller_satisfied(&self) -> Option<bool> {
        match *self {
            ModelSpec::Heston {
                kappa,
                theta,
                sigma_v,
                ..
            } => Some(2.0 * kappa * theta > sigma_v * sigma_v),
            _ => None,
        }
    }

    /// Set of `nu` with `E[exp(-nu Y)] < inf`.
    ///
    /// Only the variance gamma law has a finite strip here; it is bounded by
    /// the roots of `1 + theta nu_vg nu - sigma^2 nu_vg nu^2 / 2`. The other
    /// models are treated as having every exponential moment, with overflow
    /// caught at evaluation time.
    pub fn moment_strip(&self) -> DampingStrip {
        match *self {
            ModelSpec::VarianceGamma { theta, sigma, nu, .. } => {
                // a nu^2 + b nu + 1 = 0 with a < 0
                let a = -0.5 * sigma * sigma * nu;
                let b = theta * nu;
                let disc = (b * b - 4.0 * a).sqrt();
                let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
                let q = -0.5 * (b + sgn * disc);
                let (r1, r2) = (q / a, 1.0 / q);
                DampingStrip {
                    lo: r1.min(r2),
                    hi: r1.max(r2),
                }
            }
            _ => DampingStrip::REAL_LINE,
        }
    }

    /// Admissible damping for `kernel`: the kernel's sign constraint
    /// intersected with the moment strip (shifted by one for the exponential
    /// payoffs, whose GCF is evaluated at `z - i`).
    pub fn damping_strip(&self, kernel: Kernel) -> Result<DampingStrip> {
        let moments = match kernel {
            Kernel::StopLoss | Kernel::Cdf => self.moment_strip(),
            Kernel::Call | Kernel::Put => self.moment_strip().shifted(1.0),
        };
        kernel
            .sign_constraint()
            .intersect(&moments)
            .map_err(|_| Error::EmptyStrip(format!("{kernel:?} for {} model", self.name())))
    }

    /// Default damping for `kernel`, clamped into the admissible strip with a
    /// margin of 10% of its width.
    pub fn default_damping(&self, kernel: Kernel) -> Result<f64> {
        let strip = self.damping_strip(kernel)?;
        Ok(strip.clamp_with_margin(kernel.default_damping(), 0.1))
    }

    pub fn gcf_at(&self, p: ComplexPoint) -> Result<Complex64> {
        self.gcf(p.z())
    }

    /// `E[exp(i z Y)]`.
    pub fn gcf(&self, z: Complex64) -> Result<Complex64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite frequency {z}")));
        }
        self.moment_strip().check(z.im)?;
        let value = match *self {
            ModelSpec::Gaussian { mu, sigma } => normal_gcf(mu, sigma * sigma, z),
            ModelSpec::Binomial { n, p } => (1.0 - p + p * (I * z).exp()).powi(n as i32),
            ModelSpec::LogNormalReturn { mu, sigma, t } => {
                normal_gcf((mu - 0.5 * sigma * sigma) * t, sigma * sigma * t, z)
            }
            ModelSpec::MertonJd {
                mu,
                sigma,
                lambda,
                a,
                b,
                t,
            } => {
                let jump = normal_gcf(a, b * b, z);
                (I * (mu - 0.5 * sigma * sigma) * t * z - 0.5 * sigma * sigma * t * z * z
                    + lambda * t * (jump - 1.0))
                    .exp()
            }
            ModelSpec::VarianceGamma { theta, sigma, nu, t } => {
                // Re(base) > 0 across the whole strip, so the principal log
                // never crosses its cut along a contour.
                let base = 1.0 - I * theta * nu * z + 0.5 * sigma * sigma * nu * z * z;
                (-(t / nu) * base.ln()).exp()
            }
            ModelSpec::Heston {
                mu,
                v0,
                kappa,
                theta,
                sigma_v,
                rho,
                t,
            } => heston_gcf(mu, v0, kappa, theta, sigma_v, rho, t, z),
            ModelSpec::Rsjd(ref p) => {
                if p.regimes.len() == 2 {
                    match gcf_rsjd_two_state(p, z) {
                        Err(Error::DegenerateRoots(_)) => gcf_rsjd_general(p, z)?,
                        other => other?,
                    }
                } else {
                    gcf_rsjd_general(p, z)?
                }
            }
        };
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NumericalOverflow(format!(
                "{} gcf at {z} is not finite",
                self.name()
            )));
        }
        Ok(value)
    }

    /// Cumulant generating function `log E[exp(s Y)]` for real `s`.
    pub fn log_mgf(&self, s: f64) -> Result<f64> {
        let v = self.gcf(Complex64::new(0.0, -s))?;
        Ok(v.re.ln())
    }

    /// Mean and variance from central differences of the cumulant
    /// generating function. Used for brackets and automatic grids only.
    pub fn mean_variance(&self) -> Result<(f64, f64)> {
        let strip = self.moment_strip();
        let mut h = 1e-3;
        while !(strip.contains(-h) && strip.contains(h)) {
            h *= 0.1;
        }
        let kp = self.log_mgf(h)?;
        let km = self.log_mgf(-h)?;
        let mean = (kp - km) / (2.0 * h);
        let var = ((kp + km) / (h * h)).max(0.0);
        Ok((mean, var))
    }
}
