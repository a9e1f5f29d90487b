//! Fourier representations of the payoff expectations.
//!
//! Every quantity is `exp(nu x) * I(x)` (up to sign) with
//! `I(x) = (1/pi) int_0^upper Re[exp(-i u x) F(u)] du` and `F` built from the
//! GCF on the contour `z = u + i nu`. The `*_body` functions return `F` so the
//! same integrand can be handed to the quadrature or to the grid transforms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{Kernel, ModelSpec};
use crate::transforms::{fourier_integral, Truncation};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Truncation and tolerance for one Fourier integral.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Integration {
    pub truncation: Truncation,
    /// Absolute tolerance on the returned expectation.
    pub tol: f64,
}

impl Integration {
    pub fn for_model(model: &ModelSpec) -> Self {
        Self {
            truncation: default_truncation(model),
            tol: 1e-12,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Fixed ranges for the benchmark laws (`[0, 100]`, or `[0, 200]` for the
/// binomial whose GCF does not decay), the tail rule for everything else.
pub fn default_truncation(model: &ModelSpec) -> Truncation {
    match model {
        ModelSpec::Gaussian { .. } | ModelSpec::LogNormalReturn { .. } => Truncation::Fixed(100.0),
        ModelSpec::Binomial { .. } => Truncation::Fixed(200.0),
        _ => Truncation::Auto {
            start: 100.0,
            tail_tol: 1e-12,
        },
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu.abs() <= 1e-8 {
        return Err(Error::InvalidParameter(format!("damping must be finite and nonzero, got {nu}")));
    }
    Ok(())
}

/// `phi(z) / z^2`; with `nu < 0`, `E[(Y - v)^+] = -exp(nu v) I(v)`.
pub fn stop_loss_body(model: &ModelSpec, nu: f64) -> impl Fn(f64) -> Result<Complex64> + Sync + '_ {
    move |u| {
        let z = Complex64::new(u, nu);
        Ok(model.gcf(z)? / (z * z))
    }
}

/// `i phi(z) / z`; with `nu > 0`, `(P(Y < v) + P(Y <= v)) / 2 = exp(nu v) I(v)`.
pub fn cdf_body(model: &ModelSpec, nu: f64) -> impl Fn(f64) -> Result<Complex64> + Sync + '_ {
    move |u| {
        let z = Complex64::new(u, nu);
        Ok(model.gcf(z)? * I / z)
    }
}

/// `phi(z - i) / (i z - z^2)`. With `nu > 1`, `exp(nu k) I(k)` is the put
/// `E[(e^k - e^X)^+]`; with `nu < 0` it is the call `E[(e^X - e^k)^+]`.
pub fn exp_payoff_body(model: &ModelSpec, nu: f64) -> impl Fn(f64) -> Result<Complex64> + Sync + '_ {
    move |u| {
        let z = Complex64::new(u, nu);
        let denom = Complex64::new(nu * nu - nu - u * u, u * (1.0 - 2.0 * nu));
        Ok(model.gcf(z - I)? / denom)
    }
}

/// Integral with the tolerance on `scale * I` held at `tol`.
fn damped<F>(body: F, x: f64, nu: f64, integ: &Integration) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let upper = integ.truncation.resolve(&body)?;
    let scale = (nu * x).exp();
    if !scale.is_finite() {
        return Err(Error::NumericalOverflow(format!("exp({nu} * {x}) overflows")));
    }
    // guard against a zero scale making the tolerance infinite
    let tol = (integ.tol / scale).min(1.0);
    let r = fourier_integral(body, x, upper, tol)?;
    Ok((scale * r.value, r.evaluations))
}

/// `F` of `Y - m` from `F` of `Y`: the factor `exp(-i z m)`.
///
/// Working on `Y - m` keeps `exp(nu (v - m))` and `E[exp(-nu (Y - m))]` of
/// moderate size whatever the location of `Y`; otherwise their product
/// amplifies rounding in `I`.
fn centred<F>(body: F, m: f64, nu: f64) -> impl Fn(f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    move |u| Ok((-I * Complex64::new(u, nu) * m).exp() * body(u)?)
}

fn model_mean(model: &ModelSpec) -> Result<f64> {
    Ok(model.mean_variance()?.0)
}

pub(crate) fn stop_loss_counted(model: &ModelSpec, v: f64, nu: f64, integ: &Integration) -> Result<(f64, usize)> {
    check_nu(nu)?;
    model.damping_strip(Kernel::StopLoss)?.check(nu)?;
    let m = model_mean(model)?;
    let (val, n) = damped(centred(stop_loss_body(model, nu), m, nu), v - m, nu, integ)?;
    Ok((-val, n))
}

pub(crate) fn cdf_bar_counted(model: &ModelSpec, v: f64, nu: f64, integ: &Integration) -> Result<(f64, usize)> {
    check_nu(nu)?;
    model.damping_strip(Kernel::Cdf)?.check(nu)?;
    let m = model_mean(model)?;
    damped(centred(cdf_body(model, nu), m, nu), v - m, nu, integ)
}

fn exp_mean(model: &ModelSpec) -> Result<f64> {
    Ok(model.gcf(Complex64::new(0.0, -1.0))?.re)
}

/// Put when `nu > 1`, call when `nu < 0`.
fn exp_payoff(model: &ModelSpec, k: f64, nu: f64, integ: &Integration) -> Result<(f64, usize)> {
    check_nu(nu)?;
    if !k.is_finite() {
        return Err(Error::DomainViolation(format!("log-threshold must be finite, got {k}")));
    }
    let kernel = if nu > 1.0 { Kernel::Put } else { Kernel::Call };
    model.damping_strip(kernel)?.check(nu)?;
    damped(exp_payoff_body(model, nu), k, nu, integ)
}

pub(crate) fn put_counted(model: &ModelSpec, k: f64, nu: f64, integ: &Integration) -> Result<(f64, usize)> {
    let (v, n) = exp_payoff(model, k, nu, integ)?;
    if nu > 1.0 {
        Ok((v, n))
    } else {
        // parity: put = call - E[e^X] + e^k
        Ok((v - exp_mean(model)? + k.exp(), n))
    }
}

/// `E[(Y - v)^+]`, `nu < 0`.
pub fn stop_loss(model: &ModelSpec, v: f64, nu: f64, integ: &Integration) -> Result<f64> {
    Ok(stop_loss_counted(model, v, nu, integ)?.0)
}

/// `(P(Y < v) + P(Y <= v)) / 2`, `nu > 0`. Equals the CDF wherever it is
/// continuous.
pub fn cdf_bar(model: &ModelSpec, v: f64, nu: f64, integ: &Integration) -> Result<f64> {
    Ok(cdf_bar_counted(model, v, nu, integ)?.0)
}

/// `E[(e^k - e^X)^+]` for a log-return model. `nu > 1` integrates the put
/// directly; `nu < 0` integrates the call and converts by parity.
pub fn put_expectation(model: &ModelSpec, k: f64, nu: f64, integ: &Integration) -> Result<f64> {
    Ok(put_counted(model, k, nu, integ)?.0)
}

/// `E[(e^X - e^k)^+]`; mirror of [`put_expectation`].
pub fn call_expectation(model: &ModelSpec, k: f64, nu: f64, integ: &Integration) -> Result<f64> {
    let (v, _) = exp_payoff(model, k, nu, integ)?;
    if nu < 0.0 {
        Ok(v)
    } else {
        Ok(v + exp_mean(model)? - k.exp())
    }
}
