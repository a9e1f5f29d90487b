use std::cell::Cell;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use super::kernels::{
    cdf_bar_counted, cdf_body, exp_payoff_body, put_counted, stop_loss_body, stop_loss_counted, Integration,
};
use super::optimize::{brent_root, golden_section_minimize};
use super::{Algorithm, Diagnostics, LossSpec, RiskConfig, RiskResult};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::transforms::{grid_integral, FreqGrid, SpaceGrid, TransformMode};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// `e^{rT}`, the cap on `L / V0`.
fn scaled_cap(loss: &LossSpec) -> Option<f64> {
    match *loss {
        LossSpec::Direct { .. } => None,
        LossSpec::Exponential { r, t, .. } => Some((r * t).exp()),
    }
}

/// `G(x)` in loss units: `x + E[(L - x)^+] / (1 - alpha)`.
///
/// `nu` is the damping of the matching kernel (stop-loss for direct losses,
/// the exponential payoff otherwise) and `integ.tol` bounds the error of
/// the expectation, in units of `L / V0` for exponential losses.
pub fn g_objective(loss: &LossSpec, alpha: f64, x: f64, nu: f64, integ: &Integration) -> Result<f64> {
    check_alpha(alpha)?;
    if !x.is_finite() {
        return Err(Error::DomainViolation(format!("x must be finite, got {x}")));
    }
    match loss {
        LossSpec::Direct { model } => Ok(x + stop_loss_counted(model, x, nu, integ)?.0 / (1.0 - alpha)),
        LossSpec::Exponential { v0, model, .. } => {
            let cap = scaled_cap(loss).unwrap();
            let v = x / v0;
            if v >= cap {
                return Ok(x);
            }
            let put = put_counted(model, (cap - v).ln(), nu, integ)?.0;
            Ok(v0 * (v + put / (1.0 - alpha)))
        }
    }
}

/// The objective on `L / V0` with its truncation resolved once.
struct Objective<'a> {
    model: &'a ModelSpec,
    cap: Option<f64>,
    alpha: f64,
    nu: f64,
    integ: Integration,
    evals: Cell<usize>,
}

impl<'a> Objective<'a> {
    fn new(loss: &'a LossSpec, alpha: f64, cfg: &RiskConfig) -> Result<Self> {
        let model = loss.model();
        let nu = cfg.objective_nu(loss)?;
        let trunc = cfg.truncation_for(model);
        let upper = match loss {
            LossSpec::Direct { .. } => trunc.resolve(stop_loss_body(model, nu))?,
            LossSpec::Exponential { .. } => trunc.resolve(exp_payoff_body(model, nu))?,
        };
        Ok(Self {
            model,
            cap: scaled_cap(loss),
            alpha,
            nu,
            integ: Integration {
                truncation: crate::transforms::Truncation::Fixed(upper),
                tol: cfg.quad_tol * (1.0 - alpha),
            },
            evals: Cell::new(0),
        })
    }

    fn upper(&self) -> f64 {
        match self.integ.truncation {
            crate::transforms::Truncation::Fixed(u) => u,
            _ => unreachable!(),
        }
    }

    fn g(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::DomainViolation(format!("x must be finite, got {v}")));
        }
        let (expect, n) = match self.cap {
            None => stop_loss_counted(self.model, v, self.nu, &self.integ)?,
            Some(cap) => {
                if v >= cap {
                    return Ok(v);
                }
                put_counted(self.model, (cap - v).ln(), self.nu, &self.integ)?
            }
        };
        self.evals.set(self.evals.get() + n);
        Ok(v + expect / (1.0 - self.alpha))
    }
}

/// Search bracket on `L / V0`.
fn default_bracket(loss: &LossSpec, cfg: &RiskConfig) -> Result<(f64, f64)> {
    if let Some((a, b)) = cfg.bracket {
        let s = loss.scale();
        return Ok((a / s, b / s));
    }
    let (m, var) = loss.model().mean_variance()?;
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return Err(Error::BracketFailure("degenerate loss distribution".into()));
    }
    Ok(match scaled_cap(loss) {
        None => (m - 4.0 * sd, m + 10.0 * sd),
        Some(cap) => (cap - (m + 6.0 * sd).exp(), cap * (1.0 - 1e-9)),
    })
}

fn finish(
    loss: &LossSpec,
    alpha: f64,
    algorithm: Algorithm,
    v: f64,
    g: f64,
    mut diagnostics: Diagnostics,
    start: Instant,
) -> RiskResult {
    let s = loss.scale();
    diagnostics.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    diagnostics.bracket = diagnostics.bracket.map(|(a, b)| (a * s, b * s));
    RiskResult {
        alpha,
        var: v * s,
        cvar: g * s,
        algorithm,
        diagnostics,
    }
}

/// Two steps: the VaR as the root of `P(L <= q) = alpha`, then `CVaR = G(VaR)`.
pub fn var_cvar_alg1(loss: &LossSpec, alpha: f64, cfg: &RiskConfig) -> Result<RiskResult> {
    let start = Instant::now();
    check_alpha(alpha)?;
    loss.validate()?;
    let model = loss.model();
    if !model.has_continuous_cdf() {
        return Err(Error::DiscontinuousCdf);
    }
    let obj = Objective::new(loss, alpha, cfg)?;
    let nu_cdf = cfg.cdf_nu(loss)?;
    let trunc = cfg.truncation_for(model);
    let cdf_integ = Integration {
        truncation: crate::transforms::Truncation::Fixed(trunc.resolve(cdf_body(model, nu_cdf))?),
        tol: cfg.quad_tol,
    };
    let cap = scaled_cap(loss);
    let cdf_evals = Cell::new(0usize);
    // P(L / V0 <= v) - alpha
    let excess = |v: f64| -> Result<f64> {
        let p = match cap {
            None => {
                let (p, n) = cdf_bar_counted(model, v, nu_cdf, &cdf_integ)?;
                cdf_evals.set(cdf_evals.get() + n);
                p
            }
            Some(c) if v >= c => 1.0,
            Some(c) => {
                let (p, n) = cdf_bar_counted(model, (c - v).ln(), nu_cdf, &cdf_integ)?;
                cdf_evals.set(cdf_evals.get() + n);
                1.0 - p
            }
        };
        Ok(p - alpha)
    };

    let (mut lo, mut hi) = default_bracket(loss, cfg)?;
    if cfg.bracket.is_none() {
        // Start the search in the body of the law. Far in the right tail
        // exp(nu v) amplifies rounding in the CDF integral, and near the cap
        // k -> -inf makes the integrand oscillate too fast for the quadrature.
        let (m, var) = model.mean_variance()?;
        let sd = var.sqrt();
        hi = match cap {
            None => hi.min(m + 6.0 * sd),
            Some(c) => hi.min(c - (m - 6.0 * sd).exp()),
        };
    }
    let mut widened = 0;
    while excess(lo)? > 0.0 {
        lo -= hi - lo;
        widened += 1;
        if widened > 60 {
            return Err(Error::BracketFailure("could not bracket the quantile from below".into()));
        }
    }
    while excess(hi)? < 0.0 {
        match cap {
            Some(c) if hi >= c * (1.0 - 1e-9) => {
                return Err(Error::BracketFailure("quantile not below the loss cap".into()));
            }
            Some(c) => hi = (0.5 * (hi + c)).min(c * (1.0 - 1e-9)),
            None => hi += hi - lo,
        }
        widened += 1;
        if widened > 60 {
            return Err(Error::BracketFailure("could not bracket the quantile from above".into()));
        }
    }
    let root = brent_root(excess, lo, hi, cfg.root_tol)?;
    let g = obj.g(root.x)?;
    let diag = Diagnostics {
        iterations: root.iterations,
        evaluations: obj.evals.get() + cdf_evals.get(),
        nu: obj.nu,
        nu_cdf: Some(nu_cdf),
        upper: obj.upper(),
        bracket: Some((lo, hi)),
        ..Default::default()
    };
    Ok(finish(loss, alpha, Algorithm::Alg1, root.x, g, diag, start))
}

/// Golden-section minimization of `G` over the bracket.
pub fn var_cvar_alg2(loss: &LossSpec, alpha: f64, cfg: &RiskConfig) -> Result<RiskResult> {
    let start = Instant::now();
    check_alpha(alpha)?;
    loss.validate()?;
    let obj = Objective::new(loss, alpha, cfg)?;
    let (a, b) = default_bracket(loss, cfg)?;
    let m = golden_section_minimize(|v| obj.g(v), a, b, cfg.x_tol)?;
    let diag = Diagnostics {
        iterations: m.iterations,
        evaluations: obj.evals.get(),
        nu: obj.nu,
        upper: obj.upper(),
        bracket: Some((a, b)),
        ..Default::default()
    };
    Ok(finish(loss, alpha, Algorithm::Alg2, m.x, m.f, diag, start))
}

/// `G` sampled on a grid: loss values (`L / V0` units) and objective values.
struct GridObjective {
    losses: Vec<f64>,
    values: Vec<f64>,
    nu: f64,
    upper: f64,
    x1: f64,
    gamma: f64,
    n: usize,
}

impl GridObjective {
    /// Smallest value; exact ties go to the smaller loss.
    fn argmin(&self) -> Result<usize> {
        let mut best: Option<usize> = None;
        for (i, (&l, &g)) in self.losses.iter().zip(&self.values).enumerate() {
            if !g.is_finite() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(j) => {
                    let gj = self.values[j];
                    if g < gj || (g == gj && l < self.losses[j]) {
                        Some(i)
                    } else {
                        Some(j)
                    }
                }
            };
        }
        best.ok_or_else(|| Error::NumericalOverflow("objective not finite anywhere on the grid".into()))
    }
}

fn grid_objective(loss: &LossSpec, alpha: f64, cfg: &RiskConfig, mode: TransformMode) -> Result<GridObjective> {
    let model = loss.model();
    let nu = cfg.objective_nu(loss)?;
    let upper = cfg.grid_upper(model);
    let n = cfg.grid.n;
    let freq = FreqGrid::new(upper, n, cfg.grid.rule, nu)?;
    let (m, var) = model.mean_variance()?;
    let sd = var.sqrt();
    let fft_gamma = 2.0 * PI / (freq.delta * n as f64);
    match scaled_cap(loss) {
        None => {
            model.damping_strip(crate::models::Kernel::StopLoss)?.check(nu)?;
            let x1 = cfg.grid.x1.unwrap_or(m - 4.0 * sd);
            let gamma = match mode {
                TransformMode::Fft => fft_gamma,
                TransformMode::Frft => cfg.grid.gamma.unwrap_or(14.0 * sd / (n - 1) as f64),
            };
            let space = SpaceGrid { x1, gamma, n };
            let integral = grid_integral(stop_loss_body(model, nu), &freq, &space, mode)?;
            let losses = space.points();
            let values = losses
                .iter()
                .zip(&integral)
                .map(|(&x, &i)| x - (nu * x).exp() * i / (1.0 - alpha))
                .collect();
            Ok(GridObjective { losses, values, nu, upper, x1, gamma, n })
        }
        Some(cap) => {
            let kernel = if nu > 1.0 {
                crate::models::Kernel::Put
            } else {
                crate::models::Kernel::Call
            };
            model.damping_strip(kernel)?.check(nu)?;
            let right = cap.ln();
            let gamma = match mode {
                TransformMode::Fft => fft_gamma,
                TransformMode::Frft => cfg
                    .grid
                    .gamma
                    .unwrap_or(((right - (m - 8.0 * sd)) / (n - 1) as f64).max(1e-12)),
            };
            let x1 = cfg.grid.x1.unwrap_or(right - gamma * (n - 1) as f64);
            let space = SpaceGrid { x1, gamma, n };
            let integral = grid_integral(exp_payoff_body(model, nu), &freq, &space, mode)?;
            let parity = if nu > 1.0 {
                None
            } else {
                Some(model.gcf(Complex64::new(0.0, -1.0))?.re)
            };
            let ks = space.points();
            let losses: Vec<f64> = ks.iter().map(|&k| cap - k.exp()).collect();
            let values = ks
                .iter()
                .zip(&integral)
                .zip(&losses)
                .map(|((&k, &i), &v)| {
                    let mut put = (nu * k).exp() * i;
                    if let Some(mean) = parity {
                        put += k.exp() - mean;
                    }
                    v + put / (1.0 - alpha)
                })
                .collect();
            Ok(GridObjective { losses, values, nu, upper, x1, gamma, n })
        }
    }
}

/// Grid minimum of `G` from one FFT or FRFT.
pub fn var_cvar_alg3(loss: &LossSpec, alpha: f64, cfg: &RiskConfig, mode: TransformMode) -> Result<RiskResult> {
    let start = Instant::now();
    check_alpha(alpha)?;
    loss.validate()?;
    let grid = grid_objective(loss, alpha, cfg, mode)?;
    let j = grid.argmin()?;
    let diag = Diagnostics {
        evaluations: grid.n,
        nu: grid.nu,
        upper: grid.upper,
        n_grid: Some(grid.n),
        x1: Some(grid.x1),
        gamma: Some(grid.gamma),
        ..Default::default()
    };
    let algorithm = match mode {
        TransformMode::Fft => Algorithm::Alg3Fft,
        TransformMode::Frft => Algorithm::Alg3Frft,
    };
    Ok(finish(loss, alpha, algorithm, grid.losses[j], grid.values[j], diag, start))
}

/// FRFT grid minimum as a starting point, then golden-section refinement of
/// `G` on two grid cells either side, widened while the optimum sits on an
/// edge of the bracket.
pub fn var_cvar_hybrid(loss: &LossSpec, alpha: f64, cfg: &RiskConfig) -> Result<RiskResult> {
    let start = Instant::now();
    check_alpha(alpha)?;
    loss.validate()?;
    let grid = grid_objective(loss, alpha, cfg, TransformMode::Frft)?;
    let j = grid.argmin()?;
    let x0 = grid.losses[j];
    let step = |i: usize, k: usize| (grid.losses[i] - grid.losses[k]).abs();
    let mut h: f64 = 0.0;
    if j > 0 {
        h = h.max(step(j, j - 1));
    }
    if j + 1 < grid.n {
        h = h.max(step(j, j + 1));
    }
    let h = h.max(cfg.x_tol);

    let obj = Objective::new(loss, alpha, cfg)?;
    let hard_hi = scaled_cap(loss).map(|c| c * (1.0 - 1e-12));
    let clip = |b: f64| hard_hi.map_or(b, |c| b.min(c));
    let (mut a, mut b) = (x0 - 2.0 * h, clip(x0 + 2.0 * h));
    let mut iterations = 0;
    let mut best;
    let mut rounds = 0;
    loop {
        best = golden_section_minimize(|v| obj.g(v), a, b, cfg.x_tol)?;
        iterations += best.iterations;
        let edge = 2.0 * cfg.x_tol;
        let at_lo = best.x - a <= edge;
        let at_hi = b - best.x <= edge && hard_hi.is_none_or(|c| b < c);
        if !(at_lo || at_hi) {
            break;
        }
        rounds += 1;
        if rounds > 40 {
            return Err(Error::BracketFailure("refinement bracket kept growing".into()));
        }
        let half = b - a;
        a = best.x - half;
        b = clip(best.x + half);
    }
    let diag = Diagnostics {
        iterations,
        evaluations: grid.n + obj.evals.get(),
        nu: obj.nu,
        upper: obj.upper(),
        n_grid: Some(grid.n),
        x1: Some(grid.x1),
        gamma: Some(grid.gamma),
        bracket: Some((a, b)),
        wall_ms: 0.0,
        nu_cdf: None,
    };
    Ok(finish(loss, alpha, Algorithm::Hybrid, best.x, best.f, diag, start))
}

/// Dispatch on `algorithm`.
pub fn compute(loss: &LossSpec, alpha: f64, algorithm: Algorithm, cfg: &RiskConfig) -> Result<RiskResult> {
    match algorithm {
        Algorithm::Alg1 => var_cvar_alg1(loss, alpha, cfg),
        Algorithm::Alg2 => var_cvar_alg2(loss, alpha, cfg),
        Algorithm::Alg3Fft => var_cvar_alg3(loss, alpha, cfg, TransformMode::Fft),
        Algorithm::Alg3Frft => var_cvar_alg3(loss, alpha, cfg, TransformMode::Frft),
        Algorithm::Hybrid => var_cvar_hybrid(loss, alpha, cfg),
    }
}
