//! Monte Carlo references for the log-return models.
//!
//! Paths are split into batches, each with its own ChaCha stream derived
//! from the seed, so results do not depend on how batches are scheduled.
//! Merton, variance gamma and RSJD are sampled exactly; Heston uses a
//! full-truncation Euler scheme on the variance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelSpec, RsjdParams};

const MIN_PATHS: usize = 10_000;
/// Upper bound on `paths * steps`.
const MAX_WORK: f64 = 4e9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub paths: usize,
    /// Euler steps per year for the Heston variance.
    pub steps_per_year: usize,
    pub seed: u64,
    pub antithetic: bool,
    pub batches: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            paths: 1_000_000,
            steps_per_year: 250,
            seed: 20_240_601,
            antithetic: false,
            batches: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub var: f64,
    pub cvar: f64,
    pub se_var: f64,
    pub se_cvar: f64,
    pub paths: usize,
}

/// Normal draws with an optional sign flip, for antithetic pairs.
struct Draws<'a> {
    rng: &'a mut ChaCha8Rng,
    flip: bool,
}

impl Draws<'_> {
    fn normal(&mut self) -> f64 {
        let z: f64 = self.rng.sample(StandardNormal);
        if self.flip {
            -z
        } else {
            z
        }
    }

    fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean).expect("positive mean").sample(self.rng) as u64
    }
}

fn heston_steps(t: f64, per_year: usize) -> usize {
    ((per_year as f64 * t).ceil() as usize).max(1)
}

fn check_simulable(model: &ModelSpec, cfg: &McConfig) -> Result<()> {
    model.validate()?;
    if !model.is_log_return() {
        return Err(Error::InvalidParameter(format!(
            "{} is not a log-return model",
            model.name()
        )));
    }
    if cfg.paths < MIN_PATHS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_PATHS} paths, got {}", cfg.paths)));
    }
    if cfg.batches < 2 || cfg.batches > cfg.paths {
        return Err(Error::InvalidParameter(format!("batch count {} invalid", cfg.batches)));
    }
    if cfg.antithetic && !(cfg.paths / cfg.batches).is_multiple_of(2) {
        return Err(Error::InvalidParameter("antithetic sampling needs an even batch size".into()));
    }
    let steps = match model {
        ModelSpec::Heston { t, .. } => heston_steps(*t, cfg.steps_per_year),
        _ => 1,
    };
    let work = cfg.paths as f64 * steps as f64;
    if work > MAX_WORK {
        return Err(Error::SimulationBudgetExceeded(format!("{} paths x {steps} steps", cfg.paths)));
    }
    Ok(())
}

fn jump_sum(d: &mut Draws<'_>, count: u64, a: f64, b: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        let c = count as f64;
        c * a + b * c.sqrt() * d.normal()
    }
}

fn sample_rsjd(p: &RsjdParams, d: &mut Draws<'_>) -> f64 {
    let mut state = p.initial;
    let mut clock = 0.0;
    let mut x = 0.0;
    while clock < p.t {
        let rate = -p.generator[state][state];
        let hold = if rate > 0.0 {
            Exp::new(rate).expect("positive rate").sample(d.rng)
        } else {
            f64::INFINITY
        };
        let tau = hold.min(p.t - clock);
        let r = &p.regimes[state];
        x += (r.mu - 0.5 * r.sigma * r.sigma) * tau + r.sigma * tau.sqrt() * d.normal();
        let n = d.poisson(r.lambda * tau);
        x += jump_sum(d, n, r.a, r.b);
        clock += tau;
        if clock < p.t {
            // next state with probability q_ij / rate
            let mut u: f64 = d.rng.random::<f64>() * rate;
            let mut next = state;
            for (j, &q) in p.generator[state].iter().enumerate() {
                if j == state {
                    continue;
                }
                next = j;
                if u < q {
                    break;
                }
                u -= q;
            }
            state = next;
        }
    }
    x
}

/// One draw of `X_T`.
fn sample_one(model: &ModelSpec, d: &mut Draws<'_>, steps_per_year: usize) -> f64 {
    match *model {
        ModelSpec::LogNormalReturn { mu, sigma, t } => (mu - 0.5 * sigma * sigma) * t + sigma * t.sqrt() * d.normal(),
        ModelSpec::MertonJd { mu, sigma, lambda, a, b, t } => {
            let diffusion = (mu - 0.5 * sigma * sigma) * t + sigma * t.sqrt() * d.normal();
            let n = d.poisson(lambda * t);
            diffusion + jump_sum(d, n, a, b)
        }
        ModelSpec::VarianceGamma { theta, sigma, nu, t } => {
            let g = Gamma::new(t / nu, nu).expect("valid gamma").sample(d.rng);
            theta * g + sigma * g.sqrt() * d.normal()
        }
        ModelSpec::Heston { mu, v0, kappa, theta, sigma_v, rho, t } => {
            let n = heston_steps(t, steps_per_year);
            let dt = t / n as f64;
            let sq = dt.sqrt();
            let rho_c = (1.0 - rho * rho).sqrt();
            let mut v = v0;
            let mut x = 0.0;
            for _ in 0..n {
                let vp = v.max(0.0);
                let z1 = d.normal();
                let z2 = rho * z1 + rho_c * d.normal();
                x += (mu - 0.5 * vp) * dt + vp.sqrt() * sq * z1;
                v += kappa * (theta - vp) * dt + sigma_v * vp.sqrt() * sq * z2;
            }
            x
        }
        ModelSpec::Rsjd(ref p) => sample_rsjd(p, d),
        ModelSpec::Gaussian { .. } | ModelSpec::Binomial { .. } => unreachable!("checked by caller"),
    }
}

fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    rng
}

fn sample_batch(model: &ModelSpec, n: usize, cfg: &McConfig, batch: usize) -> Vec<f64> {
    let mut rng = batch_rng(cfg.seed, batch);
    let mut out = Vec::with_capacity(n);
    if cfg.antithetic {
        for _ in 0..n / 2 {
            let mut twin = rng.clone();
            out.push(sample_one(model, &mut Draws { rng: &mut rng, flip: false }, cfg.steps_per_year));
            out.push(sample_one(model, &mut Draws { rng: &mut twin, flip: true }, cfg.steps_per_year));
            // both members consumed the same uniforms; carry on from one of them
        }
    } else {
        for _ in 0..n {
            out.push(sample_one(model, &mut Draws { rng: &mut rng, flip: false }, cfg.steps_per_year));
        }
    }
    out
}

/// Draws of `X_T` in batch order; deterministic for a given configuration.
pub fn sample_log_returns(model: &ModelSpec, cfg: &McConfig) -> Result<Vec<Vec<f64>>> {
    check_simulable(model, cfg)?;
    let per = cfg.paths / cfg.batches;
    Ok((0..cfg.batches)
        .into_par_iter()
        .map(|b| sample_batch(model, per, cfg, b))
        .collect())
}

/// Pairwise sum, so the result does not depend on accumulation order
/// beyond the fixed split.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Lower empirical quantile and tail average of a loss sample.
fn empirical(mut losses: Vec<f64>, alpha: f64) -> (f64, f64) {
    losses.sort_by(f64::total_cmp);
    let n = losses.len();
    let idx = ((alpha * n as f64).ceil() as usize).clamp(1, n) - 1;
    let var = losses[idx];
    let excess: Vec<f64> = losses[idx..].iter().map(|&l| l - var).collect();
    let cvar = var + pairwise_sum(&excess) / (n as f64 * (1.0 - alpha));
    (var, cvar)
}

fn mean_se(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// VaR and CVaR of `L = V0 e^{rT} - V0 e^{X_T}` from simulation, with
/// batch-means standard errors.
pub fn mc_var_cvar(model: &ModelSpec, v0: f64, r: f64, t: f64, alpha: f64, cfg: &McConfig) -> Result<McResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(v0 > 0.0 && t > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter("need V0 > 0, T > 0, finite r".into()));
    }
    let cap = v0 * (r * t).exp();
    let batches = sample_log_returns(model, cfg)?;
    let losses: Vec<Vec<f64>> = batches
        .into_iter()
        .map(|b| b.into_iter().map(|x| cap - v0 * x.exp()).collect())
        .collect();
    let per_batch: Vec<(f64, f64)> = losses.par_iter().map(|b| empirical(b.clone(), alpha)).collect();
    let pooled: Vec<f64> = losses.into_iter().flatten().collect();
    let paths = pooled.len();
    let (var, cvar) = empirical(pooled, alpha);
    let vs: Vec<f64> = per_batch.iter().map(|p| p.0).collect();
    let cs: Vec<f64> = per_batch.iter().map(|p| p.1).collect();
    Ok(McResult {
        var,
        cvar,
        se_var: mean_se(&vs),
        se_cvar: mean_se(&cs),
        paths,
    })
}

/// Sample mean of `exp(i z X_T)` and its standard error (modulus of the
/// componentwise errors).
pub fn mc_characteristic(model: &ModelSpec, z: Complex64, cfg: &McConfig) -> Result<(Complex64, f64)> {
    let batches = sample_log_returns(model, cfg)?;
    let xs: Vec<f64> = batches.into_iter().flatten().collect();
    let vals: Vec<Complex64> = xs.iter().map(|&x| (Complex64::new(0.0, 1.0) * z * x).exp()).collect();
    let n = vals.len() as f64;
    let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
    let im: Vec<f64> = vals.iter().map(|v| v.im).collect();
    let mean = Complex64::new(pairwise_sum(&re) / n, pairwise_sum(&im) / n);
    let sd = |xs: &[f64], m: f64| (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0) / n).sqrt();
    let se = sd(&re, mean.re).hypot(sd(&im, mean.im));
    Ok((mean, se))
}
