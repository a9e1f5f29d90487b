//! Evaluation of runs, sweeps and benchmarks.

use std::time::Instant;

use cfrisk::oracles::{binomial_pmf, discrete_var_cvar, gaussian_var_cvar, lognormal_var_cvar, mc_var_cvar};
use cfrisk::risk::compute;
use cfrisk::{Algorithm, LossSpec, ModelSpec, RiskResult};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{config_err, CliError};
use crate::report::{Report, Row};

/// Reference `(VaR, CVaR)` in loss units, or `None` when no oracle applies.
pub fn oracle(cfg: &RunConfig, loss: &LossSpec, alpha: f64) -> cfrisk::Result<Option<(f64, f64)>> {
    let v = match loss {
        LossSpec::Direct { model: ModelSpec::Gaussian { mu, sigma } } => gaussian_var_cvar(*mu, *sigma, alpha)?,
        LossSpec::Direct { model: ModelSpec::Binomial { n, p } } => discrete_var_cvar(&binomial_pmf(*n, *p), alpha)?,
        LossSpec::Direct { .. } => return Ok(None),
        LossSpec::Exponential { v0, r, t, model: ModelSpec::LogNormalReturn { mu, sigma, .. } } => {
            lognormal_var_cvar(*v0, *r, *t, *mu, *sigma, alpha)?
        }
        LossSpec::Exponential { v0, r, t, model } => {
            let m = mc_var_cvar(model, *v0, *r, *t, alpha, &cfg.mc)?;
            (m.var, m.cvar)
        }
    };
    Ok(Some(v))
}

fn cell_name(alpha: f64, alg: Option<Algorithm>, param: Option<(&str, f64)>) -> String {
    let mut s = format!("alpha={alpha}");
    if let Some(a) = alg {
        s.push_str(&format!(" algorithm={a}"));
    }
    if let Some((k, v)) = param {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

/// Best-of-`repeats` run of one algorithm; returns the result and its wall time in ms.
fn timed(cfg: &RunConfig, loss: &LossSpec, alpha: f64, alg: Algorithm, repeats: usize) -> cfrisk::Result<(RiskResult, f64)> {
    let risk = cfg.risk_for(alg);
    let mut best: Option<(RiskResult, f64)> = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let r = compute(loss, alpha, alg, &risk)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if best.as_ref().is_none_or(|b| ms < b.1) {
            best = Some((r, ms));
        }
    }
    Ok(best.expect("repeats >= 1"))
}

/// All `(alpha, algorithm)` rows for one loss. `rel_time` is relative to
/// the slowest algorithm at the same alpha.
pub fn evaluate(cfg: &RunConfig, loss: &LossSpec, param: Option<(&str, f64)>, repeats: usize) -> Result<Vec<Row>, CliError> {
    let scale = loss.scale();
    let mut rows = Vec::new();
    for &alpha in &cfg.alphas {
        let reference = if cfg.oracle {
            oracle(cfg, loss, alpha).map_err(|source| CliError::Numerical { cell: cell_name(alpha, None, param), source })?
        } else {
            None
        };
        let mut cell = Vec::new();
        for &alg in &cfg.algorithms {
            let (r, ms) = timed(cfg, loss, alpha, alg, repeats)
                .map_err(|source| CliError::Numerical { cell: cell_name(alpha, Some(alg), param), source })?;
            cell.push(Row {
                preset: cfg.preset.clone(),
                model: loss.model().name().to_string(),
                alpha,
                algorithm: alg.to_string(),
                param_name: param.map(|p| p.0.to_string()),
                param_value: param.map(|p| p.1),
                var: r.var,
                cvar: r.cvar,
                var_abs_err: reference.map(|(v, _)| (r.var - v).abs() / scale),
                cvar_abs_err: reference.map(|(_, c)| (r.cvar - c).abs() / scale),
                rel_time: 0.0,
                n_grid: r.diagnostics.n_grid.or(cfg.grid_size(alg)),
                nu: r.diagnostics.nu,
                wall_ms: ms,
            });
        }
        let slowest = cell.iter().map(|r| r.wall_ms).fold(0.0, f64::max);
        for r in &mut cell {
            r.rel_time = if slowest > 0.0 { r.wall_ms / slowest } else { 1.0 };
        }
        rows.extend(cell);
    }
    Ok(rows)
}

fn report(cfg: &RunConfig, rows: Vec<Row>) -> Report {
    let mut metadata = cfg.settings.as_map().clone();
    metadata.insert("resolved.loss".into(), serde_json::to_string(&cfg.loss).unwrap_or_default());
    metadata.insert("resolved.seed".into(), cfg.mc.seed.to_string());
    Report { metadata, rows }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    Ok(report(cfg, evaluate(cfg, &cfg.loss, None, 1)?))
}

/// Timing run: each cell is repeated and the best time kept.
pub fn bench(cfg: &RunConfig) -> Result<Report, CliError> {
    Ok(report(cfg, evaluate(cfg, &cfg.loss, None, cfg.bench_repeats)?))
}

/// One run per sweep point on a pool of `cfg.jobs` threads. Rows come
/// back in sweep order. Zero steps is a plain run.
pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| config_err("sweep needs sweep.param, sweep.from and sweep.to"))?;
    let points = spec.points();
    if points.is_empty() {
        return run(cfg);
    }
    let configs = points
        .iter()
        .map(|&v| {
            let mut s = cfg.settings.clone();
            s.set(&spec.param, &v.to_string());
            RunConfig::from_settings(&s).map(|c| (c, v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let chunks = pool.install(|| {
        configs
            .par_iter()
            .map(|(c, v)| evaluate(c, &c.loss, Some((&spec.param, *v)), 1))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(report(cfg, chunks.into_iter().flatten().collect()))
}
