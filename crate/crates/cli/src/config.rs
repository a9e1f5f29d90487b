//! Typed run configuration built from [`Settings`].

use std::path::PathBuf;

use cfrisk::oracles::McConfig;
use cfrisk::risk::GridSettings;
use cfrisk::transforms::Truncation;
use cfrisk::{Algorithm, LossSpec, ModelSpec, Regime, RiskConfig, RsjdParams, WeightRule};

use crate::error::{config_err, CliError};
use crate::presets;
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Full key, e.g. `model.sigma`.
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.from],
            n => {
                let d = (n - 1) as f64;
                (0..n).map(|i| (self.from * (d - i as f64) + self.to * i as f64) / d).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub preset: String,
    pub loss: LossSpec,
    pub alphas: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub risk: RiskConfig,
    /// Per-algorithm grid sizes, falling back to `risk.grid.n`.
    pub n_fft: Option<usize>,
    pub n_frft: Option<usize>,
    pub oracle: bool,
    pub mc: McConfig,
    pub sweep: Option<SweepSpec>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub bench_repeats: usize,
    /// Resolved settings the config was built from.
    pub settings: Settings,
}

const TOP_KEYS: &[&str] = &[
    "preset", "model", "loss", "v0", "r", "t", "alphas", "algorithms", "quad_tol", "x_tol", "root_tol", "nu.sl",
    "nu.cdf", "nu.exp", "truncation", "bracket", "grid.n", "grid.n_fft", "grid.n_frft", "grid.upper", "grid.x1",
    "grid.gamma", "grid.rule", "oracle", "mc.paths", "mc.steps_per_year", "mc.antithetic", "mc.batches", "seed",
    "sweep.param", "sweep.from", "sweep.to", "sweep.steps", "output.format", "output.path", "jobs", "bench.repeats",
];

/// Parameters accepted under `model.` for each model name.
pub fn model_params(model: &str) -> Option<&'static [&'static str]> {
    Some(match model {
        "gaussian" => &["mu", "sigma"],
        "binomial" => &["n", "p"],
        "lognormal" => &["mu", "sigma"],
        "merton" => &["mu", "sigma", "lambda", "a", "b"],
        "vg" => &["theta", "sigma", "nu"],
        "heston" => &["mu", "v0", "kappa", "theta", "sigma_v", "rho"],
        "rsjd" => &[
            "mu1", "sigma1", "lambda1", "a1", "b1", "mu2", "sigma2", "lambda2", "a2", "b2", "q12", "q21", "initial",
            "dsigma", "dmu",
        ],
        _ => return None,
    })
}

/// Settings from a preset (if named), then a config file, then overrides.
pub fn layered_settings(preset: Option<&str>, file: Option<&str>, overrides: &[String]) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    if let Some(name) = preset {
        let p = presets::find(name).ok_or_else(|| config_err(format!("unknown preset '{name}'")))?;
        s.merge_text(p.text)?;
        s.set("preset", name);
    }
    if let Some(text) = file {
        s.merge_text(text)?;
    }
    for o in overrides {
        s.apply_override(o)?;
    }
    Ok(s)
}

fn model_f64(s: &Settings, name: &str) -> Result<f64, CliError> {
    s.require_f64(&format!("model.{name}"))
}

fn model_f64_or(s: &Settings, name: &str, default: f64) -> Result<f64, CliError> {
    s.f64_or(&format!("model.{name}"), default)
}

fn build_model(s: &Settings, kind: &str, t: Option<f64>) -> Result<ModelSpec, CliError> {
    let horizon = || t.ok_or_else(|| config_err(format!("model {kind} needs the horizon t")));
    let m = match kind {
        "gaussian" => ModelSpec::Gaussian { mu: model_f64(s, "mu")?, sigma: model_f64(s, "sigma")? },
        "binomial" => {
            let n = s.usize("model.n")?.ok_or_else(|| config_err("missing model.n"))?;
            let n = u32::try_from(n).map_err(|_| config_err("model.n too large"))?;
            ModelSpec::Binomial { n, p: model_f64(s, "p")? }
        }
        "lognormal" => ModelSpec::LogNormalReturn { mu: model_f64(s, "mu")?, sigma: model_f64(s, "sigma")?, t: horizon()? },
        "merton" => ModelSpec::MertonJd {
            mu: model_f64(s, "mu")?,
            sigma: model_f64(s, "sigma")?,
            lambda: model_f64(s, "lambda")?,
            a: model_f64(s, "a")?,
            b: model_f64(s, "b")?,
            t: horizon()?,
        },
        "vg" => ModelSpec::VarianceGamma {
            theta: model_f64(s, "theta")?,
            sigma: model_f64(s, "sigma")?,
            nu: model_f64(s, "nu")?,
            t: horizon()?,
        },
        "heston" => {
            let theta = model_f64(s, "theta")?;
            ModelSpec::Heston {
                mu: model_f64(s, "mu")?,
                // started at the long-run variance unless given
                v0: model_f64_or(s, "v0", theta)?,
                kappa: model_f64(s, "kappa")?,
                theta,
                sigma_v: model_f64(s, "sigma_v")?,
                rho: model_f64(s, "rho")?,
                t: horizon()?,
            }
        }
        "rsjd" => {
            let mu1 = model_f64(s, "mu1")?;
            let sigma1 = model_f64(s, "sigma1")?;
            let mu2 = match s.f64("model.dmu")? {
                Some(d) => mu1 + d,
                None => model_f64(s, "mu2")?,
            };
            let sigma2 = match s.f64("model.dsigma")? {
                Some(d) => sigma1 + d,
                None => model_f64(s, "sigma2")?,
            };
            let r1 = Regime {
                mu: mu1,
                sigma: sigma1,
                lambda: model_f64_or(s, "lambda1", 0.0)?,
                a: model_f64_or(s, "a1", 0.0)?,
                b: model_f64_or(s, "b1", 0.0)?,
            };
            let r2 = Regime {
                mu: mu2,
                sigma: sigma2,
                lambda: model_f64_or(s, "lambda2", 0.0)?,
                a: model_f64_or(s, "a2", 0.0)?,
                b: model_f64_or(s, "b2", 0.0)?,
            };
            let initial = s.usize("model.initial")?.unwrap_or(1);
            if !(1..=2).contains(&initial) {
                return Err(config_err(format!("model.initial must be 1 or 2, got {initial}")));
            }
            let p = RsjdParams::two_state(r1, r2, model_f64(s, "q12")?, model_f64(s, "q21")?, initial - 1, horizon()?);
            ModelSpec::Rsjd(p)
        }
        other => return Err(config_err(format!("unknown model '{other}'"))),
    };
    Ok(m)
}

fn pair(s: &Settings, key: &str) -> Result<Option<(f64, f64)>, CliError> {
    let Some(v) = s.list(key) else { return Ok(None) };
    if v.len() != 2 {
        return Err(config_err(format!("{key}: expected two comma-separated numbers")));
    }
    let p = |x: &str| crate::settings::parse_number(x).map_err(|e| config_err(format!("{key}: {e}")));
    Ok(Some((p(&v[0])?, p(&v[1])?)))
}

fn grid_n(s: &Settings, key: &str) -> Result<Option<usize>, CliError> {
    let n = s.usize(key)?;
    if let Some(n) = n {
        if n < 8 || !n.is_power_of_two() {
            return Err(config_err(format!("{key} must be a power of two >= 8, got {n}")));
        }
    }
    Ok(n)
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let kind = s.get("model").ok_or_else(|| config_err("missing model"))?;
        let params = model_params(kind).ok_or_else(|| config_err(format!("unknown model '{kind}'")))?;
        for key in s.keys() {
            match key.strip_prefix("model.") {
                Some(p) if !params.contains(&p) => {
                    return Err(config_err(format!("model {kind} has no parameter '{p}'")));
                }
                Some(_) => {}
                None if !TOP_KEYS.contains(&key) => return Err(config_err(format!("unknown key '{key}'"))),
                None => {}
            }
        }

        let t = s.f64("t")?;
        let model = build_model(s, kind, t)?;
        let default_loss = if model.is_log_return() { "exponential" } else { "direct" };
        let loss = match s.get("loss").unwrap_or(default_loss) {
            "direct" => LossSpec::Direct { model },
            "exponential" => LossSpec::Exponential {
                v0: s.f64_or("v0", 100.0)?,
                r: s.f64_or("r", 0.0)?,
                t: t.ok_or_else(|| config_err("exponential loss needs t"))?,
                model,
            },
            other => return Err(config_err(format!("unknown loss '{other}'"))),
        };
        loss.validate().map_err(|e| config_err(e.to_string()))?;

        let alphas = match s.list("alphas") {
            Some(v) => v
                .iter()
                .map(|a| crate::settings::parse_number(a).map_err(|e| config_err(format!("alphas: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![0.99],
        };
        if alphas.is_empty() {
            return Err(config_err("alphas is empty"));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(config_err(format!("alpha must lie in (0, 1), got {a}")));
        }
        let algorithms = match s.list("algorithms") {
            Some(v) => v
                .iter()
                .map(|a| a.parse::<Algorithm>().map_err(|e| config_err(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Algorithm::Hybrid],
        };
        if algorithms.is_empty() {
            return Err(config_err("algorithm list is empty"));
        }

        let defaults = RiskConfig::default();
        let truncation = match s.get("truncation") {
            None => None,
            Some("auto") => Some(Truncation::Auto { start: 100.0, tail_tol: 1e-12 }),
            Some(_) => Some(Truncation::Fixed(s.require_f64("truncation")?)),
        };
        let rule = match s.get("grid.rule").unwrap_or("trapezoidal") {
            "trapezoidal" => WeightRule::Trapezoidal,
            "midpoint" => WeightRule::Midpoint,
            other => return Err(config_err(format!("unknown grid.rule '{other}'"))),
        };
        let risk = RiskConfig {
            quad_tol: s.f64_or("quad_tol", defaults.quad_tol)?,
            x_tol: s.f64_or("x_tol", defaults.x_tol)?,
            root_tol: s.f64_or("root_tol", defaults.root_tol)?,
            nu_sl: s.f64("nu.sl")?,
            nu_cdf: s.f64("nu.cdf")?,
            nu_exp: s.f64("nu.exp")?,
            truncation,
            bracket: pair(s, "bracket")?,
            grid: GridSettings {
                n: grid_n(s, "grid.n")?.unwrap_or(defaults.grid.n),
                upper: s.f64("grid.upper")?,
                x1: s.f64("grid.x1")?,
                gamma: s.f64("grid.gamma")?,
                rule,
            },
        };
        for (k, v) in [("quad_tol", risk.quad_tol), ("x_tol", risk.x_tol), ("root_tol", risk.root_tol)] {
            if v <= 0.0 {
                return Err(config_err(format!("{k} must be > 0")));
            }
        }

        let mc_defaults = McConfig::default();
        let mc = McConfig {
            paths: s.usize("mc.paths")?.unwrap_or(mc_defaults.paths),
            steps_per_year: s.usize("mc.steps_per_year")?.unwrap_or(mc_defaults.steps_per_year),
            seed: match s.get("seed") {
                Some(v) => v.parse().map_err(|_| config_err(format!("seed: expected an unsigned integer, got '{v}'")))?,
                None => mc_defaults.seed,
            },
            antithetic: s.bool("mc.antithetic")?.unwrap_or(mc_defaults.antithetic),
            batches: s.usize("mc.batches")?.unwrap_or(mc_defaults.batches),
        };

        let sweep = match s.get("sweep.param") {
            None => None,
            Some(param) => {
                let name = param.strip_prefix("model.").unwrap_or("");
                if !params.contains(&name) || (kind == "binomial" && name == "n") {
                    return Err(config_err(format!("sweep.param '{param}' is not a parameter of model {kind}")));
                }
                Some(SweepSpec {
                    param: param.to_string(),
                    from: s.require_f64("sweep.from")?,
                    to: s.require_f64("sweep.to")?,
                    steps: s.usize("sweep.steps")?.unwrap_or(2),
                })
            }
        };

        let format = match s.get("output.format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(config_err(format!("unknown output.format '{other}'"))),
        };
        let jobs = match s.usize("jobs")? {
            Some(0) => return Err(config_err("jobs must be >= 1")),
            Some(j) => j,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };

        Ok(RunConfig {
            preset: s.get("preset").unwrap_or("custom").to_string(),
            loss,
            alphas,
            algorithms,
            risk,
            n_fft: grid_n(s, "grid.n_fft")?,
            n_frft: grid_n(s, "grid.n_frft")?,
            oracle: s.bool("oracle")?.unwrap_or(false),
            mc,
            sweep,
            format,
            out: s.get("output.path").map(PathBuf::from),
            jobs,
            bench_repeats: s.usize("bench.repeats")?.unwrap_or(5).max(1),
            settings: s.clone(),
        })
    }

    /// Numerical settings for one algorithm, with its grid size applied.
    pub fn risk_for(&self, alg: Algorithm) -> RiskConfig {
        let mut cfg = self.risk.clone();
        let n = match alg {
            Algorithm::Alg3Fft => self.n_fft,
            Algorithm::Alg3Frft | Algorithm::Hybrid => self.n_frft,
            _ => None,
        };
        if let Some(n) = n {
            cfg.grid.n = n;
        }
        cfg
    }

    /// Grid size reported for an algorithm, if it uses one.
    pub fn grid_size(&self, alg: Algorithm) -> Option<usize> {
        match alg {
            Algorithm::Alg3Fft | Algorithm::Alg3Frft | Algorithm::Hybrid => Some(self.risk_for(alg).grid.n),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_settings(&Settings::parse(text).unwrap())
    }

    #[test]
    fn every_preset_builds() {
        for p in presets::PRESETS {
            let c = RunConfig::from_settings(&layered_settings(Some(p.name), None, &[]).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(c.preset, p.name);
        }
    }

    #[test]
    fn heston_defaults_to_long_run_variance() {
        let c = cfg("model=heston\nmodel.mu=0\nmodel.kappa=1\nmodel.theta=0.07\nmodel.sigma_v=0.3\nmodel.rho=-0.5\nt=0.25").unwrap();
        match c.loss.model() {
            ModelSpec::Heston { v0, .. } => assert_eq!(*v0, 0.07),
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn rs_gaps_set_second_regime() {
        let s = layered_settings(Some("fig-rs"), None, &["model.dmu=-0.3".into()]).unwrap();
        let c = RunConfig::from_settings(&s).unwrap();
        let ModelSpec::Rsjd(p) = c.loss.model() else { panic!() };
        assert!((p.regimes[1].sigma - 0.3).abs() < 1e-15);
        assert!((p.regimes[1].mu + 0.3).abs() < 1e-15);
        assert_eq!(p.initial, 0);
    }

    #[test]
    fn rejections() {
        let base = "model=gaussian\nmodel.mu=0\nmodel.sigma=1\n";
        for bad in [
            "algorithms=",
            "algorithms=alg9",
            "alphas=1.0",
            "model.lambda=1",
            "colour=blue",
            "grid.n=1000",
            "sweep.param=model.kappa\nsweep.from=0\nsweep.to=1",
            "loss=exponential\nt=1",
            "bracket=1",
            "jobs=0",
        ] {
            let e = cfg(&format!("{base}{bad}")).unwrap_err();
            assert!(matches!(e, CliError::ConfigInvalid(_)), "{bad}: {e}");
            assert_eq!(e.exit_code(), 2);
        }
        assert!(matches!(cfg("model=cauchy"), Err(CliError::ConfigInvalid(_))));
        assert!(layered_settings(Some("nope"), None, &[]).is_err());
    }

    #[test]
    fn per_algorithm_grid_sizes() {
        let c = RunConfig::from_settings(&layered_settings(Some("table2-row1"), None, &[]).unwrap()).unwrap();
        assert_eq!(c.risk_for(Algorithm::Alg3Fft).grid.n, 4096);
        assert_eq!(c.risk_for(Algorithm::Alg3Frft).grid.n, 1024);
        assert_eq!(c.grid_size(Algorithm::Alg1), None);
    }

    #[test]
    fn sweep_points() {
        let s = SweepSpec { param: "model.sigma".into(), from: 0.1, to: 0.5, steps: 5 };
        assert_eq!(s.points().len(), 5);
        assert!((s.points()[4] - 0.5).abs() < 1e-15);
        assert!(SweepSpec { steps: 0, ..s.clone() }.points().is_empty());
        assert_eq!(SweepSpec { steps: 1, ..s }.points(), vec![0.1]);
    }
}
