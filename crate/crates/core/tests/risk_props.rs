//! Invariants of the objective and of the risk algorithms over fixed
//! parameter lattices.

use cfrisk::oracles::{normal_cdf, normal_pdf};
use cfrisk::risk::{
    brent_root, cdf_bar, compute, g_objective, golden_section_minimize, stop_loss, Integration,
};
use cfrisk::transforms::adaptive_lobatto;
use cfrisk::{Algorithm, LossSpec, ModelSpec, Regime, RiskConfig, RsjdParams};
use proptest::prelude::*;

const T: f64 = 1.0 / 12.0;
const ALPHAS: [f64; 3] = [0.90, 0.95, 0.99];

fn exponential(model: ModelSpec) -> LossSpec {
    let t = model.horizon().unwrap();
    LossSpec::Exponential { v0: 100.0, r: 0.0, t, model }
}

/// Continuous losses exercised by the lattice tests.
fn continuous_lattice() -> Vec<(&'static str, LossSpec)> {
    vec![
        ("gauss-0-1", LossSpec::Direct { model: ModelSpec::Gaussian { mu: 0.0, sigma: 1.0 } }),
        ("gauss-3-2", LossSpec::Direct { model: ModelSpec::Gaussian { mu: 3.0, sigma: 2.0 } }),
        ("lognormal-row1", exponential(ModelSpec::LogNormalReturn { mu: 0.0, sigma: 0.2, t: 0.25 })),
        ("lognormal-row2", exponential(ModelSpec::LogNormalReturn { mu: -0.8, sigma: 0.35, t: T })),
        ("merton", exponential(ModelSpec::MertonJd { mu: 0.0, sigma: 0.25, lambda: 1.0, a: -0.01, b: 0.1, t: T })),
        ("vg", exponential(ModelSpec::VarianceGamma { theta: 0.0, sigma: 0.3, nu: 0.1, t: T })),
        (
            "heston",
            exponential(ModelSpec::Heston { mu: 0.0, v0: 0.1, kappa: 1.0, theta: 0.1, sigma_v: 0.3, rho: -0.9, t: T }),
        ),
        (
            "rs",
            exponential(ModelSpec::Rsjd(RsjdParams::two_state(
                Regime { mu: 0.0, sigma: 0.1, lambda: 0.0, a: 0.0, b: 0.0 },
                Regime { mu: -0.1, sigma: 0.3, lambda: 0.0, a: 0.0, b: 0.0 },
                0.5,
                0.5,
                0,
                T,
            ))),
        ),
    ]
}

#[test]
fn cvar_dominates_var_and_objective_hits_cvar() {
    let cfg = RiskConfig::default();
    let mut losses = continuous_lattice();
    losses.push(("binomial", LossSpec::Direct { model: ModelSpec::Binomial { n: 5, p: 0.1 } }));
    for (name, loss) in &losses {
        let integ = Integration::for_model(loss.model()).with_tol(1e-13);
        let nu = cfg.objective_nu(loss).unwrap();
        for &alpha in &ALPHAS {
            for alg in Algorithm::ALL {
                let r = match compute(loss, alpha, alg, &cfg) {
                    Ok(r) => r,
                    Err(cfrisk::Error::DiscontinuousCdf) if *name == "binomial" => continue,
                    Err(e) => panic!("{name} {alg} {alpha}: {e}"),
                };
                assert!(r.cvar >= r.var - 1e-9, "{name} {alg} {alpha}: {r:?}");
                if let LossSpec::Exponential { v0, r: rate, t, .. } = loss {
                    assert!(r.var < v0 * (rate * t).exp());
                }
                if matches!(alg, Algorithm::Alg1 | Algorithm::Alg2 | Algorithm::Hybrid) {
                    let g = g_objective(loss, alpha, r.var, nu, &integ).unwrap();
                    // at a kink of a discrete law G is only Lipschitz
                    let slack = if *name == "binomial" { 1e-6 } else { 1e-8 * loss.scale() };
                    assert!((g - r.cvar).abs() <= slack, "{name} {alg} {alpha}: G(var) {g} vs {}", r.cvar);
                }
            }
        }
    }
}

#[test]
fn quadrature_algorithms_agree() {
    let cfg = RiskConfig::default();
    for (name, loss) in continuous_lattice() {
        for &alpha in &ALPHAS {
            let rs: Vec<_> = [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Hybrid]
                .iter()
                .map(|&a| compute(&loss, alpha, a, &cfg).unwrap())
                .collect();
            for r in &rs[1..] {
                assert!((r.var - rs[0].var).abs() <= 1e-5, "{name} {alpha}: {} vs {}", r.var, rs[0].var);
                assert!((r.cvar - rs[0].cvar).abs() <= 1e-5, "{name} {alpha}: {} vs {}", r.cvar, rs[0].cvar);
            }
        }
    }
}

#[test]
fn monotone_in_confidence_level() {
    let cfg = RiskConfig::default();
    for (name, loss) in continuous_lattice() {
        for alg in [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Hybrid] {
            let rs: Vec<_> = ALPHAS.iter().map(|&a| compute(&loss, a, alg, &cfg).unwrap()).collect();
            for w in rs.windows(2) {
                assert!(w[1].var >= w[0].var && w[1].cvar >= w[0].cvar, "{name} {alg}: {w:?}");
            }
        }
    }
}

#[test]
fn gaussian_translation_equivariance() {
    let cfg = RiskConfig::default();
    for sigma in [0.5, 1.0, 2.0] {
        let base = LossSpec::Direct { model: ModelSpec::Gaussian { mu: 0.0, sigma } };
        for c in [-2.0, 0.5, 3.0] {
            let shifted = LossSpec::Direct { model: ModelSpec::Gaussian { mu: c, sigma } };
            for alg in [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Hybrid] {
                for &alpha in &ALPHAS {
                    let a = compute(&base, alpha, alg, &cfg).unwrap();
                    let b = compute(&shifted, alpha, alg, &cfg).unwrap();
                    // a minimizer is only located to x_tol; the root is exact
                    let var_tol = if alg == Algorithm::Alg1 { 1e-8 } else { 4.0 * cfg.x_tol };
                    assert!((b.var - a.var - c).abs() <= var_tol, "{alg} sigma={sigma} c={c}: {} {}", a.var, b.var);
                    assert!((b.cvar - a.cvar - c).abs() <= 1e-8, "{alg} sigma={sigma} c={c}: {} {}", a.cvar, b.cvar);
                }
            }
        }
    }
}

#[test]
fn cdf_is_independent_of_damping() {
    for (mu, sigma) in [(0.0, 1.0), (1.0, 0.5), (-2.0, 1.0), (5.0, 0.8)] {
        let model = ModelSpec::Gaussian { mu, sigma };
        let integ = Integration::for_model(&model);
        for k in -6..=6 {
            let v = mu + 0.5 * k as f64 * sigma;
            let a = cdf_bar(&model, v, 0.5, &integ).unwrap();
            let b = cdf_bar(&model, v, 2.0, &integ).unwrap();
            assert!((a - b).abs() <= 1e-8, "v={v}: {a} vs {b}");
            assert!((a - normal_cdf((v - mu) / sigma)).abs() <= 1e-8);
        }
    }
}

#[test]
fn stop_loss_matches_density_decomposition() {
    // E[(Y - q)^+] = E[Y 1{Y >= q}] - q P(Y >= q), both terms by quadrature on the density
    let (mu, sigma) = (0.3, 1.7);
    let model = ModelSpec::Gaussian { mu, sigma };
    let integ = Integration::for_model(&model);
    let dens = |y: f64| normal_pdf((y - mu) / sigma) / sigma;
    for q in [-3.0, -0.5, 0.3, 1.0, 2.5, 5.0] {
        let hi = mu + 40.0 * sigma;
        let breaks = [q, q + 0.5 * (hi - q), hi];
        let first = adaptive_lobatto(|y| Ok(y * dens(y)), &breaks, 1e-14, 100_000).unwrap().value;
        let tail = adaptive_lobatto(|y| Ok(dens(y)), &breaks, 1e-14, 100_000).unwrap().value;
        let sl = stop_loss(&model, q, -1.5, &integ).unwrap();
        assert!((sl - (first - q * tail)).abs() <= 1e-10, "q={q}: {sl} vs {}", first - q * tail);
    }
}

#[test]
fn golden_and_brent_on_the_objective() {
    let loss = LossSpec::Direct { model: ModelSpec::Gaussian { mu: 0.0, sigma: 1.0 } };
    let integ = Integration::for_model(loss.model()).with_tol(1e-15);
    let m = golden_section_minimize(|x| g_objective(&loss, 0.99, x, -1.5, &integ), 0.0, 3.0, 1e-8).unwrap();
    let want = cfrisk::oracles::normal_quantile(0.99);
    assert!((m.x - want).abs() <= 1e-6);
    let model = loss.model().clone();
    let r = brent_root(|x| Ok(cdf_bar(&model, x, 1.5, &integ)? - 0.99), 0.0, 5.0, 1e-12).unwrap();
    assert!((r.x - want).abs() <= 1e-10);
}

fn convexity_losses() -> Vec<LossSpec> {
    continuous_lattice().into_iter().map(|(_, l)| l).take(5).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn objective_is_midpoint_convex(which in 0usize..5, a in 0.0f64..1.0, b in 0.0f64..1.0, alpha in 0.5f64..0.995) {
        let losses = convexity_losses();
        let loss = &losses[which];
        let (m, var) = loss.model().mean_variance().unwrap();
        let sd = var.sqrt();
        // x range in loss units around the bulk of the loss law
        let (lo, hi) = match loss {
            LossSpec::Direct { .. } => (m - 5.0 * sd, m + 8.0 * sd),
            LossSpec::Exponential { v0, .. } => (v0 * (1.0 - (m + 6.0 * sd).exp()), v0 * (1.0 - (m - 6.0 * sd).exp())),
        };
        let (x1, x3) = (lo + a.min(b) * (hi - lo), lo + a.max(b) * (hi - lo));
        prop_assume!(x3 - x1 > 1e-6 * (hi - lo));
        let x2 = 0.5 * (x1 + x3);
        let cfg = RiskConfig::default();
        let nu = cfg.objective_nu(loss).unwrap();
        let integ = Integration::for_model(loss.model()).with_tol(1e-13 * (1.0 - alpha));
        let g = |x| g_objective(loss, alpha, x, nu, &integ).unwrap();
        prop_assert!(g(x2) <= 0.5 * (g(x1) + g(x3)) + 1e-9);
    }
}
