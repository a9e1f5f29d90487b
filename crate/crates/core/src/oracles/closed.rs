use super::normal::{normal_cdf, normal_pdf, normal_quantile};
use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// `(mu + sigma z_alpha, mu + sigma pdf(z_alpha) / (1 - alpha))` for `N(mu, sigma^2)`.
pub fn gaussian_var_cvar(mu: f64, sigma: f64, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("need finite mu and sigma > 0, got ({mu}, {sigma})")));
    }
    let z = normal_quantile(alpha);
    Ok((mu + sigma * z, mu + sigma * normal_pdf(z) / (1.0 - alpha)))
}

/// Closed form for `L = V0 e^{rT} - V0 e^{X_T}`, `X_T ~ N((mu - sigma^2/2) T, sigma^2 T)`.
///
/// `VaR = V0 e^{rT} - V0 e^{m + s z_{1-alpha}}` and
/// `CVaR = V0 e^{rT} - V0 e^{m + s^2/2} N(z_{1-alpha} - s) / (1 - alpha)`,
/// with `m = (mu - sigma^2/2) T`, `s = sigma sqrt(T)`.
pub fn lognormal_var_cvar(v0: f64, r: f64, t: f64, mu: f64, sigma: f64, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if !(sigma > 0.0 && t > 0.0 && v0 > 0.0) || ![v0, r, t, mu, sigma].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter("need V0 > 0, T > 0, sigma > 0, all finite".into()));
    }
    let m = (mu - 0.5 * sigma * sigma) * t;
    let s = sigma * t.sqrt();
    let z = normal_quantile(1.0 - alpha);
    let cap = v0 * (r * t).exp();
    let var = cap - v0 * (m + s * z).exp();
    let cvar = cap - v0 * (m + 0.5 * s * s).exp() * normal_cdf(z - s) / (1.0 - alpha);
    Ok((var, cvar))
}

/// `(value, probability)` pairs of `Binomial(n, p)`.
pub fn binomial_pmf(n: u32, p: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut coef = 1.0;
    for k in 0..=n {
        if k > 0 {
            coef *= (n - k + 1) as f64 / k as f64;
        }
        out.push((k as f64, coef * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)));
    }
    out
}

fn sorted_pmf(pmf: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if pmf.is_empty() {
        return Err(Error::InvalidPmf("empty support".into()));
    }
    if pmf.iter().any(|&(x, p)| !x.is_finite() || !p.is_finite() || p < 0.0) {
        return Err(Error::InvalidPmf("values must be finite and probabilities non-negative".into()));
    }
    let total: f64 = pmf.iter().map(|&(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPmf(format!("probabilities sum to {total}")));
    }
    let mut v = pmf.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(v)
}

/// `G(x) = x + E[(L - x)^+] / (1 - alpha)` for a finite law.
pub fn discrete_g(pmf: &[(f64, f64)], alpha: f64, x: f64) -> f64 {
    x + pmf.iter().map(|&(v, p)| p * (v - x).max(0.0)).sum::<f64>() / (1.0 - alpha)
}

/// VaR (lower quantile) and CVaR of a finite law.
///
/// The CVaR is the mean of the `alpha`-tail law, which puts mass
/// `(F(VaR) - alpha) / (1 - alpha)` on the VaR and keeps the atoms above it;
/// this is checked against `G(VaR)`.
pub fn discrete_var_cvar(pmf: &[(f64, f64)], alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let law = sorted_pmf(pmf)?;
    let mut cum = 0.0;
    let mut var = law[law.len() - 1].0;
    for &(x, p) in &law {
        cum += p;
        // rounding in the running sum must not skip the quantile
        if cum >= alpha - 1e-14 {
            var = x;
            break;
        }
    }
    let at_or_below: f64 = law.iter().filter(|&&(x, _)| x <= var).map(|&(_, p)| p).sum();
    let above: f64 = law.iter().filter(|&&(x, _)| x > var).map(|&(x, p)| p * x).sum();
    let tail_mean = ((at_or_below - alpha).max(0.0) * var + above) / (1.0 - alpha);
    let g = discrete_g(&law, alpha, var);
    if (tail_mean - g).abs() > 1e-10 * g.abs().max(1.0) {
        return Err(Error::InvalidPmf(format!("tail mean {tail_mean} and G(VaR) {g} disagree")));
    }
    Ok((var, g))
}
