use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{matrix_exp, CMatrix};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Per-regime jump-diffusion parameters; jump sizes are `N(a, b^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
}

impl Regime {
    /// Exponent rate `vartheta(z)`: `E[exp(i z X_t)] = exp(i vartheta(z) t)`
    /// while the chain stays in this regime.
    pub fn exponent(&self, z: Complex64) -> Complex64 {
        let s2 = self.sigma * self.sigma;
        let jump = (I * self.a * z - 0.5 * self.b * self.b * z * z).exp();
        z * (self.mu - 0.5 * s2) + 0.5 * I * z * z * s2 - I * self.lambda * (jump - 1.0)
    }
}

/// Regime-switching jump diffusion driven by a continuous-time Markov chain
/// with generator `generator` (row-major, rows summing to zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsjdParams {
    pub regimes: Vec<Regime>,
    pub generator: Vec<Vec<f64>>,
    /// Zero-based starting regime.
    pub initial: usize,
    pub t: f64,
}

impl RsjdParams {
    /// Two-regime chain with switching rates `q1` (1 -> 2) and `q2` (2 -> 1).
    pub fn two_state(r1: Regime, r2: Regime, q1: f64, q2: f64, initial: usize, t: f64) -> Self {
        Self {
            regimes: vec![r1, r2],
            generator: vec![vec![-q1, q1], vec![q2, -q2]],
            initial,
            t,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.regimes.len();
        if m < 2 {
            return Err(Error::InvalidParameter(format!("RSJD needs at least 2 regimes, got {m}")));
        }
        if self.generator.len() != m || self.generator.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch(format!("generator must be {m}x{m}")));
        }
        if self.initial >= m {
            return Err(Error::InvalidParameter(format!(
                "initial regime {} out of range 1..={m}",
                self.initial + 1
            )));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::InvalidParameter(format!("T must be > 0, got {}", self.t)));
        }
        for (i, row) in self.generator.iter().enumerate() {
            let mut off = 0.0;
            for (j, &q) in row.iter().enumerate() {
                if !q.is_finite() {
                    return Err(Error::InvalidParameter("generator entries must be finite".into()));
                }
                if i != j {
                    if q < 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "generator off-diagonal q[{i}][{j}] = {q} is negative"
                        )));
                    }
                    off += q;
                }
            }
            if (off + row[i]).abs() > 1e-12 * off.max(1.0) {
                return Err(Error::InvalidParameter(format!("generator row {i} does not sum to zero")));
            }
        }
        for (i, r) in self.regimes.iter().enumerate() {
            let ok = r.mu.is_finite()
                && r.sigma.is_finite()
                && r.sigma > 0.0
                && r.lambda.is_finite()
                && r.lambda >= 0.0
                && r.a.is_finite()
                && r.b.is_finite()
                && r.b >= 0.0;
            if !ok {
                return Err(Error::InvalidParameter(format!("regime {} parameters invalid: {r:?}", i + 1)));
            }
        }
        Ok(())
    }
}

/// Closed form for two regimes through the occupation time of regime 1.
///
/// With `theta = vartheta_1 - vartheta_2`, `y1, y2` the roots of
/// `y^2 + (q1 + q2 - i theta) y - i theta q2 = 0`, the value is
/// `exp(i vartheta_2 T) * q_{i0}^T(theta)`.
pub fn gcf_rsjd_two_state(p: &RsjdParams, z: Complex64) -> Result<Complex64> {
    if p.regimes.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-state formula needs 2 regimes, got {}",
            p.regimes.len()
        )));
    }
    let q1 = p.generator[0][1];
    let q2 = p.generator[1][0];
    let th1 = p.regimes[0].exponent(z);
    let th2 = p.regimes[1].exponent(z);
    let theta = th1 - th2;
    let s = q1 + q2;

    let b = s - I * theta;
    let c = -I * theta * q2;
    let sq = (b * b - 4.0 * c).sqrt();
    let sgn = if (b.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * sq);
    if q.norm() == 0.0 {
        return Err(Error::DegenerateRoots(0.0));
    }
    let y1 = q;
    let y2 = c / q;
    let gap = (y1 - y2).norm();
    if gap < 1e-10 * y1.norm().max(1.0) {
        return Err(Error::DegenerateRoots(gap));
    }
    let t = p.t;
    // The common factor exp(i vartheta_2 T) goes inside each exponential;
    // separately they overflow at large |z|.
    let e1 = ((y1 + I * th2) * t).exp();
    let e2 = ((y2 + I * th2) * t).exp();
    let v = if p.initial == 0 {
        (e1 * (y1 + s) - e2 * (y2 + s)) / (y1 - y2)
    } else {
        (e1 * (y1 + s - I * theta) - e2 * (y2 + s - I * theta)) / (y1 - y2)
    };
    Ok(v)
}

/// `1' exp((Q' + i diag(vartheta_j(z))) T) e_{i0}` for any number of regimes.
pub fn gcf_rsjd_general(p: &RsjdParams, z: Complex64) -> Result<Complex64> {
    let m = p.regimes.len();
    let t = p.t;
    let mut a = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = Complex64::new(p.generator[j][i] * t, 0.0);
        }
        a[(i, i)] += I * p.regimes[i].exponent(z) * t;
    }
    let e = matrix_exp(&a)?;
    Ok(e.column(p.initial).iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelSpec;

    fn fig_rs(initial: usize) -> RsjdParams {
        RsjdParams::two_state(
            Regime { mu: 0.0, sigma: 0.1, lambda: 0.0, a: 0.0, b: 0.0 },
            Regime { mu: -0.1, sigma: 0.3, lambda: 0.0, a: 0.0, b: 0.0 },
            0.5,
            0.5,
            initial,
            1.0 / 12.0,
        )
    }

    #[test]
    fn normalized_at_origin() {
        let z = Complex64::new(0.0, 0.0);
        for i0 in 0..2 {
            let p = fig_rs(i0);
            assert!((gcf_rsjd_two_state(&p, z).unwrap() - 1.0).norm() < 1e-15);
            assert!((gcf_rsjd_general(&p, z).unwrap() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        let z = Complex64::new(1.0, 0.0);
        for i0 in 0..2 {
            let p = fig_rs(i0);
            let a = gcf_rsjd_two_state(&p, z).unwrap();
            let b = gcf_rsjd_general(&p, z).unwrap();
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn identical_regimes_reduce_to_merton() {
        let r = Regime { mu: 0.02, sigma: 0.25, lambda: 1.0, a: -0.01, b: 0.1 };
        let p = RsjdParams::two_state(r, r, 0.7, 0.3, 1, 0.5);
        let m = ModelSpec::MertonJd { mu: 0.02, sigma: 0.25, lambda: 1.0, a: -0.01, b: 0.1, t: 0.5 };
        for k in 0..20 {
            let z = Complex64::new(k as f64 * 0.9 - 6.0, -0.4);
            let want = m.gcf(z).unwrap();
            assert!((gcf_rsjd_two_state(&p, z).unwrap() - want).norm() < 1e-12);
            assert!((gcf_rsjd_general(&p, z).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn frozen_chain_is_single_regime() {
        let r1 = Regime { mu: 0.05, sigma: 0.2, lambda: 2.0, a: 0.03, b: 0.05 };
        let r2 = Regime { mu: -0.3, sigma: 0.5, lambda: 0.0, a: 0.0, b: 0.0 };
        let p = RsjdParams::two_state(r1, r2, 0.0, 0.0, 0, 1.0);
        let m = ModelSpec::MertonJd { mu: 0.05, sigma: 0.2, lambda: 2.0, a: 0.03, b: 0.05, t: 1.0 };
        let z = Complex64::new(2.5, 0.3);
        assert!((gcf_rsjd_general(&p, z).unwrap() - m.gcf(z).unwrap()).norm() < 1e-13);
        // theta != 0 here, so the closed form still applies.
        assert!((gcf_rsjd_two_state(&p, z).unwrap() - m.gcf(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn degenerate_roots_are_flagged() {
        let r = Regime { mu: 0.0, sigma: 0.2, lambda: 0.0, a: 0.0, b: 0.0 };
        let p = RsjdParams::two_state(r, r, 0.0, 0.0, 0, 1.0);
        let z = Complex64::new(1.0, 0.0);
        assert!(matches!(gcf_rsjd_two_state(&p, z), Err(Error::DegenerateRoots(_))));
        // The dispatcher falls back to the matrix exponential.
        let v = ModelSpec::Rsjd(p).gcf(z).unwrap();
        assert!((v - (-0.5f64 * 0.04 * 1.0).exp() * (I * -0.02).exp()).norm() < 1e-14);
    }

    #[test]
    fn generator_validation() {
        let mut p = fig_rs(0);
        assert!(p.validate().is_ok());
        p.generator[0][0] = -0.4;
        assert!(p.validate().is_err());
        let mut p = fig_rs(0);
        p.initial = 2;
        assert!(p.validate().is_err());
        let mut p = fig_rs(0);
        p.generator = vec![vec![0.5, -0.5], vec![0.5, -0.5]];
        assert!(p.validate().is_err());
    }
}
