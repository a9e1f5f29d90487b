use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::{fft, frft};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// Nodes `n Delta`, weights 1/2 at both ends.
    Trapezoidal,
    /// Nodes `(n + 1/2) Delta`, unit weights.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformMode {
    Fft,
    Frft,
}

/// Frequency grid of `n` nodes with spacing `delta` on the damped contour
/// `Im z = nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub delta: f64,
    pub n: usize,
    pub rule: WeightRule,
    pub nu: f64,
}

impl FreqGrid {
    /// Grid with `Delta N = upper`.
    pub fn new(upper: f64, n: usize, rule: WeightRule, nu: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::NonPowerOfTwo(n));
        }
        if !(upper > 0.0 && upper.is_finite()) {
            return Err(Error::InvalidParameter(format!("upper must be positive, got {upper}")));
        }
        if !(nu.abs() > 1e-8) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("damping must be nonzero, got {nu}")));
        }
        Ok(Self { delta: upper / n as f64, n, rule, nu })
    }

    pub fn upper(&self) -> f64 {
        self.delta * self.n as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        match self.rule {
            WeightRule::Trapezoidal => k as f64 * self.delta,
            WeightRule::Midpoint => (k as f64 + 0.5) * self.delta,
        }
    }

    pub fn weight(&self, k: usize) -> f64 {
        match self.rule {
            WeightRule::Trapezoidal if k == 0 || k + 1 == self.n => 0.5,
            _ => 1.0,
        }
    }
}

/// Evaluation grid `x_m = x1 + gamma m`, `m = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceGrid {
    pub x1: f64,
    pub gamma: f64,
    pub n: usize,
}

impl SpaceGrid {
    /// The grid whose spacing satisfies `Delta gamma = 2 pi / N`.
    pub fn fft_dual(freq: &FreqGrid, x1: f64) -> Self {
        Self {
            x1,
            gamma: 2.0 * PI / (freq.n as f64 * freq.delta),
            n: freq.n,
        }
    }

    pub fn point(&self, m: usize) -> f64 {
        self.x1 + self.gamma * m as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.point(m)).collect()
    }
}

/// `h_n = exp(-i u_n x1) F(u_n) w_n` over the frequency grid.
pub fn build_h_vector<F>(f: F, freq: &FreqGrid, x1: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    (0..freq.n)
        .into_par_iter()
        .map(|k| {
            let u = freq.node(k);
            let v = f(u)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NumericalOverflow(format!("integrand not finite at u = {u}")));
            }
            let (s, c) = (-u * x1).sin_cos();
            Ok(Complex64::new(c, s) * v * freq.weight(k))
        })
        .collect()
}

/// `I(x_m) = (1/pi) int_0^upper Re[exp(-i u x_m) F(u)] du` on every point
/// of `space`, by one FFT or one fractional FFT.
pub fn grid_integral<F>(f: F, freq: &FreqGrid, space: &SpaceGrid, mode: TransformMode) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    if space.n != freq.n {
        return Err(Error::DimensionMismatch(format!(
            "frequency grid has {} nodes, space grid {}",
            freq.n, space.n
        )));
    }
    if !(space.gamma > 0.0 && space.gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", space.gamma)));
    }
    let n = freq.n;
    let product = freq.delta * space.gamma;
    let h = build_h_vector(f, freq, space.x1)?;
    let out = match mode {
        TransformMode::Fft => {
            let target = 2.0 * PI / n as f64;
            if (product - target).abs() > 1e-12 * target {
                return Err(Error::GridConstraintViolation(format!(
                    "FFT needs Delta*gamma = 2pi/N = {target}, got {product}"
                )));
            }
            fft(&h)?
        }
        TransformMode::Frft => frft(&h, product / (2.0 * PI))?,
    };
    let scale = freq.delta / PI;
    Ok(out
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let w = match freq.rule {
                WeightRule::Trapezoidal => *v,
                WeightRule::Midpoint => {
                    let (s, c) = (-0.5 * product * m as f64).sin_cos();
                    v * Complex64::new(c, s)
                }
            };
            scale * w.re
        })
        .collect())
}
