use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::erfc_inv;

/// Standard normal CDF, `erfc(-x / sqrt 2) / 2`, accurate in both tails.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal `p`-quantile. The inverse-erfc value is only a starting
/// point; Halley steps on [`normal_cdf`] bring it to full precision.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut z = -SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..4 {
        let d = normal_pdf(z);
        if !(d > 0.0) {
            break;
        }
        let t = (normal_cdf(z) - p) / d;
        let step = t / (1.0 + 0.5 * z * t);
        z -= step;
        if step.abs() <= 1e-16 * z.abs().max(1.0) {
            break;
        }
    }
    z
}
