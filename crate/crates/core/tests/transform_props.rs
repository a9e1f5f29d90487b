use std::f64::consts::PI;

use cfrisk::transforms::{dft_reference, fft, frft, grid_integral, FreqGrid, SpaceGrid, TransformMode, WeightRule};
use cfrisk::{Complex64, ModelSpec};
use proptest::prelude::*;

fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    num / den.max(f64::MIN_POSITIVE)
}

fn fractional_sum(h: &[Complex64], eta: f64) -> Vec<Complex64> {
    (0..h.len())
        .map(|m| {
            h.iter()
                .enumerate()
                .map(|(n, &hn)| {
                    // reduce n m eta mod 1 before the trig call
                    let t = (n as f64 * m as f64 * eta).rem_euclid(1.0);
                    Complex64::from_polar(1.0, -2.0 * PI * t) * hn
                })
                .sum()
        })
        .collect()
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn sized_vec() -> impl Strategy<Value = Vec<Complex64>> {
    (3u32..=10).prop_flat_map(|p| complex_vec(1 << p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_matches_direct_dft(h in sized_vec()) {
        let a = fft(&h).unwrap();
        prop_assert!(rel_err(&a, &dft_reference(&h)) <= 1e-10);
    }

    #[test]
    fn frft_at_inverse_length_is_fft(h in sized_vec()) {
        let eta = 1.0 / h.len() as f64;
        prop_assert!(rel_err(&frft(&h, eta).unwrap(), &fft(&h).unwrap()) <= 1e-10);
    }

    #[test]
    fn frft_is_linear(
        h1 in complex_vec(128),
        h2 in complex_vec(128),
        a in (-2.0f64..2.0, -2.0f64..2.0),
        b in (-2.0f64..2.0, -2.0f64..2.0),
        eta in -0.3f64..0.3,
    ) {
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mixed: Vec<_> = h1.iter().zip(&h2).map(|(x, y)| a * x + b * y).collect();
        let lhs = frft(&mixed, eta).unwrap();
        let f1 = frft(&h1, eta).unwrap();
        let f2 = frft(&h2, eta).unwrap();
        let rhs: Vec<_> = f1.iter().zip(&f2).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(rel_err(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn frft_matches_direct_fractional_sum(h in complex_vec(256), eta in -0.05f64..0.05) {
        prop_assert!(rel_err(&frft(&h, eta).unwrap(), &fractional_sum(&h, eta)) <= 1e-9);
    }
}

#[test]
fn frft_fixed_eta_against_direct_sum() {
    let h: Vec<Complex64> = (0..256)
        .map(|n| Complex64::new((0.37 * n as f64).sin(), (1.3 * n as f64).cos() / (1.0 + n as f64)))
        .collect();
    let err = rel_err(&frft(&h, 0.0037).unwrap(), &fractional_sum(&h, 0.0037));
    assert!(err <= 1e-9, "rel err {err:e}");
}

#[test]
fn frft_eta_zero_sums_input() {
    let h: Vec<Complex64> = (0..16).map(|n| Complex64::new(n as f64, -0.5 * n as f64)).collect();
    let total: Complex64 = h.iter().sum();
    for v in frft(&h, 0.0).unwrap() {
        assert!((v - total).norm() < 1e-12);
    }
}

#[test]
fn grid_integral_fft_and_frft_modes_agree() {
    let model = ModelSpec::Gaussian { mu: 0.0, sigma: 1.0 };
    let nu = -1.5;
    let body = |u: f64| -> cfrisk::Result<Complex64> {
        let z = Complex64::new(u, nu);
        Ok(model.gcf(z)? / (z * z))
    };
    for rule in [WeightRule::Trapezoidal, WeightRule::Midpoint] {
        for n in [64usize, 1024] {
            let freq = FreqGrid::new(100.0, n, rule, nu).unwrap();
            let space = SpaceGrid::fft_dual(&freq, -3.0);
            let a = grid_integral(body, &freq, &space, TransformMode::Fft).unwrap();
            let b = grid_integral(body, &freq, &space, TransformMode::Frft).unwrap();
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-10 * scale, "{rule:?} n={n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn grid_integral_single_small_grid_matches_hand_sum() {
    let nu = 1.0;
    let body = |u: f64| -> cfrisk::Result<Complex64> { Ok(Complex64::new(1.0 / (1.0 + u), u.sin())) };
    let freq = FreqGrid::new(4.0, 8, WeightRule::Trapezoidal, nu).unwrap();
    let space = SpaceGrid { x1: 0.3, gamma: 0.11, n: 8 };
    let out = grid_integral(body, &freq, &space, TransformMode::Frft).unwrap();
    for (m, &got) in out.iter().enumerate() {
        let x = space.point(m);
        let mut s = 0.0;
        for k in 0..8 {
            let u = k as f64 * 0.5;
            let w = if k == 0 || k == 7 { 0.5 } else { 1.0 };
            s += w * (Complex64::from_polar(1.0, -u * x) * body(u).unwrap()).re;
        }
        let want = 0.5 * s / PI;
        assert!((got - want).abs() < 1e-13, "m={m}: {got} vs {want}");
    }
}
