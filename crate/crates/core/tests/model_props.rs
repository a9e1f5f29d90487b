use cfrisk::models::{gcf_rsjd_general, gcf_rsjd_two_state};
use cfrisk::{Complex64, ModelSpec, Regime, RsjdParams};
use proptest::prelude::*;

const T: f64 = 1.0 / 12.0;

fn regime() -> impl Strategy<Value = Regime> {
    (-0.3f64..0.3, 0.05f64..0.6, 0.0f64..3.0, -0.2f64..0.2, 0.0f64..0.3)
        .prop_map(|(mu, sigma, lambda, a, b)| Regime { mu, sigma, lambda, a, b })
}

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        (-1.0f64..1.0, 0.1f64..2.0).prop_map(|(mu, sigma)| ModelSpec::Gaussian { mu, sigma }),
        (1u32..20, 0.01f64..0.99).prop_map(|(n, p)| ModelSpec::Binomial { n, p }),
        (-0.5f64..0.5, 0.05f64..0.6, 0.05f64..2.0).prop_map(|(mu, sigma, t)| ModelSpec::LogNormalReturn { mu, sigma, t }),
        (-0.5f64..0.5, 0.05f64..0.6, 0.0f64..3.0, -0.2f64..0.2, 0.01f64..0.3)
            .prop_map(|(mu, sigma, lambda, a, b)| ModelSpec::MertonJd { mu, sigma, lambda, a, b, t: T }),
        (-0.3f64..0.3, 0.05f64..0.5, 0.02f64..0.5)
            .prop_map(|(theta, sigma, nu)| ModelSpec::VarianceGamma { theta, sigma, nu, t: T }),
        (0.01f64..0.3, 0.2f64..3.0, 0.01f64..0.3, 0.05f64..0.6, -0.95f64..0.5)
            .prop_map(|(v0, kappa, theta, sigma_v, rho)| ModelSpec::Heston { mu: 0.0, v0, kappa, theta, sigma_v, rho, t: T }),
        (regime(), regime(), 0.1f64..3.0, 0.1f64..3.0, 0usize..2)
            .prop_map(|(r1, r2, q1, q2, i0)| ModelSpec::Rsjd(RsjdParams::two_state(r1, r2, q1, q2, i0, T))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugate_symmetry_and_unit_bound(m in model(), u in -60.0f64..60.0) {
        let a = m.gcf(Complex64::new(u, 0.0)).unwrap();
        let b = m.gcf(Complex64::new(-u, 0.0)).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12, "{a} vs {b}");
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn origin_is_exactly_one(m in model()) {
        prop_assert_eq!(m.gcf(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn imaginary_axis_is_real_positive(m in model(), frac in 0.05f64..0.95) {
        let strip = m.moment_strip();
        let (lo, hi) = (strip.lo.max(-3.0), strip.hi.min(3.0));
        let nu = lo + frac * (hi - lo);
        let v = m.gcf(Complex64::new(0.0, nu)).unwrap();
        prop_assert!(v.re > 0.0);
        prop_assert!(v.im.abs() <= 1e-12 * v.re, "{v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_state_closed_form_matches_matrix_exponential(
        r1 in regime(), r2 in regime(), q1 in 0.05f64..4.0, q2 in 0.05f64..4.0, i0 in 0usize..2, t in 0.02f64..1.0,
    ) {
        let p = RsjdParams::two_state(r1, r2, q1, q2, i0, t);
        for k in 0..64 {
            let z = Complex64::new(-20.0 + 40.0 * k as f64 / 63.0, 0.0);
            let a = gcf_rsjd_two_state(&p, z).unwrap();
            let b = gcf_rsjd_general(&p, z).unwrap();
            prop_assert!((a - b).norm() <= 1e-10, "z={z}: {a} vs {b}");
        }
    }
}

#[test]
fn merton_without_jumps_is_gaussian_on_contour() {
    let (mu, sigma, t) = (0.07, 0.25, 0.5);
    let merton = ModelSpec::MertonJd { mu, sigma, lambda: 0.0, a: -0.1, b: 0.2, t };
    let gauss = ModelSpec::Gaussian { mu: (mu - 0.5 * sigma * sigma) * t, sigma: sigma * t.sqrt() };
    for k in 0..256 {
        let z = Complex64::new(k as f64 * 100.0 / 255.0, -1.5);
        let (a, b) = (merton.gcf(z).unwrap(), gauss.gcf(z).unwrap());
        assert!((a - b).norm() <= 1e-12, "z={z}: {a} vs {b}");
    }
}

#[test]
fn fig_rs_two_state_at_one() {
    let p = RsjdParams::two_state(
        Regime { mu: 0.0, sigma: 0.1, lambda: 0.0, a: 0.0, b: 0.0 },
        Regime { mu: -0.1, sigma: 0.3, lambda: 0.0, a: 0.0, b: 0.0 },
        0.5,
        0.5,
        0,
        T,
    );
    for u in [1.0, 50.0, 500.0, 2000.0] {
        let z = Complex64::new(u, 0.75);
        let a = gcf_rsjd_two_state(&p, z).unwrap();
        let b = gcf_rsjd_general(&p, z).unwrap();
        assert!(a.is_finite() && (a - b).norm() <= 1e-10, "u={u}: {a} vs {b}");
    }
}
