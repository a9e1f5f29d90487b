use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Generalized characteristic function of the Heston log-return
/// `X_T = log(V_T / V_0)`.
///
/// Uses the `g = (beta - d) / (beta + d)` form of the affine solution, with
/// `beta = kappa - rho sigma_v i z` and `Re d >= 0`. Then `|g| < 1` and
/// `|g exp(-d T)| <= |g|`, so both logarithm arguments `1 - g exp(-dT)` and
/// `1 - g` keep a positive real part and the principal branch is continuous
/// along any contour: no rotation count is needed.
///
/// `z = 0` is a removable singularity of the textbook form and returns 1.
#[allow(clippy::too_many_arguments)]
pub fn heston_gcf(
    mu: f64,
    v0: f64,
    kappa: f64,
    theta: f64,
    sigma_v: f64,
    rho: f64,
    t: f64,
    z: Complex64,
) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    let s2 = sigma_v * sigma_v;
    let iz = I * z;
    let beta = kappa - rho * sigma_v * iz;
    let d = (beta * beta + s2 * (iz + z * z)).sqrt();
    let bm = beta - d;
    let g = bm / (beta + d);
    let e = (-d * t).exp();
    let big_d = bm / s2 * (1.0 - e) / (1.0 - g * e);
    let log_term = (1.0 - g * e).ln() - (1.0 - g).ln();
    let big_c = kappa * theta / s2 * (bm * t - 2.0 * log_term);
    (big_c + big_d * v0 + iz * mu * t).exp()
}
