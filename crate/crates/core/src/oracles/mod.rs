//! Reference values independent of the Fourier machinery: closed forms for
//! the Gaussian and log-normal cases, brute force for finite laws, and
//! Monte Carlo for the remaining log-return models.

mod closed;
mod mc;
mod normal;

pub use closed::{binomial_pmf, discrete_g, discrete_var_cvar, gaussian_var_cvar, lognormal_var_cvar};
pub use mc::{mc_characteristic, mc_var_cvar, sample_log_returns, McConfig, McResult};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
