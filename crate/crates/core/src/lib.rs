//! Value-at-Risk and Conditional Value-at-Risk of losses described by a
//! generalized characteristic function.
//!
//! Both measures come out of one convex scalar problem,
//! `G(x) = x + E[(L - x)^+] / (1 - alpha)`, whose minimum is the CVaR and whose
//! (lower) minimizer is the VaR. The stop-loss expectation inside `G` is
//! evaluated by Fourier inversion along a damped contour, either pointwise
//! with adaptive quadrature or on a whole grid at once with an FFT or a
//! fractional FFT.
//!
//! * [`models`] generalized characteristic functions and damping strips.
//! * [`transforms`] quadrature, FFT, FRFT and grid evaluation of Fourier integrals.
//! * [`risk`] stop-loss / CDF / payoff expectations, the objective and the algorithms.
//! * [`oracles`] closed forms, discrete brute force and Monte Carlo references.

// `!(x > 0.0)` is used on purpose to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod models;
pub mod oracles;
pub mod risk;
pub mod transforms;

pub use error::{Error, Result};
pub use models::{ComplexPoint, DampingStrip, Kernel, ModelSpec, Regime, RsjdParams};
pub use risk::{Algorithm, LossSpec, RiskConfig, RiskResult};
pub use transforms::{FreqGrid, SpaceGrid, TransformMode, WeightRule};

pub use num_complex::Complex64;
