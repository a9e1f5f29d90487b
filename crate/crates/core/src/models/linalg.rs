use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const MAX_DIM: usize = 64;

/// Matrix exponential of a complex square matrix.
///
/// Backed by nalgebra's scaling-and-squaring Pade implementation; this
/// wrapper adds the shape and finiteness checks.
pub fn matrix_exp(a: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix_exp needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() == 0 || a.nrows() > MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "matrix_exp supports dimensions 1..={MAX_DIM}, got {}",
            a.nrows()
        )));
    }
    if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidParameter("matrix_exp input has non-finite entries".into()));
    }
    let e = a.exp();
    if e.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NumericalOverflow("matrix exponential overflowed".into()));
    }
    Ok(e)
}
