//! Radix-2 FFT, its O(N^2) reference, and the fractional DFT built from
//! three FFTs of twice the length.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_pow2(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        Err(Error::NonPowerOfTwo(n))
    } else {
        Ok(())
    }
}

/// `X_m = sum_n exp(-2 pi i n m / N) h_n` by direct summation.
pub fn dft_reference(h: &[Complex64]) -> Vec<Complex64> {
    let n = h.len();
    (0..n)
        .map(|m| {
            h.iter()
                .enumerate()
                .map(|(k, &v)| {
                    // reduce n*m mod N before forming the angle
                    let r = ((k as u128 * m as u128) % n as u128) as f64;
                    let (s, c) = (-2.0 * PI * r / n as f64).sin_cos();
                    v * Complex64::new(c, s)
                })
                .sum()
        })
        .collect()
}

/// Forward twiddles `exp(-2 pi i k / n)`, `k < n / 2`.
fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n / 2)
        .map(|k| {
            let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// In-place forward transform; the inverse (without `1/N`) conjugates the
/// twiddles.
fn transform_in_place(buf: &mut [Complex64], twiddles: &[Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let w = if inverse { w.conj() } else { w };
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Forward DFT with the `exp(-2 pi i n m / N)` sign convention.
pub fn fft(h: &[Complex64]) -> Result<Vec<Complex64>> {
    check_pow2(h.len())?;
    let mut out = h.to_vec();
    transform_in_place(&mut out, &twiddles(h.len()), false);
    Ok(out)
}

/// Inverse of [`fft`], including the `1/N` factor.
pub fn ifft(h: &[Complex64]) -> Result<Vec<Complex64>> {
    check_pow2(h.len())?;
    let mut out = h.to_vec();
    transform_in_place(&mut out, &twiddles(h.len()), true);
    let scale = 1.0 / out.len() as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// `exp(i pi j^2 eta)` with `j^2 eta` reduced modulo 2 before the
/// trigonometric call. The product is split into its rounded value and
/// exact rounding error so the reduction loses nothing for large `j`.
fn chirp(j: usize, eta: f64) -> Complex64 {
    let q = (j as u64 * j as u64) as f64;
    let hi = q * eta;
    let lo = q.mul_add(eta, -hi);
    let r = hi % 2.0 + lo;
    let (s, c) = (PI * r).sin_cos();
    Complex64::new(c, s)
}

/// Fractional DFT `sum_n exp(-2 pi i n m eta) h_n`, `m = 0..N`.
///
/// Writes `n m = (n^2 + m^2 - (m - n)^2) / 2` and evaluates the resulting
/// convolution with a circular one of length `2N`: `y` carries the input
/// with a `exp(-i pi j^2 eta)` chirp and `N` zeros, `z` carries
/// `exp(i pi j^2 eta)` for `j < N` and the mirrored tail
/// `exp(i pi (2N - j)^2 eta)` for `N <= j < 2N`. The output chirp is
/// `exp(-i pi m^2 eta)`.
pub fn frft(h: &[Complex64], eta: f64) -> Result<Vec<Complex64>> {
    let n = h.len();
    check_pow2(n)?;
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(format!("eta must be finite, got {eta}")));
    }
    // the mirrored tail needs chirps up to index N
    let chirps: Vec<Complex64> = (0..=n).map(|j| chirp(j, eta)).collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut y = vec![zero; 2 * n];
    let mut z = vec![zero; 2 * n];
    for j in 0..n {
        y[j] = h[j] * chirps[j].conj();
        z[j] = chirps[j];
    }
    for j in n..2 * n {
        z[j] = chirps[2 * n - j];
    }
    let tw = twiddles(2 * n);
    transform_in_place(&mut y, &tw, false);
    transform_in_place(&mut z, &tw, false);
    for (a, b) in y.iter_mut().zip(&z) {
        *a *= b;
    }
    transform_in_place(&mut y, &tw, true);
    let scale = 1.0 / (2 * n) as f64;
    Ok((0..n).map(|m| chirps[m].conj() * y[m] * scale).collect())
}
