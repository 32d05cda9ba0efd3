//! Uniform-grid sampling on the unit circle and discrete Fourier coefficients.
//!
//! Grid point `n` of a size-`G` grid is `ω^n` with `ω = exp(2πi/G)`. The
//! coefficient estimate for power `k` is `(1/G) Σ_n f(ω^n) ω^(-nk)`, which is
//! exact for Laurent polynomials whose span is below `G`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Oversampling factor applied by [`default_grid_size`].
pub const OVERSAMPLING: usize = 8;

/// Smallest power of two that is at least `OVERSAMPLING × span` (and at least 8).
pub fn default_grid_size(span: usize) -> usize {
    (OVERSAMPLING * span.max(1)).next_power_of_two().max(8)
}

/// The `G` grid points `exp(2πi n / G)`.
pub fn grid_points(size: usize) -> Vec<Complex64> {
    (0..size)
        .map(|n| Complex64::from_polar(1.0, 2.0 * PI * n as f64 / size as f64))
        .collect()
}

/// Values of `poly` at every grid point, computed by folding its coefficients
/// modulo `size` and running one inverse FFT. Exact for any span.
pub fn sample(poly: &LaurentPoly, size: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    let g = size as i64;
    for (i, c) in poly.coeffs().iter().enumerate() {
        let k = (poly.lowest() + i as i64).rem_euclid(g) as usize;
        buf[k] += c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(size).process(&mut buf);
    buf
}

/// Discrete Fourier coefficients `c_k` for `k ∈ [lowest, highest]` of the
/// function sampled on a uniform grid.
pub fn fourier_coeffs_from_samples(
    samples: &[Complex64],
    lowest: i64,
    highest: i64,
) -> Result<LaurentPoly> {
    let size = samples.len();
    let needed = (highest - lowest + 1).max(0) as usize;
    if size == 0 || !size.is_power_of_two() || size < needed {
        return Err(Error::Size { grid: size, needed });
    }
    let spectrum = forward(samples);
    let g = size as i64;
    let scale = 1.0 / size as f64;
    let coeffs = (lowest..=highest)
        .map(|k| spectrum[k.rem_euclid(g) as usize] * scale)
        .collect();
    Ok(LaurentPoly::new(lowest, coeffs))
}

/// Unnormalized forward DFT `X_k = Σ x_n exp(-2πi nk/G)`.
pub fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Linear convolution through a zero-padded FFT.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = fa.clone();
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    planner.plan_fft_inverse(size).process(&mut fa);
    let scale = 1.0 / size as f64;
    fa.truncate(out_len);
    fa.iter_mut().for_each(|x| *x *= scale);
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_recovered() {
        let samples = vec![Complex64::new(1.0, 0.0); 8];
        let p = fourier_coeffs_from_samples(&samples, -2, 2).unwrap();
        assert!(p.max_diff(&LaurentPoly::one()) < 1e-15);
    }

    #[test]
    fn band_limited_recovered() {
        let pts = grid_points(8);
        let samples: Vec<_> = pts.iter().map(|z| z + z.inv()).collect();
        let p = fourier_coeffs_from_samples(&samples, -1, 1).unwrap();
        let expected = LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0]);
        assert!(p.max_diff(&expected) < 1e-14);
    }

    #[test]
    fn grid_too_small_or_not_power_of_two() {
        let samples = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            fourier_coeffs_from_samples(&samples, -3, 3),
            Err(Error::Size { grid: 4, needed: 7 })
        ));
        let samples = vec![Complex64::new(1.0, 0.0); 6];
        assert!(fourier_coeffs_from_samples(&samples, 0, 1).is_err());
    }

    #[test]
    fn sample_matches_pointwise_evaluation_even_when_folded() {
        let p = LaurentPoly::from_real(-5, &[1.0, -2.0, 0.5, 3.0, 0.0, 1.0, 2.0, -1.0, 4.0, 0.25, 1.0, 7.0]);
        let pts = grid_points(8);
        let s = sample(&p, 8);
        for (z, v) in pts.iter().zip(&s) {
            assert!((p.eval(*z) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn default_grid_oversamples() {
        assert_eq!(default_grid_size(1), 8);
        assert_eq!(default_grid_size(3), 32);
        assert_eq!(default_grid_size(161), 2048);
    }
}
