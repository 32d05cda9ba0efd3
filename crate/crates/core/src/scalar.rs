//! Canonical scalar spectral factorization `f = f⁺ · conj(f⁺)` on the circle.
//!
//! Two independent routes:
//!
//! - [`fejer_riesz`] roots `z^n f(z)` and keeps the roots outside the open
//!   unit disk (halving boundary multiplicities). Handles zeros on the circle.
//! - [`exp_log`] works from samples: `f⁺ = exp(P₊ log f)` where `P₊` keeps
//!   the analytic half of the spectrum (the Hilbert multiplier `-i·sign(k)`
//!   applied to `½ log f` and added back). Requires `log f` to be integrable
//!   on the sampled grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::laurent::LaurentPoly;
use crate::roots::poly_roots;

/// Roots within this distance of the unit circle count as boundary roots.
pub const BOUNDARY_ROOT_TOL: f64 = 1e-7;

/// Boundary roots closer than this (in angle) are merged into one cluster.
const CLUSTER_ANGLE_TOL: f64 = 1e-5;

/// Tolerance for the grid nonnegativity check, relative to `max |f|`.
pub const NONNEGATIVE_TOL: f64 = 1e-10;

/// Minimum sample ratio accepted by [`exp_log`].
pub const PALEY_WIENER_RATIO: f64 = 1e-13;

/// Default grid size for [`exp_log`].
pub const EXP_LOG_GRID: usize = 4096;

const CHECK_GRID: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarMethod {
    FejerRiesz,
    ExpLog,
}

#[derive(Clone, Debug)]
pub struct ScalarFactorResult {
    /// Causal factor with `factor(0) > 0`.
    pub factor: LaurentPoly,
    /// `max_z | |f⁺(z)|² - f(z) |` over the check grid.
    pub residual: f64,
    pub method: ScalarMethod,
}

fn check_grid_size(f: &LaurentPoly) -> usize {
    CHECK_GRID.max(fourier::default_grid_size(f.span()))
}

/// Minimum of the real part of `f` over a uniform grid.
fn grid_min(f: &LaurentPoly) -> f64 {
    fourier::sample(f, check_grid_size(f))
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min)
}

fn residual_on_grid(f: &LaurentPoly, factor: &LaurentPoly) -> f64 {
    let g = check_grid_size(f).max(fourier::default_grid_size(factor.span()));
    let fs = fourier::sample(f, g);
    let ps = fourier::sample(factor, g);
    fs.iter()
        .zip(&ps)
        .map(|(fv, pv)| (pv.norm_sqr() - fv.re).abs())
        .fold(0.0, f64::max)
}

/// Fejér–Riesz factor of a nonnegative self-adjoint Laurent polynomial.
pub fn fejer_riesz(f: &LaurentPoly) -> Result<ScalarFactorResult> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let scale = f.max_abs();
    let defect = f.max_diff(&f.tilde()) / scale;
    if defect > 1e-10 {
        return Err(Error::NotHermitian { defect });
    }
    // Enforce exact self-adjointness before rooting.
    let g = (f + &f.tilde()).scale_real(0.5);
    let min = grid_min(&g);
    if min < -NONNEGATIVE_TOL * scale {
        return Err(Error::NotNonnegative { min });
    }

    let n = g.highest().max(-g.lowest());
    if n == 0 {
        let c = g.coeff(0).re;
        if c <= 0.0 {
            return Err(Error::NotNonnegative { min: c });
        }
        return Ok(ScalarFactorResult {
            factor: LaurentPoly::constant(Complex64::new(c.sqrt(), 0.0)),
            residual: 0.0,
            method: ScalarMethod::FejerRiesz,
        });
    }

    // z^n g(z) has degree 2n with nonzero constant and leading coefficients.
    let shifted: Vec<Complex64> = (-n..=n).map(|k| g.coeff(k)).collect();
    let roots = poly_roots(&shifted);

    let mut kept: Vec<Complex64> = Vec::with_capacity(n as usize);
    let mut boundary: Vec<Complex64> = Vec::new();
    for r in roots {
        let m = r.norm();
        if m > 1.0 + BOUNDARY_ROOT_TOL {
            kept.push(r);
        } else if m >= 1.0 - BOUNDARY_ROOT_TOL {
            boundary.push(r);
        }
    }
    for (root, multiplicity) in cluster_boundary_roots(&boundary, &shifted)? {
        kept.extend(std::iter::repeat_n(root, multiplicity / 2));
    }
    if kept.len() != n as usize {
        return Err(Error::NotNonnegative { min });
    }

    // q(z) = Π (1 - z/r); q(0) = 1 so the phase normalization is automatic.
    let mut q = LaurentPoly::one();
    for r in &kept {
        q = q.mul_direct(&LaurentPoly::new(0, vec![Complex64::new(1.0, 0.0), -r.inv()]));
    }
    // Constant coefficient of g equals Σ|f⁺_k|².
    let c = (g.coeff(0).re / q.energy()).sqrt();
    let factor = q.scale_real(c);
    let residual = residual_on_grid(&g, &factor);
    Ok(ScalarFactorResult {
        factor,
        residual,
        method: ScalarMethod::FejerRiesz,
    })
}

/// Groups near-circle roots by angle; each cluster is replaced by its mean
/// projected onto the circle. Odd clusters mean `f` changes sign there.
fn cluster_boundary_roots(
    boundary: &[Complex64],
    coeffs: &[Complex64],
) -> Result<Vec<(Complex64, usize)>> {
    if boundary.is_empty() {
        return Ok(Vec::new());
    }
    let mut sorted: Vec<Complex64> = boundary.to_vec();
    sorted.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());

    let mut clusters: Vec<Vec<Complex64>> = vec![vec![sorted[0]]];
    for pair in sorted.windows(2) {
        if angle_gap(pair[0], pair[1]) < CLUSTER_ANGLE_TOL {
            clusters.last_mut().unwrap().push(pair[1]);
        } else {
            clusters.push(vec![pair[1]]);
        }
    }
    // Merge across the ±π seam.
    if clusters.len() > 1 {
        let first = clusters[0][0];
        let last = *clusters.last().unwrap().last().unwrap();
        if angle_gap(last, first) < CLUSTER_ANGLE_TOL {
            let head = clusters.remove(0);
            clusters.last_mut().unwrap().extend(head);
        }
    }

    clusters
        .into_iter()
        .map(|c| {
            if c.len() % 2 == 1 {
                return Err(Error::NotNonnegative { min: 0.0 });
            }
            let mean: Complex64 = c.iter().sum::<Complex64>() / c.len() as f64;
            let root = refine_multiple_root(coeffs, mean, c.len());
            Ok((root / root.norm(), c.len()))
        })
        .collect()
}

/// A root of multiplicity `k` is a simple root of the `(k-1)`-th derivative;
/// Newton on that derivative recovers the accuracy lost by the eigensolver.
fn refine_multiple_root(coeffs: &[Complex64], start: Complex64, k: usize) -> Complex64 {
    let mut deriv = coeffs.to_vec();
    for _ in 1..k {
        deriv = deriv
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
    }
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in deriv.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    let mut x = start;
    for _ in 0..8 {
        let (p, dp) = eval(x);
        if dp.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        if (next - start).norm() > 1e-4 || eval(next).0.norm() >= p.norm() {
            break;
        }
        x = next;
    }
    x
}

fn angle_gap(a: Complex64, b: Complex64) -> f64 {
    let d = (b.arg() - a.arg()).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Exp-Log spectral factor from strictly positive samples on a uniform grid.
pub fn exp_log(samples: &[f64], degree_cap: usize) -> Result<ScalarFactorResult> {
    let size = samples.len();
    if size == 0 || !size.is_power_of_two() || size < degree_cap + 1 {
        return Err(Error::Size {
            grid: size,
            needed: degree_cap + 1,
        });
    }
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositiveSample { index, value });
    }
    let max = samples.iter().cloned().fold(0.0, f64::max);
    let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < PALEY_WIENER_RATIO * max {
        return Err(Error::PaleyWienerViolation { ratio: min / max });
    }

    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|v| Complex64::new(v.ln(), 0.0)).collect();
    planner.plan_fft_forward(size).process(&mut buf);
    let inv = 1.0 / size as f64;
    // Analytic projection: c_0/2, c_k for 0 < k < G/2, half the Nyquist bin.
    for (k, c) in buf.iter_mut().enumerate() {
        let weight = if k == 0 || k == size / 2 {
            0.5
        } else if k < size / 2 {
            1.0
        } else {
            0.0
        };
        *c *= weight * inv;
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let exp_samples: Vec<Complex64> = buf.iter().map(|v| v.exp()).collect();
    let mut factor = fourier::fourier_coeffs_from_samples(&exp_samples, 0, degree_cap as i64)?;
    let c0 = factor.coeff(0);
    if c0.norm() > 0.0 {
        factor = factor.scale(c0.conj() / c0.norm());
    }

    let fitted = fourier::sample(&factor, size);
    let residual = fitted
        .iter()
        .zip(samples)
        .map(|(p, f)| (p.norm_sqr() - f).abs())
        .fold(0.0, f64::max);
    Ok(ScalarFactorResult {
        factor,
        residual,
        method: ScalarMethod::ExpLog,
    })
}

/// Exp-Log factor of a Laurent polynomial sampled on a `grid`-point grid.
pub fn exp_log_poly(f: &LaurentPoly, grid: usize, degree_cap: usize) -> Result<ScalarFactorResult> {
    let samples: Vec<f64> = fourier::sample(f, grid).iter().map(|v| v.re).collect();
    exp_log(&samples, degree_cap)
}

/// One diagonal step of the triangular factorization: `⁺√(sign · s)`.
pub fn cholesky_scalar_step(s: &LaurentPoly, sign: i8) -> Result<ScalarFactorResult> {
    let g = s.scale_real(f64::from(sign));
    if g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let min = grid_min(&g);
    if min < -NONNEGATIVE_TOL * g.max_abs() {
        return Err(Error::SignMismatch { min });
    }
    fejer_riesz(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_of_example_first_entry() {
        let f = LaurentPoly::from_real(-1, &[8.0, 19.0, 8.0]);
        let r = fejer_riesz(&f).unwrap();
        // a^2 + b^2 = 19, ab = 8 with a > b > 0
        let a = ((19.0 + 105f64.sqrt()) / 2.0).sqrt();
        let b = 8.0 / a;
        assert!((r.factor.coeff(0).re - a).abs() < 1e-13);
        assert!((r.factor.coeff(1).re - b).abs() < 1e-13);
        assert!(format!("{:.3}", a).starts_with("3.824"));
        assert!(format!("{:.3}", b).starts_with("2.092"));
        assert_eq!(r.factor.lowest(), 0);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn boundary_singular_factor() {
        let f = LaurentPoly::from_real(-2, &[-1.0, 0.0, 2.0, 0.0, -1.0]);
        let r = fejer_riesz(&f).unwrap();
        let expected = LaurentPoly::from_real(0, &[1.0, 0.0, -1.0]);
        assert!(r.factor.max_diff(&expected) < 1e-12, "{}", r.factor);
    }

    #[test]
    fn constant_input() {
        let r = fejer_riesz(&LaurentPoly::one()).unwrap();
        assert_eq!(r.factor, LaurentPoly::one());
        assert!(matches!(fejer_riesz(&LaurentPoly::zero()), Err(Error::ZeroInput)));
        assert!(matches!(
            fejer_riesz(&LaurentPoly::constant(c(-1.0, 0.0))),
            Err(Error::NotNonnegative { .. })
        ));
    }

    #[test]
    fn sign_changing_input_rejected() {
        // z + z^-1 = 2cos t
        let f = LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0]);
        assert!(matches!(fejer_riesz(&f), Err(Error::NotNonnegative { .. })));
        // Not self-adjoint.
        let g = LaurentPoly::from_real(-1, &[1.0, 3.0, 2.0]);
        assert!(matches!(fejer_riesz(&g), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_log_constant_and_known_factor() {
        let r = exp_log(&vec![4.0; 64], 3).unwrap();
        assert!(r.factor.max_diff(&LaurentPoly::constant(c(2.0, 0.0))) < 1e-14);

        let fp = LaurentPoly::from_real(0, &[1.0, 0.5]);
        let f = &fp * &fp.tilde();
        let r = exp_log_poly(&f, 1024, 8).unwrap();
        assert!(r.factor.max_diff(&fp) < 1e-10, "{}", r.factor);
    }

    #[test]
    fn exp_log_guards() {
        let mut s = vec![1.0; 16];
        s[3] = 0.0;
        assert!(matches!(exp_log(&s, 2), Err(Error::NonPositiveSample { index: 3, .. })));
        s[3] = 1e-15;
        assert!(matches!(exp_log(&s, 2), Err(Error::PaleyWienerViolation { .. })));
        assert!(matches!(exp_log(&[1.0; 12], 2), Err(Error::Size { .. })));
    }

    #[test]
    fn exp_log_matches_fejer_riesz() {
        let f = LaurentPoly::from_real(-1, &[8.0, 19.0, 8.0]);
        let fr = fejer_riesz(&f).unwrap();
        let el = exp_log_poly(&f, 1024, 1).unwrap();
        assert!(fr.factor.max_diff(&el.factor) < 1e-10);
    }

    #[test]
    fn cholesky_step_examples() {
        let s = LaurentPoly::from_real(-1, &[-8.0, -19.0, -8.0]);
        let r = cholesky_scalar_step(&s, -1).unwrap();
        assert!((r.factor.coeff(0).re - 3.8241).abs() < 1e-4);
        assert!((r.factor.coeff(1).re - 2.0921).abs() < 1e-4);
        assert!(matches!(cholesky_scalar_step(&s, 1), Err(Error::SignMismatch { .. })));

        let one = cholesky_scalar_step(&LaurentPoly::one(), 1).unwrap();
        assert_eq!(one.factor, LaurentPoly::one());

        // -(1 - 0.3z)(1 - 0.3/z)
        let fp = LaurentPoly::from_real(0, &[1.0, -0.3]);
        let s = -(&fp * &fp.tilde());
        let r = cholesky_scalar_step(&s, -1).unwrap();
        assert!(r.factor.max_diff(&fp) < 1e-12);
    }
}
