//! Post-hoc checks of a computed factorization. Nothing here fails; every
//! defect is reported as a number.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fourier;
use crate::matrix::MatrixLaurent;
use crate::pipeline::{verification_grid, StageDiagnostics};
use crate::roots;
use crate::signature::Signature;
use crate::triangular::spectral_norm;

/// Roots of `det S₊` closer than this to the circle are reported as boundary roots.
pub const BOUNDARY_ROOT_TOL: f64 = 1e-6;

/// Relative trim applied to `det S₊` before rooting.
pub const DET_TRIM: f64 = 1e-10;

/// Comparison of the computed factor with an exact one, `S₊ ≈ S_known K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownComparison {
    /// Least-squares constant right factor, row-major `[re, im]`.
    pub k: Vec<[f64; 2]>,
    /// `max_p |S₊,p - (S_known K)_p| / max_p |S₊,p|` over coefficients.
    pub coefficient_error: f64,
    /// `max |K J K* - J|`.
    pub junitarity_defect: f64,
    /// `max_z |S_known(z)⁻¹ S₊(z) - K|` where `S_known(z)` is well conditioned.
    pub constancy_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub grid_size: usize,
    /// `max_z ‖S - S₊JS₊*‖₂ / max_z ‖S‖₂`.
    pub residual_max: f64,
    /// Mean over the grid of the same relative defect.
    pub residual_mean: f64,
    /// Root-mean-square of the defect's entries over the grid, relative.
    pub residual_l2: f64,
    /// Largest discarded negative-power coefficient, relative to the factor.
    pub causality_leakage: f64,
    /// Smallest `|z|` over roots of `det S₊`; `None` when `det S₊` is constant.
    pub stability_margin: Option<f64>,
    pub boundary_roots: usize,
    pub interior_roots: usize,
    pub max_junitarity_defect: f64,
    pub known: Option<KnownComparison>,
}

impl FactorizationReport {
    /// No roots of `det S₊` strictly inside `|z| < 1 - tol`.
    pub fn is_stable(&self, tol: f64) -> bool {
        self.stability_margin.map_or(true, |m| m >= 1.0 - tol)
    }
}

/// Relative residual statistics `(max, mean, l2)` of `S - F J F*` on a grid.
pub fn residuals(
    s: &MatrixLaurent,
    factor: &MatrixLaurent,
    signature: &Signature,
    grid: usize,
) -> (f64, f64, f64) {
    let j = signature.to_matrix();
    let ss = s.sample(grid);
    let fs = factor.sample(grid);
    let scale = ss.iter().map(spectral_norm).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for (sz, fz) in ss.iter().zip(&fs) {
        let d = fz * &j * fz.adjoint() - sz;
        let n = spectral_norm(&d);
        max = max.max(n);
        sum += n;
        sq += d.norm_squared();
    }
    let g = grid as f64;
    (max / scale, sum / g / scale, (sq / g).sqrt() / scale)
}

/// `det F` as a polynomial, from pointwise determinants.
fn det_poly(factor: &MatrixLaurent) -> Vec<Complex64> {
    let r = factor.rows() as i64;
    let deg = r * factor.highest().max(0);
    let grid = fourier::default_grid_size((deg + 1) as usize).max(64);
    let values: Vec<Complex64> = factor.sample(grid).iter().map(|m| m.determinant()).collect();
    let det = fourier::fourier_coeffs_from_samples(&values, 0, deg)
        .expect("grid covers the determinant")
        .trim(DET_TRIM);
    det.dense(0, deg)
}

/// `(min |root|, boundary roots, interior roots)` of `det F`.
pub fn stability(factor: &MatrixLaurent) -> (Option<f64>, usize, usize) {
    let roots = roots::poly_roots(&det_poly(factor));
    let mut min = f64::INFINITY;
    let mut boundary = 0;
    let mut interior = 0;
    for r in roots {
        let m = r.norm();
        min = min.min(m);
        if (m - 1.0).abs() <= BOUNDARY_ROOT_TOL {
            boundary += 1;
        } else if m < 1.0 {
            interior += 1;
        }
    }
    (min.is_finite().then_some(min), boundary, interior)
}

/// Least-squares `K` with `factor ≈ known · K` coefficientwise.
pub fn compare_known(
    factor: &MatrixLaurent,
    known: &MatrixLaurent,
    signature: &Signature,
    grid: usize,
) -> KnownComparison {
    let r = factor.rows();
    let lo = factor.lowest().min(known.lowest()).min(0);
    let hi = factor.highest().max(known.highest());
    let powers: Vec<i64> = (lo..=hi).collect();
    let rows = powers.len() * r;
    let mut a = DMatrix::<Complex64>::zeros(rows, r);
    let mut b = DMatrix::<Complex64>::zeros(rows, r);
    for (t, &p) in powers.iter().enumerate() {
        let kp = known.coeff_matrix(p);
        let fp = factor.coeff_matrix(p);
        a.view_mut((t * r, 0), (r, r)).copy_from(&kp);
        b.view_mut((t * r, 0), (r, r)).copy_from(&fp);
    }
    let svd = a.clone().svd(true, true);
    let k = svd
        .solve(&b, 1e-14)
        .unwrap_or_else(|_| DMatrix::identity(r, r));

    let fit = &a * &k - &b;
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let coefficient_error = fit.iter().map(|v| v.norm()).fold(0.0, f64::max) / scale;

    let j = signature.to_matrix();
    let junitarity_defect = (&k * &j * k.adjoint() - &j)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);

    let ks = known.sample(grid);
    let fs = factor.sample(grid);
    let dets: Vec<f64> = ks.iter().map(|m| m.determinant().norm()).collect();
    let dmax = dets.iter().cloned().fold(0.0, f64::max);
    let mut constancy_defect: f64 = 0.0;
    for ((kz, fz), d) in ks.iter().zip(&fs).zip(&dets) {
        if *d < 0.1 * dmax {
            continue;
        }
        if let Some(inv) = kz.clone().try_inverse() {
            let kk = inv * fz - &k;
            constancy_defect = constancy_defect.max(kk.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    KnownComparison {
        k: k.transpose().iter().map(|v| [v.re, v.im]).collect(),
        coefficient_error,
        junitarity_defect,
        constancy_defect,
    }
}

/// Builds the report for a computed factor.
///
/// `full` is the factor before its final window, used for the leakage figure.
pub fn verify_factorization(
    s: &MatrixLaurent,
    full: &MatrixLaurent,
    factor: &MatrixLaurent,
    signature: &Signature,
    per_step: &[StageDiagnostics],
    grid_size: usize,
    known: Option<&MatrixLaurent>,
) -> FactorizationReport {
    let grid = grid_size.max(verification_grid(s, factor));
    let (residual_max, residual_mean, residual_l2) = residuals(s, factor, signature, grid);
    let scale = factor.max_abs().max(f64::MIN_POSITIVE);
    let leakage = full
        .entries()
        .iter()
        .map(|e| e.max_abs_negative())
        .fold(0.0, f64::max)
        / scale;
    let (stability_margin, boundary_roots, interior_roots) = stability(factor);
    let max_junitarity_defect = per_step
        .iter()
        .map(|d| d.junitarity_defect)
        .fold(0.0, f64::max);
    FactorizationReport {
        grid_size: grid,
        residual_max,
        residual_mean,
        residual_l2,
        causality_leakage: leakage,
        stability_margin,
        boundary_roots,
        interior_roots,
        max_junitarity_defect,
        known: known.map(|k| compare_known(factor, k, signature, grid)),
    }
}

/// Solves `known · x = v` pointwise; exposed for diagnostics.
pub fn pointwise_k(known: &MatrixLaurent, factor: &MatrixLaurent, z: Complex64) -> Option<DMatrix<Complex64>> {
    let kz = known.eval(z);
    kz.try_inverse().map(|inv| inv * factor.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn exact_factor_against_itself() {
        let s = fixtures::singular_example();
        let f = fixtures::singular_example_factor();
        let sig = fixtures::singular_example_signature();
        let rep = verify_factorization(&s, &f, &f, &sig, &[], 256, Some(&f));
        assert!(rep.residual_max < 1e-14);
        assert_eq!(rep.causality_leakage, 0.0);
        let known = rep.known.unwrap();
        assert!(known.coefficient_error < 1e-14);
        assert!(known.junitarity_defect < 1e-13);
        assert!(known.constancy_defect < 1e-13);
        assert!((known.k[0][0] - 1.0).abs() < 1e-13);
        // det = 2z² - 2 has both roots on the circle.
        assert_eq!(rep.boundary_roots, 2);
        assert!((rep.stability_margin.unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn right_unitary_factor_is_recovered() {
        let f = fixtures::singular_example_factor();
        let sig = fixtures::singular_example_signature();
        let (ch, sh) = (1.25f64.cosh(), 1.25f64.sinh());
        let k = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(ch, 0.0),
                Complex64::new(0.0, sh),
                Complex64::new(0.0, -sh),
                Complex64::new(ch, 0.0),
            ],
        );
        let fk = f.mat_mul(&MatrixLaurent::from_constant(&k)).unwrap();
        let cmp = compare_known(&fk, &f, &sig, 64);
        assert!(cmp.coefficient_error < 1e-14);
        assert!(cmp.junitarity_defect < 1e-12);
    }
}
