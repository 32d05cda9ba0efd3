//! Lower-triangular J-factorization `S = M J M*`.
//!
//! Diagonal entries are causal: `f_m = P_m / P_{m-1}` where `P_m` is the
//! Fejér–Riesz factor of `|det [S]_{m×m}|` (and `P_0 = 1`), so that
//! `|f_m|² = |det [S]_m| / |det [S]_{m-1}|` exactly. Off-diagonal entries
//! `ξ_ij` are formed pointwise on a uniform grid with the Cholesky-type
//! recursion and converted to Laurent coefficients in one inverse transform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::laurent::LaurentPoly;
use crate::matrix::MatrixLaurent;
use crate::scalar::{self, ScalarMethod};
use crate::signature::Signature;

/// Grid points where `|det| < DEGENERATE_REL × max|det|` do not vote.
pub const DEGENERATE_REL: f64 = 1e-12;

/// Coefficient-level Hermitian defect accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const DIVISION_FLOOR: f64 = 1e-12;
const DETERMINANT_TRIM: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorSign {
    /// Size of the leading block (1-based).
    pub m: usize,
    /// Majority sign of `det [S]_{m×m}` over non-degenerate grid points.
    pub sign: i8,
    pub min_abs_det: f64,
    pub max_abs_det: f64,
    pub constant: bool,
    /// Grid indices disagreeing with the majority sign.
    pub offending: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorSignReport {
    pub grid_size: usize,
    pub minors: Vec<MinorSign>,
}

impl MinorSignReport {
    pub fn all_constant(&self) -> bool {
        self.minors.iter().all(|m| m.constant)
    }

    /// `J_m = sign(det [S]_m) / sign(det [S]_{m-1})`.
    pub fn induced_signature(&self) -> Signature {
        let mut prev = 1i8;
        let signs = self
            .minors
            .iter()
            .map(|m| {
                let j = m.sign * prev;
                prev = m.sign;
                j
            })
            .collect();
        Signature::new(signs).expect("±1 by construction")
    }

    pub fn first_inconstant(&self) -> Option<&MinorSign> {
        self.minors.iter().find(|m| !m.constant)
    }
}

fn check_hermitian(s: &MatrixLaurent) -> Result<()> {
    if !s.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", s.rows(), s.cols())));
    }
    let defect = s.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Signs of all leading principal minors on a uniform grid. Only fails on
/// non-Hermitian input; sign changes are recorded in the report.
pub fn minor_sign_report(s: &MatrixLaurent, grid_size: usize) -> Result<MinorSignReport> {
    check_hermitian(s)?;
    let r = s.rows();
    let samples = s.sample(grid_size);
    let mut dets = vec![vec![0.0; grid_size]; r];
    for (n, sz) in samples.iter().enumerate() {
        for m in 1..=r {
            dets[m - 1][n] = sz.view((0, 0), (m, m)).into_owned().determinant().re;
        }
    }

    let minors = dets
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let max_abs = d.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let min_abs = d.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
            let floor = DEGENERATE_REL * max_abs;
            let pos = d.iter().filter(|v| v.abs() > floor && **v > 0.0).count();
            let neg = d.iter().filter(|v| v.abs() > floor && **v < 0.0).count();
            let sign: i8 = if pos >= neg { 1 } else { -1 };
            let offending: Vec<usize> = d
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > floor && (**v > 0.0) != (sign > 0))
                .map(|(n, _)| n)
                .collect();
            MinorSign {
                m: idx + 1,
                sign,
                min_abs_det: min_abs,
                max_abs_det: max_abs,
                constant: offending.is_empty() && max_abs > 0.0,
                offending,
            }
        })
        .collect();
    Ok(MinorSignReport { grid_size, minors })
}

/// Like [`minor_sign_report`] but fails with `InconstantSign` when any
/// leading minor changes sign.
pub fn check_minor_signs(s: &MatrixLaurent, grid_size: usize) -> Result<MinorSignReport> {
    let report = minor_sign_report(s, grid_size)?;
    if let Some(bad) = report.first_inconstant() {
        return Err(Error::InconstantSign {
            minor: bad.m,
            points: bad.offending.clone(),
        });
    }
    Ok(report)
}

/// Power range kept for the off-diagonal series: `[-negative, positive]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesWindow {
    pub negative: i64,
    pub positive: i64,
}

impl SeriesWindow {
    /// Window needed by the recursive stage for truncation order `n`.
    ///
    /// Each stage `m` multiplies by a corrector whose last row reaches down to
    /// `z^{-(m-1)n}`, so final coefficients up to `(r-1)n` draw on input
    /// coefficients up to `(r-1)n + Σ_m (m-1)n`.
    pub fn for_order(r: usize, n: usize, s_degree: i64) -> Self {
        let r = r as i64;
        let n = n as i64;
        let w = (r - 1) * n;
        Self {
            negative: w,
            positive: s_degree + w + r * (r - 1) * n / 2 + 8,
        }
    }

    pub fn span(&self) -> usize {
        (self.negative + self.positive + 1) as usize
    }

    /// Smallest power-of-two grid with the default oversampling.
    pub fn default_grid(&self) -> usize {
        fourier::default_grid_size(self.span())
    }
}

#[derive(Clone, Debug)]
pub struct TriangularFactor {
    /// Lower-triangular factor.
    pub m: MatrixLaurent,
    pub signature: Signature,
    pub diag_methods: Vec<ScalarMethod>,
    /// Fejér–Riesz factors `P_m` of the leading minors.
    pub minor_factors: Vec<LaurentPoly>,
    pub window: SeriesWindow,
    pub grid_size: usize,
    /// `max_z ‖M J M* - S‖₂ / max_z ‖S‖₂` using the stored coefficients.
    pub residual: f64,
}

/// `det [S]_{m×m}` as a Laurent polynomial, via pointwise determinants.
pub(crate) fn leading_minor_poly(s: &MatrixLaurent, m: usize) -> Result<LaurentPoly> {
    if m == 1 {
        return Ok(s.get(0, 0).clone());
    }
    let d = s.highest().max(-s.lowest());
    let reach = m as i64 * d;
    let grid = fourier::default_grid_size((2 * reach + 1) as usize);
    let block = s.leading_principal_submatrix(m)?;
    let values: Vec<Complex64> = block
        .sample(grid)
        .into_iter()
        .map(|v| Complex64::new(v.determinant().re, 0.0))
        .collect();
    let det = fourier::fourier_coeffs_from_samples(&values, -reach, reach)?;
    Ok((&det + &det.tilde()).scale_real(0.5).trim(DETERMINANT_TRIM))
}

/// Lower-triangular J-factorization with diagonal entries causal and stable.
pub fn triangular_j_factorize(
    s: &MatrixLaurent,
    grid_size: usize,
    window: SeriesWindow,
) -> Result<TriangularFactor> {
    let report = check_minor_signs(s, grid_size)?;
    let signature = report.induced_signature();
    let r = s.rows();
    if grid_size < window.span() || !grid_size.is_power_of_two() {
        return Err(Error::Size {
            grid: grid_size,
            needed: window.span(),
        });
    }

    let mut minor_factors = Vec::with_capacity(r);
    let mut diag_methods = Vec::with_capacity(r);
    for m in 1..=r {
        let det = leading_minor_poly(s, m)?;
        let step = scalar::cholesky_scalar_step(&det, report.minors[m - 1].sign)?;
        diag_methods.push(step.method);
        minor_factors.push(step.factor);
    }

    let mut diag = Vec::with_capacity(r);
    let mut prev = LaurentPoly::one();
    for p in &minor_factors {
        diag.push(p.series_div(&prev, window.positive)?);
        prev = p.clone();
    }

    // Pointwise recursion on the grid.
    let s_samples = s.sample(grid_size);
    let minor_samples: Vec<Vec<Complex64>> = minor_factors
        .iter()
        .map(|p| fourier::sample(p, grid_size))
        .collect();
    let f_samples: Vec<Vec<Complex64>> = (0..r)
        .map(|m| {
            (0..grid_size)
                .map(|n| {
                    let below = if m == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        minor_samples[m - 1][n]
                    };
                    minor_samples[m][n] / below
                })
                .collect()
        })
        .collect();

    let zero = Complex64::new(0.0, 0.0);
    let mut xi = vec![vec![vec![zero; grid_size]; r]; r];
    for j in 0..r {
        let jj = signature.sign(j);
        let f_max = f_samples[j].iter().map(|v| v.norm()).fold(0.0, f64::max);
        for i in (j + 1)..r {
            let numer: Vec<Complex64> = (0..grid_size)
                .map(|n| {
                    let mut acc = s_samples[n][(i, j)];
                    for k in 0..j {
                        acc -= signature.sign(k) * xi[i][k][n] * xi[j][k][n].conj();
                    }
                    acc
                })
                .collect();
            let numer_max = numer.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for n in 0..grid_size {
                let den = f_samples[j][n].conj();
                xi[i][j][n] = if den.norm() < DIVISION_FLOOR * f_max {
                    if numer[n].norm() > 1e-8 * numer_max {
                        return Err(Error::DivisionBlowup { column: j + 1 });
                    }
                    zero
                } else {
                    jj * numer[n] / den
                };
            }
        }
    }

    let mut m_entries = MatrixLaurent::zeros(r, r);
    for i in 0..r {
        m_entries.set(i, i, diag[i].clone());
        for j in 0..i {
            let coeffs =
                fourier::fourier_coeffs_from_samples(&xi[i][j], -window.negative, window.positive)?;
            m_entries.set(i, j, coeffs);
        }
    }

    let residual = reconstruction_residual(s, &m_entries, &signature, grid_size);
    Ok(TriangularFactor {
        m: m_entries,
        signature,
        diag_methods,
        minor_factors,
        window,
        grid_size,
        residual,
    })
}

/// `max_z ‖F J F* - S‖₂ / max_z ‖S‖₂` on a uniform grid.
pub fn reconstruction_residual(
    s: &MatrixLaurent,
    factor: &MatrixLaurent,
    signature: &Signature,
    grid_size: usize,
) -> f64 {
    let j = signature.to_matrix();
    let ss = s.sample(grid_size);
    let fs = factor.sample(grid_size);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (sz, fz) in ss.iter().zip(&fs) {
        let defect: DMatrix<Complex64> = fz * &j * fz.adjoint() - sz;
        worst = worst.max(spectral_norm(&defect));
        scale = scale.max(spectral_norm(sz));
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn example_minor_signs() {
        let s = fixtures::singular_example();
        let report = check_minor_signs(&s, 256).unwrap();
        assert_eq!(report.minors[0].sign, -1);
        assert_eq!(report.minors[1].sign, -1);
        assert_eq!(report.induced_signature().signs(), &[-1, 1]);
        // det vanishes at z = ±1, which are grid points.
        assert!(report.minors[1].min_abs_det < 1e-9);
    }

    #[test]
    fn identity_minor_signs() {
        let report = check_minor_signs(&MatrixLaurent::identity(2), 64).unwrap();
        assert_eq!(report.induced_signature(), Signature::identity(2));
    }

    #[test]
    fn sign_change_detected() {
        let s = MatrixLaurent::new(
            2,
            2,
            vec![
                LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0]),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                LaurentPoly::one(),
            ],
        )
        .unwrap();
        match check_minor_signs(&s, 64) {
            Err(Error::InconstantSign { minor, points }) => {
                assert_eq!(minor, 1);
                assert!(!points.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let s = MatrixLaurent::new(
            2,
            2,
            vec![
                LaurentPoly::one(),
                LaurentPoly::one(),
                LaurentPoly::zero(),
                LaurentPoly::one(),
            ],
        )
        .unwrap();
        assert!(matches!(check_minor_signs(&s, 64), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn example_triangular_factor() {
        let s = fixtures::singular_example();
        let window = SeriesWindow::for_order(2, 53, 1);
        let t = triangular_j_factorize(&s, window.default_grid(), window).unwrap();
        assert_eq!(t.signature.signs(), &[-1, 1]);

        let a = ((19.0 + 105f64.sqrt()) / 2.0).sqrt();
        let b = 8.0 / a;
        let f1 = t.m.get(0, 0);
        assert!((f1.coeff(0) - c(a)).norm() < 1e-13);
        assert!((f1.coeff(1) - c(b)).norm() < 1e-13);
        assert!(t.m.get(0, 1).is_zero());

        // M21 = (28/z + 73 + 39z) / (a + b/z), expanded in powers of 1/z.
        let m21 = t.m.get(1, 0);
        let mut geo = vec![0.0; 80];
        geo[0] = 1.0 / a;
        for k in 1..80 {
            geo[k] = -b / a * geo[k - 1];
        }
        let expected = |k: i64| -> f64 {
            // coefficient of z^k: 39 g_{1-k} + 73 g_{-k} + 28 g_{-k-1}
            let g = |idx: i64| if (0..80).contains(&idx) { geo[idx as usize] } else { 0.0 };
            39.0 * g(1 - k) + 73.0 * g(-k) + 28.0 * g(-k - 1)
        };
        for k in -53..=3 {
            assert!((m21.coeff(k).re - expected(k)).abs() < 1e-12, "k={k}");
        }

        // M22 = 2(1 - z^2) / f1
        let m22 = t.m.get(1, 1);
        let target = LaurentPoly::from_real(0, &[2.0, 0.0, -2.0]).series_div(f1, 40).unwrap();
        assert!(m22.window(0, 40).max_diff(&target) < 1e-12);
        assert!(t.residual < 1e-12, "residual {}", t.residual);
    }

    #[test]
    fn identity_factor() {
        let window = SeriesWindow::for_order(3, 4, 0);
        let t = triangular_j_factorize(&MatrixLaurent::identity(3), window.default_grid(), window)
            .unwrap();
        assert!(t.m.max_diff(&MatrixLaurent::identity(3)).unwrap() < 1e-14);
        assert_eq!(t.signature, Signature::identity(3));
    }
}
