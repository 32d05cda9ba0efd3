//! End-to-end J-spectral factorization: triangular factor, tail truncation,
//! and recursive J-unitary correction.

use std::time::Instant;

use log::{debug, warn};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::junitary::{self, CorrectorInput, SolveOptions, SolvePath};
use crate::laurent::LaurentPoly;
use crate::matrix::MatrixLaurent;
use crate::signature::Signature;
use crate::triangular::{self, spectral_norm, SeriesWindow, TriangularFactor, HERMITIAN_TOL};
use crate::verify::{self, FactorizationReport};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual `max_z ‖S - S₊JS₊*‖₂ / max_z ‖S‖₂`.
    pub residual: f64,
    /// Relative size of negative-power coefficients of the factor.
    pub causality: f64,
    /// `max_z ‖U J U* - J‖` per corrector.
    pub junitarity: f64,
    /// Relative stage invariant `[S_N]_m = [Q_m][J]_m[Q_m]*`.
    pub stage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            causality: 1e-9,
            junitarity: 1e-8,
            stage: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Truncation order `N`.
    pub order: usize,
    /// Grid for the triangular step and all checks; chosen from the series
    /// window when absent.
    pub grid_size: Option<usize>,
    pub tolerances: Tolerances,
    pub max_retries: usize,
    pub use_displacement: bool,
}

impl PipelineConfig {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            grid_size: None,
            tolerances: Tolerances::default(),
            max_retries: 3,
            use_displacement: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
        }
        let t = &self.tolerances;
        if [t.residual, t.causality, t.junitarity, t.stage]
            .iter()
            .any(|v| !(*v > 0.0))
        {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::new(40)
    }
}

/// Diagnostics of one corrector stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    /// Block size `m` (2..=r).
    pub stage: usize,
    /// Truncation order actually used (larger than `N` after retries).
    pub order: usize,
    pub degree: usize,
    pub retries: usize,
    pub path: SolvePath,
    pub delta_condition: f64,
    pub junitarity_defect: f64,
    pub column_product_defect: f64,
    pub det_mean: (f64, f64),
    pub det_spread: f64,
    pub causality_defect: f64,
    pub stage_residual: f64,
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    /// Causal factor with `S ≈ factor · J · factor*`.
    pub factor: MatrixLaurent,
    pub signature: Signature,
    pub report: FactorizationReport,
    pub per_step: Vec<StageDiagnostics>,
    pub order: usize,
    pub grid_size: usize,
    pub window: SeriesWindow,
    pub triangular_residual: f64,
    pub wall_time_s: f64,
}

impl FactorizationResult {
    /// Columns reordered so that the signature reads `diag(+1, …, -1, …)`.
    pub fn canonical(&self) -> (MatrixLaurent, Signature) {
        let perm = self.signature.canonical_permutation();
        let r = self.factor.rows();
        let factor = MatrixLaurent::from_fn(r, r, |i, j| self.factor.get(i, perm[j]).clone());
        (factor, self.signature.canonical())
    }
}

/// Keeps powers `[-(i-j)N, ∞)` of each entry `(i, j)` below the diagonal.
pub fn truncate_tails(m: &TriangularFactor, n: usize) -> Result<MatrixLaurent> {
    let r = m.m.rows();
    let n = n as i64;
    let needed = (r as i64 - 1) * n;
    if needed > m.window.negative {
        return Err(Error::WindowExceedsData {
            stored: -m.window.negative,
            required: -needed,
        });
    }
    Ok(MatrixLaurent::from_fn(r, r, |i, j| {
        let e = m.m.get(i, j);
        if i == j {
            e.clone()
        } else if i > j {
            e.window(-((i - j) as i64) * n, e.highest().max(0))
        } else {
            LaurentPoly::zero()
        }
    }))
}

/// Output of [`recursive_factorize`] before final verification.
#[derive(Clone, Debug)]
pub struct RecursiveOutput {
    /// `Q_r` with all stored coefficients.
    pub q: MatrixLaurent,
    pub per_step: Vec<StageDiagnostics>,
}

/// Applies correctors `U_2, …, U_r` to the truncated triangular factor.
///
/// `positive` caps the stored positive powers of `Q` between stages.
pub fn recursive_factorize(
    m_n: &MatrixLaurent,
    signature: &Signature,
    config: &PipelineConfig,
    grid_size: usize,
    positive: i64,
) -> Result<RecursiveOutput> {
    config.validate()?;
    let r = m_n.rows();
    if signature.len() != r {
        return Err(Error::Dimension(format!(
            "signature of length {} for a {r}x{r} factor",
            signature.len()
        )));
    }
    let j = signature.to_matrix();
    let s_n: Vec<DMatrix<Complex64>> = m_n
        .sample(grid_size)
        .iter()
        .map(|m| m * &j * m.adjoint())
        .collect();
    let scale = s_n.iter().map(spectral_norm).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

    let mut q = m_n.clone();
    let mut per_step = Vec::with_capacity(r.saturating_sub(1));
    for stage in 2..=r {
        let row = stage - 1;
        let jm = signature.signs()[row];
        let signs: Vec<i8> = signature.signs()[..row].iter().map(|s| s * jm).collect();

        let mut attempt = 0;
        let (corrector, input, order) = loop {
            let order = config.order + attempt;
            let degree = row * order;
            let zetas: Vec<LaurentPoly> = (0..row)
                .map(|k| q.get(row, k).window(-(degree as i64), 0))
                .collect();
            let fplus = q.get(row, row).window(0, degree as i64);
            let input = CorrectorInput::new(zetas, fplus, signs.clone(), degree)?;
            let options = SolveOptions {
                use_displacement: config.use_displacement,
            };
            match junitary::solve_corrector(&input, options) {
                Ok(c) => break (c, input, order),
                Err(Error::DeltaSingular { condition }) if attempt < config.max_retries => {
                    attempt += 1;
                    warn!(
                        "stage {stage}: corrector system singular (condition {condition:e}); retrying with order {}",
                        config.order + attempt
                    );
                }
                Err(e) => return Err(e),
            }
        };

        let u = &corrector.u;
        let mut next = q.clone();
        for i in 0..r {
            for c in 0..=row {
                let mut acc = LaurentPoly::zero();
                for k in 0..=row {
                    acc = &acc + &q.get(i, k).mul(u.get(k, c));
                }
                next.set(i, c, acc.window(acc.lowest().min(0), positive));
            }
        }
        q = next;

        let stage_residual = stage_residual(&q, &s_n, signature, stage, grid_size) / scale;
        let sig_u = &corrector.signature;
        let (det_mean, det_spread) = junitary::determinant_spread(u, grid_size.min(512));
        let diag = StageDiagnostics {
            stage,
            order,
            degree: input.degree,
            retries: attempt,
            path: corrector.path,
            delta_condition: corrector.delta_condition,
            junitarity_defect: junitary::junitarity_defect(u, sig_u, grid_size.min(512)),
            column_product_defect: junitary::column_product_defect(&corrector.v, sig_u),
            det_mean: (det_mean.re, det_mean.im),
            det_spread,
            causality_defect: junitary::causality_defect(&input, u),
            stage_residual,
        };
        debug!("stage {stage}: {diag:?}");
        if !(stage_residual <= config.tolerances.stage) {
            return Err(Error::StageResidualExceeded {
                stage,
                residual: stage_residual,
                tolerance: config.tolerances.stage,
            });
        }
        per_step.push(diag);
    }
    Ok(RecursiveOutput { q, per_step })
}

fn stage_residual(
    q: &MatrixLaurent,
    s_n: &[DMatrix<Complex64>],
    signature: &Signature,
    m: usize,
    grid_size: usize,
) -> f64 {
    let jm = signature.leading(m).to_matrix();
    let qm = q.leading_principal_submatrix(m).expect("m <= r");
    qm.sample(grid_size)
        .iter()
        .zip(s_n)
        .map(|(qz, sz)| {
            let d = qz * &jm * qz.adjoint() - sz.view((0, 0), (m, m));
            spectral_norm(&d)
        })
        .fold(0.0, f64::max)
}

/// Grid and window for a given input and truncation order.
pub fn plan(s: &MatrixLaurent, config: &PipelineConfig) -> Result<(usize, SeriesWindow)> {
    let r = s.rows();
    let degree = s.highest().max(-s.lowest()).max(0);
    let mut window = SeriesWindow::for_order(r, config.order, degree);
    let grid = match config.grid_size {
        Some(g) => g,
        None => window.default_grid(),
    };
    if !grid.is_power_of_two() || grid as i64 <= window.negative + 1 {
        return Err(Error::Size {
            grid,
            needed: window.span(),
        });
    }
    if grid < window.span() {
        let positive = grid as i64 - window.negative - 1;
        warn!(
            "grid {grid} cannot hold the series window; positive powers cut from {} to {positive}",
            window.positive
        );
        window.positive = positive;
    }
    Ok((grid, window))
}

/// Full pipeline: applicability check, triangular factor, truncation,
/// recursive correction and verification.
pub fn factorize(s: &MatrixLaurent, config: &PipelineConfig) -> Result<FactorizationResult> {
    factorize_with_known(s, config, None)
}

/// [`factorize`] with an optional exact factor for the report.
pub fn factorize_with_known(
    s: &MatrixLaurent,
    config: &PipelineConfig,
    known: Option<&MatrixLaurent>,
) -> Result<FactorizationResult> {
    let start = Instant::now();
    config.validate()?;
    if !s.is_square() || s.rows() == 0 {
        return Err(Error::Dimension("input must be a non-empty square matrix".into()));
    }
    let defect = s.hermitian_defect();
    if defect > HERMITIAN_TOL * s.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let r = s.rows();
    let (grid, window) = plan(s, config)?;
    let tri = triangular::triangular_j_factorize(s, grid, window)?;
    let m_n = truncate_tails(&tri, config.order)?;
    let out = recursive_factorize(&m_n, &tri.signature, config, grid, window.positive)?;

    let degree = s.highest().max(0);
    let hi = (r as i64 - 1) * config.order as i64 + degree;
    let factor = out.q.window(0, hi);
    let report = verify::verify_factorization(
        s,
        &out.q,
        &factor,
        &tri.signature,
        &out.per_step,
        grid,
        known,
    );
    Ok(FactorizationResult {
        factor,
        signature: tri.signature.clone(),
        report,
        per_step: out.per_step,
        order: config.order,
        grid_size: grid,
        window,
        triangular_residual: tri.residual,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// One row of an order sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub order: usize,
    /// `NaN` when the run failed.
    pub residual: f64,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

/// Runs the pipeline once per truncation order; failures are recorded in-row.
pub fn sweep_orders(s: &MatrixLaurent, orders: &[usize], config: &PipelineConfig) -> Vec<SweepRow> {
    orders
        .iter()
        .map(|&order| {
            let cfg = PipelineConfig {
                order,
                ..config.clone()
            };
            let start = Instant::now();
            match factorize(s, &cfg) {
                Ok(res) => SweepRow {
                    order,
                    residual: res.report.residual_max,
                    wall_time_s: start.elapsed().as_secs_f64(),
                    error: None,
                },
                Err(e) => SweepRow {
                    order,
                    residual: f64::NAN,
                    wall_time_s: start.elapsed().as_secs_f64(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Grid used when only the factor degree matters.
pub fn verification_grid(s: &MatrixLaurent, factor: &MatrixLaurent) -> usize {
    let span = (2 * factor.highest().max(0) + 2 * s.highest().max(-s.lowest()).max(0) + 1) as usize;
    fourier::default_grid_size(span).max(256)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn scalar_case_is_fejer_riesz() {
        let s = MatrixLaurent::new(1, 1, vec![LaurentPoly::from_real(-1, &[-8.0, -19.0, -8.0])])
            .unwrap();
        let res = factorize(&s, &PipelineConfig::new(4)).unwrap();
        assert_eq!(res.signature.signs(), &[-1]);
        let f = res.factor.get(0, 0);
        // a² + b² = 19, ab = 8
        let a = (35f64.sqrt() + 3f64.sqrt()) / 2.0;
        let b = (35f64.sqrt() - 3f64.sqrt()) / 2.0;
        assert!((f.coeff(0) - a).norm() < 1e-12);
        assert!((f.coeff(1) - b).norm() < 1e-12);
        assert!(res.report.residual_max < 1e-13);
    }

    #[test]
    fn diagonal_case() {
        let a = LaurentPoly::from_real(0, &[1.0, -0.4]);
        let b = LaurentPoly::from_real(0, &[1.0, -0.2]);
        let s = MatrixLaurent::new(
            2,
            2,
            vec![
                (&a * &a.tilde()).scale_real(-1.0),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
                &b * &b.tilde(),
            ],
        )
        .unwrap();
        let res = factorize(&s, &PipelineConfig::new(8)).unwrap();
        assert_eq!(res.signature.signs(), &[-1, 1]);
        assert!(res.factor.get(0, 0).max_diff(&a) < 1e-12);
        assert!(res.factor.get(1, 1).max_diff(&b) < 1e-12);
        assert!(res.factor.get(1, 0).max_abs() < 1e-12);
        assert!(res.report.residual_max < 1e-12);
    }

    #[test]
    fn truncation_windows() {
        let s = fixtures::singular_example();
        let cfg = PipelineConfig::new(10);
        let (grid, window) = plan(&s, &cfg).unwrap();
        let tri = triangular::triangular_j_factorize(&s, grid, window).unwrap();
        let m_n = truncate_tails(&tri, 10).unwrap();
        assert_eq!(m_n.get(1, 0).lowest(), -10);
        assert!(m_n.get(0, 1).is_zero());
        assert!(matches!(
            truncate_tails(&tri, 11),
            Err(Error::WindowExceedsData { .. })
        ));
    }

    #[test]
    fn singular_example_small_order() {
        let s = fixtures::singular_example();
        let res = factorize(&s, &PipelineConfig::new(5)).unwrap();
        assert_eq!(res.per_step.len(), 1);
        assert!(res.report.residual_max < 1e-1);
    }

    #[test]
    fn empty_sweep() {
        let s = fixtures::singular_example();
        assert!(sweep_orders(&s, &[], &PipelineConfig::default()).is_empty());
    }

    #[test]
    fn rejects_bad_config() {
        let s = fixtures::singular_example();
        assert!(factorize(&s, &PipelineConfig::new(0)).is_err());
        let cfg = PipelineConfig {
            grid_size: Some(100),
            ..PipelineConfig::new(5)
        };
        assert!(matches!(factorize(&s, &cfg), Err(Error::Size { .. })));
    }
}
