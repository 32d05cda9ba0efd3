//! On-disk formats: matrix coefficient files, factorization reports, CSV sweeps.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use jspectral::pipeline::{PipelineConfig, StageDiagnostics, SweepRow};
use jspectral::verify::FactorizationReport;
use jspectral::{LaurentPoly, MatrixLaurent};
use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Load-time Hermitian tolerance; larger defects only warn.
pub const HERMITIAN_WARN: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryFile {
    pub lowest_power: i64,
    pub coeffs: Vec<[f64; 2]>,
}

/// Row-major `r×r` Laurent-polynomial matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub r: usize,
    pub entries: Vec<EntryFile>,
}

impl MatrixFile {
    pub fn from_matrix(m: &MatrixLaurent) -> Self {
        let entries = m
            .entries()
            .iter()
            .map(|p| EntryFile {
                lowest_power: p.lowest(),
                coeffs: p.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            })
            .collect();
        Self {
            r: m.rows(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> anyhow::Result<MatrixLaurent> {
        if self.entries.len() != self.r * self.r {
            bail!(
                "expected {} entries for r = {}, found {}",
                self.r * self.r,
                self.r,
                self.entries.len()
            );
        }
        let entries = self
            .entries
            .iter()
            .map(|e| {
                if e.coeffs.iter().flatten().any(|v| !v.is_finite()) {
                    bail!("non-finite coefficient");
                }
                Ok(LaurentPoly::new(
                    e.lowest_power,
                    e.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                ))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(MatrixLaurent::new(self.r, self.r, entries)?)
    }
}

/// Parsed input with the digest of its raw bytes.
pub struct LoadedMatrix {
    pub matrix: MatrixLaurent,
    pub digest: String,
}

pub fn load_matrix(path: &Path) -> anyhow::Result<LoadedMatrix> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MatrixFile = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing {}", path.display()))?;
    let matrix = file.to_matrix()?;
    let defect = matrix.hermitian_defect();
    if defect > HERMITIAN_WARN {
        warn!("{} is not Hermitian (relative defect {defect:e})", path.display());
    }
    Ok(LoadedMatrix {
        matrix,
        digest: hex::encode(Sha256::digest(&bytes)),
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Options a factorization ran with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub order: usize,
    pub grid_size: usize,
    pub tolerance: f64,
    pub use_displacement: bool,
    pub max_retries: usize,
}

impl ConfigEcho {
    pub fn new(config: &PipelineConfig, grid_size: usize, tolerance: f64) -> Self {
        Self {
            order: config.order,
            grid_size,
            tolerance,
            use_displacement: config.use_displacement,
            max_retries: config.max_retries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub input_sha256: String,
    pub config: ConfigEcho,
    /// Diagonal of `J`.
    pub signature: Vec<i8>,
    pub residual_max: f64,
    pub residual_mean: f64,
    pub wall_time_s: f64,
    pub report: FactorizationReport,
    pub stages: Vec<StageDiagnostics>,
    pub factor: MatrixFile,
}

#[cfg(test)]
pub fn load_report(path: &Path) -> anyhow::Result<ReportFile> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_slice(&bytes)?)
}

#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "N")]
    order: usize,
    residual: f64,
    wall_time_s: f64,
}

/// `N,residual,wall_time_s` with one row per order; failures read `NaN`.
pub fn sweep_csv(rows: &[SweepRow]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["N", "residual", "wall_time_s"])?;
    }
    for r in rows {
        w.serialize(CsvRow {
            order: r.order,
            residual: r.residual,
            wall_time_s: r.wall_time_s,
        })?;
    }
    Ok(w.into_inner()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jspectral::fixtures;

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = fixtures::singular_example();
        let file = MatrixFile::from_matrix(&m);
        let text = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);

        let odd = MatrixLaurent::new(
            1,
            1,
            vec![LaurentPoly::new(-3, vec![Complex64::new(0.1 + 0.2, -1.0 / 3.0)])],
        )
        .unwrap();
        let text = serde_json::to_string(&MatrixFile::from_matrix(&odd)).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), odd);
    }

    #[test]
    fn report_round_trip_is_lossless() {
        use jspectral::pipeline::factorize;
        let s = fixtures::singular_example();
        let config = PipelineConfig::new(9);
        let res = factorize(&s, &config).unwrap();
        let report = ReportFile {
            input_sha256: "00".into(),
            config: ConfigEcho::new(&config, res.grid_size, 1e-8),
            signature: res.signature.signs().to_vec(),
            residual_max: res.report.residual_max,
            residual_mean: res.report.residual_mean,
            wall_time_s: res.wall_time_s,
            report: res.report.clone(),
            stages: res.per_step.clone(),
            factor: MatrixFile::from_matrix(&res.factor),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        write_atomic(&path, &to_json(&report).unwrap()).unwrap();
        let back = load_report(&path).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.factor.to_matrix().unwrap(), res.factor);
    }

    #[test]
    fn wrong_entry_count_is_rejected() {
        let file = MatrixFile {
            r: 2,
            entries: vec![EntryFile {
                lowest_power: 0,
                coeffs: vec![[1.0, 0.0]],
            }],
        };
        assert!(file.to_matrix().is_err());
    }

    #[test]
    fn csv_has_header_and_nan_rows() {
        let rows = vec![
            SweepRow {
                order: 5,
                residual: 1e-3,
                wall_time_s: 0.5,
                error: None,
            },
            SweepRow {
                order: 9,
                residual: f64::NAN,
                wall_time_s: 0.25,
                error: Some("x".into()),
            },
        ];
        let text = String::from_utf8(sweep_csv(&rows).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N,residual,wall_time_s");
        assert_eq!(lines[1], "5,0.001,0.5");
        assert_eq!(lines[2], "9,NaN,0.25");
        let empty = String::from_utf8(sweep_csv(&[]).unwrap()).unwrap();
        assert_eq!(empty.trim(), "N,residual,wall_time_s");
    }
}
