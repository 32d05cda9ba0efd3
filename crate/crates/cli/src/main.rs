//! `jspectral`: J-spectral factorization from the command line.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 method not applicable
//! (leading minors change sign, input not Hermitian, …), 3 corrector system
//! singular after retries, 4 residual above tolerance.

mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use jspectral::generate::generate_instance;
use jspectral::pipeline::{factorize_with_known, sweep_orders, PipelineConfig};
use jspectral::triangular::minor_sign_report;
use jspectral::{fourier, Error, Signature};

use files::{ConfigEcho, MatrixFile, ReportFile};

const GRID_ENV: &str = "JSPECTRAL_GRID";

#[derive(Parser)]
#[command(name = "jspectral", version, about = "J-spectral factorization S = S₊ J S₊* on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every leading principal minor has constant sign.
    Check {
        input: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Factorize and write the factor with a verification report.
    Factorize {
        input: PathBuf,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        displacement: Switch,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact factor to compare against.
        #[arg(long)]
        known: Option<PathBuf>,
    },
    /// Residual and timing for a range of truncation orders.
    Sweep {
        input: PathBuf,
        /// `start:stop:step`, `start:stop`, a single order, or a comma list.
        #[arg(long, default_value = "5:53:4")]
        orders: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        displacement: Switch,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Random test matrix S = A J A* with causal stable A.
    Generate {
        #[arg(long)]
        size: usize,
        #[arg(long, allow_hyphen_values = true)]
        signature: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with a fixed exit code.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(1, e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InconstantSign { .. }
        | Error::NotHermitian { .. }
        | Error::NotNonnegative { .. }
        | Error::SignMismatch { .. }
        | Error::PaleyWienerViolation { .. }
        | Error::NonPositiveSample { .. }
        | Error::ZeroInput
        | Error::DivisionBlowup { .. }
        | Error::SingularD
        | Error::CSignatureMismatch { .. } => 2,
        Error::DeltaSingular { .. } => 3,
        Error::StageResidualExceeded { .. } => 4,
        _ => 1,
    }
}

fn library(e: Error) -> Exit {
    Exit(exit_code(&e), anyhow!(e))
}

fn env_grid() -> anyhow::Result<Option<usize>> {
    match std::env::var(GRID_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{GRID_ENV}={v} is not a grid size"))?,
        )),
        Err(_) => Ok(None),
    }
}

fn grid_option(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    match flag {
        Some(g) => Ok(Some(g)),
        None => env_grid(),
    }
}

/// Parses `start:stop:step` (stop included when hit), `start:stop`, `n`, or `a,b,c`.
fn parse_orders(spec: &str) -> anyhow::Result<Vec<usize>> {
    let spec = spec.trim();
    if spec.contains(',') {
        return spec
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(Into::into))
            .collect();
    }
    let parts: Vec<usize> = spec
        .split(':')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad order range {spec:?}"))?;
    let (start, stop, step) = match parts.as_slice() {
        [n] => (*n, *n, 1),
        [a, b] => (*a, *b, 1),
        [a, b, c] => (*a, *b, *c),
        _ => bail!("bad order range {spec:?}"),
    };
    if step == 0 || start > stop {
        bail!("empty order range {spec:?}");
    }
    Ok((start..=stop).step_by(step).collect())
}

fn output(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => files::write_atomic(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn cmd_check(input: &Path, grid: Option<usize>, json: bool) -> Result<(), Exit> {
    let loaded = files::load_matrix(input)?;
    let s = &loaded.matrix;
    let span = (s.highest() - s.lowest()).max(0) as usize + 1;
    let grid = grid_option(grid)?
        .unwrap_or_else(|| fourier::default_grid_size(span * s.rows()).max(256));
    let report = minor_sign_report(s, grid).map_err(library)?;
    if json {
        output(None, &files::to_json(&report)?)?;
    } else {
        for m in &report.minors {
            println!(
                "minor {}: sign {:+}, |det| in [{:.3e}, {:.3e}]{}",
                m.m,
                m.sign,
                m.min_abs_det,
                m.max_abs_det,
                if m.constant {
                    String::new()
                } else {
                    format!(", changes sign at {} grid points", m.offending.len())
                }
            );
        }
    }
    match report.first_inconstant() {
        None => {
            if !json {
                println!("J = {}; applicable", report.induced_signature());
            }
            Ok(())
        }
        Some(bad) => Err(Exit(
            2,
            anyhow!("not applicable: leading minor m={} changes sign", bad.m),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_factorize(
    input: &Path,
    order: usize,
    grid: Option<usize>,
    tol: f64,
    displacement: Switch,
    out: Option<&Path>,
    known: Option<&Path>,
) -> Result<(), Exit> {
    let loaded = files::load_matrix(input)?;
    let known = known.map(files::load_matrix).transpose()?;
    if !(tol > 0.0) {
        return Err(anyhow!("--tol must be positive").into());
    }
    let config = PipelineConfig {
        grid_size: grid_option(grid)?,
        use_displacement: matches!(displacement, Switch::On),
        ..PipelineConfig::new(order)
    };
    let res = factorize_with_known(&loaded.matrix, &config, known.as_ref().map(|k| &k.matrix))
        .map_err(library)?;

    let report = ReportFile {
        input_sha256: loaded.digest,
        config: ConfigEcho::new(&config, res.grid_size, tol),
        signature: res.signature.signs().to_vec(),
        residual_max: res.report.residual_max,
        residual_mean: res.report.residual_mean,
        wall_time_s: res.wall_time_s,
        report: res.report.clone(),
        stages: res.per_step.clone(),
        factor: MatrixFile::from_matrix(&res.factor),
    };
    let bytes = files::to_json(&report)?;
    match out {
        Some(p) => files::write_atomic(p, &bytes)?,
        None => output(None, &bytes)?,
    }
    eprintln!(
        "J = {}; N = {}; residual {:.3e} (mean {:.3e}); {:.3}s",
        res.signature, order, res.report.residual_max, res.report.residual_mean, res.wall_time_s
    );
    if let Some(k) = &res.report.known {
        eprintln!(
            "known factor: coefficient error {:.3e}, K J-unitarity {:.3e}, K constancy {:.3e}",
            k.coefficient_error, k.junitarity_defect, k.constancy_defect
        );
    }
    if res.report.residual_max > tol {
        return Err(Exit(
            4,
            anyhow!("residual {:.3e} exceeds tolerance {tol:.3e}", res.report.residual_max),
        ));
    }
    Ok(())
}

fn cmd_sweep(
    input: &Path,
    orders: &str,
    grid: Option<usize>,
    displacement: Switch,
    csv: Option<&Path>,
) -> Result<(), Exit> {
    let loaded = files::load_matrix(input)?;
    let orders = parse_orders(orders)?;
    let config = PipelineConfig {
        grid_size: grid_option(grid)?,
        use_displacement: matches!(displacement, Switch::On),
        ..PipelineConfig::new(orders[0])
    };
    let rows = sweep_orders(&loaded.matrix, &orders, &config);
    for r in &rows {
        if let Some(e) = &r.error {
            log::warn!("N = {}: {e}", r.order);
        }
    }
    output(csv, &files::sweep_csv(&rows)?)?;
    Ok(())
}

fn cmd_generate(
    size: usize,
    signature: &str,
    degree: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Exit> {
    let sig = Signature::parse(signature).map_err(|e| Exit(1, anyhow!(e)))?;
    if sig.len() != size {
        return Err(anyhow!("signature {signature:?} has length {}, expected {size}", sig.len()).into());
    }
    let inst = generate_instance(&sig, degree, seed).map_err(library)?;
    output(out, &files::to_json(&MatrixFile::from_matrix(&inst.s))?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Check { input, grid, json } => cmd_check(&input, grid, json),
        Command::Factorize {
            input,
            order,
            grid,
            tol,
            displacement,
            out,
            known,
        } => cmd_factorize(
            &input,
            order,
            grid,
            tol,
            displacement,
            out.as_deref(),
            known.as_deref(),
        ),
        Command::Sweep {
            input,
            orders,
            grid,
            displacement,
            csv,
        } => cmd_sweep(&input, &orders, grid, displacement, csv.as_deref()),
        Command::Generate {
            size,
            signature,
            degree,
            seed,
            out,
        } => cmd_generate(size, &signature, degree, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_ranges() {
        assert_eq!(parse_orders("5:53:4").unwrap().last(), Some(&53));
        assert_eq!(parse_orders("5:52:4").unwrap().last(), Some(&49));
        assert_eq!(parse_orders("53").unwrap(), vec![53]);
        assert_eq!(parse_orders("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_orders("5, 13,21").unwrap(), vec![5, 13, 21]);
        assert!(parse_orders("5:1").is_err());
        assert!(parse_orders("1:5:0").is_err());
        assert!(parse_orders("a:b").is_err());
    }

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(exit_code(&Error::InconstantSign { minor: 1, points: vec![] }), 2);
        assert_eq!(exit_code(&Error::DeltaSingular { condition: 1e13 }), 3);
        assert_eq!(
            exit_code(&Error::StageResidualExceeded {
                stage: 2,
                residual: 1.0,
                tolerance: 0.1
            }),
            4
        );
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 1);
    }
}
