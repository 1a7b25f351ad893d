//! Command-line front end: verification runs and parameter sweeps that
//! write CSV/JSON data files.
//!
//! Exit statuses: 0 success, 1 scientific-check failure, 2 usage or domain
//! error.

use std::f64::consts::TAU;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qufti_core::metrology::format_float;
use qufti_core::{
    coincidence_probability, conjecture_verify_with, dephased_sensitivity,
    fock_output_distribution, noon_dephased_sensitivity, orc_photon_count, permanent_closed_form,
    sensitivity_point, DephasingParams, InterferometerSpec, OutcomeDistribution, QuftiError,
    SensitivityPoint,
};
use rayon::prelude::*;

/// Threshold on the verification report's max absolute error.
pub const VERIFY_TOL: f64 = 1e-9;

/// Largest `n` accepted by `sensitivity-scan`.
pub const SCAN_MAX_N: usize = 25;

#[derive(Debug, Parser)]
#[command(
    name = "qufti",
    version,
    about = "QuFTI permanent and phase-sensitivity toolkit"
)]
pub struct Cli {
    /// Cap on worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Brute-force check of the product-form permanent against Ryser
    Verify(VerifyArgs),
    /// Coincidence probability P over a phase range (CSV: phi,P)
    PhaseScan(PhaseScanArgs),
    /// Sensitivity against SNL and HL for a range of n (CSV)
    SensitivityScan(SensitivityScanArgs),
    /// QuFTI and NOON sensitivity under dephasing (CSV)
    Dephasing(DephasingArgs),
    /// Full Fock output distribution (JSON)
    Distribution(DistributionArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Phase samples on [0, 2π)
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Report path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhaseScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_min: f64,
    #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
    pub phi_max: f64,
    #[arg(long, default_value_t = 361)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SensitivityScanArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Operating phase; 0 gives the small-angle sensitivity
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DephasingArgs {
    /// Mode counts, comma separated
    #[arg(long = "n", value_delimiter = ',', default_value = "2,4,6,8,10")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub phi: f64,
    /// Largest dephasing width χ (standard deviation, radians)
    #[arg(long, default_value_t = 0.01)]
    pub chi_max: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error: {0:#}")]
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<QuftiError> for CliError {
    fn from(e: QuftiError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.into()))?;
    pool.install(|| match cli.command {
        Command::Verify(a) => verify(&a, permanent_closed_form),
        Command::PhaseScan(a) => phase_scan(&a),
        Command::SensitivityScan(a) => sensitivity_scan(&a),
        Command::Dephasing(a) => dephasing(&a),
        Command::Distribution(a) => distribution(&a),
    })
}

fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(anyhow::Error::new(e).context(path.display().to_string()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn require_finite(name: &str, x: f64) -> CliResult<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be finite, got {x}")))
    }
}

/// Runs the verification against `closed_form`, writes the JSON report and
/// fails with a check error if the threshold is breached.
pub fn verify<F>(args: &VerifyArgs, closed_form: F) -> CliResult<()>
where
    F: Fn(usize, f64) -> Complex64 + Sync,
{
    if !(2..=30).contains(&args.n_max) {
        return Err(CliError::Usage(format!(
            "--n-max must be in 2..=30, got {}",
            args.n_max
        )));
    }
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let report = conjecture_verify_with(args.n_max, args.samples, closed_form)?;
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.into()))?;
    json.push('\n');
    emit(args.out.as_deref(), &json)?;
    if report.passes(VERIFY_TOL) {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "max_abs_error {:e} ≥ {VERIFY_TOL:e} (worst case n = {}, phi = {})",
            report.max_abs_error, report.worst_case.n, report.worst_case.phi
        )))
    }
}

pub fn phase_scan(args: &PhaseScanArgs) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    require_finite("--phi-min", args.phi_min)?;
    require_finite("--phi-max", args.phi_max)?;
    if args.phi_max <= args.phi_min {
        return Err(CliError::Usage(format!(
            "empty phase range [{}, {}]",
            args.phi_min, args.phi_max
        )));
    }
    let span = args.phi_max - args.phi_min;
    let last = (args.steps - 1) as f64;
    let rows: Vec<String> = (0..args.steps)
        .into_par_iter()
        .map(|k| {
            let phi = args.phi_min + span * k as f64 / last;
            format!(
                "{},{}",
                format_float(phi),
                format_float(coincidence_probability(args.n, phi))
            )
        })
        .collect();
    emit(args.out.as_deref(), &csv("phi,P", rows))
}

pub fn sensitivity_scan(args: &SensitivityScanArgs) -> CliResult<()> {
    if !(2 <= args.n_min && args.n_min <= args.n_max && args.n_max <= SCAN_MAX_N) {
        return Err(CliError::Usage(format!(
            "need 2 <= n_min <= n_max <= {SCAN_MAX_N}, got {}..{}",
            args.n_min, args.n_max
        )));
    }
    require_finite("--phi", args.phi)?;
    let points: Vec<SensitivityPoint> = (args.n_min..=args.n_max)
        .into_par_iter()
        .map(|n| sensitivity_point(n, args.phi))
        .collect::<Result<_, _>>()?;
    let rows = points.iter().map(SensitivityPoint::to_csv_row).collect();
    emit(
        args.out.as_deref(),
        &csv(SensitivityPoint::CSV_HEADER, rows),
    )
}

pub fn dephasing(args: &DephasingArgs) -> CliResult<()> {
    require_finite("--phi", args.phi)?;
    if args.phi == 0.0 {
        return Err(CliError::Usage(
            "--phi must be non-zero: dephased sensitivity diverges at phi = 0".into(),
        ));
    }
    if !args.chi_max.is_finite() || args.chi_max < 0.0 {
        return Err(CliError::Usage(format!(
            "--chi-max must be >= 0, got {}",
            args.chi_max
        )));
    }
    if args.steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if args.n_list.is_empty() || args.n_list.iter().any(|&n| n < 2) {
        return Err(CliError::Usage("every --n value must be at least 2".into()));
    }
    let mut ns = args.n_list.clone();
    ns.sort_unstable();
    ns.dedup();

    let cells: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| {
            (0..args.steps).map(move |k| (n, args.chi_max * k as f64 / (args.steps - 1) as f64))
        })
        .collect();
    let rows: Vec<String> = cells
        .into_par_iter()
        .map(|(n, chi)| {
            let params = DephasingParams::from_std_dev(chi)?;
            let qufti = dephased_sensitivity(n, args.phi, &params)?;
            let noon = noon_dephased_sensitivity(orc_photon_count(n) as usize, args.phi, &params)?;
            Ok(format!("{n},{},{qufti},{noon}", format_float(chi)))
        })
        .collect::<Result<_, QuftiError>>()?;
    emit(
        args.out.as_deref(),
        &csv("n,chi,delta_phi_qufti,delta_phi_noon", rows),
    )
}

pub fn distribution(args: &DistributionArgs) -> CliResult<()> {
    require_finite("--phi", args.phi)?;
    let dist: OutcomeDistribution =
        fock_output_distribution(&InterferometerSpec::gradient(args.n, args.phi))?;
    let mut json = serde_json::to_string_pretty(&dist).map_err(|e| CliError::Io(e.into()))?;
    json.push('\n');
    emit(args.out.as_deref(), &json)?;
    eprintln!("normalization residual: {:e}", dist.total() - 1.0);
    Ok(())
}

fn csv(header: &str, rows: Vec<String>) -> String {
    let mut s =
        String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}
