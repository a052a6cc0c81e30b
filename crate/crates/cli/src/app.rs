//! Argument parsing and dispatch for the `graphon-cpd` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use graphon_cpd_core::cpd::{detect, DetectorParams};
use graphon_cpd_core::estim::{mnbs_estimate, musvt_estimate, EstimatorConfig};
use graphon_cpd_core::eval::{boysen, monte_carlo, BenchRow};
use graphon_cpd_core::genmodels::{scenario_sequence, ScenarioId, ScenarioSpec};
use graphon_cpd_core::matrix::average_adjacency;

use crate::config::RunConfig;
use crate::edges::{parse_edge_csv, write_edge_csv};
use crate::error::CliError;
use crate::report::{boysen_json, matrix_csv, report_json, scan_csv, truth_json};

#[derive(Debug, Parser)]
#[command(name = "graphon-cpd", version, about = "Change-point detection for dynamic networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mnbs,
    Musvt,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan an edge-list CSV and report change-points as JSON.
    Detect {
        /// Edge CSV with header `t,i,j` (0-based).
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "T")]
        len: Option<usize>,
        /// Window half-width; defaults to floor(sqrt(T)).
        #[arg(long)]
        h: Option<usize>,
        #[arg(long = "B0")]
        b0: Option<f64>,
        #[arg(long = "D0")]
        d0: Option<f64>,
        #[arg(long = "delta0")]
        delta0: Option<f64>,
        /// Report path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the scan profile as `t,D` CSV.
        #[arg(long = "scan-out")]
        scan_out: Option<PathBuf>,
        /// Warn when 2h is not below this minimum spacing of change-points.
        #[arg(long = "min-gap")]
        min_gap: Option<usize>,
    },
    /// Estimate the link-probability matrix of a window as n×n CSV.
    Estimate {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "T")]
        len: Option<usize>,
        /// First snapshot of the window (1-based); defaults to 1.
        #[arg(long)]
        from: Option<usize>,
        /// Last snapshot of the window (1-based, inclusive); defaults to T.
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, value_enum, default_value = "mnbs")]
        method: Method,
        #[arg(long = "B0", default_value_t = DetectorParams::DEFAULT_B0)]
        b0: f64,
        /// MUSVT cutoff slack.
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a benchmark scenario as an edge CSV.
    Simulate {
        /// For example DSBM-I, MDSBM-II, NOCHANGE-SBM-III, NOCHANGE-Graphon-I.
        #[arg(long)]
        scenario: ScenarioId,
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the true change-points as JSON.
        #[arg(long = "truth-out")]
        truth_out: Option<PathBuf>,
    },
    /// Boysen distances between estimated and true change-points.
    Eval {
        /// Comma-separated 1-based times, possibly empty.
        #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
        est: Points,
        #[arg(long, value_parser = parse_points)]
        truth: Points,
        #[arg(long = "T")]
        len: usize,
    },
    /// Monte Carlo benchmark of one scenario as a CSV row.
    Bench {
        #[arg(long)]
        scenario: ScenarioId,
        #[arg(long)]
        n: usize,
        #[arg(long = "T")]
        len: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        /// Replication r uses seed + r.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long = "B0")]
        b0: Option<f64>,
        #[arg(long = "D0")]
        d0: Option<f64>,
        #[arg(long = "delta0")]
        delta0: Option<f64>,
        /// Omit the CSV header line.
        #[arg(long = "no-header")]
        no_header: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A parsed change-point list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Points(pub Vec<usize>);

fn parse_points(s: &str) -> Result<Points, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Points)
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(&p.display().to_string(), e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e)),
    }
}

fn load(input: &Path, n: Option<usize>, len: Option<usize>) -> Result<graphon_cpd_core::AdjacencySequence, CliError> {
    let file = File::open(input).map_err(|e| CliError::io(&input.display().to_string(), e))?;
    parse_edge_csv(BufReader::new(file), n, len)
}

/// Runs one parsed command.
pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Detect { input, n, len, h, b0, d0, delta0, out, scan_out, min_gap } => {
            let cfg = RunConfig { input, n, len, h, b0, d0, delta0, output: out, scan_output: scan_out, seed: 0 };
            let seq = cfg.load_sequence()?;
            let params = cfg.params(seq.len())?;
            if let Some(gap) = min_gap {
                if !params.fits_min_gap(gap) {
                    let _ = writeln!(
                        stderr,
                        "warning: 2h = {} is not below the minimum spacing {gap}; nearby change-points may merge",
                        2 * params.h
                    );
                }
            }
            let report = detect(&seq, &params)?;
            if let Some(path) = &cfg.scan_output {
                emit(Some(path), &scan_csv(&report.scan), stdout)?;
            }
            emit(cfg.output.as_deref(), &report_json(&report), stdout)
        }
        Command::Estimate { input, n, len, from, to, method, b0, eta, out } => {
            let seq = load(&input, n, len)?;
            let (from, to) = (from.unwrap_or(1), to.unwrap_or(seq.len()));
            let estimate = match method {
                Method::Mnbs => mnbs_estimate(&seq, from, to, &EstimatorConfig::new(b0, eta)?)?,
                Method::Musvt => {
                    let abar = average_adjacency(&seq, from, to)?;
                    musvt_estimate(&abar, to - from + 1, eta)?
                }
            };
            emit(out.as_deref(), &matrix_csv(estimate.as_dense()), stdout)
        }
        Command::Simulate { scenario, n, len, seed, out, truth_out } => {
            let spec = ScenarioSpec::new(scenario, n, len, seed);
            let (seq, truth) = scenario_sequence(&spec)?;
            let mut csv = Vec::new();
            write_edge_csv(&seq, &mut csv).map_err(|e| CliError::io("edge CSV", e))?;
            emit(out.as_deref(), &String::from_utf8(csv).expect("edge CSV is ASCII"), stdout)?;
            if let Some(path) = truth_out {
                emit(Some(&path), &truth_json(&spec, &truth), stdout)?;
            }
            Ok(())
        }
        Command::Eval { est, truth, len } => {
            let result = boysen(&est.0, &truth.0, len)?;
            emit(None, &boysen_json(&result), stdout)
        }
        Command::Bench { scenario, n, len, reps, seed, h, b0, d0, delta0, no_header, out } => {
            let spec = ScenarioSpec::new(scenario, n, len, seed);
            let params = RunConfig { h, b0, d0, delta0, ..RunConfig::default() }.params(len)?;
            let row = monte_carlo(&spec, reps, &params)?;
            emit(out.as_deref(), &bench_csv(&row, !no_header), stdout)
        }
    }
}

/// A bench row as CSV text, optionally preceded by the header.
pub fn bench_csv(row: &BenchRow, header: bool) -> String {
    let mut s = String::new();
    if header {
        s.push_str(BenchRow::CSV_HEADER);
        s.push('\n');
    }
    s.push_str(&row.to_csv_record());
    s.push('\n');
    s
}

/// Parses `argv` (program name first), runs it and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                1
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "graphon-cpd: {e}");
            e.exit_code()
        }
    }
}
