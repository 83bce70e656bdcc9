//! `quivercap`: capacity, scaling, feasibility, entropy gap and uniqueness
//! reports for quiver and AJN data stored as JSON.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quiver_capacity::capacity::{cap_at, solve, CapacityReport, SolveStatus, SolverOptions};
use quiver_capacity::entropy::ajn_gap;
use quiver_capacity::format::{parse_datum, parse_tuple, Datum, DatumFile, ReportFile, ResidualsFile};
use quiver_capacity::quiver::QuiverDatum;
use quiver_capacity::scaling::{act, character, extremizer_to_group, is_geometric};
use quiver_capacity::stability::{endomorphism_dimension, find_violator, uniqueness_probe, ProbeOutcome};

use report::{base_report, group_file, violator_file, witness_file};

/// Slack evaluations spent looking for a violating subspace tuple.
const VIOLATOR_BUDGET: usize = 10_000;

#[derive(Parser)]
#[command(name = "quivercap", version, about = "Capacity and Gaussian extremizers of quiver and AJN data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the capacity and the best constant
    Capacity(CommonArgs),
    /// Scale a feasible datum to geometric form
    Scale(CommonArgs),
    /// Decide feasibility: violating subspaces or a converged capacity
    Check(CommonArgs),
    /// Entropy gap of an AJN datum at given Gaussian covariances
    Gap {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON list of covariance matrices, one per source
        #[arg(long)]
        sigma: PathBuf,
    },
    /// Multi-start uniqueness probe and endomorphism dimension
    Probe {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Datum file (JSON)
    file: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-12)]
    floor: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Emit a single-line JSON report
    #[arg(long)]
    json: bool,
    /// Emit an indented JSON report
    #[arg(long)]
    pretty: bool,
}

impl CommonArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            cap_floor: self.floor,
            seed: self.seed,
            ..Default::default()
        }
    }
}

/// Failure before any mathematical verdict: exit code 1.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Converged => 0,
        SolveStatus::Infeasible => 2,
        SolveStatus::MaxIterations => 3,
    }
}

fn read_datum(path: &Path) -> Result<Datum, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_datum(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn load(args: &CommonArgs) -> Result<(Datum, QuiverDatum), UsageError> {
    let datum = read_datum(&args.file)?;
    let quiver = datum.to_quiver()?;
    quiver.ensure_valid()?;
    Ok((datum, quiver))
}

fn solve_checked(quiver: &QuiverDatum, args: &CommonArgs) -> Result<CapacityReport, UsageError> {
    Ok(solve(quiver, &args.options())?)
}

/// Solver report with a violator attached when the datum is infeasible.
fn solved_report(quiver: &QuiverDatum, solved: &CapacityReport, seed: u64) -> ReportFile {
    let mut report = base_report(solved);
    if solved.status == SolveStatus::Infeasible {
        report.violator = find_violator(quiver, VIOLATOR_BUDGET, seed).as_ref().map(violator_file);
    }
    report
}

fn cmd_capacity(args: &CommonArgs) -> Result<(ReportFile, u8), UsageError> {
    let (_, quiver) = load(args)?;
    let solved = solve_checked(&quiver, args)?;
    Ok((solved_report(&quiver, &solved, args.seed), exit_code(solved.status)))
}

fn cmd_scale(args: &CommonArgs) -> Result<(ReportFile, u8), UsageError> {
    let (_, quiver) = load(args)?;
    let solved = solve_checked(&quiver, args)?;
    let mut report = solved_report(&quiver, &solved, args.seed);
    let Some(sigma) = solved.extremizer.as_ref() else {
        return Ok((report, exit_code(solved.status)));
    };
    let g = extremizer_to_group(&quiver, sigma, args.tol)?;
    let scaled = act(&g, &quiver)?;
    let check = is_geometric(&scaled, 10.0 * args.tol);
    report.character = Some(character(&g, &quiver.sigma)?);
    report.group_element = Some(group_file(&g));
    report.scaled_datum = Some(DatumFile::from_quiver(&scaled));
    report.ds_residuals = Some(ResidualsFile { source: check.residuals.source, sink: check.residuals.sink });
    report.geometric = Some(check.geometric);
    Ok((report, exit_code(solved.status)))
}

fn cmd_check(args: &CommonArgs) -> Result<(ReportFile, u8), UsageError> {
    let (_, quiver) = load(args)?;
    let violator = find_violator(&quiver, VIOLATOR_BUDGET, args.seed);
    let solved = solve_checked(&quiver, args)?;
    let mut report = base_report(&solved);
    let code = if violator.is_some() { 2 } else { exit_code(solved.status) };
    report.feasible = match (&violator, solved.status) {
        (Some(_), _) | (None, SolveStatus::Infeasible) => Some(false),
        (None, SolveStatus::Converged) => Some(true),
        (None, SolveStatus::MaxIterations) => None,
    };
    report.geometric = Some(is_geometric(&quiver, args.tol).geometric);
    report.violator = violator.as_ref().map(violator_file);
    Ok((report, code))
}

fn cmd_gap(args: &CommonArgs, sigma_path: &Path) -> Result<(ReportFile, u8), UsageError> {
    let (datum, quiver) = load(args)?;
    let ajn = datum.as_ajn().ok_or_else(|| UsageError("gap needs a datum of kind \"ajn\"".into()))?;
    let text = std::fs::read_to_string(sigma_path).map_err(|e| UsageError(format!("{}: {e}", sigma_path.display())))?;
    let z = parse_tuple(&text).map_err(|e| UsageError(format!("{}: {e}", sigma_path.display())))?;
    let gap = ajn_gap(ajn, &z)?;
    let cap = cap_at(&quiver, &z)?;
    let report = ReportFile {
        status: "Evaluated".into(),
        gap: Some(gap),
        cap_at: Some(cap),
        identity_residual: Some((gap + 0.5 * cap.ln()).abs()),
        ..Default::default()
    };
    Ok((report, 0))
}

fn cmd_probe(args: &CommonArgs, restarts: usize) -> Result<(ReportFile, u8), UsageError> {
    let (_, quiver) = load(args)?;
    let solved = solve_checked(&quiver, args)?;
    let mut report = solved_report(&quiver, &solved, args.seed);
    if solved.status != SolveStatus::Converged {
        return Ok((report, exit_code(solved.status)));
    }
    let outcome = uniqueness_probe(&quiver, restarts, &args.options(), args.threads)?;
    report.uniqueness = Some(outcome.as_str().into());
    if let ProbeOutcome::NonUnique(w) = &outcome {
        report.witness = Some(witness_file(w));
    }
    report.end_dimension = Some(endomorphism_dimension(&quiver));
    Ok((report, 0))
}

fn run(cli: &Cli) -> Result<(ReportFile, u8, bool, bool), UsageError> {
    let (common, result) = match &cli.command {
        Command::Capacity(c) => (c, cmd_capacity(c)),
        Command::Scale(c) => (c, cmd_scale(c)),
        Command::Check(c) => (c, cmd_check(c)),
        Command::Gap { common, sigma } => (common, cmd_gap(common, sigma)),
        Command::Probe { common, restarts } => (common, cmd_probe(common, *restarts)),
    };
    let (report, code) = result?;
    Ok((report, code, common.json, common.pretty))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((report, code, json, pretty)) => {
            let text = if pretty {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else if json {
                serde_json::to_string(&report).expect("report serializes")
            } else {
                report::render_text(&report)
            };
            println!("{text}");
            ExitCode::from(code)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
