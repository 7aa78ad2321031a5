//! The `psyrisk` command-line tool.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 runtime or
//! degenerate-model error (including failed checks), 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::belief::{verify_axioms, AxiomReport};
use crate::config::RunConfig;
use crate::engine::run_episode;
use crate::error::Error;
use crate::montecarlo::{
    empirical_confidence_oracle, sweep, OracleEstimate, SweepParameter, SweepSpec,
};
use crate::output;
use crate::perception::{asymptotic_confidence, TrueFrequencies};

#[derive(Debug, Parser)]
#[command(
    name = "psyrisk",
    version,
    about = "Investor/manager risk simulation with distorted recall"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides `simulation.seed`.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one episode and write its trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Trajectory file; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// `json` writes line-delimited JSON records.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sweep one parameter over a grid, replicating each point.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary (gamma_investor, gamma_manager, mu, mu1, mu2,
        /// mu3, alpha_success, psi_base, cost_point).
        #[arg(long, value_name = "NAME")]
        param: String,
        /// Comma-separated grid values.
        #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        /// Overrides `simulation.replications`.
        #[arg(long)]
        replications: Option<u64>,
        /// Overrides `simulation.rounds`.
        #[arg(long)]
        rounds: Option<u64>,
        /// Table file; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Verify the confidence axioms and the long-run confidence formula.
    Check {
        #[command(flatten)]
        common: Common,
        /// Experiences sampled by the brute-force oracle.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Print the report as JSON instead of text.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(Error),
    #[error("{0}")]
    Runtime(Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("{failed} check(s) failed")]
    ChecksFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) | Self::ChecksFailed { .. } => 3,
            Self::Io { .. } => 4,
        }
    }

    fn io(context: impl Into<String>, source: io::Error) -> Self {
        Self::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange { .. } | Error::Config(_) => Self::Config(e),
            Error::Degenerate(_) | Error::NoData(_) => Self::Runtime(e),
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    let mut config = match &common.config {
        None => RunConfig::default(),
        Some(path) => RunConfig::load(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))??,
    };
    if let Some(seed) = common.seed {
        config.simulation.seed = seed;
    }
    Ok(config)
}

fn with_output<F>(out: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
            write(&mut BufWriter::new(file))
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
        }
        None => write(&mut io::stdout().lock()).map_err(|e| CliError::io("writing stdout", e)),
    }
}

/// Runs one episode; returns the summary line.
pub fn cmd_simulate(
    common: &Common,
    out: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    let config = load_config(common)?;
    let episode = config.to_episode()?;
    let trajectory = run_episode(&episode, config.simulation.seed)?;
    with_output(out, |w| match format {
        Format::Json => output::write_trajectory_jsonl(&trajectory, w),
        Format::Csv => output::write_trajectory_csv(&trajectory, w),
    })?;
    let mut last = episode.players;
    if let Some((investor, manager)) = trajectory.final_counts() {
        last.investor.counts = investor;
        last.manager.counts = manager;
    }
    Ok(output::summary_line(
        &trajectory,
        last.investor.confidence(),
        last.manager.confidence(),
    ))
}

pub struct SweepArgs<'a> {
    pub param: &'a str,
    pub grid: &'a [f64],
    pub replications: Option<u64>,
    pub rounds: Option<u64>,
}

pub fn cmd_sweep(
    common: &Common,
    args: &SweepArgs<'_>,
    out: Option<&Path>,
    format: Format,
) -> Result<usize, CliError> {
    let config = load_config(common)?;
    let episode = config.to_episode()?;
    let spec = SweepSpec {
        parameter: args.param.parse::<SweepParameter>()?,
        grid: args.grid.to_vec(),
        replications: args.replications.unwrap_or(config.simulation.replications),
        rounds: args.rounds.unwrap_or(config.simulation.rounds),
        base_seed: config.simulation.seed,
    };
    let rows = sweep(&episode, &spec)?;
    with_output(out, |w| match format {
        Format::Csv => output::write_sweep_csv(&rows, w),
        Format::Json => output::write_sweep_json(&rows, w),
    })?;
    Ok(rows.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn failed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }

    pub fn degenerate(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Degenerate)
            .count()
    }
}

/// Axiom limit points checked by `check`.
pub const CHECK_A_VALUES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const CHECK_F_MAX: u64 = 1000;
/// Largest acceptable oracle deviation, in standard errors and absolute.
pub const ORACLE_SIGMAS: f64 = 3.0;
pub const ORACLE_ABS_TOL: f64 = 0.01;

fn axiom_results(agent: &str, report: &AxiomReport) -> Vec<CheckResult> {
    let status = |passed| {
        if passed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    };
    vec![
        CheckResult {
            name: format!("belief.{agent}.bounded"),
            status: status(report.bounded.passed),
            detail: format!("min(β, 1-β) = {}", output::sig12(report.bounded.worst)),
        },
        CheckResult {
            name: format!("belief.{agent}.monotone"),
            status: status(report.monotone.passed),
            detail: format!("smallest step = {}", output::sig12(report.monotone.worst)),
        },
        CheckResult {
            name: format!("belief.{agent}.limit"),
            status: status(report.limit.passed),
            detail: format!(
                "max deviation at f={} is {} (tolerance {})",
                CHECK_F_MAX,
                output::sig12(report.limit.worst),
                output::sig12(report.limit_tolerance)
            ),
        },
    ]
}

fn oracle_result(
    name: String,
    closed: Result<f64, Error>,
    estimate: Result<OracleEstimate, Error>,
) -> CheckResult {
    match (closed, estimate) {
        (Ok(closed), Ok(est)) => {
            let deviation = (est.estimate - closed).abs();
            let passed =
                deviation <= ORACLE_SIGMAS * est.standard_error && deviation <= ORACLE_ABS_TOL;
            CheckResult {
                name,
                status: if passed {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                detail: format!(
                    "closed form {} vs oracle {} ± {} over {} recalled of {} samples",
                    output::sig12(closed),
                    output::sig12(est.estimate),
                    output::sig12(est.standard_error),
                    est.recorded,
                    est.samples
                ),
            }
        }
        (Err(e), _) | (_, Err(e)) => CheckResult {
            name,
            status: CheckStatus::Degenerate,
            detail: e.to_string(),
        },
    }
}

/// Axiom checks for both agents' confidence functions, then the oracle
/// agreement for both agents' long-run confidence. The Investor's true
/// success frequency is ψ⁰ at its initial confidence; the Manager's is
/// ψ⁰¹ at both agents' initial confidences.
pub fn run_checks(config: &RunConfig, samples: u64) -> Result<CheckReport, CliError> {
    let episode = config.to_episode()?;
    let seed = config.simulation.seed;
    let mut checks = Vec::new();
    let players = &episode.players;
    for (agent, player) in [
        ("investor", &players.investor),
        ("manager", &players.manager),
    ] {
        let report = verify_axioms(&player.belief, &CHECK_A_VALUES, CHECK_F_MAX)?;
        checks.extend(axiom_results(agent, &report));
    }

    let p0 = players.investor.confidence();
    let p1 = players.manager.confidence();
    let targets = [
        (
            "investor",
            &players.investor,
            episode.success.project_success(p0),
            0u64,
        ),
        (
            "manager",
            &players.manager,
            episode.success.embezzle_success(p0, p1),
            1u64,
        ),
    ];
    for (agent, player, alpha, salt) in targets {
        let freq = TrueFrequencies::new(alpha)?;
        let closed = asymptotic_confidence(&player.perception, &player.recollection, &freq);
        let estimate = empirical_confidence_oracle(
            &freq,
            &player.perception,
            &player.recollection,
            samples,
            seed ^ salt,
        );
        checks.push(oracle_result(
            format!("perception.{agent}.oracle"),
            closed,
            estimate,
        ));
    }
    Ok(CheckReport { checks })
}

pub fn render_check_text(report: &CheckReport) -> String {
    let mut text = String::new();
    for c in &report.checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Degenerate => "DEGENERATE",
        };
        text.push_str(&format!("{tag:<10} {:<28} {}\n", c.name, c.detail));
    }
    text
}

pub fn cmd_check(common: &Common, samples: u64, format: Option<Format>) -> Result<(), CliError> {
    let config = load_config(common)?;
    let report = run_checks(&config, samples)?;
    let rendered = match format {
        Some(Format::Json) => {
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        _ => render_check_text(&report),
    };
    io::stdout()
        .write_all(rendered.as_bytes())
        .map_err(|e| CliError::io("writing stdout", e))?;
    if report.degenerate() > 0 {
        let names: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Degenerate)
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::Runtime(Error::Degenerate(format!(
            "nothing is ever recalled in {}",
            names.join(", ")
        ))));
    }
    match report.failed() {
        0 => Ok(()),
        failed => Err(CliError::ChecksFailed { failed }),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            common,
            out,
            format,
        } => {
            let summary = cmd_simulate(&common, out.as_deref(), format)?;
            if out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(())
        }
        Command::Sweep {
            common,
            param,
            grid,
            replications,
            rounds,
            out,
            format,
        } => {
            let args = SweepArgs {
                param: &param,
                grid: &grid,
                replications,
                rounds,
            };
            let rows = cmd_sweep(&common, &args, out.as_deref(), format)?;
            if let Some(path) = &out {
                println!("wrote {rows} sweep point(s) to {}", path.display());
            }
            Ok(())
        }
        Command::Check {
            common,
            samples,
            format,
        } => cmd_check(&common, samples, format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let config: CliError = Error::Config("x".into()).into();
        assert_eq!(config.exit_code(), 2);
        let range: CliError = crate::agents::InvestorPolicy::all_or_nothing(0.2)
            .unwrap_err()
            .into();
        assert_eq!(range.exit_code(), 2);
        let degenerate: CliError = Error::Degenerate("x".into()).into();
        assert_eq!(degenerate.exit_code(), 3);
        assert_eq!(CliError::ChecksFailed { failed: 1 }.exit_code(), 3);
        assert_eq!(CliError::io("x", io::Error::other("boom")).exit_code(), 4);
    }

    #[test]
    fn default_checks_pass() {
        let report = run_checks(&RunConfig::default(), 100_000).unwrap();
        assert_eq!(report.checks.len(), 8);
        assert_eq!(report.failed(), 0, "{}", render_check_text(&report));
        assert_eq!(report.degenerate(), 0);
    }

    #[test]
    fn blind_investor_without_successes_is_degenerate() {
        let mut config = RunConfig::default();
        config.investor.gamma = 1.0;
        config.success.psi_base = 0.0;
        let report = run_checks(&config, 1000).unwrap();
        let investor = report
            .checks
            .iter()
            .find(|c| c.name == "perception.investor.oracle")
            .unwrap();
        assert_eq!(investor.status, CheckStatus::Degenerate);
    }

    #[test]
    fn zero_prior_rejected_before_checks() {
        let mut config = RunConfig::default();
        config.investor.prior_success = 0.0;
        let err = run_checks(&config, 10).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
