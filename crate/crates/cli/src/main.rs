//! `modflow`: tables, orbits, mixing matrices, temperature profiles, and
//! numerical consistency checks for geometric modular flows on unions of
//! intervals.

mod commands;
mod config;
mod error;
mod svg;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CmdOutput, Format};
use config::JobConfig;
use error::{CliError, CliResult};

/// Geometric modular flows for unions of disjoint intervals: trajectories,
/// orbits, mixing matrices, temperature and acceleration profiles, and
/// numerical checks of the thermal boundary condition.
#[derive(Parser)]
#[command(name = "modflow", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flow trajectories x(t) for seed points in every component.
    Flow(JobArgs),
    /// Modular orbit of a point inside a two-interval double cone.
    Orbit(JobArgs),
    /// Mixing matrix O(t) along the flow, with its orthogonality defect.
    Mixing(JobArgs),
    /// Temperature and acceleration profiles on a double-cone grid.
    Thermo(JobArgs),
    /// Thermal-boundary-condition residuals at random point pairs.
    Kms(JobArgs),
    /// Run the full self-check suite and write a JSON report.
    Verify(VerifyArgs),
    /// Flow on the circle for a three-window root region.
    Fig1(JobArgs),
    /// Center orbit of a double cone with a fixed 100x zoom column.
    Fig2(JobArgs),
    /// Charge-splitting points of an inversion-symmetric double cone.
    Fig3(JobArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Path to the JSON job description.
    #[arg(long)]
    config: PathBuf,
    /// Output path; overrides the config. Without either, artifacts go to
    /// stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Multiply every tolerance by this factor before re-evaluating
    /// pass/fail (residuals are unchanged).
    #[arg(long)]
    tighten: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn job_args(command: &Command) -> &JobArgs {
    match command {
        Command::Flow(j)
        | Command::Orbit(j)
        | Command::Mixing(j)
        | Command::Thermo(j)
        | Command::Kms(j)
        | Command::Fig1(j)
        | Command::Fig2(j)
        | Command::Fig3(j) => j,
        Command::Verify(v) => &v.job,
    }
}

/// Format precedence: command-line flag, then config, then the command's
/// default (`verify` reports json, everything else csv).
fn resolve_format(command: &Command, job: &JobArgs, cfg: &JobConfig) -> CliResult<Format> {
    if let Some(f) = job.format {
        return Ok(f);
    }
    if let Some(s) = cfg.output_format() {
        return match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::Config(format!(
                "unknown output format {other:?} in config; expected csv, json, or svg"
            ))),
        };
    }
    Ok(match command {
        Command::Verify(_) => Format::Json,
        _ => Format::Csv,
    })
}

fn run(cli: &Cli) -> CliResult<()> {
    let job = job_args(&cli.command);
    let cfg = JobConfig::load(&job.config)?;
    let format = resolve_format(&cli.command, job, &cfg)?;
    let output = match &cli.command {
        Command::Flow(_) => commands::cmd_flow(&cfg, format)?,
        Command::Orbit(_) => commands::cmd_orbit(&cfg, format)?,
        Command::Mixing(_) => commands::cmd_mixing(&cfg, format)?,
        Command::Thermo(_) => commands::cmd_thermo(&cfg, format)?,
        Command::Kms(_) => commands::cmd_kms(&cfg, format)?,
        Command::Verify(v) => commands::cmd_verify(&cfg, v.tighten, format)?,
        Command::Fig1(_) => commands::cmd_fig1(&cfg, format)?,
        Command::Fig2(_) => commands::cmd_fig2(&cfg, format)?,
        Command::Fig3(_) => commands::cmd_fig3(&cfg, format)?,
    };
    let path = job
        .out
        .clone()
        .or_else(|| cfg.output_path().map(PathBuf::from));
    write_artifacts(&output, path.as_deref())?;
    match output.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Insert an artifact suffix before the file extension:
/// `report.csv` + `_boost` -> `report_boost.csv`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    if suffix.is_empty() {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    match path.extension() {
        Some(ext) => path.with_file_name(format!("{stem}{suffix}.{}", ext.to_string_lossy())),
        None => path.with_file_name(format!("{stem}{suffix}")),
    }
}

fn write_artifacts(output: &CmdOutput, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => {
            for artifact in &output.artifacts {
                std::fs::write(with_suffix(path, artifact.suffix), &artifact.content)?;
            }
        }
        None => {
            for (idx, artifact) in output.artifacts.iter().enumerate() {
                if idx > 0 {
                    println!();
                }
                print!("{}", artifact.content);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_is_inserted_before_the_extension() {
        assert_eq!(
            with_suffix(Path::new("out/report.csv"), "_boost"),
            PathBuf::from("out/report_boost.csv")
        );
        assert_eq!(
            with_suffix(Path::new("report"), "_boost"),
            PathBuf::from("report_boost")
        );
        assert_eq!(
            with_suffix(Path::new("report.csv"), ""),
            PathBuf::from("report.csv")
        );
    }
}
