use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matterwave::cli::{run_density, run_hom, run_verify, CliError, ExperimentConfig, RunReport};

#[derive(Parser)]
#[command(
    name = "matterwave",
    about = "Few-body matter-wave interference experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied after the file and flags.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Two particles through a beamsplitter.
    Hom {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        statistics: Option<String>,
        /// HH, VV, symmetric, antisymmetric, triplet, singlet or all.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        convention: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Density, conditional and flux maps for a trap geometry.
    Density {
        #[command(flatten)]
        common: Common,
        /// triangle, rectangle or square.
        #[arg(long)]
        geometry: Option<String>,
        #[arg(short = 'a', long = "a")]
        a: Option<f64>,
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(short = 'b', long = "b")]
        b: Option<f64>,
        #[arg(long)]
        statistics: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coupling-coefficient and symmetry identity suite.
    Verify,
}

fn load(common: &Common, flags: &[(&str, Option<String>)]) -> Result<ExperimentConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    for (key, value) in flags {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    for o in &common.overrides {
        config.apply_override(o)?;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<RunReport, CliError> {
    match cli.command {
        Command::Hom {
            common,
            statistics,
            input,
            convention,
            theta,
        } => {
            let config = load(
                &common,
                &[
                    ("statistics", statistics),
                    ("input", input),
                    ("convention", convention),
                    ("theta", theta.map(|t| t.to_string())),
                ],
            )?;
            run_hom(&config)
        }
        Command::Density {
            common,
            geometry,
            a,
            h,
            b,
            statistics,
            out,
        } => {
            let square = geometry.as_deref() == Some("square");
            let b = if square { b.or(a) } else { b };
            let mut config = load(
                &common,
                &[
                    ("geometry", geometry.clone()),
                    ("a", a.map(|v| v.to_string())),
                    ("h", h.map(|v| v.to_string())),
                    ("b", b.map(|v| v.to_string())),
                    ("statistics", statistics),
                    ("output_dir", out.map(|p| p.display().to_string())),
                ],
            )?;
            if geometry.is_some() && !common.overrides.iter().any(|o| o.starts_with("particles")) {
                config.particles = config.geometry()?.site_count();
            }
            if square && a.is_none() && b.is_none() {
                config.b = config.a;
            }
            run_density(&config)
        }
        Command::Verify => run_verify(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            println!("{report}");
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
