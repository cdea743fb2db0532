//! The `hypsd` command line: identity verification, sampling, ECF checks and
//! the Bessel Monte Carlo battery.
//!
//! Exit status is 0 when every check passes, 1 on a numeric failure, 2 on an
//! I/O error, 64 on a usage error and 65 on malformed input data.

pub mod commands;
pub mod error;
pub mod format;
pub mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperbolic_sd::bessel::TargetId;
use hyperbolic_sd::samplers::{Method, SamplerConfig};
use hyperbolic_sd::LawId;

use crate::commands::{BesselConfig, Sink};
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use crate::format::Format;

#[derive(Debug, Parser)]
#[command(name = "hypsd", version, about = "Verify and sample the hyperbolic selfdecomposable laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Report file; stdout when absent. A manifest is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every integral identity and structural relation.
    VerifyIdentities {
        /// Pass threshold for the quadrature identities.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Comma list of t values.
        #[arg(long)]
        t_grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Draw a batch from one law.
    Sample {
        #[arg(long)]
        law: LawId,
        /// Defaults to the usual method for the law.
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Time steps per path, for Bessel subordination.
        #[arg(long, default_value_t = SamplerConfig::DEFAULT_N_STEPS)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Compare a batch's empirical characteristic function with its law's.
    Ecf {
        /// Batch file written by `sample`.
        batch: PathBuf,
        /// Comma list of t values.
        #[arg(long)]
        t_grid: Option<String>,
        /// Judge the batch against this law instead of the one it records.
        #[arg(long)]
        law: Option<LawId>,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo Laplace transforms of Bessel functionals against closed forms.
    BesselVerify {
        /// Comma list of target names; all targets when absent.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        /// Steps over the unit horizon, or per unit time for hitting and
        /// occupation targets.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma list of λ values replacing each target's default.
        #[arg(long)]
        t_grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(outcome) if outcome.passed => EXIT_PASS,
        Ok(_) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(stderr, "hypsd: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<commands::Outcome, CliError> {
    match command {
        Command::VerifyIdentities { tolerance, t_grid, output } => {
            let mut sink = Sink { out: output.out.as_deref(), stdout, stderr };
            commands::verify_identities(tolerance, t_grid.as_deref(), output.format, &mut sink)
        }
        Command::Sample { law, method, n, seed, steps, output } => {
            let mut config = SamplerConfig::new(law, method.unwrap_or_else(|| Method::default_for(law)), n, seed);
            config.n_steps = steps;
            let mut sink = Sink { out: output.out.as_deref(), stdout, stderr };
            commands::sample(&config, output.format, &mut sink)
        }
        Command::Ecf { batch, t_grid, law, output } => {
            let mut sink = Sink { out: output.out.as_deref(), stdout, stderr };
            commands::ecf(&batch, law, t_grid.as_deref(), output.format, &mut sink)
        }
        Command::BesselVerify { targets, paths, steps, seed, t_grid, output } => {
            let config = BesselConfig {
                targets: match targets {
                    Some(s) => commands::parse_targets(&s)?,
                    None => TargetId::ALL.to_vec(),
                },
                lambdas: t_grid.as_deref().map(|s| commands::parse_grid(s, "--t-grid")).transpose()?,
                n_paths: paths,
                n_steps: steps,
                seed,
                occupation_eps: commands::OCCUPATION_EPS,
            };
            let mut sink = Sink { out: output.out.as_deref(), stdout, stderr };
            commands::bessel_verify(&config, output.format, &mut sink)
        }
    }
}
