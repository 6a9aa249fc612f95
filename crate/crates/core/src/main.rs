use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fuzzcalc::cli::{self, CliError, Outcome, Overrides};

/// Fuzzy-number arithmetic, gS derivatives and fuzzy decay IVP bands.
#[derive(Debug, Parser)]
#[command(name = "fuzzcalc", version)]
struct Args {
    #[command(subcommand)]
    verb: Verb,

    /// JSON config (derive, solve) or fuzzy-number document (validate).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path; a JSON report is written to `<PATH>.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RK4 step size.
    #[arg(long, global = true)]
    step: Option<f64>,

    /// Number of uniformly spaced α levels.
    #[arg(long = "alpha-levels", global = true)]
    alpha_levels: Option<usize>,

    /// Comma-separated output times.
    #[arg(long = "t-points", global = true, value_delimiter = ',', allow_negative_numbers = true)]
    t_points: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Classify Seikkala / gS differentiability of a built-in function family.
    Derive,
    /// Solve a fuzzy decay problem and cross-check it against the closed form.
    Solve,
    /// Check a fuzzy-number document.
    Validate,
    /// Reproduce a worked example: 4.1, 4.2 or fig-4.1.
    Reproduce { id: String },
}

fn run(args: &Args) -> Result<Outcome, CliError> {
    let overrides = Overrides {
        step: args.step,
        alpha_levels: args.alpha_levels,
        t_points: args.t_points.clone(),
        slack: cli::slack_from_env()?,
    };
    let config = || -> Result<String, CliError> {
        let path = args
            .config
            .as_ref()
            .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
        cli::read_config(path)
    };
    let outcome = match &args.verb {
        Verb::Derive => cli::cmd_derive(&config()?, &overrides)?,
        Verb::Solve => cli::cmd_solve(&config()?, &overrides)?,
        Verb::Validate => cli::cmd_validate(&config()?, &overrides)?,
        Verb::Reproduce { id } => cli::cmd_reproduce(id, &overrides)?,
    };
    cli::emit(&outcome, args.out.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(outcome) => ExitCode::from(outcome.report.exit_code() as u8),
        Err(e) => {
            eprintln!("fuzzcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
