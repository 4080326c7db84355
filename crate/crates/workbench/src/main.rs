use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trinomial_workbench::{emit_report, parse_spec_file, run_command, CliError, Command, Options, Report};

const SEED_VAR: &str = "WORKBENCH_SEED";

/// Analyses of trinomial varieties and their locally nilpotent derivations.
///
/// Commands: validate, rigidity, grading, strata, census, lnd-check,
/// lnd-search, exp, transport, example-hypersurface. Exit code 0 on success,
/// 2 when the analysis answers negatively, 1 on errors.
#[derive(Parser, Debug)]
#[command(name = "workbench", version)]
struct Args {
    command: String,
    /// JSON spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Numeric tolerance for strata and transport.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Nilpotency cap.
    #[arg(long)]
    cap: Option<u32>,
    /// Free part of the target degree, comma separated (e.g. "-1" or "0,1").
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<String>,
    /// Largest total degree of an image in lnd-search.
    #[arg(long)]
    max_image_degree: Option<u32>,
}

fn parse_degree(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| CliError::InvalidOption(format!("--degree {text:?}"))))
        .collect()
}

fn seed() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| CliError::InvalidOption(format!("{SEED_VAR}={s:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(args: Args) -> Result<bool, CliError> {
    let command: Command = args.command.parse()?;
    if let Some(e) = args.epsilon {
        if !(e > 0.0 && e.is_finite()) {
            return Err(CliError::InvalidOption(format!("--epsilon {e}")));
        }
    }
    let options = Options {
        epsilon: args.epsilon,
        cap: args.cap,
        degree: args.degree.as_deref().map(parse_degree).transpose()?,
        max_image_degree: args.max_image_degree,
        spot_checks: None,
    };
    let spec = parse_spec_file(&args.spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
    let outcome = run_command(command, &spec, &options, &mut rng)?;
    let report = Report::new(command.name(), spec.digest.clone(), outcome.payload);
    emit_report(&report, args.out.as_deref())?;
    Ok(outcome.negative)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
