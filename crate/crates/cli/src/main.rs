use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hankel_spectra_cli::{cmd_predict, cmd_sweep, cmd_verify, CliError, ExperimentConfig, Suite};

#[derive(Parser)]
#[command(name = "hankel-spectra", version, about = "Spectral density experiments for truncated Hankel matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form predictions: densities, essential spectrum, a.c. spectrum.
    Predict {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counting sweeps over the N grid, one CSV per multiplier.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Predict { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = cmd_predict(&cfg, out.as_deref())?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
            println!("{text}");
        }
        Command::Sweep { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            for path in cmd_sweep(&cfg, out.as_deref())? {
                println!("{}", path.display());
            }
        }
        Command::Verify { config, out, suite } => {
            let suite = Suite::parse(&suite)?;
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            let report = cmd_verify(suite, cfg.as_ref(), out.as_deref())?;
            for c in &report.checks {
                println!("{}", c.line());
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Verification(format!("{failed} of {} checks failed", report.checks.len())));
            }
            println!("all {} checks passed", report.checks.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hankel-spectra: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
