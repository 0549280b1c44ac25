use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nclp::Tolerances;
use nclp_cli::error::error_json;
use nclp_cli::io::{read_json, to_json};
use nclp_cli::oracle::{run_oracle, OracleInput};
use nclp_cli::{demo, run_suite, CliError, SuiteConfig};

#[derive(Parser)]
#[command(name = "nclp", version, about = "Property suite and demos for noncommutative L_a-spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded property suite and print a JSON report.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed and NCLP_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run one computation on a JSON input file.
    Demo {
        #[arg(value_parser = demo::DEMOS)]
        name: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare the scalar commutative norm against the matrix path.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
}

fn load_config(path: Option<PathBuf>, seed: Option<u64>, trials: Option<usize>) -> Result<SuiteConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Ok(env) = std::env::var("NCLP_SEED") {
        cfg.seed = env
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("NCLP_SEED is not an unsigned integer: {env:?}")))?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Verify { config, seed, trials } => {
            let cfg = load_config(config, seed, trials)?;
            let report = run_suite(&cfg)?;
            println!("{}", to_json(&report));
            Ok(if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Demo { name, input } => {
            let text = std::fs::read_to_string(&input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let out = demo::run_demo(&name, &text)?;
            println!("{}", to_json(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { input } => {
            let inp: OracleInput = read_json(&input)?;
            let out = run_oracle(&inp, &Tolerances::default())?;
            println!("{}", to_json(&out));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let obj = error_json(&e);
            if matches!(e, CliError::Domain(_)) {
                println!("{}", to_json(&obj));
            } else {
                eprintln!("{}", to_json(&obj));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
