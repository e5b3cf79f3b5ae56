use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orbitlift::rat;
use orbitlift_cli::{job, CliError, JobSpec, Outcome};

#[derive(Parser)]
#[command(name = "orbitlift", version, about = "Lift curves from an orbit space back to the representation space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lift the curve of a job file and write artifacts.
    Lift {
        spec: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Test whether c(t0) lies in the orbit space.
    Membership {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Minor vanishing report at the given rank.
    Conditions {
        spec: PathBuf,
        #[arg(long)]
        rank: usize,
    },
    /// Inspect built-in representations.
    Catalog {
        #[command(subcommand)]
        what: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Show { name: String },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Lift { spec, order, mode, out } => {
            let mut job = JobSpec::load(&spec)?;
            if let Some(n) = order {
                if n < 1 {
                    return Err(CliError::Format("order must be at least 1".into()));
                }
                job.order = n;
            }
            if let Some(m) = mode {
                job.mode = job::parse_mode(&m)?;
            }
            orbitlift_cli::run_lift(&job, &out)
        }
        Command::Membership { spec, at } => {
            let job = JobSpec::load(&spec)?;
            let t0 = rat::parse(&at).map_err(|e| CliError::Format(e.to_string()))?;
            orbitlift_cli::run_membership(&job, &t0)
        }
        Command::Conditions { spec, rank } => orbitlift_cli::run_conditions(&JobSpec::load(&spec)?, rank),
        Command::Catalog { what: CatalogCommand::List } => Ok(orbitlift_cli::catalog_list()),
        Command::Catalog { what: CatalogCommand::Show { name } } => orbitlift_cli::catalog_show(&name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(o) => {
            println!("{}", o.message);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Lift { log, .. } = &e {
                for s in log {
                    eprintln!("  {s}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
