use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tropicap_cli::{cmd_build, cmd_caps, cmd_certify, cmd_inertia, cmd_verify, CliError, Outcome, RunConfig};

#[derive(Parser)]
#[command(name = "tropicap", version, about = "Build and certify tropical fans with non-convex complements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction and write pipeline.json and fan.json.
    Build {
        /// JSON file with RunConfig fields; flags given on the command line win.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_retries: Option<usize>,
        #[arg(long)]
        denominator: Option<u64>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        tries_per_level: Option<usize>,
        #[arg(long)]
        max_offset: Option<i64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the balancing condition.
    Verify { fan: PathBuf },
    /// Assemble the certificate of a pipeline (or fan) document.
    Certify {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a supporting cap.
    Caps {
        fan: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        /// Defaults to `cap_trials` of the run configuration.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Inertia of the intersection matrix of a 2-fan.
    Inertia { fan: PathBuf },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Build {
            config,
            k,
            n,
            seed,
            max_retries,
            denominator,
            levels,
            tries_per_level,
            max_offset,
            out_dir,
        } => {
            let mut c = match config {
                Some(path) => RunConfig::from_json_file(&path)?,
                None => RunConfig::default(),
            };
            macro_rules! set {
                ($($field:ident),*) => { $(if let Some(v) = $field { c.$field = v; })* };
            }
            set!(k, n, seed, max_retries, denominator, levels, tries_per_level, max_offset, out_dir);
            cmd_build(&c)
        }
        Command::Verify { fan } => cmd_verify(&fan),
        Command::Certify { input, out } => cmd_certify(&input, out.as_deref()),
        Command::Caps { fan, dim, trials, seed, config } => {
            let trials = match (trials, config) {
                (Some(t), _) => t,
                (None, Some(path)) => RunConfig::from_json_file(&path)?.cap_trials,
                (None, None) => RunConfig::default().cap_trials,
            };
            cmd_caps(&fan, dim, trials, seed)
        }
        Command::Inertia { fan } => cmd_inertia(&fan),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::config(e.to_string().trim_end()).to_json());
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(out) => {
            // A closed pipe is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
