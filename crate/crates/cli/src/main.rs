use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

#[derive(Parser)]
#[command(name = "bmoalab", version, about = "Numerical experiments on BMOA-type spaces")]
struct Args {
    /// One of: norm, vmoa, semigroup-flow, continuity, condition, volterra, gamma, suite
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(bmoalab_cli::COMMANDS))]
    command: String,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and profile CSVs.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: rayon's choice).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(bmoalab_cli::EXIT_SCHEMA as u8);
        }
    }
    ExitCode::from(bmoalab_cli::run(&args.command, &args.config, &args.out) as u8)
}
