use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use boxres::config::{validate_config, Mode};
use boxres::report;

/// Locate single-particle resonances by the spherical-box stabilization
/// method, with an independent phase-shift cross-check.
#[derive(Parser)]
#[command(name = "boxres", version, about)]
struct Cli {
    /// Run configuration file (key=value lines, # comments).
    #[arg(long)]
    config: PathBuf,

    /// Override the mode from the config file.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,

    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let raw = match std::fs::read_to_string(&cli.config) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("boxres: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match validate_config(&raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("boxres: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(mode) = cli.mode {
        config.mode = mode;
    }
    match report::run(&config, cli.force) {
        Ok(summary) => {
            print!("{}", summary.text);
            println!("wrote {} files to {}", summary.files.len(), config.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("boxres: {e}");
            ExitCode::FAILURE
        }
    }
}
