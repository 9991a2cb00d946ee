//! `uniq-lab`: deterministic experiment runner around the uniqueness-pair
//! toolkit. Every subcommand writes CSV/JSON (and SVG where there is a
//! picture) into `--out` and exits 0 only when all built-in assertions pass;
//! bad invocations and malformed input files exit 2, runtime failures 1.

mod config;
mod output;
mod runners;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "uniq-lab",
    version,
    about = "Grid maps, recursions, decay bounds and sampling experiments with reproducible file outputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Map the admissible exponent region on a grid (CSV + SVG)
    Region(config::Opts),
    /// Trace the coupled gap recursion to its fixed point
    Recursion(config::Opts),
    /// Moment-cascade growth table and decay certificate
    Bounds(config::Opts),
    /// Stretched-exponential moment identity table
    Moments(config::Opts),
    /// Adversarial gap-construction statistics
    Sharpness(config::Opts),
    /// Normalized sigma_min heatmap over the exponent plane (CSV + SVG)
    Sweep(config::Opts),
    /// Round-trip coefficient recovery at fixed exponents
    Reconstruct(config::Opts),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts): (&'static str, &config::Opts) = match &cli.command {
        Cmd::Region(o) => ("region", o),
        Cmd::Recursion(o) => ("recursion", o),
        Cmd::Bounds(o) => ("bounds", o),
        Cmd::Moments(o) => ("moments", o),
        Cmd::Sharpness(o) => ("sharpness", o),
        Cmd::Sweep(o) => ("sweep", o),
        Cmd::Reconstruct(o) => ("reconstruct", o),
    };
    let cfg = match config::resolve(name, opts) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match runners::run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: assertions failed (see {})", cfg.out.join("summary.json").display());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
