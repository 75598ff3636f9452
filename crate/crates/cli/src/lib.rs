//! Command-line front end for the `hexwave` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hexwave::presets::{figure_with, Fig5Reading, FigurePreset};
use hexwave::Normalization;

use crate::commands::{execute, Command, Context};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hexwave", version, about = "Bifurcating standing waves on a lattice")]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for summary.json, config.txt and data files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Truncation order of synthesized fields (1 or 2).
    #[arg(long, global = true)]
    order: Option<u32>,

    /// Bifurcation parameter beta - beta0.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<f64>,

    /// Mean surface height.
    #[arg(long = "C", global = true, allow_hyphen_values = true)]
    c: Option<f64>,

    /// Grid counts as nx1,nx2.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,

    /// Snapshot time for grid output.
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<f64>,

    /// Read figure 5's tau values literally.
    #[arg(long, global = true)]
    literal_fig5: bool,

    /// Kernel pairing scale used in the amplitude equations.
    #[arg(long, global = true, value_enum)]
    normalization: Option<NormArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Reference,
    Consistent,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Resonance set at beta0 and the operator bound.
    Resonance,
    /// Kernel basis at beta0 and its certificate.
    Kernel,
    /// Second-order and cubic coefficient tables.
    Coeffs,
    /// Amplitudes |A1|, |A2|.
    Amplitudes,
    /// Synthesize the wave field and write grid.csv.
    Synthesize,
    /// Residual against mu with fitted slopes; writes residual.csv.
    ResidualScan,
    /// Full pipeline for one of the five figure presets.
    Figures {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        n: u8,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected nx1,nx2")?;
    let a = a.trim().parse().map_err(|_| format!("bad nx1 {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad nx2 {b:?}"))?;
    Ok((a, b))
}

/// Configuration from the file (or defaults), overlaid with the preset for
/// `figures` and then with explicit flags.
fn build_config(cli: &Cli, preset: Option<&FigurePreset>) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = preset {
        cfg.omega = p.cfg.omega;
        cfg.k1 = p.cfg.k1;
        cfg.k2 = p.cfg.k2;
        cfg.tau1 = p.cfg.tau1;
        cfg.tau2 = p.cfg.tau2;
        cfg.beta0 = p.beta0;
        cfg.q = p.q;
        cfg.mu = p.mu;
        cfg.c = p.c;
        cfg.grid.t = p.t;
    }
    if let Some(o) = cli.order {
        cfg.order = o;
    }
    if let Some(m) = cli.mu {
        cfg.mu = m;
    }
    if let Some(c) = cli.c {
        cfg.c = c;
    }
    if let Some((a, b)) = cli.grid {
        cfg.grid.nx1 = a;
        cfg.grid.nx2 = b;
    }
    if let Some(t) = cli.t {
        cfg.grid.t = t;
    }
    if let Some(n) = cli.normalization {
        cfg.normalization = match n {
            NormArg::Reference => Normalization::Reference,
            NormArg::Consistent => Normalization::Consistent,
        };
    }
    if preset.is_some() {
        // Preset lattices are checked by the branch-point validation.
        cfg.validate_usage()?;
    } else {
        cfg.validate()?;
    }
    Ok(cfg)
}

/// Parses `args` (program name first), runs the command, prints the JSON
/// summary to stdout and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let preset = match cli.command {
        Sub::Figures { n } => {
            let reading = if cli.literal_fig5 {
                Fig5Reading::Literal
            } else {
                Fig5Reading::Corrected
            };
            Some(figure_with(n, reading))
        }
        _ => None,
    };
    let cfg = match build_config(&cli, preset.as_ref().and_then(|p| p.as_ref().ok())) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cmd = match cli.command {
        Sub::Resonance => Command::Resonance,
        Sub::Kernel => Command::Kernel,
        Sub::Coeffs => Command::Coeffs,
        Sub::Amplitudes => Command::Amplitudes,
        Sub::Synthesize => Command::Synthesize,
        Sub::ResidualScan => Command::ResidualScan,
        Sub::Figures { n } => Command::Figures {
            n,
            preset: preset.expect("figures always resolves a preset"),
        },
    };
    let ctx = Context { cfg, out: cli.out };
    let (summary, result) = execute(&cmd, ctx);
    println!("{}", summary.to_json());
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
