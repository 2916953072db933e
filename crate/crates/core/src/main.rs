use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fracavity::cli::{self, parse_length, Render2dOptions, RunConfig, RunManifest};
use fracavity::modesolver::Parity;

#[derive(Parser)]
#[command(name = "fracavity", version, about = "Fractional Schrödinger dynamics in 4f laser cavities")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

fn length(s: &str) -> Result<f64, String> {
    parse_length(s)
}

fn length_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI such as 0um,256um")?;
    Ok((parse_length(a.trim())?, parse_length(b.trim())?))
}

#[derive(Subcommand)]
enum Command {
    /// Split-step evolution of the [field] initial condition.
    Propagate {
        config: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Time step in round trips.
        #[arg(long)]
        dt: f64,
        /// Snapshot interval in steps (default: first and last only).
        #[arg(long)]
        every: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lowest-threshold lasing mode at one pump offset.
    Modes {
        config: PathBuf,
        /// Pump half-separation, with unit (e.g. 170um).
        #[arg(long, value_parser = length)]
        rho: Option<f64>,
        /// Restrict the iteration to one parity sector (any, even, odd).
        #[arg(long)]
        parity: Option<Parity>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Threshold and mode index over a range of pump offsets.
    Sweep {
        config: PathBuf,
        #[arg(long, value_parser = length_range)]
        rho_range: (f64, f64),
        #[arg(long)]
        rho_steps: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fourier-plane intensity map of TEM_{n,m}.
    Render2d {
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, value_parser = length, default_value = "400um")]
        x_half: f64,
        #[arg(long, value_parser = length)]
        y_half: Option<f64>,
        #[arg(long, default_value_t = 256)]
        ny: usize,
        /// Fourier-plane field CSV written by `modes` (q.csv) to use as the x factor.
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(args: Args) -> fracavity::Result<RunManifest> {
    match args.command {
        Command::Propagate { config, steps, dt, every, out } => {
            cli::cmd_propagate(&RunConfig::load(&config)?, steps, dt, every, &out)
        }
        Command::Modes { config, rho, parity, out } => cli::cmd_modes(&RunConfig::load(&config)?, rho, parity, &out),
        Command::Sweep { config, rho_range, rho_steps, jobs, out } => {
            cli::cmd_sweep(&RunConfig::load(&config)?, rho_range, rho_steps, jobs, &out)
        }
        Command::Render2d { config, n, m, x_half, y_half, ny, field, out } => {
            let opts = Render2dOptions { x_half, y_half, ny, field };
            cli::cmd_render2d(&RunConfig::load(&config)?, n, m, &opts, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(manifest) => {
            for job in &manifest.jobs {
                let mut line = format!("{}: {}", job.label, job.status);
                if let Some(n) = job.mode_index {
                    line.push_str(&format!(" mode={n}"));
                }
                if let Some(g) = job.g0_threshold {
                    line.push_str(&format!(" g0th={g:.5}"));
                }
                if let Some(o) = job.overlap {
                    line.push_str(&format!(" overlap={o:.4}"));
                }
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fracavity: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
