use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rts_thermo_cli::commands::{
    analyze, limit_sweep, parse_linear_range, parse_log_integer_range, ratio, roundtrip, simulate,
    thermo, OutputFormat,
};
use rts_thermo_cli::config::RunConfig;
use rts_thermo_cli::{CliError, CliResult};

/// Telegraph-signal thermometry of a (1↔2)-electron dot coupled to a small
/// 2D electron bath: bath thermodynamics, finite-bath occupation statistics,
/// trace simulation and dwell-time temperature recovery.
#[derive(Parser)]
#[command(name = "rts-thermo", version, about)]
struct Cli {
    /// JSON configuration file; defaults apply for missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the configuration seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for primary result files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Tabular output format.
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bath thermodynamics (μ, U, Ψ, S, c_A, P) with the exact-integral
    /// comparison columns.
    Thermo {
        /// Temperature sweep, e.g. `T=0.1:10:100` (start:stop:count).
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Ensemble report: energy gap, probabilities, ratios, state-equation
    /// residual and consistent island area.
    Ratio {
        /// Also emit the bath-size convergence table over this N₂ range
        /// (start:stop:points, log-spaced).
        #[arg(long)]
        n2_sweep: Option<String>,
        /// Keep Σ₂ fixed during the sweep instead of the areal density
        /// (μ then grows with N₂).
        #[arg(long)]
        fixed_sigma2: bool,
    },
    /// Simulate a telegraph trace: trace.csv, trace.json sidecar, events.csv.
    Simulate {
        /// Override the configured number of transitions.
        #[arg(long)]
        transitions: Option<usize>,
    },
    /// Run the estimator pipeline over a trace CSV; writes results.json.
    Analyze {
        /// Input trace in the `time_s,current_A` schema.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Simulate, analyze and compare against the configured temperature,
    /// optionally over many seeds.
    Roundtrip {
        /// Number of seeded repetitions.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Finite-bath vs infinite-bath ratio over a range of N₂.
    LimitSweep {
        /// N₂ grid as start:stop:points, log-spaced.
        #[arg(long, default_value = "1e2:1e6:5")]
        n2_range: String,
        /// Keep Σ₂ fixed (μ grows with N₂) instead of the areal density.
        #[arg(long)]
        fixed_sigma2: bool,
    },
}

fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn parse_temperature_sweep(spec: &str) -> CliResult<Vec<f64>> {
    let body = spec.strip_prefix("T=").ok_or_else(|| {
        CliError::Validation(format!(
            "sweep `{spec}` must look like T=START:STOP:COUNT"
        ))
    })?;
    parse_linear_range(body)
}

fn sweep_mode(fixed_sigma2: bool) -> limit_sweep::SweepMode {
    if fixed_sigma2 {
        limit_sweep::SweepMode::FixedArea
    } else {
        limit_sweep::SweepMode::FixedDensity
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Thermo { sweep } => {
            let temperatures = match sweep {
                Some(spec) => parse_temperature_sweep(spec)?,
                None => vec![cfg.temperature],
            };
            let rows = thermo::run(&cfg, &temperatures, cli.format, &cli.out)?;
            println!(
                "thermo: {} row(s) written to {}",
                rows.len(),
                cli.out.display()
            );
            if let Some(r) = rows.first() {
                println!(
                    "  T = {} K: mu = {} meV, U = {} meV, c_A = {} meV/K/nm2",
                    r.temperature, r.mu, r.u, r.c_a
                );
            }
        }
        Command::Ratio {
            n2_sweep,
            fixed_sigma2,
        } => {
            let report = ratio::run(&cfg, cli.format, &cli.out)?;
            println!(
                "ratio: T = {} K, X = {} meV, betaX = {}, p1 = {}, p2 = {}",
                report.temperature, report.x, report.beta_x, report.p1, report.p2
            );
            if let Some(spec) = n2_sweep {
                let n2_values = parse_log_integer_range(spec)?;
                let (rows, slope) = limit_sweep::run(
                    &cfg,
                    &n2_values,
                    sweep_mode(*fixed_sigma2),
                    cli.format,
                    &cli.out,
                )?;
                println!(
                    "  n2 sweep: {} row(s), fitted gap slope {:?}",
                    rows.len(),
                    slope
                );
            }
        }
        Command::Simulate { transitions } => {
            let mut cfg = cfg;
            if let Some(n) = transitions {
                cfg.transitions = *n;
            }
            let out = simulate::run(&cfg, &cli.out)?;
            println!(
                "simulate: {} transitions, {} samples -> {}, {}, {}",
                out.events.transition_count(),
                out.trace.samples.len(),
                out.trace_csv.display(),
                out.sidecar_json.display(),
                out.events_csv.display()
            );
        }
        Command::Analyze { trace } => {
            let results = analyze::run(&cfg, trace, &cli.out)?;
            match (results.valid, results.t_hat, results.sigma_t) {
                (true, Some(t), Some(s)) => {
                    println!("analyze: T = {t} K (sigma {s} K), results.json written");
                }
                _ => println!(
                    "analyze: estimate undefined ({}), results.json written",
                    results.reason.as_deref().unwrap_or("no reason recorded")
                ),
            }
        }
        Command::Roundtrip { repeats } => {
            let (_, summary) = roundtrip::run(&cfg, *repeats, cli.format, &cli.out)?;
            println!(
                "roundtrip: {} repeat(s), {} valid, {} inside 3 sigma, z mean {:?}, z std {:?}",
                summary.repeats,
                summary.valid_count,
                summary.covered_3sigma,
                summary.z_mean,
                summary.z_std
            );
        }
        Command::LimitSweep {
            n2_range,
            fixed_sigma2,
        } => {
            let n2_values = parse_log_integer_range(n2_range)?;
            let (rows, slope) = limit_sweep::run(
                &cfg,
                &n2_values,
                sweep_mode(*fixed_sigma2),
                cli.format,
                &cli.out,
            )?;
            println!(
                "limit-sweep: {} row(s), fitted gap slope {:?}",
                rows.len(),
                slope
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
