use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qiul::dpsh::NoiseModel;
use qiul::io::FrameFormat;
use qiul::units::{parse_length, parse_length_range};
use qiul::{load_config, Config, Error, Result};
use qiul_cli::commands::{cmd_analyze_stack, cmd_magnification, cmd_simulate_edge, cmd_theory_sweep};
use qiul_cli::exit_code;

#[derive(Parser)]
#[command(name = "qiul", version, about = "Resolution model and edge analysis for quantum imaging with undetected light")]
struct Cli {
    /// `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Frames {
    Csv,
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spreads over crystal lengths and pump waists
    Sweep {
        /// e.g. `2mm,5mm,10mm`
        #[arg(long, value_parser = lengths)]
        lengths: Option<Lengths>,
        /// list or range, e.g. `50um:400um:log50`
        #[arg(long, value_parser = lengths)]
        waists: Option<Lengths>,
    },
    /// Synthesize an edge interferogram stack and analyse it
    SimulateEdge {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        phases: Option<usize>,
        /// `none` or `read:0.01,shot:on`
        #[arg(long, value_parser = noise)]
        noise: Option<NoiseModel>,
        #[arg(long, value_enum, default_value = "csv")]
        frame_format: Frames,
    },
    /// Analyse a stack described by a manifest
    AnalyzeStack {
        manifest: PathBuf,
    },
    /// Detected-arm magnification from a double-slit profile
    Magnification {
        /// Profile CSV (`x_c_m,value`)
        profile: PathBuf,
        #[arg(long, value_parser = length)]
        slit_distance: Option<f64>,
        #[arg(long, value_parser = length)]
        slit_tolerance: Option<f64>,
    },
}

#[derive(Clone)]
struct Lengths(Vec<f64>);

fn lengths(s: &str) -> std::result::Result<Lengths, String> {
    parse_length_range(s).map(Lengths).map_err(|e| e.to_string())
}

fn length(s: &str) -> std::result::Result<f64, String> {
    parse_length(s).map_err(|e| e.to_string())
}

fn noise(s: &str) -> std::result::Result<NoiseModel, String> {
    s.parse::<NoiseModel>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Sweep { lengths, waists } => {
            if let Some(l) = lengths {
                cfg.sweep_lengths = l.0;
            }
            if let Some(w) = waists {
                cfg.sweep_waists = w.0;
            }
            let (path, rows) = cmd_theory_sweep(&cfg, &cli.out)?;
            println!("{} rows -> {}", rows.len(), path.display());
        }
        Command::SimulateEdge {
            seed,
            phases,
            noise,
            frame_format,
        } => {
            let sim = &mut cfg.simulation;
            if let Some(s) = seed {
                sim.seed = s;
            }
            if let Some(p) = phases {
                if p < 3 {
                    return Err(Error::TooFewPhases(p));
                }
                sim.phases = p;
            }
            if let Some(n) = noise {
                sim.noise = n;
            }
            let format = match frame_format {
                Frames::Csv => FrameFormat::Csv,
                Frames::Pgm => FrameFormat::Pgm,
            };
            let out = cmd_simulate_edge(&cfg, &cli.out, format)?;
            println!("manifest: {}", out.manifest.display());
            match out.analysis.m_d_estimate {
                Some(m) => println!("M_d estimate: {m}"),
                None => println!("gate failed: {}", out.analysis.gate_error.unwrap_or_default()),
            }
        }
        Command::AnalyzeStack { manifest } => {
            let report = cmd_analyze_stack(&cfg, &manifest, &cli.out)?;
            match report.m_d_estimate {
                Some(m) => println!("M_d estimate: {m}"),
                None => println!("gate failed: {}", report.gate_error.unwrap_or_default()),
            }
        }
        Command::Magnification {
            profile,
            slit_distance,
            slit_tolerance,
        } => {
            let m = cmd_magnification(
                &profile,
                slit_distance.unwrap_or(cfg.slit_distance),
                slit_tolerance.unwrap_or(cfg.slit_tolerance),
                &cli.out,
            )?;
            println!(
                "M = {} ± {} ({:.1}%)",
                m.magnification,
                m.uncertainty,
                100.0 * m.relative_uncertainty
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
