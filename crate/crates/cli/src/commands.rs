use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qiul::dpsh::{equal_phases, synthesize_stack, SceneModel};
use qiul::fitting::{fit_double_slit, EdgeFitOptions, MagnificationMeasurement};
use qiul::io::{load_stack, parse_profile, read_text, save_stack, write_file, write_matrix, write_profile, write_sweep, FrameFormat};
use qiul::spreads::{spread_g_esf_numeric, spread_v_closed, theory_sweep, SweepRow};
use qiul::{Config, Error, OpticalSetup, Result};

use crate::pipeline::{analyze, Analysis, EdgeAnalysis};

pub const SWEEP_FILE: &str = "sweep.csv";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const COMPARISON_FILE: &str = "comparison.json";
pub const MAGNIFICATION_FILE: &str = "magnification.json";
pub const STACK_DIR: &str = "stack";

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_file(path, text)
}

/// Theory table over `cfg.sweep_lengths × cfg.sweep_waists`, written to `out/sweep.csv`.
pub fn cmd_theory_sweep(cfg: &Config, out: &Path) -> Result<(PathBuf, Vec<SweepRow>)> {
    let rows = theory_sweep(&cfg.source, &cfg.sweep_lengths, &cfg.sweep_waists, &cfg.setup)?;
    create_dir(out)?;
    let path = out.join(SWEEP_FILE);
    write_file(&path, write_sweep(&rows))?;
    Ok((path, rows))
}

/// Measured spreads next to their closed forms, using the true `M_d`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Comparison {
    pub m_d_true: f64,
    pub m_d_from_g: f64,
    pub m_d_from_v: f64,
    pub m_d_estimate: Option<f64>,
    pub m_d_relative_error: Option<f64>,
    pub spread_v_closed: Option<f64>,
    pub spread_v_knife: Option<f64>,
    pub spread_v_knife_relative_error: Option<f64>,
    pub spread_v_fit: f64,
    pub spread_g_esf_closed: f64,
    pub spread_g_fit: f64,
    pub ratio_measured: f64,
    pub ratio_theory: Option<f64>,
    pub gate_passed: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn compare(cfg: &Config, report: &EdgeAnalysis) -> Result<Comparison> {
    let m_d = cfg.setup.m_d;
    let unit = OpticalSetup::from_totals(1.0, cfg.setup.m_u);
    let spread_v = spread_v_closed(&cfg.source).ok();
    let knife = report.v_knife_width_camera.map(|w| w / m_d);
    let fit = &report.fit;
    Ok(Comparison {
        m_d_true: m_d,
        m_d_from_g: fit.estimate.m_d_from_g,
        m_d_from_v: fit.estimate.m_d_from_v,
        m_d_estimate: report.m_d_estimate,
        m_d_relative_error: report.m_d_estimate.map(|e| rel(e, m_d)),
        spread_v_closed: spread_v,
        spread_v_knife: knife,
        spread_v_knife_relative_error: knife.zip(spread_v).map(|(k, s)| rel(k, s)),
        spread_v_fit: fit.v.camera_spread / m_d,
        spread_g_esf_closed: spread_g_esf_numeric(&cfg.source, &unit)?.width,
        spread_g_fit: fit.g.camera_spread / m_d,
        ratio_measured: fit.measured_ratio,
        ratio_theory: fit.theory_ratio,
        gate_passed: report.gate_passed,
    })
}

fn edge_options(cfg: &Config) -> EdgeFitOptions {
    EdgeFitOptions {
        m_d_init: cfg.setup.m_d,
        ..EdgeFitOptions::default()
    }
}

fn write_analysis(out: &Path, a: &Analysis) -> Result<PathBuf> {
    create_dir(out)?;
    for (name, img) in [
        ("g_image.csv", &a.demod.g_image),
        ("v_image.csv", &a.demod.v_image),
        ("phase_image.csv", &a.demod.phase_image),
        ("b_image.csv", &a.demod.b_image),
    ] {
        write_file(&out.join(name), write_matrix(img))?;
    }
    write_file(&out.join("g_profile.csv"), write_profile(&a.g_profile))?;
    write_file(&out.join("v_profile.csv"), write_profile(&a.v_profile))?;
    let path = out.join(ANALYSIS_FILE);
    write_json(&path, &a.report)?;
    Ok(path)
}

pub struct SimulateOutput {
    pub manifest: PathBuf,
    pub analysis: EdgeAnalysis,
    pub comparison: Comparison,
}

/// Synthesize an edge stack, store it, then analyse the stored frames.
///
/// The analysis reads the frames back from disk, so `analyze-stack` on the
/// written manifest reproduces `analysis.json` exactly.
pub fn cmd_simulate_edge(cfg: &Config, out: &Path, format: FrameFormat) -> Result<SimulateOutput> {
    let sim = &cfg.simulation;
    let scene = SceneModel::edge(&cfg.source, &cfg.setup, &sim.scene)?;
    let stack = synthesize_stack(
        &scene,
        &equal_phases(sim.phases),
        sim.noise,
        sim.seed,
        sim.scene.pixel_pitch,
    )?;
    let manifest = save_stack(&out.join(STACK_DIR), &stack, format)?;
    let analysis = run_analysis(cfg, &manifest, out)?;
    let comparison = compare(cfg, &analysis)?;
    write_json(&out.join(COMPARISON_FILE), &comparison)?;
    Ok(SimulateOutput {
        manifest,
        analysis,
        comparison,
    })
}

fn run_analysis(cfg: &Config, manifest: &Path, out: &Path) -> Result<EdgeAnalysis> {
    let (_, stack) = load_stack(manifest)?;
    let analysis = analyze(&stack, &cfg.source, &edge_options(cfg))?;
    write_analysis(out, &analysis)?;
    Ok(analysis.report)
}

/// Analyse a stack on disk. Only the source parameters (and the `M_d`
/// starting value) are taken from `cfg`.
pub fn cmd_analyze_stack(cfg: &Config, manifest: &Path, out: &Path) -> Result<EdgeAnalysis> {
    run_analysis(cfg, manifest, out)
}

pub fn cmd_magnification(
    profile: &Path,
    slit_distance: f64,
    slit_tolerance: f64,
    out: &Path,
) -> Result<MagnificationMeasurement> {
    let profile = parse_profile(&read_text(profile)?)?;
    let m = fit_double_slit(&profile, slit_distance, slit_tolerance)?;
    create_dir(out)?;
    write_json(&out.join(MAGNIFICATION_FILE), &m)?;
    Ok(m)
}
