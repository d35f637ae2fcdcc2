//! `key = value` configuration files.
//!
//! ```text
//! # source
//! crystal_length = 5mm
//! pump_waist = 214um
//! m_d_c = 2.67
//! noise = read:0.01,shot:off
//! phases = 16
//! ```
//!
//! Lengths take unit suffixes (`nm`, `um`, `mm`, `cm`, `m`); bare numbers are
//! meters. Unknown or repeated keys are errors.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dpsh::{EdgeSceneSpec, NoiseModel};
use crate::error::{Error, Result};
use crate::fitting::{SLIT_DISTANCE, SLIT_DISTANCE_TOLERANCE};
use crate::model::{OpticalSetup, SourceParams, REFERENCE_CRYSTAL_LENGTHS, REFERENCE_PUMP_WAISTS};
use crate::units::{parse_length, parse_length_range};

pub const DEFAULT_CRYSTAL_LENGTH: f64 = 5e-3;
pub const DEFAULT_PUMP_WAIST: f64 = 214e-6;
pub const DEFAULT_PHASES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub scene: EdgeSceneSpec,
    pub phases: usize,
    pub noise: NoiseModel,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            scene: EdgeSceneSpec::default(),
            phases: DEFAULT_PHASES,
            noise: NoiseModel::none(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub source: SourceParams,
    pub setup: OpticalSetup,
    pub simulation: SimulationConfig,
    pub sweep_lengths: Vec<f64>,
    pub sweep_waists: Vec<f64>,
    pub slit_distance: f64,
    pub slit_tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            source: SourceParams::reference(DEFAULT_CRYSTAL_LENGTH, DEFAULT_PUMP_WAIST),
            setup: OpticalSetup::default(),
            simulation: SimulationConfig::default(),
            sweep_lengths: REFERENCE_CRYSTAL_LENGTHS.to_vec(),
            sweep_waists: REFERENCE_PUMP_WAISTS.to_vec(),
            slit_distance: SLIT_DISTANCE,
            slit_tolerance: SLIT_DISTANCE_TOLERANCE,
        }
    }
}

const KEYS: &[&str] = &[
    "lambda_p",
    "lambda_d",
    "lambda_u",
    "crystal_length",
    "pump_waist",
    "m_d",
    "m_u",
    "m_d_i",
    "m_d_c",
    "m_u_i",
    "image_width",
    "image_height",
    "pixel_pitch",
    "peak_counts",
    "x_tilde_o",
    "phase_offset",
    "phases",
    "noise",
    "seed",
    "lengths",
    "waists",
    "slit_distance",
    "slit_tolerance",
];

#[derive(Default)]
struct Magnifications {
    m_d: Option<f64>,
    m_u: Option<f64>,
    m_d_i: Option<f64>,
    m_d_c: Option<f64>,
    m_u_i: Option<f64>,
}

impl Magnifications {
    fn resolve(self) -> Result<OpticalSetup> {
        let m_d_i = self.m_d_i.unwrap_or(1.0);
        let m_d_c = match (self.m_d_c, self.m_d) {
            (Some(c), _) => c,
            (None, Some(total)) => total / m_d_i,
            (None, None) => OpticalSetup::default().m_d_c,
        };
        let m_u_i = match (self.m_u_i, self.m_u) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Schema(format!("m_u = {b} disagrees with m_u_i = {a}")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => 1.0,
        };
        let mut setup = OpticalSetup::from_factors(m_d_i, m_d_c, m_u_i);
        if let Some(total) = self.m_d {
            setup.m_d = total;
        }
        setup.validate()
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("`{key}`: cannot parse `{value}`")))
}

fn length(line: usize, key: &str, value: &str) -> Result<f64> {
    parse_length(value).map_err(|e| Error::parse(line, format!("`{key}`: {e}")))
}

/// Parse configuration text. Missing keys keep their defaults.
///
/// The source and setup are validated before returning.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    let mut mags = Magnifications::default();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::parse(line, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(Error::parse(line, format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::parse(line, format!("duplicate key `{key}`")));
        }
        if value.is_empty() {
            return Err(Error::parse(line, format!("`{key}` has no value")));
        }
        let sim = &mut cfg.simulation;
        match key {
            "lambda_p" => cfg.source.lambda_p = length(line, key, value)?,
            "lambda_d" => cfg.source.lambda_d = length(line, key, value)?,
            "lambda_u" => cfg.source.lambda_u = length(line, key, value)?,
            "crystal_length" => cfg.source.crystal_length = length(line, key, value)?,
            "pump_waist" => cfg.source.pump_waist = length(line, key, value)?,
            "m_d" => mags.m_d = Some(number(line, key, value)?),
            "m_u" => mags.m_u = Some(number(line, key, value)?),
            "m_d_i" => mags.m_d_i = Some(number(line, key, value)?),
            "m_d_c" => mags.m_d_c = Some(number(line, key, value)?),
            "m_u_i" => mags.m_u_i = Some(number(line, key, value)?),
            "image_width" => sim.scene.width = number(line, key, value)?,
            "image_height" => sim.scene.height = number(line, key, value)?,
            "pixel_pitch" => sim.scene.pixel_pitch = length(line, key, value)?,
            "peak_counts" => sim.scene.peak_counts = number(line, key, value)?,
            "x_tilde_o" => sim.scene.x_tilde_o = length(line, key, value)?,
            "phase_offset" => sim.scene.phase_offset = number(line, key, value)?,
            "phases" => sim.phases = number(line, key, value)?,
            "noise" => {
                sim.noise = value.parse().map_err(|e: Error| match e {
                    Error::Parse { message, .. } => Error::parse(line, format!("`noise`: {message}")),
                    other => other,
                })?
            }
            "seed" => sim.seed = number(line, key, value)?,
            "lengths" => {
                cfg.sweep_lengths = parse_length_range(value)
                    .map_err(|e| Error::parse(line, format!("`lengths`: {e}")))?
            }
            "waists" => {
                cfg.sweep_waists = parse_length_range(value)
                    .map_err(|e| Error::parse(line, format!("`waists`: {e}")))?
            }
            "slit_distance" => cfg.slit_distance = length(line, key, value)?,
            "slit_tolerance" => cfg.slit_tolerance = length(line, key, value)?,
            _ => unreachable!("key list and match arms disagree"),
        }
    }

    cfg.setup = mags.resolve()?;
    cfg.source = cfg.source.validate()?;
    cfg.validate_simulation()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

impl Config {
    fn validate_simulation(&self) -> Result<()> {
        let s = &self.simulation.scene;
        if s.width < 16 || s.height < 1 {
            return Err(Error::Schema(format!(
                "image must be at least 16x1 pixels, got {}x{}",
                s.width, s.height
            )));
        }
        if s.width.saturating_mul(s.height) > 1 << 26 {
            return Err(Error::Schema("image larger than 2^26 pixels".into()));
        }
        for (name, value) in [
            ("pixel_pitch", s.pixel_pitch),
            ("peak_counts", s.peak_counts),
            ("slit_distance", self.slit_distance),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        if !(s.x_tilde_o.is_finite() && s.phase_offset.is_finite()) {
            return Err(Error::Schema("x_tilde_o and phase_offset must be finite".into()));
        }
        if !(self.slit_tolerance.is_finite() && self.slit_tolerance >= 0.0) {
            return Err(Error::Schema("slit_tolerance must be non-negative".into()));
        }
        if self.simulation.phases < 3 {
            return Err(Error::TooFewPhases(self.simulation.phases));
        }
        if self.simulation.phases > 4096 {
            return Err(Error::Schema("at most 4096 phase steps".into()));
        }
        Ok(())
    }
}
