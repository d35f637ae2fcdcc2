//! Phase-stepped interferogram synthesis and least-squares demodulation.
//!
//! Forward model per pixel: `I_k = B + A·cos(φ_k + φ₀)`. The demodulator fits
//! `I_k = B + C·cos φ_k + S·sin φ_k`, so `A = √(C² + S²)` and `φ₀ = atan2(−S, C)`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::imaging::{envelope_coefficient, v_esf};
use crate::model::{OpticalSetup, SourceParams};
use crate::signal::{Grid1D, Image2D, Plane, Profile1D};

/// Pixel pitch of the reference camera.
pub const DEFAULT_PIXEL_PITCH: f64 = 6.5e-6;
/// 16-bit full well.
pub const SATURATION_COUNTS: f64 = 65535.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneModel {
    pub background: Image2D,
    pub modulation: Image2D,
    pub phase_map: Image2D,
}

impl SceneModel {
    pub fn new(background: Image2D, modulation: Image2D, phase_map: Image2D) -> Result<Self> {
        if !background.same_shape(&modulation) || !background.same_shape(&phase_map) {
            return Err(Error::InvalidStack("scene images differ in shape".into()));
        }
        let ok = background
            .data
            .iter()
            .zip(&modulation.data)
            .zip(&phase_map.data)
            .all(|((&b, &a), &p)| b.is_finite() && a.is_finite() && p.is_finite() && a >= 0.0 && a <= b);
        if !ok {
            return Err(Error::InvalidStack(
                "scene needs finite values with 0 <= A <= B".into(),
            ));
        }
        Ok(SceneModel {
            background,
            modulation,
            phase_map,
        })
    }

    pub fn uniform(width: usize, height: usize, b: f64, a: f64, phase: f64) -> Result<Self> {
        SceneModel::new(
            Image2D::filled(width, height, b),
            Image2D::filled(width, height, a),
            Image2D::filled(width, height, phase),
        )
    }

    pub fn width(&self) -> usize {
        self.background.width
    }

    pub fn height(&self) -> usize {
        self.background.height
    }

    /// Edge object seen through the detected-beam envelope.
    ///
    /// `B = peak·env(x)·env(y)` and `A = B·v_esf(x)`, so the image function
    /// `2A` along the centre row is `peak·g_esf`. The beam is centred on the
    /// sensor; `x_c = (col − (W−1)/2)·pitch`.
    pub fn edge(
        params: &SourceParams,
        setup: &OpticalSetup,
        edge: &EdgeSceneSpec,
    ) -> Result<Self> {
        let k = envelope_coefficient(params) / (setup.m_d * setup.m_d);
        let xs = pixel_coordinates(edge.width, edge.pixel_pitch);
        let ys = pixel_coordinates(edge.height, edge.pixel_pitch);
        let env_x: Vec<f64> = xs.iter().map(|x| (-k * x * x).exp()).collect();
        let env_y: Vec<f64> = ys.iter().map(|y| (-k * y * y).exp()).collect();
        let vis: Vec<f64> = xs.iter().map(|&x| v_esf(params, setup, x, edge.x_tilde_o)).collect();
        let b = Image2D::from_fn(edge.width, edge.height, |r, c| edge.peak_counts * env_x[c] * env_y[r]);
        let a = Image2D::from_fn(edge.width, edge.height, |r, c| b.get(r, c) * vis[c]);
        let phase = Image2D::filled(edge.width, edge.height, edge.phase_offset);
        SceneModel::new(b, a, phase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSceneSpec {
    pub width: usize,
    pub height: usize,
    pub pixel_pitch: f64,
    /// Mean intensity `B` at the beam centre, in counts.
    pub peak_counts: f64,
    pub x_tilde_o: f64,
    pub phase_offset: f64,
}

impl Default for EdgeSceneSpec {
    fn default() -> Self {
        EdgeSceneSpec {
            width: 512,
            height: 33,
            pixel_pitch: DEFAULT_PIXEL_PITCH,
            peak_counts: 2.0e4,
            x_tilde_o: 0.0,
            phase_offset: 0.0,
        }
    }
}

/// Centred pixel coordinates `(i − (n−1)/2)·pitch`.
pub fn pixel_coordinates(n: usize, pitch: f64) -> Vec<f64> {
    let mid = 0.5 * (n as f64 - 1.0);
    (0..n).map(|i| (i as f64 - mid) * pitch).collect()
}

/// Camera noise: optional shot noise and Gaussian read noise with standard
/// deviation `read_fraction · max(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub shot: bool,
    pub read_fraction: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        NoiseModel::default()
    }

    pub fn is_noiseless(&self) -> bool {
        !self.shot && self.read_fraction == 0.0
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// `none`, or comma-separated `read:<fraction>` and `shot:on|off`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 0, message: m };
        let s = s.trim();
        let mut noise = NoiseModel::none();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(noise);
        }
        for item in s.split(',') {
            let (key, value) = item
                .split_once(':')
                .ok_or_else(|| bad(format!("noise term `{item}` is not key:value")))?;
            match key.trim() {
                "read" => {
                    let f: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("invalid read fraction `{value}`")))?;
                    if !(f.is_finite() && f >= 0.0) {
                        return Err(bad(format!("read fraction must be >= 0, got {f}")));
                    }
                    noise.read_fraction = f;
                }
                "shot" => {
                    noise.shot = match value.trim() {
                        "on" | "true" | "1" => true,
                        "off" | "false" | "0" => false,
                        v => return Err(bad(format!("shot must be on or off, got `{v}`"))),
                    }
                }
                k => return Err(bad(format!("unknown noise term `{k}`"))),
            }
        }
        Ok(noise)
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "read:{},shot:{}",
            self.read_fraction,
            if self.shot { "on" } else { "off" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseMeta {
    pub model: NoiseModel,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferogramStack {
    pub frames: Vec<Image2D>,
    pub phases: Vec<f64>,
    pub pixel_pitch: f64,
    pub noise: NoiseMeta,
}

fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

fn check_phases(phases: &[f64]) -> Result<()> {
    if phases.len() < 3 {
        return Err(Error::TooFewPhases(phases.len()));
    }
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidStack("phases must be finite".into()));
    }
    for (i, a) in phases.iter().enumerate() {
        for b in &phases[i + 1..] {
            let d = wrap_phase(a - b).abs();
            if d < 1e-9 {
                return Err(Error::DegeneratePhases);
            }
        }
    }
    Ok(())
}

impl InterferogramStack {
    pub fn validate(&self) -> Result<()> {
        check_phases(&self.phases)?;
        if self.frames.len() != self.phases.len() {
            return Err(Error::InvalidStack(format!(
                "{} frames for {} phases",
                self.frames.len(),
                self.phases.len()
            )));
        }
        if self.frames.iter().any(|f| !f.same_shape(&self.frames[0])) {
            return Err(Error::InvalidStack("frame dimensions differ".into()));
        }
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return Err(Error::InvalidStack(format!("pixel pitch {} must be > 0", self.pixel_pitch)));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }
}

/// `k` equally spaced phases over one period, starting at zero.
pub fn equal_phases(k: usize) -> Vec<f64> {
    (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect()
}

/// Render the frames of `scene` at `phases`. Each frame draws from its own
/// ChaCha stream (`seed`, stream = frame index), so frames can be generated
/// in parallel and remain reproducible.
pub fn synthesize_stack(
    scene: &SceneModel,
    phases: &[f64],
    noise: NoiseModel,
    seed: u64,
    pixel_pitch: f64,
) -> Result<InterferogramStack> {
    check_phases(phases)?;
    let sigma = noise.read_fraction * scene.background.data.iter().copied().fold(0.0, f64::max);
    let read = if sigma > 0.0 {
        Some(Normal::new(0.0, sigma).map_err(|e| Error::InvalidStack(e.to_string()))?)
    } else {
        None
    };
    let frames = phases
        .par_iter()
        .enumerate()
        .map(|(k, &phi)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let data = scene
                .background
                .data
                .iter()
                .zip(&scene.modulation.data)
                .zip(&scene.phase_map.data)
                .map(|((&b, &a), &p0)| {
                    let mean = b + a * (phi + p0).cos();
                    if noise.is_noiseless() {
                        return mean;
                    }
                    let mut v = mean;
                    if noise.shot {
                        v = match Poisson::new(mean) {
                            Ok(d) => d.sample(&mut rng),
                            Err(_) => 0.0,
                        };
                    }
                    if let Some(n) = &read {
                        v += n.sample(&mut rng);
                    }
                    v.clamp(0.0, SATURATION_COUNTS)
                })
                .collect();
            Image2D {
                width: scene.width(),
                height: scene.height(),
                data,
            }
        })
        .collect();
    Ok(InterferogramStack {
        frames,
        phases: phases.to_vec(),
        pixel_pitch,
        noise: NoiseMeta { model: noise, seed },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemodulationResult {
    /// `2A`, counts.
    pub g_image: Image2D,
    /// `A / B` clipped to `[0, 1]`; zero where `B ≤ 0`.
    pub v_image: Image2D,
    /// `φ₀` wrapped to `(−π, π]`.
    pub phase_image: Image2D,
    /// Fitted mean intensity `B`.
    pub b_image: Image2D,
    /// `false` where `B ≤ 0`.
    pub valid: Vec<bool>,
    /// RMS fit residual over all pixels and frames, counts.
    pub residual_rms: f64,
}

/// Per-pixel least-squares sinusoid fit. For equally spaced phases over one
/// period this reduces to the usual N-step quadrature formulas.
pub fn demodulate(stack: &InterferogramStack) -> Result<DemodulationResult> {
    stack.validate()?;
    let n = stack.phases.len();
    let design = DMatrix::from_fn(n, 3, |k, j| match j {
        0 => 1.0,
        1 => stack.phases[k].cos(),
        _ => stack.phases[k].sin(),
    });
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.iter().any(|&s| s <= 1e-10 * smax) {
        return Err(Error::DegeneratePhases);
    }
    let pinv = svd
        .pseudo_inverse(1e-10 * smax)
        .map_err(|_| Error::DegeneratePhases)?;

    let (w, h) = (stack.width(), stack.height());
    // (B, C, S, squared residual) per pixel, rows in parallel
    let rows: Vec<Vec<[f64; 4]>> = (0..h)
        .into_par_iter()
        .map(|r| {
            let mut samples = DVector::zeros(n);
            (0..w)
                .map(|c| {
                    for (k, f) in stack.frames.iter().enumerate() {
                        samples[k] = f.get(r, c);
                    }
                    let coef = &pinv * &samples;
                    let fitted = &design * &coef;
                    let ss = (&samples - fitted).norm_squared();
                    [coef[0], coef[1], coef[2], ss]
                })
                .collect()
        })
        .collect();

    let mut g = Vec::with_capacity(w * h);
    let mut v = Vec::with_capacity(w * h);
    let mut phase = Vec::with_capacity(w * h);
    let mut b_img = Vec::with_capacity(w * h);
    let mut valid = Vec::with_capacity(w * h);
    let mut ss_total = 0.0;
    for [b, c, s, ss] in rows.into_iter().flatten() {
        let a = c.hypot(s);
        g.push(2.0 * a);
        phase.push(wrap_phase((-s).atan2(c)));
        b_img.push(b);
        valid.push(b > 0.0);
        v.push(if b > 0.0 { (a / b).clamp(0.0, 1.0) } else { 0.0 });
        ss_total += ss;
    }
    Ok(DemodulationResult {
        g_image: Image2D::new(w, h, g)?,
        v_image: Image2D::new(w, h, v)?,
        phase_image: Image2D::new(w, h, phase)?,
        b_image: Image2D::new(w, h, b_img)?,
        valid,
        residual_rms: (ss_total / (w * h * n) as f64).sqrt(),
    })
}

/// Row with the largest sum (first one on ties), as a camera-plane profile.
pub fn select_max_row(img: &Image2D, pixel_pitch: f64) -> Result<(usize, Profile1D)> {
    let mut best = 0;
    let mut best_sum = f64::NEG_INFINITY;
    for (r, row) in img.rows().enumerate() {
        let s: f64 = row.iter().sum();
        if s > best_sum {
            best = r;
            best_sum = s;
        }
    }
    let profile = row_profile(img, best, pixel_pitch)?;
    Ok((best, profile))
}

/// Row `r` of `img` with centred camera coordinates.
pub fn row_profile(img: &Image2D, r: usize, pixel_pitch: f64) -> Result<Profile1D> {
    let grid = Grid1D::new(-0.5 * (img.width as f64 - 1.0) * pixel_pitch, pixel_pitch, img.width)?;
    Profile1D::new(grid, img.row(r).to_vec(), Plane::Camera)
}
