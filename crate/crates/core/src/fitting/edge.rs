//! Two-parameter `(M_d, M_u·x̃_o)` fits of the image-function and visibility
//! edge responses, and the averaged magnification estimate.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::lm::{least_squares_fit, FitOptions, FitResult, ParamSpec};
use crate::error::{Error, Result};
use crate::imaging::{envelope_coefficient, esf_coefficient};
use crate::model::{OpticalSetup, SourceParams, CAMERA_RELAY_MAGNIFICATION};
use crate::signal::Profile1D;
use crate::spreads::{spread_g_esf_numeric, spread_v_closed};

/// Largest accepted `|measured ratio / theory ratio − 1|`.
pub const GATE_THRESHOLD: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeFitOptions {
    pub m_d_init: f64,
    pub gate_threshold: f64,
    pub fit: FitOptions,
}

impl Default for EdgeFitOptions {
    fn default() -> Self {
        EdgeFitOptions {
            m_d_init: CAMERA_RELAY_MAGNIFICATION,
            gate_threshold: GATE_THRESHOLD,
            fit: FitOptions::default(),
        }
    }
}

/// One fitted edge model. `shift` is the composite `M_u·x̃_o` (camera plane).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeModelFit {
    pub m_d: f64,
    pub shift: f64,
    /// Linear scale of the image-function model (counts); 1 for visibility.
    pub amplitude: f64,
    /// Camera-plane 1/e spread implied by the fitted model.
    pub camera_spread: f64,
    pub fit: FitResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnificationEstimate {
    pub m_d_from_g: f64,
    pub m_d_from_v: f64,
    /// Mean of both fits; withheld when the gate fails.
    pub m_d_avg: Option<f64>,
    pub gate_passed: bool,
    /// `None` when the theory ratio is undefined (at or below the singular waist).
    pub gate_ratio_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeFitReport {
    pub g: EdgeModelFit,
    pub v: EdgeModelFit,
    pub measured_ratio: f64,
    pub theory_ratio: Option<f64>,
    pub estimate: MagnificationEstimate,
    pub gate_threshold: f64,
}

impl EdgeFitReport {
    /// The averaged `M_d`, or [`Error::GateFailed`].
    pub fn require_gate(&self) -> Result<f64> {
        self.estimate.m_d_avg.ok_or(Error::GateFailed {
            deviation: self.estimate.gate_ratio_deviation.unwrap_or(f64::INFINITY),
            threshold: self.gate_threshold,
        })
    }
}

fn g_shape(k: f64, c: f64, m_d: f64, shift: f64, x: f64) -> f64 {
    let xd = x / m_d;
    (-k * xd * xd).exp() * erfc(c * (x - shift) / m_d)
}

/// Image-function edge model with the amplitude projected out: for given
/// `(M_d, shift)` the best linear scale is computed in closed form.
fn g_model(k: f64, c: f64, ys: &[f64]) -> impl Fn(&[f64], &[f64], &mut [f64]) + '_ {
    move |p, xs, out| {
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = g_shape(k, c, p[0], p[1], x);
        }
        let amp = projected_amplitude(out, ys);
        out.iter_mut().for_each(|o| *o *= amp);
    }
}

fn projected_amplitude(shape: &[f64], ys: &[f64]) -> f64 {
    let num: f64 = shape.iter().zip(ys).map(|(f, y)| f * y).sum();
    let den: f64 = shape.iter().map(|f| f * f).sum();
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn v_model(c: f64) -> impl Fn(&[f64], &[f64], &mut [f64]) {
    move |p, xs, out| {
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = 0.5 * erfc(c * (x - p[1]) / p[0]);
        }
    }
}

/// Camera position of the steepest slope of a 5-point smoothed profile.
pub fn steepest_position(p: &Profile1D) -> f64 {
    let n = p.len();
    let smooth: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2);
            let hi = (i + 3).min(n);
            p.values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let mut best = (0, f64::NEG_INFINITY);
    for i in 1..n.saturating_sub(1) {
        let slope = (smooth[i + 1] - smooth[i - 1]).abs();
        if slope > best.1 {
            best = (i, slope);
        }
    }
    p.x(best.0)
}

fn specs(options: &EdgeFitOptions, profile: &Profile1D, shift_init: f64) -> Vec<ParamSpec> {
    let span = profile.grid.end() - profile.grid.start;
    vec![
        ParamSpec::new("m_d", options.m_d_init).bounded(1e-3 * options.m_d_init, 1e3 * options.m_d_init),
        ParamSpec::new("m_u_x_tilde_o", shift_init)
            .bounded(profile.grid.start - span, profile.grid.end() + span)
            .with_scale(profile.grid.step),
    ]
}

/// Fit both edge models and apply the ratio gate.
///
/// The gate compares the measured `Δ_G,c / Δ_V,c`, with both camera spreads
/// taken from the fitted models, to the theory ratio `Δ_G_ESF / Δ_V`.
pub fn fit_edge_profiles(
    g_profile: &Profile1D,
    v_profile: &Profile1D,
    params: &SourceParams,
    options: &EdgeFitOptions,
) -> Result<EdgeFitReport> {
    let k = envelope_coefficient(params);
    let c = esf_coefficient(params);
    let shift_init = steepest_position(v_profile);

    let g_fit = least_squares_fit(
        g_model(k, c, &g_profile.values),
        g_profile,
        &specs(options, g_profile, shift_init),
        &options.fit,
    )?;
    let v_fit = least_squares_fit(v_model(c), v_profile, &specs(options, v_profile, shift_init), &options.fit)?;

    let (m_d_g, shift_g) = (g_fit.values[0], g_fit.values[1]);
    let (m_d_v, shift_v) = (v_fit.values[0], v_fit.values[1]);
    let shape: Vec<f64> = g_profile.grid.points().map(|x| g_shape(k, c, m_d_g, shift_g, x)).collect();
    let amplitude = projected_amplitude(&shape, &g_profile.values);

    // both spreads scale linearly with M_d
    let unit = OpticalSetup::from_totals(1.0, 1.0);
    let g_spread = spread_g_esf_numeric(params, &unit)?.width;
    let v_spread = 1.0 / c.abs();
    let g_camera = m_d_g * g_spread;
    let v_camera = m_d_v * v_spread;
    let measured_ratio = g_camera / v_camera;
    let theory_ratio = spread_v_closed(params).ok().map(|v| g_spread / v);
    let deviation = theory_ratio.map(|t| (measured_ratio / t - 1.0).abs());
    let gate_passed = deviation.is_some_and(|d| d < options.gate_threshold);

    Ok(EdgeFitReport {
        g: EdgeModelFit {
            m_d: m_d_g,
            shift: shift_g,
            amplitude,
            camera_spread: g_camera,
            fit: g_fit,
        },
        v: EdgeModelFit {
            m_d: m_d_v,
            shift: shift_v,
            amplitude: 1.0,
            camera_spread: v_camera,
            fit: v_fit,
        },
        measured_ratio,
        theory_ratio,
        estimate: MagnificationEstimate {
            m_d_from_g: m_d_g,
            m_d_from_v: m_d_v,
            m_d_avg: gate_passed.then_some(0.5 * (m_d_g + m_d_v)),
            gate_passed,
            gate_ratio_deviation: deviation,
        },
        gate_threshold: options.gate_threshold,
    })
}
