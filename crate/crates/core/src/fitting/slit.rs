//! Magnification from a double-slit image and edge sharpness from an erf fit.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use super::lm::{least_squares_fit, FitOptions, FitResult, ParamSpec};
use crate::error::{Error, Result};
use crate::signal::Profile1D;

/// Centre distance of the reference double slit.
pub const SLIT_DISTANCE: f64 = 133e-6;
/// Manufacturing tolerance on [`SLIT_DISTANCE`].
pub const SLIT_DISTANCE_TOLERANCE: f64 = 23e-6;
/// A valley must fall below this fraction of the lower peak.
pub const VALLEY_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnificationMeasurement {
    pub peak_distance_camera: f64,
    pub peak_distance_std: f64,
    pub slit_distance_object: f64,
    pub slit_distance_tolerance: f64,
    pub magnification: f64,
    /// Absolute one-sigma uncertainty of `magnification`.
    pub uncertainty: f64,
    pub relative_uncertainty: f64,
    pub fit: FitResult,
}

fn smoothed(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2);
            let hi = (i + 3).min(n);
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

fn local_maxima(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
        .collect()
}

/// Indices of the two resolved peaks (global maximum first).
fn resolved_peaks(values: &[f64]) -> Result<(usize, usize)> {
    let s = smoothed(values);
    let maxima = local_maxima(&s);
    let &main = maxima
        .iter()
        .max_by(|&&a, &&b| s[a].total_cmp(&s[b]).then(b.cmp(&a)))
        .ok_or(Error::PeaksNotResolved)?;
    let offset = s.iter().copied().fold(f64::INFINITY, f64::min);
    maxima
        .iter()
        .copied()
        .filter(|&q| q != main)
        .filter(|&q| {
            let (lo, hi) = if q < main { (q, main) } else { (main, q) };
            let valley = s[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
            valley - offset < VALLEY_FRACTION * (s[q] - offset)
        })
        .max_by(|&a, &b| s[a].total_cmp(&s[b]))
        .map(|q| (main, q))
        .ok_or(Error::PeaksNotResolved)
}

fn two_gaussians(p: &[f64], xs: &[f64], out: &mut [f64]) {
    for (o, &x) in out.iter_mut().zip(xs) {
        let a = (x - p[2]) / p[3];
        let b = (x - p[5]) / p[6];
        *o = p[0] + p[1] * (-a * a).exp() + p[4] * (-b * b).exp();
    }
}

/// Two-Gaussian-plus-offset fit; magnification = peak distance / slit distance.
///
/// The relative uncertainty combines the fitted peak-distance error with the
/// slit tolerance in quadrature.
pub fn fit_double_slit(
    profile: &Profile1D,
    slit_distance_object: f64,
    slit_distance_tolerance: f64,
) -> Result<MagnificationMeasurement> {
    if !(slit_distance_object > 0.0 && slit_distance_tolerance >= 0.0) {
        return Err(Error::InvalidFit("slit distance must be positive".into()));
    }
    let (p1, p2) = resolved_peaks(&profile.values)?;
    let offset = profile.values.iter().copied().fold(f64::INFINITY, f64::min);
    let (x1, x2) = (profile.x(p1), profile.x(p2));
    let sep = (x2 - x1).abs();
    let (lo, hi) = (profile.grid.start, profile.grid.end());
    let span = hi - lo;
    let h = profile.grid.step;
    let amp = |i: usize| (profile.values[i] - offset).max(f64::MIN_POSITIVE);
    let specs = [
        ParamSpec::new("offset", offset).with_scale(amp(p1)),
        ParamSpec::new("amp_1", amp(p1)).bounded(0.0, f64::INFINITY),
        ParamSpec::new("mu_1", x1).bounded(lo, hi).with_scale(h),
        ParamSpec::new("width_1", 0.25 * sep).bounded(0.1 * h, span),
        ParamSpec::new("amp_2", amp(p2)).bounded(0.0, f64::INFINITY),
        ParamSpec::new("mu_2", x2).bounded(lo, hi).with_scale(h),
        ParamSpec::new("width_2", 0.25 * sep).bounded(0.1 * h, span),
    ];
    let fit = least_squares_fit(two_gaussians, profile, &specs, &FitOptions::default())?;
    let (mu1, mu2) = (fit.values[2], fit.values[5]);
    let distance = (mu2 - mu1).abs();
    let cov = &fit.covariance;
    let var = (cov[2][2] + cov[5][5] - 2.0 * cov[2][5]).max(0.0);
    let distance_std = var.sqrt();
    let magnification = distance / slit_distance_object;
    let relative = ((distance_std / distance).powi(2) + (slit_distance_tolerance / slit_distance_object).powi(2)).sqrt();
    Ok(MagnificationMeasurement {
        peak_distance_camera: distance,
        peak_distance_std: distance_std,
        slit_distance_object,
        slit_distance_tolerance,
        magnification,
        uncertainty: relative * magnification,
        relative_uncertainty: relative,
        fit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSharpness {
    /// 1/e half-width of the Gaussian whose integral is the fitted edge.
    pub width: f64,
    pub center: f64,
    pub fit: FitResult,
}

impl EdgeSharpness {
    /// Combined blur of the two edges bounding a feature, `2Δ`.
    pub fn two_edge_precision(&self) -> f64 {
        2.0 * self.width
    }
}

fn erf_edge(p: &[f64], xs: &[f64], out: &mut [f64]) {
    for (o, &x) in out.iter_mut().zip(xs) {
        *o = p[0] + p[1] * erf((x - p[2]) / p[3]);
    }
}

/// Fit `a + b·erf((x − c)/Δ)` to an edge profile.
pub fn fit_erf_edge(profile: &Profile1D) -> Result<EdgeSharpness> {
    let v = &profile.values;
    let n = v.len();
    let k = (n / 10).max(1);
    let head = v[..k].iter().sum::<f64>() / k as f64;
    let tail = v[n - k..].iter().sum::<f64>() / k as f64;
    let h = profile.grid.step;
    let s = smoothed(v);
    let lo_level = head + 0.24 * (tail - head);
    let hi_level = head + 0.76 * (tail - head);
    let rising = tail >= head;
    let above = |x: f64, level: f64| if rising { x >= level } else { x <= level };
    let i24 = s.iter().position(|&x| above(x, lo_level)).unwrap_or(0);
    let i76 = s.iter().position(|&x| above(x, hi_level)).unwrap_or(n - 1);
    let centre = profile.x((i24 + i76) / 2);
    // 24/76 distance is 2·erfinv(0.52)·Δ ≈ Δ
    let width = ((i76 as f64 - i24 as f64).abs() * h).max(2.0 * h);
    let span = profile.grid.end() - profile.grid.start;
    let half = 0.5 * (tail - head);
    let specs = [
        ParamSpec::new("offset", 0.5 * (head + tail)).with_scale(half.abs().max(f64::MIN_POSITIVE)),
        ParamSpec::new("amplitude", half).with_scale(half.abs().max(f64::MIN_POSITIVE)),
        ParamSpec::new("center", centre)
            .bounded(profile.grid.start, profile.grid.end())
            .with_scale(h),
        ParamSpec::new("width", width).bounded(1e-6 * h, span),
    ];
    let fit = least_squares_fit(erf_edge, profile, &specs, &FitOptions::default())?;
    Ok(EdgeSharpness {
        width: fit.values[3],
        center: fit.values[2],
        fit,
    })
}
