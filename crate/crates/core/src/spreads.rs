//! Resolution metrics: 1/e half-widths, 24/76 knife-edge widths, closed-form
//! spreads and the minimum resolvable distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf_inv;
use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::imaging::{envelope_half_width, esf_coefficient, g_esf_derivative, SUPPORT_FRACTION};
use crate::model::{OpticalSetup, SourceParams};
use crate::signal::{Grid1D, Plane, Profile1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadMethod {
    OneOverE,
    Knife2476,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadPlane {
    Camera,
    Object,
    MagnificationAdjusted,
}

impl From<Plane> for SpreadPlane {
    fn from(p: Plane) -> Self {
        match p {
            Plane::Camera => SpreadPlane::Camera,
            Plane::Object => SpreadPlane::Object,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadResult {
    pub width: f64,
    pub method: SpreadMethod,
    pub plane: SpreadPlane,
    pub interpolation_error_estimate: f64,
}

impl SpreadResult {
    /// Camera-plane width divided by `m_d`.
    pub fn magnification_adjusted(self, m_d: f64) -> SpreadResult {
        SpreadResult {
            width: self.width / m_d,
            plane: SpreadPlane::MagnificationAdjusted,
            interpolation_error_estimate: self.interpolation_error_estimate / m_d,
            ..self
        }
    }
}

fn count_peaks_above(values: &[f64], level: f64) -> usize {
    let n = values.len();
    let mut count = 0;
    let mut i = 0;
    while i < n {
        // walk plateaus as a single sample
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_lower = i == 0 || values[i - 1] < values[i];
        let right_lower = j == n - 1 || values[j + 1] < values[i];
        if left_lower && right_lower && values[i] > level && n > 1 && (i > 0 || j < n - 1) {
            count += 1;
        }
        i = j + 1;
    }
    count
}

/// Indices `(l, r)` with the `level` crossings in `[l, l+1]` and `[r-1, r]`,
/// walking outward from `peak`.
fn bracket_crossings(values: &[f64], peak: usize, level: f64) -> Result<(usize, usize)> {
    let left = (0..peak)
        .rev()
        .find(|&i| values[i] <= level)
        .ok_or(Error::NoCrossing { side: "left" })?;
    let right = (peak + 1..values.len())
        .find(|&i| values[i] <= level)
        .ok_or(Error::NoCrossing { side: "right" })?;
    Ok((left, right))
}

fn interpolate(x0: f64, x1: f64, v0: f64, v1: f64, level: f64) -> f64 {
    if v1 == v0 {
        0.5 * (x0 + x1)
    } else {
        x0 + (level - v0) / (v1 - v0) * (x1 - x0)
    }
}

/// `h²|f''| / (8|f'|)` around the segment `[i, i+1]`.
fn segment_error(values: &[f64], i: usize, h: f64) -> f64 {
    let n = values.len();
    let slope = (values[i + 1] - values[i]) / h;
    let c = i.clamp(1, n.saturating_sub(2).max(1));
    let curvature = if n >= 3 {
        (values[c + 1] - 2.0 * values[c] + values[c - 1]) / (h * h)
    } else {
        0.0
    };
    if slope == 0.0 {
        h
    } else {
        (h * h * curvature.abs() / (8.0 * slope.abs())).min(h)
    }
}

/// Half the distance between the `max/e` crossings either side of the peak.
pub fn half_width_1e(p: &Profile1D) -> Result<SpreadResult> {
    let v = &p.values;
    let peak = p.argmax();
    let max = v[peak];
    if !(max > 0.0) {
        return Err(Error::NoCrossing { side: "left" });
    }
    let peaks = count_peaks_above(v, 0.5 * max);
    if peaks > 1 {
        return Err(Error::MultiPeak { count: peaks });
    }
    let level = max / E;
    let (l, r) = bracket_crossings(v, peak, level)?;
    let h = p.grid.step;
    let xl = interpolate(p.x(l), p.x(l + 1), v[l], v[l + 1], level);
    let xr = interpolate(p.x(r - 1), p.x(r), v[r - 1], v[r], level);
    let err = 0.5 * (segment_error(v, l, h) + segment_error(v, r - 1, h));
    Ok(SpreadResult {
        width: 0.5 * (xr - xl),
        method: SpreadMethod::OneOverE,
        plane: p.plane.into(),
        interpolation_error_estimate: err,
    })
}

/// 24/76 knife-edge width of the edge `½·erfc(x/Δ)` in units of `Δ`, i.e. `2·erfinv(0.52)`.
pub fn knife_width_per_spread() -> f64 {
    2.0 * erf_inv(0.52)
}

/// Distance between the 24%- and 76%-of-maximum crossings of an edge.
/// Descending edges are measured on their mirror image.
pub fn knife_edge_width_2476(esf: &Profile1D) -> Result<SpreadResult> {
    let n = esf.len();
    let k = (n / 10).max(1);
    let head: f64 = esf.values[..k].iter().sum();
    let tail: f64 = esf.values[n - k..].iter().sum();
    let v: Vec<f64> = if tail >= head {
        esf.values.clone()
    } else {
        esf.values.iter().rev().copied().collect()
    };
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let (lo, hi) = (0.24 * max, 0.76 * max);
    if !(max > 0.0) || !(min < lo) {
        return Err(Error::RangeNotSpanned);
    }
    let i76 = v.iter().position(|&x| x >= hi).ok_or(Error::RangeNotSpanned)?;
    let i24 = (0..i76).rev().find(|&i| v[i] < lo).ok_or(Error::RangeNotSpanned)?;
    let i76_lo = (i24..i76).rev().find(|&i| v[i] < hi).unwrap_or(i24);
    let h = esf.grid.step;
    let x = |i: usize| i as f64 * h;
    let x24 = interpolate(x(i24), x(i24 + 1), v[i24], v[i24 + 1], lo);
    let x76 = interpolate(x(i76_lo), x(i76_lo + 1), v[i76_lo], v[i76_lo + 1], hi);
    let err = 0.5 * (segment_error(&v, i24, h) + segment_error(&v, i76_lo, h));
    Ok(SpreadResult {
        width: x76 - x24,
        method: SpreadMethod::Knife2476,
        plane: esf.plane.into(),
        interpolation_error_estimate: err,
    })
}

fn normalize_by_extremum(values: &mut [f64]) {
    let peak = values.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if peak != 0.0 {
        for v in values.iter_mut() {
            *v /= peak;
        }
    }
}

/// Central-difference derivative (one-sided at the ends), normalized so the
/// largest-magnitude extremum is `+1`.
pub fn lsf_from_esf(esf: &Profile1D) -> Result<Profile1D> {
    let n = esf.len();
    if n < 5 {
        return Err(Error::InvalidGrid(format!("need at least 5 samples, got {n}")));
    }
    let v = &esf.values;
    let h = esf.grid.step;
    let mut d: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => (v[1] - v[0]) / h,
            i if i == n - 1 => (v[n - 1] - v[n - 2]) / h,
            i => (v[i + 1] - v[i - 1]) / (2.0 * h),
        })
        .collect();
    normalize_by_extremum(&mut d);
    Profile1D::new(esf.grid, d, esf.plane)
}

/// Large-waist limit of both PSF spreads, `√(L(λd+λu)/(4π))`.
pub fn large_waist_spread(params: &SourceParams) -> f64 {
    (params.crystal_length * params.lambda_sum() / (4.0 * PI)).sqrt()
}

/// Magnification-adjusted 1/e half-width of the image-function PSF.
pub fn spread_g_psf_closed(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let w2 = params.pump_waist * params.pump_waist;
    let correction = 1.0 + params.lambda_u * params.lambda_u * params.crystal_length / (2.0 * PI * w2 * s);
    large_waist_spread(params) / correction.sqrt()
}

fn spread_v_formula(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let l = params.crystal_length;
    let pw = 2.0 * PI * params.pump_waist * params.pump_waist * s;
    let root = (1.0 + params.lambda_d * params.lambda_d * l / pw).sqrt();
    large_waist_spread(params) * pw * root / (pw - params.lambda_d * params.lambda_u * l)
}

/// Magnification-adjusted 1/e half-width of the visibility PSF. Defined above
/// the singular waist only.
pub fn spread_v_closed(params: &SourceParams) -> Result<f64> {
    if params.is_separable_or_below() {
        return Err(Error::SeparableState {
            pump_waist: params.pump_waist,
            singular_waist: params.singular_waist(),
        });
    }
    Ok(spread_v_formula(params))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilitySpread {
    pub width: f64,
    pub below_singularity: bool,
}

/// Visibility spread on both sides of the singular waist. Below it the
/// paraxial model is outside its range; the width is the magnitude of the
/// formula and the result is flagged.
pub fn spread_v_unrestricted(params: &SourceParams) -> Result<VisibilitySpread> {
    let ws = params.singular_waist();
    if ((params.pump_waist - ws) / ws).abs() < 1e-9 {
        return Err(Error::SeparableState {
            pump_waist: params.pump_waist,
            singular_waist: ws,
        });
    }
    Ok(VisibilitySpread {
        width: spread_v_formula(params).abs(),
        below_singularity: params.pump_waist < ws,
    })
}

const COARSE_POINTS: usize = 4096;
const MIN_SAMPLES_PER_WIDTH: f64 = 16.0;

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, level: f64) -> f64 {
    let mut fa = f(a) - level;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m) - level;
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Magnification-adjusted 1/e half-width of the normalized `∂g_esf/∂x_c`
/// for a centred edge.
///
/// Crossings are bracketed on a uniform grid (zoomed until the peak is well
/// sampled) and then refined by bisection on the analytic derivative.
pub fn spread_g_esf_numeric(params: &SourceParams, setup: &OpticalSetup) -> Result<SpreadResult> {
    let raw = |x: f64| g_esf_derivative(params, setup, x, 0.0);
    let support = setup.m_d * envelope_half_width(params) * (1.0 / SUPPORT_FRACTION).ln().sqrt();
    let (mut lo, mut hi) = (-support, support);
    for _ in 0..8 {
        let grid = Grid1D::linspace(lo, hi, COARSE_POINTS)?;
        let mut values: Vec<f64> = grid.points().map(raw).collect();
        let scale = values.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::NoCrossing { side: "left" });
        }
        values.iter_mut().for_each(|v| *v /= scale);
        let profile = Profile1D::new(grid, values, Plane::Camera)?;
        let coarse = half_width_1e(&profile)?;
        let peak = profile.argmax();
        if coarse.width < MIN_SAMPLES_PER_WIDTH * grid.step {
            let centre = grid.at(peak);
            let half = 12.0 * coarse.width.max(grid.step);
            (lo, hi) = (centre - half, centre + half);
            continue;
        }
        let f = |x: f64| raw(x) / scale;
        let level = 1.0 / E;
        let (l, r) = bracket_crossings(&profile.values, peak, level)?;
        let xl = bisect(&f, grid.at(l), grid.at(l + 1), level);
        let xr = bisect(&f, grid.at(r - 1), grid.at(r), level);
        let camera = SpreadResult {
            width: 0.5 * (xr - xl),
            method: SpreadMethod::OneOverE,
            plane: SpreadPlane::Camera,
            interpolation_error_estimate: f64::EPSILON * (xr - xl).abs(),
        };
        return Ok(camera.magnification_adjusted(setup.m_d));
    }
    Err(Error::InvalidGrid("derivative peak could not be resolved".into()))
}

/// `Δ_G_ESF / Δ_V`; independent of both magnifications.
pub fn spread_ratio(params: &SourceParams, setup: &OpticalSetup) -> Result<f64> {
    let v = spread_v_closed(params)?;
    Ok(spread_g_esf_numeric(params, setup)?.width / v)
}

/// Object-plane two-point resolution `0.7·√(2π)·M_u·Δ_V`.
pub fn min_resolvable_distance(params: &SourceParams, m_u: f64) -> Result<f64> {
    Ok(0.7 * (2.0 * PI).sqrt() * m_u * spread_v_closed(params)?)
}

/// Camera-plane 1/e half-width of `V_PSF` recovered from an ESF coefficient.
pub fn camera_spread_from_esf(params: &SourceParams, setup: &OpticalSetup) -> f64 {
    setup.m_d / esf_coefficient(params).abs()
}

/// One `(L, w_p)` point of a theory sweep. `None` marks quantities that are
/// undefined at or below the singular waist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub crystal_length: f64,
    pub pump_waist: f64,
    pub spread_v: Option<f64>,
    pub spread_g_psf: f64,
    pub spread_g_esf: f64,
    pub ratio: Option<f64>,
    pub singular_waist: f64,
    pub d_min: Option<f64>,
}

pub fn sweep_row(params: &SourceParams, setup: &OpticalSetup) -> Result<SweepRow> {
    let spread_v = match spread_v_closed(params) {
        Ok(v) => Some(v),
        Err(Error::SeparableState { .. }) => None,
        Err(e) => return Err(e),
    };
    let spread_g_esf = spread_g_esf_numeric(params, setup)?.width;
    Ok(SweepRow {
        crystal_length: params.crystal_length,
        pump_waist: params.pump_waist,
        spread_v,
        spread_g_psf: spread_g_psf_closed(params),
        spread_g_esf,
        ratio: spread_v.map(|v| spread_g_esf / v),
        singular_waist: params.singular_waist(),
        d_min: spread_v.map(|v| 0.7 * (2.0 * PI).sqrt() * setup.m_u * v),
    })
}

/// All `(L, w_p)` combinations, computed in parallel and sorted by `(L, w_p)`.
pub fn theory_sweep(
    base: &SourceParams,
    lengths: &[f64],
    waists: &[f64],
    setup: &OpticalSetup,
) -> Result<Vec<SweepRow>> {
    if lengths.is_empty() || waists.is_empty() {
        return Err(Error::InvalidGrid("sweep needs at least one length and one waist".into()));
    }
    let mut points: Vec<SourceParams> = lengths
        .iter()
        .flat_map(|&l| waists.iter().map(move |&w| base.with_crystal_length(l).with_pump_waist(w)))
        .collect();
    points.sort_by(|a, b| {
        a.crystal_length
            .total_cmp(&b.crystal_length)
            .then(a.pump_waist.total_cmp(&b.pump_waist))
    });
    points.dedup();
    points
        .par_iter()
        .map(|p| sweep_row(&p.validate()?, setup))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{g_psf, v_esf, v_psf};

    fn gaussian_profile(width: f64, n: usize) -> Profile1D {
        let grid = Grid1D::linspace(-5.0 * width, 5.0 * width, n).unwrap();
        Profile1D::sample(grid, Plane::Camera, |x| (-(x / width).powi(2)).exp())
    }

    #[test]
    fn gaussian_half_width() {
        let r = half_width_1e(&gaussian_profile(3e-6, 1024)).unwrap();
        assert!((r.width / 3e-6 - 1.0).abs() < 1e-3);
        assert!(r.interpolation_error_estimate < 1e-2 * r.width);
    }

    #[test]
    fn constant_profile_has_no_crossing() {
        let p = Profile1D::sample(Grid1D::linspace(0.0, 1.0, 50).unwrap(), Plane::Camera, |_| 2.0);
        assert!(matches!(half_width_1e(&p), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn two_peaks_rejected() {
        let grid = Grid1D::linspace(-10.0, 10.0, 401).unwrap();
        let p = Profile1D::sample(grid, Plane::Camera, |x| {
            (-(x - 3.0f64).powi(2)).exp() + 0.9 * (-(x + 3.0f64).powi(2)).exp()
        });
        assert!(matches!(half_width_1e(&p), Err(Error::MultiPeak { count: 2 })));
    }

    #[test]
    fn asymmetric_derivative_grid_refinement() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let s = OpticalSetup::default();
        let sampled = |n: usize| {
            let half = 400e-6;
            let grid = Grid1D::linspace(-half, half, n).unwrap();
            let mut prof = Profile1D::sample(grid, Plane::Camera, |x| g_esf_derivative(&p, &s, x, 0.0));
            normalize_by_extremum(&mut prof.values);
            half_width_1e(&prof).unwrap().width
        };
        let coarse = sampled(1024);
        let fine = sampled(10 * 1024);
        assert!(coarse.is_finite() && coarse > 0.0);
        assert!((coarse / fine - 1.0).abs() < 5e-3);
    }

    #[test]
    fn knife_edge_of_ideal_esf() {
        // 2·erfinv(0.52), from a root-finding oracle
        let factor = 2.0 * 0.499_431_331_753_663;
        let p = SourceParams::reference(5e-3, 142e-6);
        let s = OpticalSetup::default();
        let delta_c = s.m_d * spread_v_closed(&p).unwrap();
        let grid = Grid1D::linspace(-6.0 * delta_c, 6.0 * delta_c, 2048).unwrap();
        let esf = Profile1D::sample(grid, Plane::Camera, |x| v_esf(&p, &s, x, 0.0));
        assert!((knife_width_per_spread() - factor).abs() < 1e-12);
        let w = knife_edge_width_2476(&esf).unwrap().width;
        assert!((w / (factor * delta_c) - 1.0).abs() < 1e-4, "{w} vs {}", factor * delta_c);
        assert!((w / delta_c - 1.0).abs() < 5e-3);
        let reversed = knife_edge_width_2476(&esf.mirrored()).unwrap().width;
        assert!((reversed - w).abs() < 1e-12 * w);
    }

    #[test]
    fn knife_edge_of_step() {
        let grid = Grid1D::linspace(0.0, 1.0, 101).unwrap();
        let step = Profile1D::sample(grid, Plane::Camera, |x| if x < 0.5 { 0.0 } else { 1.0 });
        let w = knife_edge_width_2476(&step).unwrap().width;
        assert!(w < grid.step);
        let flat = Profile1D::sample(grid, Plane::Camera, |_| 1.0);
        assert!(matches!(knife_edge_width_2476(&flat), Err(Error::RangeNotSpanned)));
    }

    #[test]
    fn lsf_of_ramp_and_esf() {
        let grid = Grid1D::linspace(0.0, 1.0, 11).unwrap();
        let ramp = Profile1D::sample(grid, Plane::Camera, |x| 3.0 * x);
        let lsf = lsf_from_esf(&ramp).unwrap();
        assert!(lsf.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));

        let p = SourceParams::reference(10e-3, 50e-6);
        let s = OpticalSetup::default();
        let d = s.m_d * spread_v_closed(&p).unwrap();
        let grid = Grid1D::linspace(-5.0 * d, 5.0 * d, 1024).unwrap();
        let esf = Profile1D::sample(grid, Plane::Camera, |x| v_esf(&p, &s, x, 0.0));
        let lsf = lsf_from_esf(&esf).unwrap();
        for i in 1..grid.len - 1 {
            let expect = v_psf(&p, &s, grid.at(i)).unwrap();
            assert!((lsf.values[i] - expect).abs() < 1e-4);
        }
    }

    #[test]
    fn closed_spread_values() {
        let p = SourceParams::reference(10e-3, 50e-6);
        assert!((spread_g_psf_closed(&p) - 31.4e-6).abs() < 0.1e-6);
        assert!((spread_v_closed(&p).unwrap() - 53.5e-6).abs() < 0.2e-6);
        let big = SourceParams::reference(2e-3, 1.0);
        assert!((spread_g_psf_closed(&big) - 16.2e-6).abs() < 0.1e-6);
        let big5 = SourceParams::reference(5e-3, 1.0);
        assert!((spread_v_closed(&big5).unwrap() - 25.5e-6).abs() < 0.1e-6);
        let near = p.with_pump_waist(1.01 * p.singular_waist());
        assert!(spread_v_closed(&near).unwrap() > 10.0 * large_waist_spread(&p));
        let sing = p.with_pump_waist(p.singular_waist());
        assert!(matches!(spread_v_closed(&sing), Err(Error::SeparableState { .. })));
        let below = spread_v_unrestricted(&p.with_pump_waist(0.5 * p.singular_waist())).unwrap();
        assert!(below.below_singularity && below.width > 0.0);
    }

    #[test]
    fn g_psf_spread_matches_sampled_profile() {
        let p = SourceParams::reference(5e-3, 142e-6);
        let s = OpticalSetup::default();
        let d = spread_g_psf_closed(&p) * s.m_d;
        let grid = Grid1D::linspace(-4.0 * d, 4.0 * d, 1001).unwrap();
        let prof = Profile1D::sample(grid, Plane::Camera, |x| g_psf(&p, &s, x));
        let w = half_width_1e(&prof).unwrap().magnification_adjusted(s.m_d).width;
        assert!((w / spread_g_psf_closed(&p) - 1.0).abs() < 2e-3);
        assert!((g_psf(&p, &s, d) - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn esf_spread_limits() {
        let s = OpticalSetup::default();
        let base = SourceParams::reference(5e-3, 1.0);
        let far = base.with_pump_waist(100.0 * base.singular_waist());
        let g = spread_g_esf_numeric(&far, &s).unwrap().width;
        let v = spread_v_closed(&far).unwrap();
        assert!((g / v - 1.0).abs() < 0.01, "{g} vs {v}");

        let near = base.with_pump_waist(1.05 * base.singular_waist());
        assert!(spread_ratio(&near, &s).unwrap() < 0.3);

        let p = SourceParams::reference(10e-3, 142e-6);
        let r1 = spread_ratio(&p, &s).unwrap();
        let r2 = spread_ratio(&p, &s.with_m_d(2.0 * s.m_d)).unwrap();
        assert!((r1 - r2).abs() < 1e-12 * r1);
    }

    #[test]
    fn esf_spread_at_singular_waist() {
        // c = 0: the derivative is that of the bare envelope, odd and two-lobed.
        // The positive lobe peaks at 1/sqrt(2k); its 1/e crossings solve
        // √2·u·exp(1/2 − u²) = 1/e with u = x·sqrt(k) (roots 0.16197 and 1.50087).
        let base = SourceParams::reference(5e-3, 1.0);
        let p = base.with_pump_waist(base.singular_waist());
        let s = OpticalSetup::default();
        let w = spread_g_esf_numeric(&p, &s).unwrap().width;
        let envelope = (730e-9 * 5e-3 / (4.0 * PI)).sqrt();
        assert!((envelope_half_width(&p) / envelope - 1.0).abs() < 1e-9);
        let expect = 0.669_451_250_807_355 * envelope;
        assert!((w / expect - 1.0).abs() < 1e-6, "{w} vs {expect}");
    }

    #[test]
    fn esf_spread_grid_stability() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let s = OpticalSetup::default();
        let exact = spread_g_esf_numeric(&p, &s).unwrap().width * s.m_d;
        let sampled = |n: usize| {
            let grid = Grid1D::linspace(-300e-6, 300e-6, n).unwrap();
            let mut prof = Profile1D::sample(grid, Plane::Camera, |x| g_esf_derivative(&p, &s, x, 0.0));
            normalize_by_extremum(&mut prof.values);
            half_width_1e(&prof).unwrap().width
        };
        let (a, b) = (sampled(2048), sampled(4096));
        assert!((a / b - 1.0).abs() < 2e-3);
        assert!((b / exact - 1.0).abs() < 2e-3);
    }

    #[test]
    fn min_distance() {
        let p = SourceParams::reference(2e-3, 1.0);
        let d1 = min_resolvable_distance(&p, 1.0).unwrap();
        assert!((d1 - 28.4e-6).abs() < 0.2e-6);
        assert_eq!(min_resolvable_distance(&p, 2.0).unwrap(), 2.0 * d1);
        let s = OpticalSetup::from_totals(2.67, 1.3);
        let chain = 0.7 * (2.0 * PI).sqrt() * (s.m_u / s.m_d) * camera_spread_from_esf(&p, &s);
        assert!((min_resolvable_distance(&p, s.m_u).unwrap() / chain - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sweep_rows() {
        let s = OpticalSetup::default();
        let base = SourceParams::reference(2e-3, 50e-6);
        let rows = theory_sweep(&base, &[10e-3, 2e-3, 5e-3], &[308e-6, 50e-6, 142e-6, 214e-6], &s).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.windows(2).all(|w| (w[0].crystal_length, w[0].pump_waist) < (w[1].crystal_length, w[1].pump_waist)));
        let r = rows.iter().find(|r| r.crystal_length == 2e-3 && r.pump_waist == 308e-6).unwrap();
        assert!((r.spread_v.unwrap() / 16.2e-6 - 1.0).abs() < 0.02);
        let ws = SourceParams::reference(10e-3, 1.0).singular_waist();
        let marker = theory_sweep(&base, &[10e-3], &[ws], &s).unwrap();
        assert!(marker[0].spread_v.is_none() && marker[0].ratio.is_none() && marker[0].d_min.is_none());
    }
}
