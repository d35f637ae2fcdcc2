//! Demodulate a stack, pick the analysis row and measure both edge responses.

use serde::{Deserialize, Serialize};

use qiul::dpsh::{demodulate, row_profile, select_max_row, DemodulationResult, InterferogramStack};
use qiul::fitting::{fit_edge_profiles, EdgeFitOptions, EdgeFitReport};
use qiul::imaging::esf_coefficient;
use qiul::spreads::{half_width_1e, knife_edge_width_2476, knife_width_per_spread, lsf_from_esf};
use qiul::{Error, Profile1D, Result, SourceParams};

/// Visibility is only trusted where the mean intensity reaches this fraction of the row maximum.
pub const SUPPORT_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeAnalysis {
    pub row: usize,
    /// Inclusive-exclusive pixel range of the visibility profile.
    pub v_columns: [usize; 2],
    pub demodulation_residual_rms: f64,
    pub invalid_pixels: usize,
    /// Direct 24/76 width of the visibility edge, camera plane.
    pub v_knife_width_camera: Option<f64>,
    /// 1/e half-width of the differentiated visibility edge, camera plane.
    pub v_lsf_width_camera: Option<f64>,
    /// Starting value of the `M_d` fits.
    pub m_d_init: f64,
    pub fit: EdgeFitReport,
    pub gate_passed: bool,
    pub gate_error: Option<String>,
    /// Averaged `M_d` when the gate passes.
    pub m_d_estimate: Option<f64>,
    /// Fitted camera spreads divided by the estimated `M_d`.
    pub spread_v_adjusted: Option<f64>,
    pub spread_g_adjusted: Option<f64>,
}

pub struct Analysis {
    pub demod: DemodulationResult,
    pub g_profile: Profile1D,
    pub v_profile: Profile1D,
    pub report: EdgeAnalysis,
}

/// Contiguous columns around the brightest pixel of `b` with `b ≥ fraction·max`.
fn supported_columns(b: &[f64], fraction: f64) -> [usize; 2] {
    let (peak, max) = b
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let cut = fraction * max;
    let mut lo = peak;
    while lo > 0 && b[lo - 1] >= cut {
        lo -= 1;
    }
    let mut hi = peak + 1;
    while hi < b.len() && b[hi] >= cut {
        hi += 1;
    }
    [lo, hi]
}

pub fn analyze(stack: &InterferogramStack, params: &SourceParams, options: &EdgeFitOptions) -> Result<Analysis> {
    let demod = demodulate(stack)?;
    let pitch = stack.pixel_pitch;
    let (row, g_profile) = select_max_row(&demod.g_image, pitch)?;
    let v_row = row_profile(&demod.v_image, row, pitch)?;
    let [lo, hi] = supported_columns(demod.b_image.row(row), SUPPORT_FRACTION);
    if hi - lo < 8 {
        return Err(Error::InvalidStack(format!(
            "only {} columns reach {SUPPORT_FRACTION} of the peak intensity",
            hi - lo
        )));
    }
    let v_profile = v_row.slice(lo, hi)?;

    let v_knife_width_camera = knife_edge_width_2476(&v_profile).ok().map(|s| s.width);
    // start M_d from the knife-edge width, which is M_d·2·erfinv(0.52)/|c|
    let m_d_init = v_knife_width_camera
        .map(|w| w * esf_coefficient(params).abs() / knife_width_per_spread())
        .filter(|m| m.is_finite() && *m > 0.0)
        .unwrap_or(options.m_d_init);
    let options = EdgeFitOptions { m_d_init, ..*options };
    let fit = fit_edge_profiles(&g_profile, &v_profile, params, &options)?;
    let v_lsf_width_camera = lsf_from_esf(&v_profile)
        .and_then(|lsf| half_width_1e(&lsf))
        .ok()
        .map(|s| s.width);
    let gate = fit.require_gate();
    let m_d_estimate = gate.as_ref().ok().copied();
    let report = EdgeAnalysis {
        row,
        v_columns: [lo, hi],
        demodulation_residual_rms: demod.residual_rms,
        invalid_pixels: demod.valid.iter().filter(|v| !**v).count(),
        v_knife_width_camera,
        v_lsf_width_camera,
        m_d_init,
        gate_passed: gate.is_ok(),
        gate_error: gate.err().map(|e| e.to_string()),
        m_d_estimate,
        spread_v_adjusted: m_d_estimate.map(|m| fit.v.camera_spread / m),
        spread_g_adjusted: m_d_estimate.map(|m| fit.g.camera_spread / m),
        fit,
    };
    Ok(Analysis {
        demod,
        g_profile,
        v_profile,
        report,
    })
}
