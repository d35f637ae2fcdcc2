//! Source and imaging parameters, characteristic waists and regime checks.
//!
//! All lengths are SI meters.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Pump wavelength of the reference source.
pub const PUMP_WAVELENGTH: f64 = 405e-9;
/// Detected (signal) wavelength of the reference source.
pub const DETECTED_WAVELENGTH: f64 = 730e-9;
/// Undetected (idler) wavelength of the reference source.
pub const UNDETECTED_WAVELENGTH: f64 = 910e-9;

/// Crystal lengths of the reference measurement series.
pub const REFERENCE_CRYSTAL_LENGTHS: [f64; 3] = [2e-3, 5e-3, 10e-3];
/// Pump waists of the reference measurement series.
pub const REFERENCE_PUMP_WAISTS: [f64; 4] = [50e-6, 142e-6, 214e-6, 308e-6];

/// Camera relay magnification (lenses f2 = 75 mm, f3 = 200 mm).
pub const CAMERA_RELAY_MAGNIFICATION: f64 = 2.67;
/// Focal length of the crystal-to-object relay lenses. Documentation only.
pub const FOCAL_LENGTH_RELAY: f64 = 125e-3;
/// Focal length of the first camera lens. Documentation only.
pub const FOCAL_LENGTH_CAMERA_1: f64 = 75e-3;
/// Focal length of the second camera lens. Documentation only.
pub const FOCAL_LENGTH_CAMERA_2: f64 = 200e-3;

/// Relative tolerance on `|1/λp - (1/λd + 1/λu)|·λp`.
pub const ENERGY_TOLERANCE: f64 = 0.01;
/// The closed-form model requires `L >= THICK_CRYSTAL_FACTOR·(λd + λu)`.
pub const THICK_CRYSTAL_FACTOR: f64 = 100.0;
/// Margin above which a "much larger than" condition counts as satisfied.
pub const REGIME_THRESHOLD: f64 = 10.0;

/// Down-conversion source: wavelengths, crystal length and pump waist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    pub lambda_p: f64,
    pub lambda_d: f64,
    pub lambda_u: f64,
    pub crystal_length: f64,
    pub pump_waist: f64,
}

impl SourceParams {
    /// Reference wavelengths (405 → 730 + 910 nm) with the given crystal and waist.
    pub fn reference(crystal_length: f64, pump_waist: f64) -> Self {
        SourceParams {
            lambda_p: PUMP_WAVELENGTH,
            lambda_d: DETECTED_WAVELENGTH,
            lambda_u: UNDETECTED_WAVELENGTH,
            crystal_length,
            pump_waist,
        }
    }

    pub fn with_pump_waist(self, pump_waist: f64) -> Self {
        SourceParams { pump_waist, ..self }
    }

    pub fn with_crystal_length(self, crystal_length: f64) -> Self {
        SourceParams {
            crystal_length,
            ..self
        }
    }

    /// `λd + λu`.
    pub fn lambda_sum(&self) -> f64 {
        self.lambda_d + self.lambda_u
    }

    /// Check positivity, energy conservation and the thick-crystal condition.
    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("lambda_p", self.lambda_p),
            ("lambda_d", self.lambda_d),
            ("lambda_u", self.lambda_u),
            ("crystal_length", self.crystal_length),
            ("pump_waist", self.pump_waist),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        let mismatch =
            (1.0 / self.lambda_p - (1.0 / self.lambda_d + 1.0 / self.lambda_u)).abs() * self.lambda_p;
        if !(mismatch <= ENERGY_TOLERANCE) {
            return Err(Error::EnergyConservationViolated {
                mismatch,
                tolerance: ENERGY_TOLERANCE,
            });
        }
        let minimum = THICK_CRYSTAL_FACTOR * self.lambda_sum();
        if self.crystal_length < minimum {
            return Err(Error::ThinCrystalRegime {
                crystal_length: self.crystal_length,
                minimum,
            });
        }
        Ok(self)
    }

    /// Pump waist at which the Gaussian biphoton density factorizes:
    /// `w² = λd·λu·L / (2π(λd + λu))`.
    pub fn singular_waist(&self) -> f64 {
        (self.lambda_d * self.lambda_u * self.crystal_length / (2.0 * PI * self.lambda_sum())).sqrt()
    }

    /// `true` when the pump waist is within 1e-9 (relative) of, or below, the singular waist.
    pub fn is_separable_or_below(&self) -> bool {
        self.pump_waist <= self.singular_waist() * (1.0 + 1e-9)
    }

    pub fn regime(&self) -> RegimeReport {
        regime_classify(self)
    }
}

/// Validate raw parameters; idempotent.
pub fn validate_params(raw: SourceParams) -> Result<SourceParams> {
    raw.validate()
}

/// See [`SourceParams::singular_waist`].
pub fn singular_waist(params: &SourceParams) -> f64 {
    params.singular_waist()
}

/// Margins of the large-waist conditions and the distance to separability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// `w²(λd+λu) / (λu² L)`.
    pub margin_u: f64,
    pub large_waist_u: bool,
    /// `w²(λd+λu) / (λd² L)`.
    pub margin_d: f64,
    pub large_waist_d: bool,
    /// `w / w_sing`.
    pub separability_margin: f64,
}

pub fn regime_classify(params: &SourceParams) -> RegimeReport {
    let w2 = params.pump_waist * params.pump_waist;
    let s = params.lambda_sum();
    let l = params.crystal_length;
    let margin_u = w2 * s / (params.lambda_u * params.lambda_u * l);
    let margin_d = w2 * s / (params.lambda_d * params.lambda_d * l);
    RegimeReport {
        margin_u,
        large_waist_u: margin_u >= REGIME_THRESHOLD,
        margin_d,
        large_waist_d: margin_d >= REGIME_THRESHOLD,
        separability_margin: params.pump_waist / params.singular_waist(),
    }
}

/// Magnifications linking crystal, object and camera planes.
///
/// `m_d` is the total detected-arm magnification (`m_d_i · m_d_c`), `m_u`
/// the total undetected-arm magnification. Camera coordinates are
/// `x_c = m_d · x_d`, object coordinates `x_o = m_u · x_u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalSetup {
    pub m_d: f64,
    pub m_u: f64,
    pub m_d_i: f64,
    pub m_u_i: f64,
    pub m_d_c: f64,
}

impl Default for OpticalSetup {
    fn default() -> Self {
        OpticalSetup::from_factors(1.0, CAMERA_RELAY_MAGNIFICATION, 1.0)
    }
}

impl OpticalSetup {
    /// Build from the interferometer and camera-relay factors; `m_u = m_u_i`.
    pub fn from_factors(m_d_i: f64, m_d_c: f64, m_u_i: f64) -> Self {
        OpticalSetup {
            m_d: m_d_i * m_d_c,
            m_u: m_u_i,
            m_d_i,
            m_u_i,
            m_d_c,
        }
    }

    /// Build from totals, attributing the whole detected magnification to the camera relay.
    pub fn from_totals(m_d: f64, m_u: f64) -> Self {
        OpticalSetup::from_factors(1.0, m_d, m_u)
    }

    pub fn with_m_d(self, m_d: f64) -> Self {
        OpticalSetup {
            m_d,
            m_d_c: m_d / self.m_d_i,
            ..self
        }
    }

    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("m_d", self.m_d),
            ("m_u", self.m_u),
            ("m_d_i", self.m_d_i),
            ("m_u_i", self.m_u_i),
            ("m_d_c", self.m_d_c),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        let product = self.m_d_i * self.m_d_c;
        if ((self.m_d - product) / self.m_d).abs() > 1e-12 {
            return Err(Error::InconsistentMagnification {
                m_d: self.m_d,
                product,
            });
        }
        Ok(self)
    }
}
