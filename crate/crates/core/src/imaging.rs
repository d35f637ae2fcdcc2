//! Image function `G` and visibility `V` in the camera plane.
//!
//! Closed forms cover a point object (PSF) and a sharp edge (ESF). Arbitrary
//! transmission profiles go through direct quadrature of the joint density
//! over the object plane. Edges are opaque on the left: `T = Θ(x_o − x̃_o)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::PI;

use crate::biphoton::{gaussian_quadratic_form, QuadraticForm2};
use crate::error::{Error, Result};
use crate::model::{OpticalSetup, SourceParams};
use crate::quadrature::GaussLegendre;
use crate::signal::{Grid1D, Plane, Profile1D};

/// Object transmission along `x_o` (object-plane meters).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransmissionProfile {
    /// Pinhole at `x0`, modelled as a delta function.
    Point { x0: f64 },
    /// Opaque for `x_o < x_tilde_o`, transparent beyond.
    Edge { x_tilde_o: f64 },
    /// Two transparent slits of width `slit_width`, centres `±center_distance/2`.
    DoubleSlit {
        center_distance: f64,
        slit_width: f64,
    },
    /// Constant transmission everywhere.
    Uniform { value: f64 },
    /// Linear interpolation between samples, zero outside the sampled span.
    Sampled { grid: Grid1D, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Const { lo: f64, hi: f64, value: f64 },
    Linear { x0: f64, x1: f64, v0: f64, v1: f64 },
}

impl Piece {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            Piece::Const { lo, hi, .. } => (lo, hi),
            Piece::Linear { x0, x1, .. } => (x0, x1),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match *self {
            Piece::Const { value, .. } => value,
            Piece::Linear { x0, x1, v0, v1 } => v0 + (v1 - v0) * (x - x0) / (x1 - x0),
        }
    }

    fn is_zero(&self) -> bool {
        match *self {
            Piece::Const { value, .. } => value == 0.0,
            Piece::Linear { v0, v1, .. } => v0 == 0.0 && v1 == 0.0,
        }
    }
}

impl TransmissionProfile {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGrid(m));
        match self {
            TransmissionProfile::Point { x0 } if !x0.is_finite() => bad("point position must be finite".into()),
            TransmissionProfile::Edge { x_tilde_o } if !x_tilde_o.is_finite() => {
                bad("edge position must be finite".into())
            }
            TransmissionProfile::DoubleSlit {
                center_distance,
                slit_width,
            } if !(*slit_width > 0.0 && center_distance > slit_width) => {
                bad("double slit needs 0 < slit_width < center_distance".into())
            }
            TransmissionProfile::Uniform { value } if !(0.0..=1.0).contains(value) => {
                bad(format!("transmission {value} outside [0, 1]"))
            }
            TransmissionProfile::Sampled { grid, values } => {
                if values.len() != grid.len {
                    return bad(format!("{} values for {} grid points", values.len(), grid.len));
                }
                if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return bad(format!("transmission {v} outside [0, 1]"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `T(x_o)`; the point object evaluates to zero (it only acts under the integral).
    pub fn eval(&self, x: f64) -> f64 {
        self.pieces()
            .iter()
            .find(|p| {
                let (lo, hi) = p.bounds();
                x >= lo && x < hi
            })
            .map_or(0.0, |p| p.eval(x))
    }

    fn pieces(&self) -> Vec<Piece> {
        match self {
            TransmissionProfile::Point { .. } => Vec::new(),
            TransmissionProfile::Edge { x_tilde_o } => vec![Piece::Const {
                lo: *x_tilde_o,
                hi: f64::INFINITY,
                value: 1.0,
            }],
            TransmissionProfile::DoubleSlit {
                center_distance,
                slit_width,
            } => {
                let (c, h) = (0.5 * center_distance, 0.5 * slit_width);
                vec![
                    Piece::Const {
                        lo: -c - h,
                        hi: -c + h,
                        value: 1.0,
                    },
                    Piece::Const {
                        lo: c - h,
                        hi: c + h,
                        value: 1.0,
                    },
                ]
            }
            TransmissionProfile::Uniform { value } => vec![Piece::Const {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                value: *value,
            }],
            TransmissionProfile::Sampled { grid, values } => (0..grid.len - 1)
                .map(|i| Piece::Linear {
                    x0: grid.at(i),
                    x1: grid.at(i + 1),
                    v0: values[i],
                    v1: values[i + 1],
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Closed forms

/// Exponent coefficient of `G_PSF` in `ρ_c²/M_d²`.
pub fn g_psf_coefficient(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let w2 = params.pump_waist * params.pump_waist;
    2.0 * params.lambda_u * params.lambda_u / (w2 * s * s) + 4.0 * PI / (params.crystal_length * s)
}

/// Exponent coefficient of `V_PSF` in `ρ_c²/M_d²`; zero at the singular waist.
pub fn v_psf_coefficient(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let l = params.crystal_length;
    let w2 = params.pump_waist * params.pump_waist;
    let gap = 2.0 * PI * w2 * s - params.lambda_d * params.lambda_u * l;
    2.0 * gap * gap
        / (2.0 * PI * w2 * w2 * s * s * s * l + w2 * params.lambda_d * params.lambda_d * s * s * l * l)
}

/// Image-function PSF, peak-normalized.
pub fn g_psf(params: &SourceParams, setup: &OpticalSetup, rho_c: f64) -> f64 {
    let r = rho_c / setup.m_d;
    (-g_psf_coefficient(params) * r * r).exp()
}

fn check_not_separable(params: &SourceParams) -> Result<()> {
    let ws = params.singular_waist();
    if ((params.pump_waist - ws) / ws).abs() < 1e-9 {
        return Err(Error::SeparableState {
            pump_waist: params.pump_waist,
            singular_waist: ws,
        });
    }
    Ok(())
}

/// Visibility PSF, peak-normalized. Constant (and rejected) at the singular waist.
pub fn v_psf(params: &SourceParams, setup: &OpticalSetup, rho_c: f64) -> Result<f64> {
    check_not_separable(params)?;
    let r = rho_c / setup.m_d;
    Ok((-v_psf_coefficient(params) * r * r).exp())
}

/// Exponent coefficient of the detected-beam envelope in `x_c²/M_d²`:
/// `4π(λd+λu) / (λd² L + 2π w² (λd+λu))`.
pub fn envelope_coefficient(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let w2 = params.pump_waist * params.pump_waist;
    4.0 * PI * s
        / (params.lambda_d * params.lambda_d * params.crystal_length + 2.0 * PI * w2 * s)
}

/// Magnification-adjusted 1/e half-width of the detected-beam envelope.
pub fn envelope_half_width(params: &SourceParams) -> f64 {
    1.0 / envelope_coefficient(params).sqrt()
}

/// Coefficient `c` of the edge response `erfc(c·(x_c − M_u x̃_o)/M_d)`.
///
/// Negative above the singular waist, zero at it. The pump waist enters
/// squared throughout, which keeps the argument dimensionless.
pub fn esf_coefficient(params: &SourceParams) -> f64 {
    let s = params.lambda_sum();
    let l = params.crystal_length;
    let w = params.pump_waist;
    let w2 = w * w;
    let dd = params.lambda_d * params.lambda_d;
    std::f64::consts::SQRT_2 * (params.lambda_d * params.lambda_u * l - 2.0 * PI * w2 * s)
        / (((dd * l + 2.0 * PI * w2 * s) * l).sqrt() * w * s)
}

fn esf_argument(setup: &OpticalSetup, x_c: f64, x_tilde_o: f64) -> f64 {
    (x_c - setup.m_u * x_tilde_o) / setup.m_d
}

/// Image-function edge response. Equals 1 at `x_c = 0` for a centred edge;
/// an open aperture corresponds to twice the envelope.
///
/// The object displacement enters only through the composite `M_u·x̃_o`,
/// a camera-plane shift.
pub fn g_esf(params: &SourceParams, setup: &OpticalSetup, x_c: f64, x_tilde_o: f64) -> f64 {
    let xd = x_c / setup.m_d;
    let envelope = (-envelope_coefficient(params) * xd * xd).exp();
    envelope * erfc(esf_coefficient(params) * esf_argument(setup, x_c, x_tilde_o))
}

/// Visibility edge response in `[0, 1]`.
pub fn v_esf(params: &SourceParams, setup: &OpticalSetup, x_c: f64, x_tilde_o: f64) -> f64 {
    0.5 * erfc(esf_coefficient(params) * esf_argument(setup, x_c, x_tilde_o))
}

/// `∂ v_esf / ∂ x_c`.
pub fn v_esf_derivative(params: &SourceParams, setup: &OpticalSetup, x_c: f64, x_tilde_o: f64) -> f64 {
    let c = esf_coefficient(params);
    let z = c * esf_argument(setup, x_c, x_tilde_o);
    -c / (setup.m_d * PI.sqrt()) * (-z * z).exp()
}

/// `∂ g_esf / ∂ x_c`.
pub fn g_esf_derivative(params: &SourceParams, setup: &OpticalSetup, x_c: f64, x_tilde_o: f64) -> f64 {
    let c = esf_coefficient(params);
    let k = envelope_coefficient(params);
    let xd = x_c / setup.m_d;
    let z = c * esf_argument(setup, x_c, x_tilde_o);
    let envelope = (-k * xd * xd).exp();
    envelope
        * (-2.0 * k * xd / setup.m_d * erfc(z) - 2.0 * c / (setup.m_d * PI.sqrt()) * (-z * z).exp())
}

// ---------------------------------------------------------------------------
// Quadrature

/// Half-width of the object-plane integration window, in conditional 1/e widths.
pub const WINDOW_WIDTHS: f64 = 8.0;
/// Base Gauss–Legendre order per smooth piece of `T`.
pub const BASE_NODES: usize = 257;
/// Relative agreement required between successive node doublings.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
const MAX_DOUBLINGS: usize = 3;

/// Envelope fraction the numeric-profile grid must reach at both ends.
pub const SUPPORT_FRACTION: f64 = 1e-8;

struct ObjectIntegrator {
    q: QuadraticForm2,
    m_d: f64,
    m_u: f64,
    pieces: Vec<Piece>,
    point: Option<f64>,
}

impl ObjectIntegrator {
    fn new(params: &SourceParams, setup: &OpticalSetup, t: &TransmissionProfile) -> Self {
        ObjectIntegrator {
            q: gaussian_quadratic_form(params),
            m_d: setup.m_d,
            m_u: setup.m_u,
            pieces: t.pieces(),
            point: match t {
                TransmissionProfile::Point { x0 } => Some(*x0),
                _ => None,
            },
        }
    }

    fn open(params: &SourceParams, setup: &OpticalSetup) -> Self {
        ObjectIntegrator::new(params, setup, &TransmissionProfile::Uniform { value: 1.0 })
    }

    /// `∫ dx_o P(x_c/M_d, x_o/M_u) T(x_o)` with node-doubling convergence.
    fn integrate(&self, x_c: f64) -> Result<f64> {
        let x_d = x_c / self.m_d;
        if let Some(x0) = self.point {
            return Ok(self.q.density(x_d, x0 / self.m_u));
        }
        let mean = self.m_u * self.q.conditional_mean_u(x_d);
        let width = self.m_u / self.q.a_uu.sqrt();
        let reach = WINDOW_WIDTHS * width;

        let nearest = |p: &Piece| {
            let (lo, hi) = p.bounds();
            mean.clamp(lo, hi)
        };
        let closest = self
            .pieces
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| (nearest(p) - mean).abs())
            .fold(f64::INFINITY, f64::min);
        if !closest.is_finite() {
            return Ok(0.0);
        }
        let windows: Vec<(Piece, f64, f64)> = self
            .pieces
            .iter()
            .filter(|p| !p.is_zero() && (nearest(p) - mean).abs() <= closest + reach)
            .filter_map(|p| {
                let (lo, hi) = p.bounds();
                let c = nearest(p);
                let a = lo.max(c - reach);
                let b = hi.min(c + reach);
                (b > a).then_some((*p, a, b))
            })
            .collect();

        let sum_with = |nodes: usize| -> f64 {
            let rule = GaussLegendre::cached(nodes);
            windows
                .iter()
                .map(|(piece, a, b)| {
                    rule.integrate(*a, *b, |x_o| self.q.density(x_d, x_o / self.m_u) * piece.eval(x_o))
                })
                .sum()
        };
        let mut nodes = BASE_NODES;
        let mut coarse = sum_with(nodes);
        for _ in 0..MAX_DOUBLINGS {
            nodes = 2 * nodes - 1;
            let fine = sum_with(nodes);
            let change = (fine - coarse).abs();
            if change <= QUADRATURE_TOLERANCE * fine.abs() || change < 1e-300 {
                return Ok(fine);
            }
            coarse = fine;
        }
        Err(Error::QuadratureNotConverged {
            at: x_c,
            change: (sum_with(nodes) - sum_with(nodes.div_ceil(2))).abs() / coarse.abs().max(1e-300),
        })
    }
}

/// Camera grid covering the region where the detected-beam envelope exceeds
/// [`SUPPORT_FRACTION`] of its peak.
pub fn support_grid(params: &SourceParams, setup: &OpticalSetup, points: usize) -> Result<Grid1D> {
    let half = setup.m_d * envelope_half_width(params) * (1.0 / SUPPORT_FRACTION).ln().sqrt();
    Grid1D::linspace(-half, half, points)
}

fn check_support(params: &SourceParams, setup: &OpticalSetup, grid: &Grid1D) -> Result<()> {
    let k = envelope_coefficient(params);
    for x in [grid.start, grid.end()] {
        let xd = x / setup.m_d;
        // allow rounding at the boundary of support_grid
        if (-k * xd * xd).exp() > SUPPORT_FRACTION * (1.0 + 1e-9) {
            return Err(Error::InvalidGrid(format!(
                "grid end {x:.4e} m does not reach the envelope's {SUPPORT_FRACTION:e} level"
            )));
        }
    }
    Ok(())
}

/// Image function for an arbitrary transmission, by quadrature.
///
/// Normalized so that an open aperture gives the detected-beam envelope with
/// peak 1 (a centred edge therefore yields `g_esf / 2`).
pub fn image_function_numeric(
    params: &SourceParams,
    setup: &OpticalSetup,
    t: &TransmissionProfile,
    grid: Grid1D,
) -> Result<Profile1D> {
    t.validate()?;
    check_support(params, setup, &grid)?;
    let object = ObjectIntegrator::new(params, setup, t);
    let open_peak = ObjectIntegrator::open(params, setup).integrate(0.0)?;
    let values = (0..grid.len)
        .into_par_iter()
        .map(|i| object.integrate(grid.at(i)).map(|v| v / open_peak))
        .collect::<Result<Vec<_>>>()?;
    Profile1D::new(grid, values, Plane::Camera)
}

/// Visibility for an arbitrary transmission: ratio of the `T`-weighted to the
/// unweighted object integral at each camera position.
pub fn visibility_numeric(
    params: &SourceParams,
    setup: &OpticalSetup,
    t: &TransmissionProfile,
    grid: Grid1D,
) -> Result<Profile1D> {
    t.validate()?;
    check_support(params, setup, &grid)?;
    let object = ObjectIntegrator::new(params, setup, t);
    let open = ObjectIntegrator::open(params, setup);
    let values = (0..grid.len)
        .into_par_iter()
        .map(|i| {
            let x = grid.at(i);
            let den = open.integrate(x)?;
            let num = object.integrate(x)?;
            Ok(if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    Profile1D::new(grid, values, Plane::Camera)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::gaussian_quadratic_form;

    fn setup() -> OpticalSetup {
        OpticalSetup::default()
    }

    #[test]
    fn psf_peaks_and_widths() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let s = setup();
        assert_eq!(g_psf(&p, &s, 0.0), 1.0);
        assert_eq!(v_psf(&p, &s, 0.0).unwrap(), 1.0);
        // 1/e half widths from direct arithmetic on the closed forms: 31.43 um and 53.48 um
        let g_width = 1.0 / g_psf_coefficient(&p).sqrt();
        let v_width = 1.0 / v_psf_coefficient(&p).sqrt();
        assert!((g_width - 31.43e-6).abs() < 0.1e-6, "{g_width}");
        assert!((v_width - 53.5e-6).abs() < 0.2e-6, "{v_width}");
        assert!((g_psf(&p, &s, s.m_d * g_width) - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_quadratic_form() {
        for (l, w) in [(2e-3, 50e-6), (5e-3, 142e-6), (10e-3, 308e-6), (10e-3, 20e-6)] {
            let p = SourceParams::reference(l, w);
            let q = gaussian_quadratic_form(&p);
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            assert!(rel(g_psf_coefficient(&p), q.a_dd) < 1e-12);
            assert!(rel(v_psf_coefficient(&p), q.a_du * q.a_du / q.a_uu) < 1e-9);
            assert!(rel(envelope_coefficient(&p), q.marginal_d()) < 1e-12);
            let c = esf_coefficient(&p);
            assert!(rel(c, q.a_du / q.a_uu.sqrt()) < 1e-9);
        }
    }

    #[test]
    fn separable_state() {
        let base = SourceParams::reference(5e-3, 1.0);
        let p = base.with_pump_waist(base.singular_waist());
        assert!(matches!(v_psf(&p, &setup(), 1e-5), Err(Error::SeparableState { .. })));
        assert!(esf_coefficient(&p).abs() < 1e-12);
        // erfc factor is 1: g_esf is the bare envelope of width M_d·sqrt(λd L / 4π)
        let width = setup().m_d * (730e-9 * 5e-3 / (4.0 * PI)).sqrt();
        let g = g_esf(&p, &setup(), width, 0.0);
        assert!((g - (-1f64).exp()).abs() < 1e-9, "{g}");
    }

    #[test]
    fn edge_limits_and_centre() {
        let p = SourceParams::reference(2e-3, 214e-6);
        let s = setup();
        assert!(esf_coefficient(&p) < 0.0);
        assert_eq!(v_esf(&p, &s, s.m_u * 3e-6, 3e-6), 0.5);
        assert!(v_esf(&p, &s, -1e-3, 0.0) < 1e-12);
        assert!((v_esf(&p, &s, 1e-3, 0.0) - 1.0).abs() < 1e-12);
        let far = 1e-3;
        let g = g_esf(&p, &s, far, 0.0);
        let env = (-envelope_coefficient(&p) * (far / s.m_d).powi(2)).exp();
        assert!((g / env - 2.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_identity_matches_v_psf() {
        let p = SourceParams::reference(5e-3, 80e-6);
        let s = setup();
        let peak = v_esf_derivative(&p, &s, 0.0, 0.0);
        for i in -50..=50 {
            let x = i as f64 * 3e-6;
            let lhs = v_esf_derivative(&p, &s, x, 0.0) / peak;
            assert!((lhs - v_psf(&p, &s, x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let s = setup();
        let h = 1e-8;
        for i in -20..=20 {
            let x = i as f64 * 10e-6;
            // fourth-order central difference
            let fd = |f: &dyn Fn(f64) -> f64| {
                (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
            };
            let dv = fd(&|x| v_esf(&p, &s, x, 1e-6));
            let dg = fd(&|x| g_esf(&p, &s, x, 1e-6));
            let scale_v = v_esf_derivative(&p, &s, s.m_u * 1e-6, 1e-6).abs();
            assert!((dv - v_esf_derivative(&p, &s, x, 1e-6)).abs() < 1e-6 * scale_v);
            assert!((dg - g_esf_derivative(&p, &s, x, 1e-6)).abs() < 1e-6 * scale_v * 2.0);
        }
    }

    #[test]
    fn shift_enters_only_through_composite() {
        let p = SourceParams::reference(5e-3, 142e-6);
        let s = OpticalSetup::from_totals(2.67, 1.7);
        let delta = 7e-6;
        for i in -10..=10 {
            let x = i as f64 * 5e-6;
            let a = v_esf(&p, &s, x, delta);
            let b = v_esf(&p, &s, x - s.m_u * delta, 0.0);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn open_and_opaque_apertures() {
        let p = SourceParams::reference(5e-3, 142e-6);
        let s = setup();
        let grid = support_grid(&p, &s, 65).unwrap();
        let open = TransmissionProfile::Uniform { value: 1.0 };
        let v = visibility_numeric(&p, &s, &open, grid).unwrap();
        assert!(v.values.iter().all(|&x| x == 1.0));
        let closed = TransmissionProfile::Uniform { value: 0.0 };
        let v = visibility_numeric(&p, &s, &closed, grid).unwrap();
        assert!(v.values.iter().all(|&x| x == 0.0));
        // open aperture image function is the envelope with unit peak
        let g = image_function_numeric(&p, &s, &open, grid).unwrap();
        let k = envelope_coefficient(&p);
        for (i, &val) in g.values.iter().enumerate() {
            let xd = grid.at(i) / s.m_d;
            let expect = (-k * xd * xd).exp();
            assert!((val - expect).abs() < 1e-10 * expect.max(1e-12), "{val} vs {expect}");
        }
    }

    #[test]
    fn numeric_edge_matches_closed_form() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let s = setup();
        let grid = support_grid(&p, &s, 129).unwrap();
        let edge = TransmissionProfile::Edge { x_tilde_o: 0.0 };
        let v = visibility_numeric(&p, &s, &edge, grid).unwrap();
        let g = image_function_numeric(&p, &s, &edge, grid).unwrap();
        for i in 0..grid.len {
            let x = grid.at(i);
            let (ve, ge) = (v_esf(&p, &s, x, 0.0), g_esf(&p, &s, x, 0.0));
            assert!((v.values[i] - ve).abs() <= 1e-6 * ve.max(f64::MIN_POSITIVE));
            assert!((2.0 * g.values[i] - ge).abs() <= 1e-6 * ge.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn grid_must_cover_support() {
        let p = SourceParams::reference(5e-3, 142e-6);
        let grid = Grid1D::linspace(-1e-5, 1e-5, 11).unwrap();
        let edge = TransmissionProfile::Edge { x_tilde_o: 0.0 };
        assert!(matches!(
            visibility_numeric(&p, &setup(), &edge, grid),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn transmission_validation() {
        assert!(TransmissionProfile::Uniform { value: 1.5 }.validate().is_err());
        assert!(TransmissionProfile::DoubleSlit {
            center_distance: 10e-6,
            slit_width: 30e-6
        }
        .validate()
        .is_err());
        let grid = Grid1D::linspace(0.0, 1.0, 3).unwrap();
        assert!(TransmissionProfile::Sampled {
            grid,
            values: vec![0.0, 2.0, 1.0]
        }
        .validate()
        .is_err());
        let t = TransmissionProfile::Sampled {
            grid,
            values: vec![0.0, 1.0, 1.0],
        };
        assert_eq!(t.eval(0.25), 0.5);
        assert_eq!(t.eval(-1.0), 0.0);
    }
}
