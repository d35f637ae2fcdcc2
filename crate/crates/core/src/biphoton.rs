//! Joint position density of the photon pair.
//!
//! Two models are provided, both in the one-transverse-axis reduction:
//!
//! * the Gaussian approximation of the phase-matching function, which gives
//!   a closed-form bivariate Gaussian in `(x_d, x_u)`;
//! * the exact `sinc` phase matching, evaluated numerically.
//!
//! In centre-of-mass / relative momenta `Q = q_d + q_u`, `K = λd q_d − λu q_u`
//! the transverse phase separates as
//! `q_d x_d + q_u x_u = [Q (λu x_d + λd x_u) + K (x_d − x_u)] / (λd + λu)`,
//! so the position amplitude of the sinc model is the product of the pump
//! transform (a Gaussian, done analytically) and a 1D transform of
//! `sinc(b K²)` that is evaluated by quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::SourceParams;
use crate::quadrature::trapezoid;
use crate::signal::{Grid1D, Plane, Profile1D};

/// Exponent `-(a_dd x_d² + a_uu x_u² + 2 a_du x_d x_u)` of the Gaussian density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm2 {
    pub a_dd: f64,
    pub a_uu: f64,
    pub a_du: f64,
    /// Normalization of the 1D-transverse density, `sqrt(det)/π`.
    pub norm: f64,
    det: f64,
}

impl QuadraticForm2 {
    /// `a_dd·a_uu − a_du²`, evaluated in the cancellation-free form `8π / (w² L (λd+λu))`.
    pub fn det(&self) -> f64 {
        self.det
    }

    /// Exponent coefficient of the `x_d` marginal, `det / a_uu`.
    pub fn marginal_d(&self) -> f64 {
        self.det / self.a_uu
    }

    /// Exponent coefficient of the `x_u` marginal, `det / a_dd`.
    pub fn marginal_u(&self) -> f64 {
        self.det / self.a_dd
    }

    /// Mean of `x_u` conditioned on `x_d`.
    pub fn conditional_mean_u(&self, x_d: f64) -> f64 {
        -self.a_du * x_d / self.a_uu
    }

    pub fn exponent(&self, x_d: f64, x_u: f64) -> f64 {
        -(self.a_dd * x_d * x_d + self.a_uu * x_u * x_u + 2.0 * self.a_du * x_d * x_u)
    }

    pub fn density(&self, x_d: f64, x_u: f64) -> f64 {
        self.norm * self.exponent(x_d, x_u).exp()
    }
}

/// Coefficients of the Gaussian joint density for `params`.
pub fn gaussian_quadratic_form(params: &SourceParams) -> QuadraticForm2 {
    let s = params.lambda_sum();
    let w2 = params.pump_waist * params.pump_waist;
    let pump = 2.0 / (w2 * s * s);
    let crystal = 4.0 * PI / (params.crystal_length * s);
    let det = 8.0 * PI / (w2 * params.crystal_length * s);
    QuadraticForm2 {
        a_dd: pump * params.lambda_u * params.lambda_u + crystal,
        a_uu: pump * params.lambda_d * params.lambda_d + crystal,
        a_du: pump * params.lambda_d * params.lambda_u - crystal,
        norm: det.sqrt() / PI,
        det,
    }
}

/// Gaussian joint density `P(x_d, x_u)` in m⁻² (per transverse axis).
pub fn joint_density_gaussian(params: &SourceParams, x_d: f64, x_u: f64) -> f64 {
    gaussian_quadratic_form(params).density(x_d, x_u)
}

/// Pearson correlation of `(x_d, x_u)` under the Gaussian density.
pub fn correlation_coefficient(params: &SourceParams) -> f64 {
    let q = gaussian_quadratic_form(params);
    -q.a_du / (q.a_dd * q.a_uu).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityModel {
    Gaussian,
    SincNumeric,
}

impl DensityModel {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityModel::Gaussian => "gaussian",
            DensityModel::SincNumeric => "sinc_numeric",
        }
    }
}

/// Joint density sampled on `grid_d × grid_u`, row-major in `x_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density2D {
    pub grid_d: Grid1D,
    pub grid_u: Grid1D,
    pub values: Vec<f64>,
    pub model: DensityModel,
}

impl Density2D {
    pub fn new(grid_d: Grid1D, grid_u: Grid1D, values: Vec<f64>, model: DensityModel) -> Result<Self> {
        if values.len() != grid_d.len * grid_u.len {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid_d.len,
                grid_u.len
            )));
        }
        Ok(Density2D {
            grid_d,
            grid_u,
            values,
            model,
        })
    }

    #[inline]
    pub fn get(&self, i_d: usize, j_u: usize) -> f64 {
        self.values[i_d * self.grid_u.len + j_u]
    }

    pub fn row(&self, i_d: usize) -> &[f64] {
        let n = self.grid_u.len;
        &self.values[i_d * n..(i_d + 1) * n]
    }

    /// Trapezoidal integral over both axes.
    pub fn integral(&self) -> f64 {
        let rows: Vec<f64> = (0..self.grid_d.len)
            .map(|i| trapezoid(self.row(i), self.grid_u.step))
            .collect();
        trapezoid(&rows, self.grid_d.step)
    }

    /// Trapezoidal integral of `|self − other|` on the shared grid.
    pub fn integrated_abs_difference(&self, other: &Density2D) -> f64 {
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect();
        Density2D {
            values: diff,
            ..self.clone()
        }
        .integral()
    }

    fn normalized(mut self) -> Self {
        let total = self.integral();
        if total > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= total);
        }
        self
    }

    /// Density along `x_d` at fixed `x_u = grid_u[j_u]` (unnormalized slice).
    pub fn conditional_d(&self, j_u: usize) -> Profile1D {
        let values = (0..self.grid_d.len).map(|i| self.get(i, j_u)).collect();
        Profile1D {
            grid: self.grid_d,
            values,
            plane: Plane::Object,
        }
    }

    /// Pearson correlation of `(x_d, x_u)` computed from the sampled density.
    pub fn pearson(&self) -> f64 {
        let xd = self.grid_d.to_vec();
        let xu = self.grid_u.to_vec();
        let moment = |f: &dyn Fn(f64, f64) -> f64| -> f64 {
            let rows: Vec<f64> = (0..self.grid_d.len)
                .map(|i| {
                    let vals: Vec<f64> = (0..self.grid_u.len)
                        .map(|j| self.get(i, j) * f(xd[i], xu[j]))
                        .collect();
                    trapezoid(&vals, self.grid_u.step)
                })
                .collect();
            trapezoid(&rows, self.grid_d.step)
        };
        let m0 = moment(&|_, _| 1.0);
        let md = moment(&|d, _| d) / m0;
        let mu = moment(&|_, u| u) / m0;
        let vd = moment(&|d, _| (d - md) * (d - md)) / m0;
        let vu = moment(&|_, u| (u - mu) * (u - mu)) / m0;
        let c = moment(&|d, u| (d - md) * (u - mu)) / m0;
        c / (vd * vu).sqrt()
    }
}

/// Sample the Gaussian density on a grid (analytic normalization, not renormalized).
pub fn gaussian_density_grid(params: &SourceParams, grid_d: Grid1D, grid_u: Grid1D) -> Density2D {
    let q = gaussian_quadratic_form(params);
    let xu = grid_u.to_vec();
    let values: Vec<f64> = (0..grid_d.len)
        .into_par_iter()
        .flat_map_iter(|i| {
            let d = grid_d.at(i);
            xu.iter().map(move |&u| q.density(d, u)).collect::<Vec<_>>()
        })
        .collect();
    Density2D {
        grid_d,
        grid_u,
        values,
        model: DensityModel::Gaussian,
    }
}

/// Grids and momentum resolution for [`joint_density_sinc_1d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SincGridSpec {
    pub grid_d: Grid1D,
    pub grid_u: Grid1D,
    /// Simpson intervals over the dimensionless relative momentum `κ ∈ [0, kappa_max]`.
    pub momentum_intervals: usize,
    /// Cutoff of `κ = K·sqrt(b)`; the truncated tail is `O(1/kappa_max³)`.
    pub kappa_max: f64,
}

/// Integrated-absolute-difference threshold between momentum resolutions N and 2N.
pub const SINC_CONVERGENCE: f64 = 1e-3;

impl SincGridSpec {
    /// Square grid spanning `half_span_widths` marginal 1/e widths of the Gaussian model on each axis.
    pub fn around(params: &SourceParams, half_span_widths: f64, points: usize) -> Result<Self> {
        let q = gaussian_quadratic_form(params);
        let wd = 1.0 / q.marginal_d().sqrt();
        let wu = 1.0 / q.marginal_u().sqrt();
        Ok(SincGridSpec {
            grid_d: Grid1D::linspace(-half_span_widths * wd, half_span_widths * wd, points)?,
            grid_u: Grid1D::linspace(-half_span_widths * wu, half_span_widths * wu, points)?,
            momentum_intervals: 4096,
            kappa_max: 40.0,
        })
    }
}

/// Joint density with exact `sinc` phase matching, normalized to unit integral.
///
/// The relative-momentum transform is computed at `momentum_intervals` and at
/// twice that; the finer result is returned when the two agree to
/// [`SINC_CONVERGENCE`] in integrated absolute difference.
pub fn joint_density_sinc_1d(params: &SourceParams, spec: &SincGridSpec) -> Result<Density2D> {
    let q = gaussian_quadratic_form(params);
    for (grid, width, axis) in [
        (spec.grid_d, 1.0 / q.marginal_d().sqrt(), "x_d"),
        (spec.grid_u, 1.0 / q.marginal_u().sqrt(), "x_u"),
    ] {
        let span = grid.end() - grid.start;
        if span < 6.0 * width {
            return Err(Error::InvalidGrid(format!(
                "{axis} grid spans {span:.3e} m, below 6 Gaussian 1/e widths ({:.3e} m)",
                6.0 * width
            )));
        }
    }
    if spec.momentum_intervals < 2 || !(spec.kappa_max > 0.0) {
        return Err(Error::InvalidGrid("momentum grid must have >= 2 intervals and a positive cutoff".into()));
    }
    let coarse = sinc_density(params, spec, spec.momentum_intervals);
    let fine = sinc_density(params, spec, 2 * spec.momentum_intervals);
    let difference = coarse.integrated_abs_difference(&fine);
    if !(difference < SINC_CONVERGENCE) {
        return Err(Error::GridTooCoarse { difference });
    }
    Ok(fine)
}

fn sinc_density(params: &SourceParams, spec: &SincGridSpec, intervals: usize) -> Density2D {
    let s = params.lambda_sum();
    let (ld, lu) = (params.lambda_d, params.lambda_u);
    let b = params.crystal_length * params.lambda_p / (8.0 * PI * ld * lu);
    let sqrt_b = b.sqrt();
    let w2 = params.pump_waist * params.pump_waist;
    let relative = RelativeTransform::new(spec.kappa_max, intervals);
    let (gd, gu) = (spec.grid_d, spec.grid_u);

    // Aligned equal-spacing grids only need the transform at index differences.
    let aligned = ((gd.step - gu.step) / gd.step).abs() < 1e-12 && {
        let offset = (gd.start - gu.start) / gd.step;
        (offset - offset.round()).abs() < 1e-9
    };
    let relative_at = |t: f64| relative.eval(t.abs() / sqrt_b);
    let table: Option<(i64, Vec<f64>)> = aligned.then(|| {
        let offset = ((gd.start - gu.start) / gd.step).round() as i64;
        let lo = offset - (gu.len as i64 - 1);
        let hi = offset + gd.len as i64 - 1;
        let vals = (lo..=hi)
            .into_par_iter()
            .map(|k| relative_at(((k - offset) as f64 * gd.step + (gd.start - gu.start)) / s))
            .collect();
        (lo, vals)
    });

    let values: Vec<f64> = (0..gd.len)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x_d = gd.at(i);
            let table = &table;
            (0..gu.len)
                .map(move |j| {
                    let x_u = gu.at(j);
                    let com = (lu * x_d + ld * x_u) / s;
                    let f2 = match table {
                        Some((lo, vals)) => {
                            let offset = ((gd.start - gu.start) / gd.step).round() as i64;
                            vals[(i as i64 - j as i64 + offset - lo) as usize]
                        }
                        None => relative_at((x_d - x_u) / s),
                    };
                    (-2.0 * com * com / w2).exp() * f2 * f2
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Density2D {
        grid_d: gd,
        grid_u: gu,
        values,
        model: DensityModel::SincNumeric,
    }
    .normalized()
}

/// `∫_0^κmax sinc(κ²) cos(κ τ) dκ` by composite Simpson; overall constants drop out on normalization.
struct RelativeTransform {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RelativeTransform {
    fn new(kappa_max: f64, intervals: usize) -> Self {
        let n = intervals + intervals % 2;
        let h = kappa_max / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let k = i as f64 * h;
            let sinc = if k == 0.0 { 1.0 } else { (k * k).sin() / (k * k) };
            let simpson = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            nodes.push(k);
            weights.push(simpson * h / 3.0 * sinc);
        }
        RelativeTransform { nodes, weights }
    }

    fn eval(&self, tau: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(k, w)| w * (k * tau).cos())
            .sum()
    }
}

/// Correlation of the numeric sinc density across a ladder of pump waists.
///
/// Returns `(pump_waist, pearson)` pairs; each density uses an automatic grid
/// spanning ±4 marginal widths.
pub fn sinc_correlation_scan(
    base: &SourceParams,
    pump_waists: &[f64],
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    pump_waists
        .iter()
        .map(|&w| {
            let p = base.with_pump_waist(w);
            let spec = SincGridSpec::around(&p, 4.0, points)?;
            Ok((w, joint_density_sinc_1d(&p, &spec)?.pearson()))
        })
        .collect()
}

/// Pump waist and value of the smallest `|corr|` found by [`sinc_correlation_scan`].
pub fn sinc_min_abs_correlation(
    base: &SourceParams,
    pump_waists: &[f64],
    points: usize,
) -> Result<(f64, f64)> {
    let scan = sinc_correlation_scan(base, pump_waists, points)?;
    scan.into_iter()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .ok_or_else(|| Error::InvalidGrid("empty pump-waist ladder".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use crate::spreads::half_width_1e;

    fn at_singular(l: f64) -> SourceParams {
        let p = SourceParams::reference(l, 1.0);
        p.with_pump_waist(p.singular_waist())
    }

    #[test]
    fn cross_term_vanishes_at_singular_waist() {
        for l in [2e-3, 5e-3, 10e-3] {
            let q = gaussian_quadratic_form(&at_singular(l));
            assert!(q.a_du.abs() < 1e-12 * q.a_dd, "{}", q.a_du);
            assert!(correlation_coefficient(&at_singular(l)).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficients_match_direct_arithmetic() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let q = gaussian_quadratic_form(&p);
        // Expanded from the exponent 2(λu x_d + λd x_u)²/(w² S²) + 4π (x_d − x_u)²/(L S).
        let (ld, lu, l, w) = (730e-9_f64, 910e-9_f64, 10e-3_f64, 50e-6_f64);
        let s = ld + lu;
        let a_dd = 2.0 * lu * lu / (w * w * s * s) + 4.0 * PI / (l * s);
        let a_du = 2.0 * ld * lu / (w * w * s * s) - 4.0 * PI / (l * s);
        assert!(((q.a_dd - a_dd) / a_dd).abs() < 1e-12);
        assert!(((q.a_du - a_du) / a_du).abs() < 1e-12);
        let det = q.a_dd * q.a_uu - q.a_du * q.a_du;
        assert!(((q.det() - det) / det).abs() < 1e-10);
        // w → ∞ limit of a_dd
        let wide = gaussian_quadratic_form(&p.with_pump_waist(1e3));
        assert!((wide.a_dd / (4.0 * PI / (l * s)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_matches_quadrature() {
        let p = SourceParams::reference(5e-3, 142e-6);
        let q = gaussian_quadratic_form(&p);
        let rule = GaussLegendre::cached(257);
        let wd = 1.0 / q.marginal_d().sqrt();
        let total = rule.integrate(-9.0 * wd, 9.0 * wd, |d| {
            let m = q.conditional_mean_u(d);
            let su = 1.0 / q.a_uu.sqrt();
            rule.integrate(m - 9.0 * su, m + 9.0 * su, |u| q.density(d, u))
        });
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn density_properties() {
        let p = SourceParams::reference(2e-3, 142e-6);
        let q = gaussian_quadratic_form(&p);
        assert_eq!(joint_density_gaussian(&p, 0.0, 0.0), q.norm);
        for (d, u) in [(1e-5, -3e-6), (4e-5, 2e-5), (-7e-6, 1e-6)] {
            assert_eq!(joint_density_gaussian(&p, d, u), joint_density_gaussian(&p, -d, -u));
        }
        // conditional 1/e half width at x_u = 0 is 1/sqrt(a_dd)
        let x = 1.0 / q.a_dd.sqrt();
        let ratio = joint_density_gaussian(&p, x, 0.0) / q.norm;
        assert!((ratio - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn factorizes_at_singular_waist() {
        let p = at_singular(5e-3);
        let q = gaussian_quadratic_form(&p);
        let xs: Vec<f64> = (-10..=10).map(|i| i as f64 * 4e-6).collect();
        for &d in &xs {
            for &u in &xs {
                let joint = q.density(d, u);
                let product = q.density(d, 0.0) * q.density(0.0, u) / q.norm;
                assert!(((joint - product) / product).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn correlation_tends_to_one() {
        let base = SourceParams::reference(2e-3, 1.0);
        let ws = base.singular_waist();
        let mut last = 0.0;
        for k in 1..=40 {
            let w = ws * 1.01 * 1.25f64.powi(k);
            let c = correlation_coefficient(&base.with_pump_waist(w));
            assert!(c > last && c < 1.0);
            last = c;
        }
        assert!(last > 0.999);
    }

    #[test]
    fn gaussian_grid_integrates_to_one() {
        let p = SourceParams::reference(10e-3, 50e-6);
        let q = gaussian_quadratic_form(&p);
        let wd = 1.0 / q.marginal_d().sqrt();
        let wu = 1.0 / q.marginal_u().sqrt();
        let d = gaussian_density_grid(
            &p,
            Grid1D::linspace(-6.0 * wd, 6.0 * wd, 401).unwrap(),
            Grid1D::linspace(-6.0 * wu, 6.0 * wu, 401).unwrap(),
        );
        assert!((d.integral() - 1.0).abs() < 1e-6, "{}", d.integral());
        let pearson = d.pearson();
        assert!((pearson - correlation_coefficient(&p)).abs() < 1e-6);
    }

    #[test]
    fn sinc_density_is_normalized_symmetric_and_close_to_gaussian() {
        let p = SourceParams::reference(5e-3, 214e-6);
        let q = gaussian_quadratic_form(&p);
        let cond_width = 1.0 / q.a_dd.sqrt();
        // resolve the correlation width; span ±3.5 marginal widths
        let wd = 1.0 / q.marginal_d().sqrt();
        let wu = 1.0 / q.marginal_u().sqrt();
        let n = 2 * ((3.5 * wd.max(wu) / (cond_width / 12.0)) as usize) + 1;
        let step = 7.0 * wd.max(wu) / (n - 1) as f64;
        let grid = Grid1D::centered(step, n).unwrap();
        let spec = SincGridSpec {
            grid_d: grid,
            grid_u: grid,
            momentum_intervals: 4096,
            kappa_max: 40.0,
        };
        let d = joint_density_sinc_1d(&p, &spec).unwrap();
        assert!((d.integral() - 1.0).abs() < 1e-12);
        let n = grid.len;
        for (i, j) in [(0, 5), (n / 3, n / 2), (n / 2 + 7, 2)] {
            let a = d.get(i, j);
            let b = d.get(n - 1 - i, n - 1 - j);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{a} vs {b}");
        }
        let width = half_width_1e(&d.conditional_d(n / 2)).unwrap().width;
        let gap = (width / cond_width - 1.0).abs();
        assert!(gap < 0.15, "sinc conditional width {width:e} vs gaussian {cond_width:e}");
    }

    #[test]
    fn sinc_rejects_narrow_grid() {
        let p = SourceParams::reference(5e-3, 214e-6);
        let grid = Grid1D::centered(1e-6, 11).unwrap();
        let spec = SincGridSpec {
            grid_d: grid,
            grid_u: grid,
            momentum_intervals: 512,
            kappa_max: 40.0,
        };
        assert!(matches!(joint_density_sinc_1d(&p, &spec), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn sinc_reports_coarse_momentum_grid() {
        let p = SourceParams::reference(5e-3, 50e-6);
        let mut spec = SincGridSpec::around(&p, 4.0, 101).unwrap();
        spec.momentum_intervals = 8;
        assert!(matches!(
            joint_density_sinc_1d(&p, &spec),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
