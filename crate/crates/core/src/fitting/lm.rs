//! Levenberg–Marquardt least squares with a central-difference Jacobian and
//! box constraints (enforced by clamping).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Profile1D;

/// One fit parameter: name, starting value, bounds and a typical magnitude
/// used for the finite-difference step when the value is near zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub init: f64,
    pub lower: f64,
    pub upper: f64,
    pub scale: f64,
}

impl ParamSpec {
    pub fn new(name: &str, init: f64) -> Self {
        ParamSpec {
            name: name.to_string(),
            init,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            scale: init.abs().max(f64::MIN_POSITIVE),
        }
    }

    pub fn bounded(self, lower: f64, upper: f64) -> Self {
        ParamSpec { lower, upper, ..self }
    }

    pub fn with_scale(self, scale: f64) -> Self {
        ParamSpec { scale, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub cost_tolerance: f64,
    /// Relative central-difference step.
    pub jacobian_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 200,
            step_tolerance: 1e-10,
            cost_tolerance: 1e-12,
            jacobian_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    /// `s²·(JᵀJ)⁺` at the solution, row-major.
    pub covariance: Vec<Vec<f64>>,
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.values[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.covariance[i][i].max(0.0).sqrt())
    }
}

fn residuals<M>(model: &M, p: &[f64], xs: &[f64], ys: &[f64], out: &mut [f64]) -> f64
where
    M: Fn(&[f64], &[f64], &mut [f64]),
{
    model(p, xs, out);
    let mut cost = 0.0;
    for (r, y) in out.iter_mut().zip(ys) {
        *r -= y;
        cost += *r * *r;
    }
    0.5 * cost
}

fn jacobian<M>(model: &M, p: &[f64], specs: &[ParamSpec], xs: &[f64], step: f64) -> DMatrix<f64>
where
    M: Fn(&[f64], &[f64], &mut [f64]),
{
    let m = xs.len();
    let mut jac = DMatrix::zeros(m, p.len());
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    let mut q = p.to_vec();
    for j in 0..p.len() {
        let h = step * p[j].abs().max(specs[j].scale);
        q[j] = p[j] + h;
        model(&q, xs, &mut plus);
        q[j] = p[j] - h;
        model(&q, xs, &mut minus);
        q[j] = p[j];
        for i in 0..m {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    jac
}

/// Minimize `Σ (model(p, x_i) − y_i)²`.
///
/// `model(params, xs, out)` writes one prediction per abscissa. Converges when
/// every parameter's step relative to `max(|p|, scale)` falls below
/// `step_tolerance` or the relative cost change below `cost_tolerance`.
pub fn fit_xy<M>(model: M, xs: &[f64], ys: &[f64], specs: &[ParamSpec], options: &FitOptions) -> Result<FitResult>
where
    M: Fn(&[f64], &[f64], &mut [f64]),
{
    let n = specs.len();
    let m = xs.len();
    if n == 0 {
        return Err(Error::InvalidFit("no parameters".into()));
    }
    if ys.len() != m || m < n + 2 {
        return Err(Error::InvalidFit(format!(
            "{m} samples ({} values) for {n} parameters; need at least {}",
            ys.len(),
            n + 2
        )));
    }
    if ys.iter().chain(xs).any(|v| !v.is_finite()) {
        return Err(Error::InvalidFit("data must be finite".into()));
    }
    for s in specs {
        if !(s.init.is_finite() && s.lower <= s.init && s.init <= s.upper && s.scale > 0.0) {
            return Err(Error::InvalidFit(format!(
                "parameter {} starts at {} outside [{}, {}]",
                s.name, s.init, s.lower, s.upper
            )));
        }
    }
    let clamp = |p: &mut [f64]| {
        for (v, s) in p.iter_mut().zip(specs) {
            *v = v.clamp(s.lower, s.upper);
        }
    };

    let mut p: Vec<f64> = specs.iter().map(|s| s.init).collect();
    let mut r = vec![0.0; m];
    let mut cost = residuals(&model, &p, xs, ys, &mut r);
    if !cost.is_finite() {
        return Err(Error::InvalidFit("model is not finite at the initial point".into()));
    }
    let mut lambda = 1e-3;
    let mut trial = p.clone();
    let mut r_trial = vec![0.0; m];
    let mut converged = cost == 0.0;
    let mut iterations = 0;

    while !converged && iterations < options.max_iterations {
        iterations += 1;
        let jac = jacobian(&model, &p, specs, xs, options.jacobian_step);
        if iterations == 1 && (0..n).any(|j| jac.column(j).iter().all(|&v| v == 0.0)) {
            return Err(Error::SingularNormalEquations);
        }
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * DVector::from_column_slice(&r);
        let max_diag = (0..n).map(|j| jtj[(j, j)]).fold(0.0, f64::max);
        if max_diag == 0.0 {
            return Err(Error::SingularNormalEquations);
        }

        loop {
            let mut a = jtj.clone();
            for j in 0..n {
                a[(j, j)] += lambda * jtj[(j, j)].max(1e-12 * max_diag);
            }
            let step = a.cholesky().map(|c| c.solve(&(-&grad)));
            let Some(delta) = step else {
                lambda *= 10.0;
                if lambda > 1e20 {
                    return Err(Error::SingularNormalEquations);
                }
                continue;
            };
            for j in 0..n {
                trial[j] = p[j] + delta[j];
            }
            clamp(&mut trial);
            // largest step relative to each parameter's own magnitude
            let rel_step = (0..n)
                .map(|j| (trial[j] - p[j]).abs() / p[j].abs().max(specs[j].scale))
                .fold(0.0, f64::max);
            let small_step = rel_step < options.step_tolerance;

            let new_cost = residuals(&model, &trial, xs, ys, &mut r_trial);
            if new_cost.is_finite() && new_cost <= cost {
                let change = (cost - new_cost) / cost.max(f64::MIN_POSITIVE);
                std::mem::swap(&mut p, &mut trial);
                std::mem::swap(&mut r, &mut r_trial);
                cost = new_cost;
                lambda = (lambda / 10.0).max(1e-12);
                converged = small_step || change < options.cost_tolerance || cost == 0.0;
                break;
            }
            if small_step {
                // no downhill step left at this resolution
                converged = true;
                break;
            }
            lambda *= 10.0;
            if lambda > 1e20 {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged { iterations });
    }

    let jac = jacobian(&model, &p, specs, xs, options.jacobian_step);
    let jtj = jac.transpose() * &jac;
    let s2 = 2.0 * cost / (m - n) as f64;
    let eps = 1e-14 * jtj.amax().max(f64::MIN_POSITIVE);
    let cov = jtj
        .pseudo_inverse(eps)
        .map_err(|_| Error::SingularNormalEquations)?
        * s2;
    Ok(FitResult {
        names: specs.iter().map(|s| s.name.clone()).collect(),
        values: p,
        covariance: (0..n).map(|i| (0..n).map(|j| cov[(i, j)]).collect()).collect(),
        residual_rms: (2.0 * cost / m as f64).sqrt(),
        iterations,
        converged,
    })
}

/// [`fit_xy`] on a sampled profile.
pub fn least_squares_fit<M>(model: M, data: &Profile1D, specs: &[ParamSpec], options: &FitOptions) -> Result<FitResult>
where
    M: Fn(&[f64], &[f64], &mut [f64]),
{
    let xs = data.grid.to_vec();
    fit_xy(model, &xs, &data.values, specs, options)
}
