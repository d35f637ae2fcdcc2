//! Nonlinear least squares and the magnification fits built on it.

pub mod edge;
pub mod lm;
pub mod slit;

pub use edge::{
    fit_edge_profiles, EdgeFitOptions, EdgeFitReport, EdgeModelFit, MagnificationEstimate, GATE_THRESHOLD,
};
pub use lm::{fit_xy, least_squares_fit, FitOptions, FitResult, ParamSpec};
pub use slit::{
    fit_double_slit, fit_erf_edge, EdgeSharpness, MagnificationMeasurement, SLIT_DISTANCE, SLIT_DISTANCE_TOLERANCE,
};
