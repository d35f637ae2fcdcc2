use std::path::PathBuf;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` must be strictly positive and finite, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("energy conservation violated: |1/λp - (1/λd + 1/λu)|·λp = {mismatch:.3e} exceeds {tolerance}")]
    EnergyConservationViolated { mismatch: f64, tolerance: f64 },

    #[error("crystal length {crystal_length:.3e} m is below {minimum:.3e} m; the thick-crystal model does not apply")]
    ThinCrystalRegime { crystal_length: f64, minimum: f64 },

    #[error("magnification product mismatch: m_d = {m_d} but m_d_i·m_d_c = {product}")]
    InconsistentMagnification { m_d: f64, product: f64 },

    #[error("pump waist {pump_waist:.6e} m is at or below the separability waist {singular_waist:.6e} m")]
    SeparableState { pump_waist: f64, singular_waist: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sinc transform not converged: doubling the momentum grid changed the density by {difference:.3e}")]
    GridTooCoarse { difference: f64 },

    #[error("quadrature did not converge at x = {at:.6e} (relative change {change:.3e})")]
    QuadratureNotConverged { at: f64, change: f64 },

    #[error("profile never decays to 1/e of its peak on the {side} side")]
    NoCrossing { side: &'static str },

    #[error("profile has {count} local maxima above half of its peak")]
    MultiPeak { count: usize },

    #[error("edge profile does not span the 24%..76% range of its maximum")]
    RangeNotSpanned,

    #[error("at least 3 phase steps are required, got {0}")]
    TooFewPhases(usize),

    #[error("phase list does not determine offset, cosine and sine terms (rank < 3)")]
    DegeneratePhases,

    #[error("invalid interferogram stack: {0}")]
    InvalidStack(String),

    #[error("fit did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("normal equations are singular")]
    SingularNormalEquations,

    #[error("invalid fit setup: {0}")]
    InvalidFit(String),

    #[error("magnification gate failed: ratio deviation {deviation:.4} exceeds {threshold}")]
    GateFailed { deviation: f64, threshold: f64 },

    #[error("profile does not show two resolved peaks")]
    PeaksNotResolved,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("corrupt frame `{}`: {message}", path.display())]
    CorruptFrame { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
