//! Library side of the `qiul` command-line tool.

pub mod commands;
pub mod pipeline;

use qiul::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Process exit status for an error: 2 for invalid input, 3 for numerical
/// failures, 4 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::GridTooCoarse { .. }
        | Error::QuadratureNotConverged { .. }
        | Error::NotConverged { .. }
        | Error::SingularNormalEquations
        | Error::GateFailed { .. }
        | Error::NoCrossing { .. }
        | Error::MultiPeak { .. }
        | Error::RangeNotSpanned
        | Error::PeaksNotResolved => EXIT_NUMERICAL,
        Error::NonPositiveParameter { .. }
        | Error::EnergyConservationViolated { .. }
        | Error::ThinCrystalRegime { .. }
        | Error::InconsistentMagnification { .. }
        | Error::SeparableState { .. }
        | Error::InvalidGrid(_)
        | Error::TooFewPhases(_)
        | Error::DegeneratePhases
        | Error::InvalidStack(_)
        | Error::InvalidFit(_)
        | Error::Parse { .. }
        | Error::Schema(_)
        | Error::CorruptFrame { .. } => EXIT_VALIDATION,
    }
}
