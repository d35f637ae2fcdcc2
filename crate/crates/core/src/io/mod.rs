//! Text and binary file formats.
//!
//! Numbers are written with the shortest representation that parses back to
//! the same `f64`, so CSV round trips are exact.

mod csv;
mod manifest;
mod pgm;

pub use csv::{
    parse_density, parse_matrix, parse_profile, write_density, write_matrix, write_profile,
    write_sweep, SWEEP_COLUMNS, SEPARABLE_MARKER,
};
pub use manifest::{load_stack, save_stack, FrameFormat, StackManifest, MANIFEST_FORMAT};
pub use pgm::{read_pgm, write_pgm};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
