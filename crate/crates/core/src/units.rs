//! Length literals with unit suffixes.
//!
//! Every length inside the crate is in meters. Suffixed literals such as
//! `142um`, `2 mm` or `405nm` are converted here and nowhere else.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitError(pub String);

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UnitError {}

// Decimal exponents; the suffix shifts the exponent of the literal so that
// `25.4um` parses to the same double as `25.4e-6`.
const SUFFIXES: &[(&str, i32)] = &[
    ("nm", -9),
    ("um", -6),
    ("µm", -6),
    ("μm", -6),
    ("mm", -3),
    ("cm", -2),
    ("m", 0),
];

/// Parse a length such as `142um` into meters.
///
/// A bare number is taken as meters.
pub fn parse_length(text: &str) -> Result<f64, UnitError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(UnitError("empty length".into()));
    }
    let (number, shift) = SUFFIXES
        .iter()
        .find_map(|(suffix, shift)| t.strip_suffix(suffix).map(|n| (n.trim_end(), *shift)))
        .unwrap_or((t, 0));
    let invalid = || UnitError(format!("invalid length `{t}`"));
    number.parse::<f64>().map_err(|_| invalid())?;
    let (mantissa, exponent) = match number.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| invalid())?),
        None => (number, 0),
    };
    let meters: f64 = format!("{mantissa}e{}", exponent.saturating_add(shift))
        .parse()
        .map_err(|_| invalid())?;
    if !meters.is_finite() {
        return Err(UnitError(format!("length `{t}` is not finite")));
    }
    Ok(meters)
}

/// Parse a comma separated list of lengths, e.g. `2mm,5mm,10mm`.
pub fn parse_length_list(text: &str) -> Result<Vec<f64>, UnitError> {
    let values = text
        .split(',')
        .map(parse_length)
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(UnitError("empty length list".into()));
    }
    Ok(values)
}

/// Parse either a list (`50um,142um`) or a range `start:stop:logN` / `start:stop:linN`.
///
/// Ranges include both endpoints.
pub fn parse_length_range(text: &str) -> Result<Vec<f64>, UnitError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => parse_length_list(text),
        [start, stop, spacing] => {
            let start = parse_length(start)?;
            let stop = parse_length(stop)?;
            let spacing = spacing.trim();
            let (log, count) = if let Some(n) = spacing.strip_prefix("log") {
                (true, n)
            } else if let Some(n) = spacing.strip_prefix("lin") {
                (false, n)
            } else {
                return Err(UnitError(format!("range spacing `{spacing}` must be logN or linN")));
            };
            let count: usize = count
                .parse()
                .map_err(|_| UnitError(format!("invalid point count `{count}`")))?;
            if !(2..=1_000_000).contains(&count) {
                return Err(UnitError(format!("range needs 2..=1000000 points, got {count}")));
            }
            if log && (start <= 0.0 || stop <= 0.0) {
                return Err(UnitError("log range endpoints must be positive".into()));
            }
            Ok(spaced(start, stop, count, log))
        }
        _ => Err(UnitError(format!("cannot parse range `{text}`"))),
    }
}

pub(crate) fn spaced(start: f64, stop: f64, count: usize, log: bool) -> Vec<f64> {
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let f = i as f64 / last;
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else if log {
                (start.ln() + f * (stop.ln() - start.ln())).exp()
            } else {
                start + f * (stop - start)
            }
        })
        .collect()
}

/// Format meters with the most readable suffix (used in reports only).
pub fn format_length(meters: f64) -> String {
    let a = meters.abs();
    if a >= 1e-3 {
        format!("{:.4} mm", meters * 1e3)
    } else if a >= 1e-6 {
        format!("{:.4} um", meters * 1e6)
    } else {
        format!("{:.4} nm", meters * 1e9)
    }
}
