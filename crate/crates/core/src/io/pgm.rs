//! Binary (`P5`) greymap frames.

use crate::error::{Error, Result};
use crate::signal::Image2D;

const MAX_PIXELS: usize = 1 << 26;

/// Encode as 16-bit `P5`, rounding to the nearest count and clamping to `[0, 65535]`.
pub fn write_pgm(image: &Image2D) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", image.width, image.height).into_bytes();
    out.reserve(image.data.len() * 2);
    for &v in &image.data {
        let c = if v.is_nan() { 0.0 } else { v.round().clamp(0.0, 65535.0) };
        out.extend_from_slice(&(c as u16).to_be_bytes());
    }
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos || self.pos - start > 9 {
            return Err(Error::Schema(format!("PGM header: invalid {what}")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("at most 9 digits"))
    }
}

/// Decode a `P5` greymap with 8- or 16-bit samples into counts.
pub fn read_pgm(bytes: &[u8]) -> Result<Image2D> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::Schema("not a binary PGM (missing P5 magic)".into()));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 || width.saturating_mul(height) > MAX_PIXELS {
        return Err(Error::Schema(format!("PGM size {width}x{height} out of range")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Schema(format!("PGM maxval {maxval} out of range")));
    }
    match bytes.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(Error::Schema("PGM header not terminated by whitespace".into())),
    }
    let sample = if maxval < 256 { 1 } else { 2 };
    let body = &bytes[h.pos..];
    let need = width * height * sample;
    if body.len() < need {
        return Err(Error::Schema(format!(
            "PGM body has {} bytes, expected {need}",
            body.len()
        )));
    }
    let data = if sample == 1 {
        body[..need].iter().map(|&b| b as f64).collect()
    } else {
        body[..need]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64)
            .collect()
    };
    Image2D::new(width, height, data)
}
