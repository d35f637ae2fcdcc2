//! Interferogram stacks on disk: a JSON manifest next to one file per frame.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_matrix, read_pgm, write_file, write_matrix, write_pgm};
use crate::dpsh::{InterferogramStack, NoiseMeta, NoiseModel};
use crate::error::{Error, Result};
use crate::signal::Image2D;

pub const MANIFEST_FORMAT: &str = "qiul-stack/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameFormat {
    Csv,
    Pgm,
}

impl FrameFormat {
    fn extension(self) -> &'static str {
        match self {
            FrameFormat::Csv => "csv",
            FrameFormat::Pgm => "pgm",
        }
    }
}

/// Frame paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackManifest {
    pub format: String,
    pub phases: Vec<f64>,
    pub pixel_pitch_m: f64,
    /// Noise description in the `read:<f>,shot:on|off` form.
    pub noise: String,
    pub seed: u64,
    pub frame_format: FrameFormat,
    pub frames: Vec<String>,
}

impl StackManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let m: StackManifest =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("manifest: {e}")))?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::Schema(format!(
                "manifest format `{}`, expected `{MANIFEST_FORMAT}`",
                m.format
            )));
        }
        if m.frames.len() != m.phases.len() {
            return Err(Error::Schema(format!(
                "{} frames listed for {} phases",
                m.frames.len(),
                m.phases.len()
            )));
        }
        if !(m.pixel_pitch_m.is_finite() && m.pixel_pitch_m > 0.0) {
            return Err(Error::Schema(format!(
                "pixel_pitch_m must be positive, got {}",
                m.pixel_pitch_m
            )));
        }
        m.noise_meta()?;
        Ok(m)
    }

    pub fn noise_meta(&self) -> Result<NoiseMeta> {
        let model: NoiseModel = self
            .noise
            .parse()
            .map_err(|e| Error::Schema(format!("manifest noise: {e}")))?;
        Ok(NoiseMeta {
            model,
            seed: self.seed,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

fn load_frame(path: &Path, format: FrameFormat) -> Result<Image2D> {
    let corrupt = |message: String| Error::CorruptFrame {
        path: path.to_path_buf(),
        message,
    };
    let bytes = std::fs::read(path).map_err(|e| corrupt(e.to_string()))?;
    let image = match format {
        FrameFormat::Pgm => read_pgm(&bytes),
        FrameFormat::Csv => std::str::from_utf8(&bytes)
            .map_err(|e| Error::Schema(e.to_string()))
            .and_then(parse_matrix),
    }
    .map_err(|e| corrupt(e.to_string()))?;
    if image.data.iter().any(|v| !v.is_finite()) {
        return Err(corrupt("non-finite pixel".into()));
    }
    Ok(image)
}

/// Read a manifest and all frames it lists.
pub fn load_stack(manifest_path: &Path) -> Result<(StackManifest, InterferogramStack)> {
    let text = std::fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest = StackManifest::parse(&text)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let frames = manifest
        .frames
        .iter()
        .map(|name| load_frame(&dir.join(name), manifest.frame_format))
        .collect::<Result<Vec<_>>>()?;
    let stack = InterferogramStack {
        frames,
        phases: manifest.phases.clone(),
        pixel_pitch: manifest.pixel_pitch_m,
        noise: manifest.noise_meta()?,
    };
    stack.validate()?;
    Ok((manifest, stack))
}

/// Write `frame_NNN.<ext>` files and `manifest.json` into `dir`; returns the manifest path.
pub fn save_stack(dir: &Path, stack: &InterferogramStack, format: FrameFormat) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut frames = Vec::with_capacity(stack.frames.len());
    for (k, frame) in stack.frames.iter().enumerate() {
        let name = format!("frame_{k:03}.{}", format.extension());
        let path = dir.join(&name);
        match format {
            FrameFormat::Csv => write_file(&path, write_matrix(frame))?,
            FrameFormat::Pgm => write_file(&path, write_pgm(frame))?,
        }
        frames.push(name);
    }
    let manifest = StackManifest {
        format: MANIFEST_FORMAT.to_string(),
        phases: stack.phases.clone(),
        pixel_pitch_m: stack.pixel_pitch,
        noise: stack.noise.model.to_string(),
        seed: stack.noise.seed,
        frame_format: format,
        frames,
    };
    let path = dir.join("manifest.json");
    write_file(&path, manifest.to_json())?;
    Ok(path)
}
