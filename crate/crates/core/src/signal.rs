//! Uniformly sampled 1D profiles and 2D images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform, strictly increasing sample positions `start + i·step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "start {start} / step {step} must be finite with step > 0"
            )));
        }
        if len < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {len}")));
        }
        Ok(Grid1D { start, step, len })
    }

    /// `len` points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 || !(hi > lo) {
            return Err(Error::InvalidGrid(format!(
                "linspace needs lo < hi and len >= 2 (lo={lo}, hi={hi}, len={len})"
            )));
        }
        Grid1D::new(lo, (hi - lo) / (len - 1) as f64, len)
    }

    /// `len` points centred on zero with spacing `step`.
    pub fn centered(step: f64, len: usize) -> Result<Self> {
        Grid1D::new(-0.5 * (len as f64 - 1.0) * step, step, len)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.at(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.points().collect()
    }

    /// Same span with `factor` times the samples.
    pub fn refined(&self, factor: usize) -> Self {
        let len = (self.len - 1) * factor + 1;
        Grid1D {
            start: self.start,
            step: self.step / factor as f64,
            len,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Grid1D {
            start: self.start * factor,
            step: self.step * factor,
            len: self.len,
        }
    }

    /// Build from explicit coordinates, checking uniformity to 1e-6 of the step.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid("need at least 2 samples".into()));
        }
        let n = points.len();
        let step = (points[n - 1] - points[0]) / (n - 1) as f64;
        let grid = Grid1D::new(points[0], step, n)?;
        for (i, &x) in points.iter().enumerate() {
            if !x.is_finite() || (x - grid.at(i)).abs() > 1e-6 * step {
                return Err(Error::InvalidGrid(format!(
                    "sample {i} at {x} breaks uniform spacing {step}"
                )));
            }
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    Camera,
    Object,
}

impl Plane {
    pub fn as_str(self) -> &'static str {
        match self {
            Plane::Camera => "camera",
            Plane::Object => "object",
        }
    }
}

/// Real-valued signal on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub plane: Plane,
}

impl Profile1D {
    pub fn new(grid: Grid1D, values: Vec<f64>, plane: Plane) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len
            )));
        }
        Ok(Profile1D {
            grid,
            values,
            plane,
        })
    }

    /// Sample `f` on `grid`.
    pub fn sample(grid: Grid1D, plane: Plane, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Profile1D {
            grid,
            values,
            plane,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.grid.at(i)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Contiguous sub-profile `[lo, hi)`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if hi > self.len() || hi < lo + 2 {
            return Err(Error::InvalidGrid(format!(
                "slice {lo}..{hi} out of range for {} samples",
                self.len()
            )));
        }
        Ok(Profile1D {
            grid: Grid1D {
                start: self.grid.at(lo),
                step: self.grid.step,
                len: hi - lo,
            },
            values: self.values[lo..hi].to_vec(),
            plane: self.plane,
        })
    }

    /// Reverse the coordinate axis (`x → -x`), keeping the grid increasing.
    pub fn mirrored(&self) -> Self {
        let grid = Grid1D {
            start: -self.grid.end(),
            step: self.grid.step,
            len: self.grid.len,
        };
        let values = self.values.iter().rev().copied().collect();
        Profile1D {
            grid,
            values,
            plane: self.plane,
        }
    }
}

/// Row-major image of `width × height` pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Image2D {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Image2D {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid("image dimensions must be nonzero".into()));
        }
        if data.len() != width * height {
            return Err(Error::InvalidGrid(format!(
                "{} pixels for a {width}x{height} image",
                data.len()
            )));
        }
        Ok(Image2D {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Image2D {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Image2D {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.width)
    }

    pub fn same_shape(&self, other: &Image2D) -> bool {
        self.width == other.width && self.height == other.height
    }
}
