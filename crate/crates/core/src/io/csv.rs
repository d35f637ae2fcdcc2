use std::fmt::Write as _;

use super::fmt_f64;
use crate::biphoton::{Density2D, DensityModel};
use crate::error::{Error, Result};
use crate::signal::{Grid1D, Image2D, Plane, Profile1D};
use crate::spreads::SweepRow;

pub const SWEEP_COLUMNS: [&str; 8] = [
    "L_m",
    "w_p_m",
    "spread_v_m",
    "spread_g_psf_m",
    "spread_g_esf_m",
    "ratio",
    "w_sing_m",
    "d_min_m",
];

/// Written in place of values that do not exist at or below the separability waist.
pub const SEPARABLE_MARKER: &str = "SeparableState";

fn coordinate_column(plane: Plane) -> &'static str {
    match plane {
        Plane::Camera => "x_c_m",
        Plane::Object => "x_o_m",
    }
}

fn field(line: usize, text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{}`", text.trim())))
}

fn finite_field(line: usize, text: &str) -> Result<f64> {
    let v = field(line, text)?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value `{}`", text.trim())));
    }
    Ok(v)
}

/// Non-empty lines with their 1-based numbers and trailing `\r` removed.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn comment_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

/// Two-column CSV with a `# plane=` comment, a header and a unit row.
pub fn write_profile(profile: &Profile1D) -> String {
    let g = profile.grid;
    let mut out = format!(
        "# plane={} grid={},{},{}\n{},value\nm,1\n",
        profile.plane.as_str(),
        fmt_f64(g.start),
        fmt_f64(g.step),
        g.len,
        coordinate_column(profile.plane)
    );
    for (x, v) in g.points().zip(&profile.values) {
        let _ = writeln!(out, "{},{}", fmt_f64(x), fmt_f64(*v));
    }
    out
}

/// Parse a profile written by [`write_profile`] or any two-column
/// `x_c_m,value` / `x_o_m,value` CSV on a uniform grid.
///
/// Without a `# plane=` comment the plane follows the header column name.
pub fn parse_profile(text: &str) -> Result<Profile1D> {
    let mut plane = None;
    let mut grid_hint = None;
    let mut header_seen = false;
    let mut xs = Vec::new();
    let mut values = Vec::new();
    let mut last_line = 0;

    for (line, raw) in numbered_lines(text) {
        last_line = line;
        let l = raw.trim();
        if l.starts_with('#') {
            if let Some(p) = comment_value(l, "plane") {
                plane = Some(match p {
                    "camera" => Plane::Camera,
                    "object" => Plane::Object,
                    other => return Err(Error::parse(line, format!("unknown plane `{other}`"))),
                });
            }
            if let Some(g) = comment_value(l, "grid") {
                grid_hint = Some((line, g.to_string()));
            }
            continue;
        }
        let cols: Vec<&str> = l.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            return Err(Error::parse(line, format!("expected 2 columns, got {}", cols.len())));
        }
        if !header_seen {
            let header_plane = match cols[0] {
                "x_c_m" => Plane::Camera,
                "x_o_m" => Plane::Object,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("header must start with x_c_m or x_o_m, got `{other}`"),
                    ))
                }
            };
            if cols[1] != "value" {
                return Err(Error::parse(line, "second header column must be `value`"));
            }
            match plane {
                Some(p) if p != header_plane => {
                    return Err(Error::parse(line, "header column disagrees with # plane="))
                }
                _ => plane = Some(header_plane),
            }
            header_seen = true;
            continue;
        }
        if xs.is_empty() && cols == ["m", "1"] {
            continue;
        }
        xs.push(finite_field(line, cols[0])?);
        values.push(finite_field(line, cols[1])?);
    }

    if !header_seen {
        return Err(Error::parse(last_line.max(1), "missing header row"));
    }
    if xs.len() < 2 {
        return Err(Error::parse(last_line.max(1), "profile needs at least 2 samples"));
    }
    let from_points = Grid1D::from_points(&xs).map_err(|e| Error::parse(last_line, e.to_string()))?;
    let grid = match grid_hint {
        Some((line, hint)) => {
            let parts: Vec<&str> = hint.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::parse(line, "grid= needs start,step,len"));
            }
            let len: usize = parts[2]
                .parse()
                .map_err(|_| Error::parse(line, "invalid grid length"))?;
            let g = Grid1D::new(field(line, parts[0])?, field(line, parts[1])?, len)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            let consistent = len == xs.len()
                && xs
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| (x - g.at(i)).abs() <= 1e-6 * g.step);
            if !consistent {
                return Err(Error::parse(line, "grid= disagrees with the x column"));
            }
            g
        }
        None => from_points,
    };
    Profile1D::new(grid, values, plane.unwrap_or(Plane::Camera))
}

/// Comma-separated rows, one image row per line.
pub fn write_matrix(image: &Image2D) -> String {
    let mut out = String::with_capacity(image.data.len() * 12);
    for row in image.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Parse a numeric matrix. Lines starting with `#` are skipped.
pub fn parse_matrix(text: &str) -> Result<Image2D> {
    let mut width = None;
    let mut height = 0;
    let mut data = Vec::new();
    for (line, raw) in numbered_lines(text) {
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let before = data.len();
        for cell in raw.split(',') {
            data.push(field(line, cell)?);
        }
        let n = data.len() - before;
        match width {
            None => width = Some(n),
            Some(w) if w != n => {
                return Err(Error::parse(line, format!("row has {n} columns, expected {w}")))
            }
            _ => {}
        }
        height += 1;
    }
    let width = width.ok_or_else(|| Error::parse(1, "empty matrix"))?;
    Image2D::new(width, height, data).map_err(|e| Error::parse(1, e.to_string()))
}

/// Matrix CSV with `# model=` and `# x_d_m=[min,max,n] x_u_m=[min,max,n]` headers.
///
/// Rows run over `x_d`, columns over `x_u`.
pub fn write_density(density: &Density2D) -> String {
    let (gd, gu) = (density.grid_d, density.grid_u);
    let mut out = format!(
        "# model={}\n# x_d_m=[{},{},{}] x_u_m=[{},{},{}]\n",
        density.model.as_str(),
        fmt_f64(gd.start),
        fmt_f64(gd.end()),
        gd.len,
        fmt_f64(gu.start),
        fmt_f64(gu.end()),
        gu.len
    );
    for row in density.values.chunks(gu.len) {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

fn axis(line: usize, text: &str) -> Result<Grid1D> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::parse(line, format!("axis `{text}` must be [min,max,n]")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::parse(line, format!("axis `{text}` must be [min,max,n]")));
    }
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid sample count `{}`", parts[2])))?;
    Grid1D::linspace(finite_field(line, parts[0])?, finite_field(line, parts[1])?, n)
        .map_err(|e| Error::parse(line, e.to_string()))
}

pub fn parse_density(text: &str) -> Result<Density2D> {
    let mut lines = numbered_lines(text);
    let (l1, first) = lines.next().ok_or_else(|| Error::parse(1, "empty density file"))?;
    let model = match comment_value(first, "model") {
        Some("gaussian") => DensityModel::Gaussian,
        Some("sinc_numeric") => DensityModel::SincNumeric,
        Some(other) => return Err(Error::parse(l1, format!("unknown model `{other}`"))),
        None => return Err(Error::parse(l1, "first line must be `# model=...`")),
    };
    let (l2, second) = lines
        .next()
        .ok_or_else(|| Error::parse(l1 + 1, "missing axis header"))?;
    let gd = comment_value(second, "x_d_m").ok_or_else(|| Error::parse(l2, "missing x_d_m=[..]"))?;
    let gu = comment_value(second, "x_u_m").ok_or_else(|| Error::parse(l2, "missing x_u_m=[..]"))?;
    let (grid_d, grid_u) = (axis(l2, gd)?, axis(l2, gu)?);
    if grid_d.len.saturating_mul(grid_u.len) > 1 << 26 {
        return Err(Error::parse(l2, "density grid too large"));
    }

    let mut values = Vec::with_capacity(grid_d.len * grid_u.len);
    let mut rows = 0;
    for (line, raw) in lines {
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let before = values.len();
        for cell in raw.split(',') {
            values.push(finite_field(line, cell)?);
        }
        if values.len() - before != grid_u.len {
            return Err(Error::parse(
                line,
                format!("row has {} columns, expected {}", values.len() - before, grid_u.len),
            ));
        }
        rows += 1;
        if rows > grid_d.len {
            return Err(Error::parse(line, format!("more than {} rows", grid_d.len)));
        }
    }
    if rows != grid_d.len {
        return Err(Error::parse(l2, format!("expected {} rows, got {rows}", grid_d.len)));
    }
    Density2D::new(grid_d, grid_u, values, model)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| SEPARABLE_MARKER.to_string())
}

/// Sweep table with a unit row; rows at or below the separability waist
/// carry [`SEPARABLE_MARKER`] in the visibility-derived columns.
pub fn write_sweep(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_COLUMNS.join(",");
    out.push_str("\nm,m,m,m,m,1,m,m\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.crystal_length),
            fmt_f64(r.pump_waist),
            opt(r.spread_v),
            fmt_f64(r.spread_g_psf),
            fmt_f64(r.spread_g_esf),
            opt(r.ratio),
            fmt_f64(r.singular_waist),
            opt(r.d_min)
        );
    }
    out
}
