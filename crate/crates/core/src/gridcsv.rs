//! Long-form grid CSV: header `delta,alpha,value`, one row per cell, α-major
//! then Δ ascending. Numbers use 17 significant digits so a write/read cycle
//! is exact; masked cells are written as `NaN`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridResult, GridSpec};

pub const HEADER: [&str; 3] = ["delta", "alpha", "value"];

/// Round-trip-safe scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(g: &GridResult) -> String {
    let mut out = String::with_capacity(64 * (g.values.len() + 1));
    out.push_str(&HEADER.join(","));
    out.push('\n');
    for (k, v) in g.values.iter().enumerate() {
        let (d, a) = g.spec.coords(k);
        out.push_str(&format!("{},{},{}\n", fmt_num(d), fmt_num(a), fmt_num(*v)));
    }
    out
}

pub fn read_csv(path: &Path) -> Result<GridResult> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

/// Parses grid CSV text; `path` is only used in error messages.
pub fn parse_csv(text: &str, path: &Path) -> Result<GridResult> {
    let perr = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| perr(1, e.to_string()))?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(perr(1, format!("expected header `{}`, found `{}`", HEADER.join(","), header.iter().collect::<Vec<_>>().join(","))));
    }

    let mut cells: Vec<[f64; 3]> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            perr(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(perr(line, format!("expected 3 columns, found {}", rec.len())));
        }
        let mut row = [0.0; 3];
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| perr(line, format!("column {} ({}): cannot parse `{field}` as a number", c + 1, HEADER[c])))?;
            if v.is_infinite() || (c < 2 && v.is_nan()) {
                return Err(perr(line, format!("column {} ({}): value `{field}` is not allowed", c + 1, HEADER[c])));
            }
            row[c] = v;
        }
        cells.push(row);
        lines.push(line);
    }
    if cells.is_empty() {
        return Err(perr(1, "no data rows".into()));
    }

    let alpha0 = cells[0][1];
    let cols = cells.iter().take_while(|r| r[1] == alpha0).count();
    if !cells.len().is_multiple_of(cols) {
        return Err(perr(lines[cells.len() - 1], format!("{} rows do not form complete α rows of {cols} cells", cells.len())));
    }
    let rows = cells.len() / cols;
    let axis = |min: f64, max: f64, count: usize, line: usize, name: &str| {
        Axis::new(min, max, count).map_err(|e| perr(line, format!("{name} axis: {e}")))
    };
    let delta = axis(cells[0][0], cells[cols - 1][0], cols, lines[cols - 1], "delta")?;
    let alpha = axis(alpha0, cells[cells.len() - 1][1], rows, lines[cells.len() - 1], "alpha")?;
    let spec = GridSpec::new(delta, alpha);

    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
    for (k, r) in cells.iter().enumerate() {
        let (d, a) = spec.coords(k);
        if !close(r[0], d) {
            return Err(perr(lines[k], format!("column 1 (delta): {} breaks the uniform ascending Δ axis (expected {d})", r[0])));
        }
        if !close(r[1], a) {
            return Err(perr(lines[k], format!("column 2 (alpha): {} breaks the uniform α-major order (expected {a})", r[1])));
        }
    }
    let values = cells.iter().map(|r| r[2]).collect();
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    GridResult::new(spec, values, label)
}
