//! Phase-boundary detection from the VQE error grid `E_d(Δ, α)`.
//!
//! The normalized gradient `(u_x, u_y) = (∂_α E_d, ∂_Δ E_d) / |∇E_d|` is turned
//! into an angle field; the directional coherence of a cell is the length of
//! the mean unit vector `(⟨cos θ⟩, ⟨sin θ⟩)` over a moving window. Aligned
//! arrows give values near 1, disordered or reversing arrows values near 0.
//! Boundaries are read off as the per-line minimum of the coherence.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{partial_derivatives, GridResult, GridSpec};

/// Gradients with norm at or below this are treated as zero and masked.
pub const ZERO_GRADIENT: f64 = 1e-12;

pub const DEFAULT_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub spec: GridSpec,
    /// Component along α.
    pub ux: Vec<f64>,
    /// Component along Δ.
    pub uy: Vec<f64>,
    pub defined: Vec<bool>,
}

impl VectorField {
    pub fn ux_grid(&self) -> Result<GridResult> {
        GridResult::new(self.spec, self.masked(&self.ux), "u_x")
    }

    pub fn uy_grid(&self) -> Result<GridResult> {
        GridResult::new(self.spec, self.masked(&self.uy), "u_y")
    }

    fn masked(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.defined).map(|(x, d)| if *d { *x } else { f64::NAN }).collect()
    }

    pub fn defined_count(&self) -> usize {
        self.defined.iter().filter(|d| **d).count()
    }
}

pub fn vector_field(e_d: &GridResult) -> Result<VectorField> {
    let (d_delta, d_alpha) = partial_derivatives(e_d)?;
    let len = e_d.values.len();
    let (mut ux, mut uy, mut defined) = (vec![0.0; len], vec![0.0; len], vec![false; len]);
    for k in 0..len {
        let norm = d_alpha[k].hypot(d_delta[k]);
        if norm.is_finite() && norm > ZERO_GRADIENT {
            ux[k] = d_alpha[k] / norm;
            uy[k] = d_delta[k] / norm;
            defined[k] = true;
        }
    }
    Ok(VectorField { spec: e_d.spec, ux, uy, defined })
}

/// Full-quadrant angle of each arrow in `(-π, π]`; masked cells are `NaN`.
pub fn angle_field(v: &VectorField) -> GridResult {
    let values = (0..v.ux.len())
        .map(|k| {
            if !v.defined[k] {
                return f64::NAN;
            }
            let t = v.uy[k].atan2(v.ux[k]);
            // atan2 returns -π for (-1, -0.0)
            if t == -PI {
                PI
            } else {
                t
            }
        })
        .collect();
    GridResult { spec: v.spec, values, label: "gradient angle".into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowShape {
    /// `window × window` neighbourhood.
    #[default]
    Square,
    /// `window` cells along Δ within the same α row.
    Row,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceGrid {
    pub spec: GridSpec,
    /// Values in `[0, 1]`; `NaN` where the window held no defined angle.
    pub values: Vec<f64>,
    pub window: usize,
    pub shape: WindowShape,
}

impl CoherenceGrid {
    pub fn to_grid(&self) -> GridResult {
        GridResult { spec: self.spec, values: self.values.clone(), label: "directional coherence".into() }
    }
}

pub fn directional_coherence(angles: &GridResult, window: usize, shape: WindowShape) -> Result<CoherenceGrid> {
    if window.is_multiple_of(2) {
        return Err(Error::Domain(format!("coherence window must be odd, got {window}")));
    }
    let (rows, cols) = (angles.spec.rows(), angles.spec.cols());
    let half = window / 2;
    let row_half = match shape {
        WindowShape::Square => half,
        WindowShape::Row => 0,
    };
    let values = (0..rows * cols)
        .map(|k| {
            let (r, c) = (k / cols, k % cols);
            let (mut s, mut co, mut count) = (0.0, 0.0, 0usize);
            for rr in r.saturating_sub(row_half)..=(r + row_half).min(rows - 1) {
                for cc in c.saturating_sub(half)..=(c + half).min(cols - 1) {
                    let t = angles.at(rr, cc);
                    if !t.is_nan() {
                        s += t.sin();
                        co += t.cos();
                        count += 1;
                    }
                }
            }
            if count == 0 {
                f64::NAN
            } else {
                let n = count as f64;
                (s / n).hypot(co / n)
            }
        })
        .collect();
    Ok(CoherenceGrid { spec: angles.spec, values, window, shape })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RidgeMode {
    /// One critical α per Δ column.
    AlongAlpha,
    /// One critical Δ per α row.
    AlongDelta,
}

impl RidgeMode {
    pub fn tag(&self) -> &'static str {
        match self {
            RidgeMode::AlongAlpha => "ridge-along-alpha",
            RidgeMode::AlongDelta => "ridge-along-delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub mode: RidgeMode,
    /// `(line coordinate, critical coordinate)`: `(Δ, α_crit)` or `(α, Δ_crit)`.
    pub points: Vec<(f64, f64)>,
    /// Line coordinates that were fully masked and skipped.
    pub skipped: Vec<f64>,
    /// Set when no scanned line had any variation in coherence.
    pub degenerate: bool,
}

impl BoundaryCurve {
    /// Critical coordinate on the scanned line closest to `line`.
    pub fn critical_near(&self, line: f64) -> Option<f64> {
        self.points.iter().min_by(|a, b| (a.0 - line).abs().total_cmp(&(b.0 - line).abs())).map(|p| p.1)
    }
}

/// Per-line minimum of the coherence; ties resolve to the smallest coordinate.
pub fn extract_boundary(c: &CoherenceGrid, mode: RidgeMode) -> BoundaryCurve {
    let (rows, cols) = (c.spec.rows(), c.spec.cols());
    let (lines, len) = match mode {
        RidgeMode::AlongAlpha => (cols, rows),
        RidgeMode::AlongDelta => (rows, cols),
    };
    let mut points = Vec::with_capacity(lines);
    let mut skipped = Vec::new();
    let mut degenerate = true;
    for line in 0..lines {
        let at = |k: usize| match mode {
            RidgeMode::AlongAlpha => c.values[k * cols + line],
            RidgeMode::AlongDelta => c.values[line * cols + k],
        };
        let (line_axis, scan_axis) = match mode {
            RidgeMode::AlongAlpha => (&c.spec.delta, &c.spec.alpha),
            RidgeMode::AlongDelta => (&c.spec.alpha, &c.spec.delta),
        };
        let mut best: Option<(usize, f64)> = None;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..len {
            let v = at(k);
            if v.is_nan() {
                continue;
            }
            lo = lo.min(v);
            hi = hi.max(v);
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        match best {
            Some((k, _)) => {
                if hi - lo > 1e-12 {
                    degenerate = false;
                }
                points.push((line_axis.value(line), scan_axis.value(k)));
            }
            None => {
                log::warn!("{}: line at {} is fully masked, skipped", mode.tag(), line_axis.value(line));
                skipped.push(line_axis.value(line));
            }
        }
    }
    BoundaryCurve { mode, points, skipped, degenerate }
}

/// Mean-field estimate of `E_d` in the ferromagnetic phase:
/// `(|Δ|/4) |Σ_{i≠j} (1 - ε_i ε_j) / |i-j|^α|` with `ε_i = +1` on even sites, `-1` on odd.
pub fn mean_field_ed(delta: f64, alpha: f64, n: usize) -> Result<f64> {
    if n < 2 || alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("mean-field E_d needs N >= 2 and alpha > 0, got N = {n}, alpha = {alpha}")));
    }
    let eps = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += (1.0 - eps(i) * eps(j)) / (i.abs_diff(j) as f64).powf(alpha);
            }
        }
    }
    Ok(delta.abs() / 4.0 * sum.abs())
}

/// Every intermediate of the coherence analysis.
#[derive(Debug, Clone)]
pub struct PhaseAnalysis {
    pub field: VectorField,
    pub angles: GridResult,
    pub coherence: CoherenceGrid,
    pub along_delta: BoundaryCurve,
    pub along_alpha: BoundaryCurve,
}

pub fn analyze(e_d: &GridResult, window: usize, shape: WindowShape) -> Result<PhaseAnalysis> {
    let field = vector_field(e_d)?;
    let angles = angle_field(&field);
    let coherence = directional_coherence(&angles, window, shape)?;
    let along_delta = extract_boundary(&coherence, RidgeMode::AlongDelta);
    let along_alpha = extract_boundary(&coherence, RidgeMode::AlongAlpha);
    Ok(PhaseAnalysis { field, angles, coherence, along_delta, along_alpha })
}
