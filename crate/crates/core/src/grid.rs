//! Rectangular (Δ, α) grids and the finite-difference helpers shared by the
//! energy and phase-detection code.

use crate::error::{Error, Result};

/// Evenly spaced points `min, …, max` along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::Domain(format!("axis bounds must be finite, got {min}:{max}")));
        }
        if count == 0 {
            return Err(Error::Domain("axis needs at least one point".into()));
        }
        if min > max || (count == 1 && min != max) || (count > 1 && min == max) {
            return Err(Error::Domain(format!("inconsistent axis {min}:{max}:{count}")));
        }
        Ok(Axis { min, max, count })
    }

    /// Builds an axis from a step; the last point is the largest `min + k·step ≤ max`
    /// (with a small slack for rounding).
    pub fn from_step(min: f64, max: f64, step: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::Domain(format!("axis step must be positive, got {step}")));
        }
        if min > max {
            return Err(Error::Domain(format!("axis min {min} exceeds max {max}")));
        }
        let intervals = ((max - min) / step + 1e-9).floor() as usize;
        Axis::new(min, min + intervals as f64 * step, intervals + 1)
    }

    pub fn step(&self) -> f64 {
        if self.count > 1 {
            (self.max - self.min) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }

    /// Index of the point closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        (0..self.count)
            .min_by(|&a, &b| (self.value(a) - x).abs().total_cmp(&(self.value(b) - x).abs()))
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub delta: Axis,
    pub alpha: Axis,
}

impl GridSpec {
    pub fn new(delta: Axis, alpha: Axis) -> Self {
        GridSpec { delta, alpha }
    }

    pub fn rows(&self) -> usize {
        self.alpha.count
    }

    pub fn cols(&self) -> usize {
        self.delta.count
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(delta, alpha)` of the cell at flat index `k`.
    pub fn coords(&self, k: usize) -> (f64, f64) {
        (self.delta.value(k % self.cols()), self.alpha.value(k / self.cols()))
    }
}

/// Scalar field over a [`GridSpec`]. Rows are indexed by α, columns by Δ.
/// `NaN` marks a masked cell; infinities are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub label: String,
}

impl GridResult {
    pub fn new(spec: GridSpec, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Dimension { expected: spec.len(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| v.is_infinite()) {
            return Err(Error::Numeric(format!("grid contains {v}")));
        }
        Ok(GridResult { spec, values, label: label.into() })
    }

    pub fn from_fn(spec: GridSpec, label: &str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = (0..spec.len()).map(|k| {
            let (d, a) = spec.coords(k);
            f(d, a)
        });
        GridResult::new(spec, values.collect(), label)
    }

    /// Value at α-row `row`, Δ-column `col`.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.spec.cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn map(&self, label: &str, f: impl Fn(f64) -> f64) -> Self {
        GridResult { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect(), label: label.into() }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().filter(|v| !v.is_nan()).fold(f64::INFINITY, f64::min)
    }
}

fn derivative(values: &[f64], step: f64, k: usize) -> f64 {
    let n = values.len();
    if k == 0 {
        (values[1] - values[0]) / step
    } else if k + 1 == n {
        (values[n - 1] - values[n - 2]) / step
    } else {
        (values[k + 1] - values[k - 1]) / (2.0 * step)
    }
}

/// `(∂/∂Δ, ∂/∂α)`: central differences inside, first-order one-sided at the borders.
pub fn partial_derivatives(g: &GridResult) -> Result<(Vec<f64>, Vec<f64>)> {
    let (rows, cols) = (g.spec.rows(), g.spec.cols());
    if rows < 3 || cols < 3 {
        return Err(Error::Domain(format!("finite differences need at least 3x3 points, got {rows}x{cols}")));
    }
    let (hd, ha) = (g.spec.delta.step(), g.spec.alpha.step());
    let mut d_delta = vec![0.0; g.values.len()];
    let mut d_alpha = vec![0.0; g.values.len()];
    let mut column = vec![0.0; rows];
    for c in 0..cols {
        for (r, slot) in column.iter_mut().enumerate() {
            *slot = g.at(r, c);
        }
        for r in 0..rows {
            d_delta[r * cols + c] = derivative(g.row(r), hd, c);
            d_alpha[r * cols + c] = derivative(&column, ha, r);
        }
    }
    Ok((d_delta, d_alpha))
}
