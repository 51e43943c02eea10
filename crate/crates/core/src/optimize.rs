//! Derivative-free minimization by linear approximation on a simplex
//! (COBYLA without constraints).
//!
//! The method keeps `n + 1` interpolation points. The best one is the pivot;
//! the other `n` are stored as displacements from it together with the
//! inverse of the displacement matrix, which gives the gradient of the linear
//! interpolant. Each iteration either steps a distance `rho` downhill along
//! that gradient or, after an unsuccessful step on a degenerate simplex,
//! replaces one vertex to restore its geometry. `rho` is halved when steps
//! stop paying off and the run ends when it reaches `x_tolerance`.

use nalgebra::DMatrix;

use crate::ansatz::ParameterVector;
use crate::error::{Error, Result};

/// Minimum fraction of the predicted decrease a step must achieve to keep `rho`.
const GOOD_RATIO: f64 = 0.1;
/// A vertex closer than this multiple of `rho` to the opposite face is degenerate.
const MIN_SIGMA: f64 = 0.25;
/// A vertex further than this multiple of `rho` from the pivot is stale.
const MAX_ETA: f64 = 2.1;
/// Length of a geometry-repair step relative to `rho`.
const GEOMETRY_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Objective evaluation budget.
    pub max_evals: usize,
    /// Starting trust-region radius in radians.
    pub initial_step: f64,
    /// Final trust-region radius.
    pub x_tolerance: f64,
    /// Stop once the simplex spans less than this in objective value when `rho` would shrink.
    pub f_tolerance: f64,
    /// Seed for callers that randomize starting points. The minimizer itself is deterministic.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { max_evals: 4000, initial_step: 0.1, x_tolerance: 1e-6, f_tolerance: 1e-9, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals < 1 {
            return Err(Error::Domain("max_evals must be at least 1".into()));
        }
        let positive = |x: f64| x > 0.0;
        if !positive(self.initial_step) || !positive(self.x_tolerance) || !positive(self.f_tolerance) {
            return Err(Error::Domain(format!("step and tolerances must be positive: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_x: ParameterVector,
    pub best_f: f64,
    pub evals_used: usize,
    /// `false` when the budget ran out before the tolerances were met.
    pub converged: bool,
}

struct Counted<F> {
    f: F,
    evals: usize,
    max_evals: usize,
    best_x: Vec<f64>,
    best_f: f64,
}

enum Eval {
    Value(f64),
    Exhausted,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> Result<Eval> {
        if self.evals >= self.max_evals {
            return Ok(Eval::Exhausted);
        }
        self.evals += 1;
        let v = (self.f)(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { value: v, x: x.to_vec() });
        }
        if v < self.best_f {
            self.best_f = v;
            self.best_x.copy_from_slice(x);
        }
        Ok(Eval::Value(v))
    }

    fn finish(self, converged: bool) -> Result<OptimizationResult> {
        Ok(OptimizationResult {
            best_x: ParameterVector::new(self.best_x)?,
            best_f: self.best_f,
            evals_used: self.evals,
            converged,
        })
    }
}

struct Simplex {
    x0: Vec<f64>,
    f0: f64,
    /// `disp[j]` is vertex `j` minus the pivot.
    disp: Vec<Vec<f64>>,
    fval: Vec<f64>,
    /// Rows of the inverse of the matrix whose columns are `disp`.
    inv: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl Simplex {
    fn n(&self) -> usize {
        self.x0.len()
    }

    /// Makes the lowest vertex the pivot.
    fn pivot(&mut self) {
        let Some(l) = (0..self.n()).filter(|&j| self.fval[j] < self.f0).min_by(|&a, &b| self.fval[a].total_cmp(&self.fval[b]))
        else {
            return;
        };
        let shift = self.disp[l].clone();
        for (x, s) in self.x0.iter_mut().zip(&shift) {
            *x += s;
        }
        std::mem::swap(&mut self.f0, &mut self.fval[l]);
        for (j, d) in self.disp.iter_mut().enumerate() {
            if j == l {
                d.iter_mut().for_each(|v| *v = -*v);
            } else {
                d.iter_mut().zip(&shift).for_each(|(v, s)| *v -= s);
            }
        }
        let n = self.n();
        let sum: Vec<f64> = (0..n).map(|i| self.inv.iter().map(|row| row[i]).sum()).collect();
        self.inv[l] = sum.into_iter().map(|v| -v).collect();
    }

    /// Replaces vertex `l` by `pivot + d` with value `f`.
    fn replace(&mut self, l: usize, d: Vec<f64>, f: f64) {
        let scale = dot(&self.inv[l], &d);
        let new_row: Vec<f64> = self.inv[l].iter().map(|v| v / scale).collect();
        for (j, row) in self.inv.iter_mut().enumerate() {
            if j != l {
                let t = dot(row, &d);
                row.iter_mut().zip(&new_row).for_each(|(v, w)| *v -= t * w);
            }
        }
        self.inv[l] = new_row;
        self.disp[l] = d;
        self.fval[l] = f;
    }

    /// Recomputes the inverse from scratch. Returns false if the simplex is singular.
    fn reinvert(&mut self) -> bool {
        let n = self.n();
        let m = DMatrix::from_fn(n, n, |i, j| self.disp[j][i]);
        match m.try_inverse() {
            Some(inv) => {
                for (j, row) in self.inv.iter_mut().enumerate() {
                    for (i, v) in row.iter_mut().enumerate() {
                        *v = inv[(j, i)];
                    }
                }
                true
            }
            None => false,
        }
    }

    fn gradient(&self) -> Vec<f64> {
        let n = self.n();
        let mut g = vec![0.0; n];
        for (row, fj) in self.inv.iter().zip(&self.fval) {
            let df = fj - self.f0;
            g.iter_mut().zip(row).for_each(|(gi, r)| *gi += r * df);
        }
        g
    }

    /// A vertex whose removal would most improve the simplex shape, if any is out of bounds.
    fn worst_vertex(&self, rho: f64) -> Option<usize> {
        let eta: Vec<f64> = self.disp.iter().map(|d| norm(d)).collect();
        let far = (0..self.n()).filter(|&j| eta[j] > MAX_ETA * rho).max_by(|&a, &b| eta[a].total_cmp(&eta[b]));
        if far.is_some() {
            return far;
        }
        let sigma: Vec<f64> = self.inv.iter().map(|r| 1.0 / norm(r)).collect();
        (0..self.n()).filter(|&j| sigma[j] < MIN_SIGMA * rho).min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]))
    }

    fn spread(&self) -> f64 {
        self.fval.iter().fold(0.0f64, |m, f| m.max(f - self.f0))
    }
}

/// Minimizes `f` starting from `x0`.
///
/// Returns the best point seen. Exhausting the budget is not an error; it is
/// reported through `converged = false`.
pub fn minimize<F>(f: F, x0: &ParameterVector, cfg: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let n = x0.len();
    let mut obj = Counted { f, evals: 0, max_evals: cfg.max_evals, best_x: x0.as_slice().to_vec(), best_f: f64::INFINITY };
    let Eval::Value(f0) = obj.eval(x0.as_slice())? else { unreachable!("budget is at least one") };
    if n == 0 {
        return obj.finish(true);
    }

    let rho_end = cfg.x_tolerance.min(cfg.initial_step);
    let mut rho = cfg.initial_step;
    let mut sx = Simplex {
        x0: x0.as_slice().to_vec(),
        f0,
        disp: Vec::with_capacity(n),
        fval: Vec::with_capacity(n),
        inv: Vec::with_capacity(n),
    };
    for j in 0..n {
        let mut x = sx.x0.clone();
        x[j] += rho;
        let Eval::Value(fj) = obj.eval(&x)? else { return obj.finish(false) };
        let mut d = vec![0.0; n];
        d[j] = rho;
        let mut r = vec![0.0; n];
        r[j] = 1.0 / rho;
        sx.disp.push(d);
        sx.fval.push(fj);
        sx.inv.push(r);
    }

    let mut poor_step = false;
    let mut x = vec![0.0; n];
    loop {
        sx.pivot();

        if poor_step {
            if let Some(l) = sx.worst_vertex(rho) {
                // geometry repair: move along the normal of the face opposite vertex l
                let g = sx.gradient();
                let row = &sx.inv[l];
                let scale = GEOMETRY_STEP * rho / norm(row);
                let mut d: Vec<f64> = row.iter().map(|v| v * scale).collect();
                if dot(&g, &d) > 0.0 {
                    d.iter_mut().for_each(|v| *v = -*v);
                }
                x.iter_mut().zip(sx.x0.iter().zip(&d)).for_each(|(xi, (a, b))| *xi = a + b);
                let Eval::Value(fx) = obj.eval(&x)? else { return obj.finish(false) };
                sx.replace(l, d, fx);
                poor_step = false;
                continue;
            }
            // well-posed simplex and still no progress: shrink
            if rho <= rho_end || sx.spread() <= cfg.f_tolerance {
                return obj.finish(true);
            }
            rho *= 0.5;
            if rho <= 1.5 * rho_end {
                rho = rho_end;
            }
            if !sx.reinvert() {
                return Err(Error::Numeric("interpolation simplex became singular".into()));
            }
            poor_step = false;
            continue;
        }

        let g = sx.gradient();
        let gnorm = norm(&g);
        if !gnorm.is_finite() || gnorm <= 0.0 {
            poor_step = true;
            continue;
        }
        let d: Vec<f64> = g.iter().map(|v| -rho * v / gnorm).collect();
        x.iter_mut().zip(sx.x0.iter().zip(&d)).for_each(|(xi, (a, b))| *xi = a + b);
        let Eval::Value(fx) = obj.eval(&x)? else { return obj.finish(false) };
        let predicted = rho * gnorm;
        let actual = sx.f0 - fx;

        // choose the vertex to drop: volume factor, weighted towards far vertices
        let reach = 1.1 * rho;
        let threshold = if actual > 0.0 { 0.0 } else { 1.0 };
        let mut best = None;
        let mut best_w = threshold;
        for j in 0..n {
            let mut w = dot(&sx.inv[j], &d).abs();
            let dist = sx.disp[j].iter().zip(&d).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            if dist > reach {
                w *= dist / reach;
            }
            if w > best_w {
                best_w = w;
                best = Some(j);
            }
        }
        if let Some(l) = best {
            sx.replace(l, d, fx);
        }
        poor_step = actual.partial_cmp(&(GOOD_RATIO * predicted)).is_none_or(|o| o.is_lt());
    }
}
