//! VQE driver: single-point ground-energy estimates and (Δ, α) sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{build_circuit, AnsatzSpec, ParameterVector};
use crate::error::{Error, Result};
use crate::exact::lowest_two;
use crate::exec::Exec;
use crate::grid::{GridResult, GridSpec};
use crate::model::{build_terms, diagonal_energies, expectation_with_diagonal, ModelParams};
use crate::optimize::{minimize, OptimizationResult, OptimizerConfig};

/// Half-width of the uniform distribution used for cold-start angles.
pub const INIT_SPREAD: f64 = 0.1;

/// Result at one (Δ, α) point.
#[derive(Debug, Clone, PartialEq)]
pub struct VqePoint {
    pub model: ModelParams,
    pub energy_vqe: f64,
    pub energy_exact: f64,
    /// `energy_exact - energy_vqe`, non-positive up to rounding.
    pub e_d: f64,
    pub rel_error: f64,
    pub params: ParameterVector,
    pub evals: usize,
}

/// Cold-start angles: i.i.d. uniform in `[-INIT_SPREAD, INIT_SPREAD]`.
pub fn initial_params(len: usize, seed: u64) -> ParameterVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..len).map(|_| rng.gen_range(-INIT_SPREAD..=INIT_SPREAD)).collect();
    ParameterVector::new(values).expect("uniform draws are finite")
}

fn check_even(n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "N = {n} is odd: the Neel start has nonzero magnetization, the VQE needs an even chain"
        )));
    }
    Ok(())
}

/// Minimizes the ansatz energy for `p` from `x0`, without the exact reference.
pub fn minimize_energy(
    p: &ModelParams,
    ansatz: &AnsatzSpec,
    x0: &ParameterVector,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    check_even(p.n)?;
    if ansatz.n() != p.n {
        return Err(Error::Dimension { expected: p.n, got: ansatz.n() });
    }
    let terms = build_terms(p)?;
    let diag = diagonal_energies(&terms);
    minimize(
        |x: &[f64]| {
            // x comes from the optimizer and is always finite, but may hold any value
            let params = match ParameterVector::new(x.to_vec()) {
                Ok(v) => v,
                Err(_) => return f64::NAN,
            };
            match ansatz.prepare_state(&params) {
                Ok(s) => expectation_with_diagonal(&terms, &diag, s.amplitudes()).re,
                Err(_) => f64::NAN,
            }
        },
        x0,
        cfg,
    )
}

fn finish_point(p: ModelParams, res: OptimizationResult, energy_exact: f64, evals: usize) -> Result<VqePoint> {
    let e_d = energy_exact - res.best_f;
    if e_d > 1e-9 {
        return Err(Error::Numeric(format!(
            "variational bound violated: E_vqe = {} below E_exact = {energy_exact}",
            res.best_f
        )));
    }
    let rel_error = if energy_exact != 0.0 { e_d.abs() / energy_exact.abs() } else { e_d.abs() };
    Ok(VqePoint { model: p, energy_vqe: res.best_f, energy_exact, e_d, rel_error, params: res.best_x, evals })
}

/// One optimization from `x0`.
pub fn vqe_point(p: &ModelParams, depth: usize, x0: &ParameterVector, cfg: &OptimizerConfig) -> Result<VqePoint> {
    let ansatz = build_circuit(p.n, depth)?;
    let res = minimize_energy(p, &ansatz, x0, cfg)?;
    let (e0, _) = lowest_two(p)?;
    let evals = res.evals_used;
    finish_point(*p, res, e0, evals)
}

/// Best of `restarts` runs: the first from `x0`, the rest from seeded cold starts.
pub fn vqe_point_restarts(
    p: &ModelParams,
    depth: usize,
    x0: &ParameterVector,
    cfg: &OptimizerConfig,
    restarts: usize,
) -> Result<VqePoint> {
    let ansatz = build_circuit(p.n, depth)?;
    let mut best = minimize_energy(p, &ansatz, x0, cfg)?;
    let mut evals = best.evals_used;
    for r in 1..restarts.max(1) {
        let start = initial_params(ansatz.param_count(), cfg.seed.wrapping_add(r as u64));
        let res = minimize_energy(p, &ansatz, &start, cfg)?;
        evals += res.evals_used;
        if res.best_f < best.best_f {
            best = res;
        }
    }
    let (e0, _) = lowest_two(p)?;
    finish_point(*p, best, e0, evals)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub j: f64,
    pub n: usize,
    pub depth: usize,
    pub optimizer: OptimizerConfig,
    /// Seed each cell with the optimum of its left neighbour in the same α row.
    pub warm: bool,
    pub restarts: usize,
}

/// A failed cell; the sweep carries on without it.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub delta: f64,
    pub alpha: f64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub e_vqe: GridResult,
    pub e_exact: GridResult,
    pub e_d: GridResult,
    pub rel_error: GridResult,
    /// Optimal angles per cell in grid order; `None` where the cell failed.
    pub params: Vec<Option<ParameterVector>>,
    pub evals: Vec<usize>,
    pub failures: Vec<CellFailure>,
}

impl SweepResult {
    pub fn total_evals(&self) -> usize {
        self.evals.iter().sum()
    }
}

/// Runs the VQE on every cell of `spec`.
///
/// Warm sweeps visit each α row in ascending Δ and run rows in parallel;
/// cold sweeps run every cell independently from the seeded initializer.
pub fn vqe_sweep(spec: &GridSpec, cfg: &SweepConfig, exec: Exec) -> Result<SweepResult> {
    vqe_sweep_from(spec, cfg, None, exec)
}

/// [`vqe_sweep`] with an explicit starting vector in place of the seeded
/// initializer. A shorter vector (e.g. a depth-1 optimum) is zero-padded.
pub fn vqe_sweep_from(spec: &GridSpec, cfg: &SweepConfig, start: Option<&ParameterVector>, exec: Exec) -> Result<SweepResult> {
    check_even(cfg.n)?;
    cfg.optimizer.validate()?;
    let ansatz = build_circuit(cfg.n, cfg.depth)?;
    let start = match start {
        Some(x) if x.len() > ansatz.param_count() => {
            return Err(Error::Dimension { expected: ansatz.param_count(), got: x.len() });
        }
        Some(x) => x.padded_to(ansatz.param_count()),
        None => initial_params(ansatz.param_count(), cfg.optimizer.seed),
    };
    let cols = spec.cols();

    let run_cell = |k: usize, x0: &ParameterVector| -> Result<VqePoint> {
        let (delta, alpha) = spec.coords(k);
        ModelParams::new(cfg.j, delta, alpha, cfg.n)
            .and_then(|p| vqe_point_restarts(&p, cfg.depth, x0, &cfg.optimizer, cfg.restarts))
            .map_err(|e| e.at_cell(delta, alpha))
    };

    let cells: Vec<Result<VqePoint>> = if cfg.warm {
        exec.map(spec.rows(), |row| {
            let mut x0 = start.clone();
            let mut out = Vec::with_capacity(cols);
            for c in 0..cols {
                let r = run_cell(row * cols + c, &x0);
                match &r {
                    Ok(pt) => x0 = pt.params.clone(),
                    // a failed cell restarts the chain from the seeded initializer
                    Err(_) => x0 = start.clone(),
                }
                out.push(r);
            }
            out
        })
        .into_iter()
        .flatten()
        .collect()
    } else {
        exec.map(spec.len(), |k| run_cell(k, &start))
    };

    let len = spec.len();
    let (mut ev, mut ee, mut ed, mut re) = (vec![f64::NAN; len], vec![f64::NAN; len], vec![f64::NAN; len], vec![f64::NAN; len]);
    let mut params = vec![None; len];
    let mut evals = vec![0; len];
    let mut failures = Vec::new();
    for (k, cell) in cells.into_iter().enumerate() {
        match cell {
            Ok(pt) => {
                ev[k] = pt.energy_vqe;
                ee[k] = pt.energy_exact;
                ed[k] = pt.e_d;
                re[k] = pt.rel_error;
                evals[k] = pt.evals;
                params[k] = Some(pt.params);
            }
            Err(e) => {
                let (delta, alpha) = spec.coords(k);
                log::warn!("VQE cell failed: {e}");
                failures.push(CellFailure { delta, alpha, message: e.to_string() });
            }
        }
    }
    Ok(SweepResult {
        e_vqe: GridResult::new(*spec, ev, "VQE energy")?,
        e_exact: GridResult::new(*spec, ee, "exact ground energy")?,
        e_d: GridResult::new(*spec, ed, "E_exact - E_vqe")?,
        rel_error: GridResult::new(*spec, re, "relative error")?,
        params,
        evals,
        failures,
    })
}
