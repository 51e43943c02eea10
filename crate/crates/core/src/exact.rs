//! Exact-diagonalization baselines: the two lowest levels, energy and gap
//! grids, and finite-difference gradients of the ground energy.
//!
//! The Hamiltonian conserves total `S^z`, so the dense matrix is block
//! diagonal in the bit-population sectors. Each block is diagonalized with a
//! dense symmetric eigensolver and the lowest levels are merged.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{partial_derivatives, GridResult, GridSpec};
use crate::model::{build_dense, build_terms, diagonal_energies, ModelParams, DENSE_MAX_SITES};

const EIG_EPS: f64 = 1e-14;
const EIG_MAX_ITER: usize = 10_000;

fn eigenvalues(m: DMatrix<f64>, what: &str) -> Result<Vec<f64>> {
    let dim = m.nrows();
    let eig = SymmetricEigen::try_new(m, EIG_EPS, EIG_MAX_ITER).ok_or_else(|| {
        Error::Numeric(format!("symmetric eigensolver did not converge on {what} (dimension {dim}, {EIG_MAX_ITER} sweeps)"))
    })?;
    let mut e: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Hamiltonian block on the basis states with `down` spins flipped down.
pub fn sector_matrix(p: &ModelParams, down: usize) -> Result<DMatrix<f64>> {
    if p.n > DENSE_MAX_SITES {
        return Err(Error::Capacity { n: p.n, cap: DENSE_MAX_SITES, what: "dense matrices" });
    }
    if down > p.n {
        return Err(Error::Domain(format!("sector with {down} down spins on {} sites", p.n)));
    }
    let t = build_terms(p)?;
    let diag = diagonal_energies(&t);
    let states: Vec<usize> = (0..t.dim()).filter(|b| b.count_ones() as usize == down).collect();
    let mut index = vec![usize::MAX; t.dim()];
    for (k, &b) in states.iter().enumerate() {
        index[b] = k;
    }
    let mut h = DMatrix::<f64>::zeros(states.len(), states.len());
    for (k, &b) in states.iter().enumerate() {
        h[(k, k)] = diag[b];
        for term in t.terms() {
            if (b >> term.i & 1) != (b >> term.j & 1) {
                let flipped = b ^ ((1 << term.i) | (1 << term.j));
                h[(index[flipped], k)] += 0.5 * term.w_xy;
            }
        }
    }
    Ok(h)
}

/// Ground energy inside one magnetization sector.
pub fn sector_ground(p: &ModelParams, down: usize) -> Result<f64> {
    Ok(eigenvalues(sector_matrix(p, down)?, "sector block")?[0])
}

/// `(E0, E1)`, the two smallest eigenvalues with multiplicity.
pub fn lowest_two(p: &ModelParams) -> Result<(f64, f64)> {
    p.validate()?;
    let mut levels = Vec::new();
    for down in 0..=p.n {
        let e = eigenvalues(sector_matrix(p, down)?, "sector block")?;
        levels.extend(e.into_iter().take(2));
    }
    levels.sort_by(f64::total_cmp);
    Ok((levels[0], levels[1]))
}

/// Every eigenvalue of the full dense matrix, ascending.
pub fn full_spectrum(p: &ModelParams) -> Result<Vec<f64>> {
    eigenvalues(build_dense(p)?, "dense Hamiltonian")
}

/// Ground energy and gap over a grid.
pub fn spectrum_grids(spec: &GridSpec, j: f64, n: usize, exec: Exec) -> Result<(GridResult, GridResult)> {
    let cells = exec.map(spec.len(), |k| {
        let (delta, alpha) = spec.coords(k);
        ModelParams::new(j, delta, alpha, n).and_then(|p| lowest_two(&p)).map_err(|e| e.at_cell(delta, alpha))
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let energy = GridResult::new(*spec, cells.iter().map(|c| c.0).collect(), "ground energy")?;
    let gap = GridResult::new(*spec, cells.iter().map(|c| c.1 - c.0).collect(), "energy gap")?;
    Ok((energy, gap))
}

pub fn energy_grid(spec: &GridSpec, j: f64, n: usize, exec: Exec) -> Result<GridResult> {
    Ok(spectrum_grids(spec, j, n, exec)?.0)
}

pub fn gap_grid(spec: &GridSpec, j: f64, n: usize, exec: Exec) -> Result<GridResult> {
    Ok(spectrum_grids(spec, j, n, exec)?.1)
}

/// Finite-difference gradient of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub d_delta: GridResult,
    pub d_alpha: GridResult,
    pub magnitude: GridResult,
}

pub fn gradient_grid(g: &GridResult) -> Result<Gradient> {
    let (dd, da) = partial_derivatives(g)?;
    let mag = dd.iter().zip(&da).map(|(x, y)| x.hypot(*y)).collect();
    Ok(Gradient {
        d_delta: GridResult::new(g.spec, dd, format!("d/dDelta {}", g.label))?,
        d_alpha: GridResult::new(g.spec, da, format!("d/dalpha {}", g.label))?,
        magnitude: GridResult::new(g.spec, mag, format!("|grad {}|", g.label))?,
    })
}
