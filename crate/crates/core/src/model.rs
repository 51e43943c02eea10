//! The long-range XXZ Hamiltonian
//!
//! ```text
//! H = -J Σ_{i<j} (S^x_i S^x_j + S^y_i S^y_j + Δ S^z_i S^z_j) / |i - j|^α
//! ```
//!
//! on an open chain of `N` spin-½ sites with `S = σ/2`. Each unordered pair is
//! counted once. The Hamiltonian is available both as a list of pair couplings
//! (used for matrix-free application on statevectors) and as a dense real
//! symmetric matrix (used by exact diagonalization and as an oracle).
//!
//! Basis convention: bit `k` of a basis index is site `k`; bit value 0 is spin
//! up (`S^z = +1/2`), bit value 1 is spin down.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// Largest chain handled by [`build_dense`].
pub const DENSE_MAX_SITES: usize = 12;
/// Largest chain handled by the matrix-free routines.
pub const TERMWISE_MAX_SITES: usize = 20;

const NORM_TOL: f64 = 1e-9;

/// Physical parameters of one chain instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Coupling constant.
    pub j: f64,
    /// Anisotropy of the zz coupling.
    pub delta: f64,
    /// Power-law decay exponent of the couplings.
    pub alpha: f64,
    /// Number of sites.
    pub n: usize,
}

impl ModelParams {
    pub fn new(j: f64, delta: f64, alpha: f64, n: usize) -> Result<Self> {
        let p = ModelParams { j, delta, alpha, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!("need at least 2 sites, got {}", self.n)));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::Domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.j == 0.0 || !self.j.is_finite() {
            return Err(Error::Domain(format!("J must be finite and nonzero, got {}", self.j)));
        }
        if !self.delta.is_finite() {
            return Err(Error::Domain(format!("delta must be finite, got {}", self.delta)));
        }
        Ok(())
    }
}

/// Weighted coupling between sites `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    /// Weight of `S^x_i S^x_j + S^y_i S^y_j`.
    pub w_xy: f64,
    /// Weight of `S^z_i S^z_j`.
    pub w_z: f64,
}

/// The Hamiltonian as one [`PairTerm`] per unordered pair of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct TermList {
    n_sites: usize,
    terms: Vec<PairTerm>,
}

impl TermList {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PairTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

/// `1 / |i - j|^alpha`.
pub fn coupling_strength(i: usize, j: usize, alpha: f64) -> Result<f64> {
    if i == j {
        return Err(Error::Domain(format!("self-coupling at site {i}")));
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let r = i.abs_diff(j) as f64;
    Ok(r.powf(-alpha))
}

pub fn build_terms(p: &ModelParams) -> Result<TermList> {
    p.validate()?;
    let mut terms = Vec::with_capacity(p.n * (p.n - 1) / 2);
    for i in 0..p.n {
        for j in (i + 1)..p.n {
            let k = coupling_strength(i, j, p.alpha)?;
            terms.push(PairTerm { i, j, w_xy: -p.j * k, w_z: -p.j * p.delta * k });
        }
    }
    Ok(TermList { n_sites: p.n, terms })
}

#[inline]
fn sz(basis: usize, site: usize) -> f64 {
    if basis >> site & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Diagonal (zz) energy of every computational basis state.
pub fn diagonal_energies(t: &TermList) -> Vec<f64> {
    (0..t.dim())
        .map(|b| t.terms.iter().map(|term| term.w_z * sz(b, term.i) * sz(b, term.j)).sum())
        .collect()
}

pub fn build_dense(p: &ModelParams) -> Result<DMatrix<f64>> {
    if p.n > DENSE_MAX_SITES {
        return Err(Error::Capacity { n: p.n, cap: DENSE_MAX_SITES, what: "dense matrices" });
    }
    let t = build_terms(p)?;
    let dim = t.dim();
    let diag = diagonal_energies(&t);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim {
        h[(b, b)] = diag[b];
        for term in &t.terms {
            let mask = (1 << term.i) | (1 << term.j);
            // S^xS^x + S^yS^y = (S^+S^- + S^-S^+)/2 swaps antiparallel spins.
            if (b >> term.i & 1) != (b >> term.j & 1) {
                h[(b ^ mask, b)] += 0.5 * term.w_xy;
            }
        }
    }
    Ok(h)
}

fn check_dim(t: &TermList, s: &StateVector) -> Result<()> {
    if t.n_sites > TERMWISE_MAX_SITES {
        return Err(Error::Capacity { n: t.n_sites, cap: TERMWISE_MAX_SITES, what: "statevectors" });
    }
    if s.n_qubits() != t.n_sites {
        return Err(Error::Dimension { expected: t.dim(), got: s.dim() });
    }
    Ok(())
}

/// `H|ψ⟩` without forming the matrix.
pub fn apply_hamiltonian(t: &TermList, s: &StateVector) -> Result<StateVector> {
    check_dim(t, s)?;
    let amps = s.amplitudes();
    let diag = diagonal_energies(t);
    let mut out: Vec<Complex64> = amps.iter().zip(&diag).map(|(a, d)| a * d).collect();
    for term in &t.terms {
        let mask = (1 << term.i) | (1 << term.j);
        let half = 0.5 * term.w_xy;
        for (b, a) in amps.iter().enumerate() {
            if (b >> term.i & 1) != (b >> term.j & 1) {
                out[b ^ mask] += a * half;
            }
        }
    }
    Ok(StateVector::from_amplitudes_unchecked(s.n_qubits(), out))
}

/// `⟨ψ|H|ψ⟩` for a normalized state.
pub fn expectation(t: &TermList, s: &StateVector) -> Result<f64> {
    check_dim(t, s)?;
    let norm = s.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain(format!("state is not normalized: <psi|psi> = {norm}")));
    }
    let value = expectation_with_diagonal(t, &diagonal_energies(t), s.amplitudes());
    if value.im.abs() >= 1e-10 {
        return Err(Error::Numeric(format!("complex expectation value {value}")));
    }
    Ok(value.re)
}

/// Inner kernel of [`expectation`]; `diag` must come from [`diagonal_energies`].
pub(crate) fn expectation_with_diagonal(t: &TermList, diag: &[f64], amps: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum(), 0.0);
    for term in &t.terms {
        let mask = (1 << term.i) | (1 << term.j);
        let half = 0.5 * term.w_xy;
        let mut pair = Complex64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            if (b >> term.i & 1) != (b >> term.j & 1) {
                pair += amps[b ^ mask].conj() * a;
            }
        }
        acc += pair * half;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::SymmetricEigen;

    fn sorted_eigs(m: DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(coupling_strength(0, 1, 3.7).unwrap(), 1.0);
        assert_eq!(coupling_strength(0, 2, 2.0).unwrap(), 0.25);
        assert_abs_diff_eq!(coupling_strength(1, 4, 1.5).unwrap(), 0.19245008972987526, epsilon = 1e-15);
        assert!(matches!(coupling_strength(3, 3, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn params_are_validated() {
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0, 4).is_err());
        assert!(ModelParams::new(0.0, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn terms_examples() {
        let t = build_terms(&ModelParams::new(1.0, 1.0, 2.0, 2).unwrap()).unwrap();
        assert_eq!(t.terms(), &[PairTerm { i: 0, j: 1, w_xy: -1.0, w_z: -1.0 }]);

        let t = build_terms(&ModelParams::new(1.0, -2.0, 2.0, 3).unwrap()).unwrap();
        assert_eq!(t.terms().len(), 3);
        for term in t.terms() {
            let (xy, z) = if term.j - term.i == 1 { (-1.0, 2.0) } else { (-0.25, 0.5) };
            assert_eq!((term.w_xy, term.w_z), (xy, z));
        }

        let t = build_terms(&ModelParams::new(-1.0, 0.0, 1.0, 2).unwrap()).unwrap();
        assert_eq!(t.terms()[0].w_xy, 1.0);
        assert_eq!(t.terms()[0].w_z, 0.0);
    }

    #[test]
    fn two_site_spectra() {
        let e = sorted_eigs(build_dense(&ModelParams::new(1.0, 1.0, 0.7, 2).unwrap()).unwrap());
        for (a, b) in e.iter().zip([-0.25, -0.25, -0.25, 0.75]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let e = sorted_eigs(build_dense(&ModelParams::new(1.0, -1.0, 3.0, 2).unwrap()).unwrap());
        for (a, b) in e.iter().zip([-0.75, 0.25, 0.25, 0.25]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn dense_is_symmetric() {
        let h = build_dense(&ModelParams::new(0.8, -1.7, 1.3, 5).unwrap()).unwrap();
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn dense_capacity() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 13).unwrap();
        assert!(matches!(build_dense(&p), Err(Error::Capacity { .. })));
    }

    #[test]
    fn apply_on_basis_state() {
        let t = build_terms(&ModelParams::new(1.0, -2.0, 1.0, 2).unwrap()).unwrap();
        // qubit 0 up, qubit 1 down
        let s = StateVector::basis(2, 0b10).unwrap();
        let hs = apply_hamiltonian(&t, &s).unwrap();
        assert_abs_diff_eq!(hs.amplitudes()[0b10].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hs.amplitudes()[0b01].re, -0.5, epsilon = 1e-15);
        assert_eq!(hs.amplitudes()[0].norm(), 0.0);
        assert_eq!(hs.amplitudes()[3].norm(), 0.0);

        let zero = StateVector::from_amplitudes_unchecked(2, vec![Complex64::new(0.0, 0.0); 4]);
        assert!(apply_hamiltonian(&t, &zero).unwrap().amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn apply_rejects_mismatch() {
        let t = build_terms(&ModelParams::new(1.0, 0.0, 1.0, 3).unwrap()).unwrap();
        assert!(matches!(apply_hamiltonian(&t, &StateVector::zero_state(2)), Err(Error::Dimension { .. })));
    }

    #[test]
    fn expectation_examples() {
        for delta in [-2.0, 0.3, 1.0] {
            let t = build_terms(&ModelParams::new(1.0, delta, 1.0, 2).unwrap()).unwrap();
            let neel = StateVector::basis(2, 0b10).unwrap();
            assert_abs_diff_eq!(expectation(&t, &neel).unwrap(), delta / 4.0, epsilon = 1e-15);
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0b10] = Complex64::new(r, 0.0);
        amps[0b01] = Complex64::new(-r, 0.0);
        let singlet = StateVector::from_amplitudes(2, amps).unwrap();
        // antiferromagnetic exchange favours the singlet, ferromagnetic exchange penalizes it
        for (j, want) in [(-1.0, -0.5), (1.0, 0.5)] {
            let t = build_terms(&ModelParams::new(j, 0.0, 1.0, 2).unwrap()).unwrap();
            assert_abs_diff_eq!(expectation(&t, &singlet).unwrap(), want, epsilon = 1e-15);
        }
    }

    #[test]
    fn expectation_rejects_unnormalized() {
        let t = build_terms(&ModelParams::new(1.0, 0.0, 1.0, 2).unwrap()).unwrap();
        let s = StateVector::from_amplitudes_unchecked(2, vec![Complex64::new(1.0, 0.0); 4]);
        assert!(matches!(expectation(&t, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn expectation_at_eigenvector() {
        let p = ModelParams::new(1.0, -0.6, 1.4, 4).unwrap();
        let eig = SymmetricEigen::new(build_dense(&p).unwrap());
        let t = build_terms(&p).unwrap();
        for k in 0..eig.eigenvalues.len() {
            let v = eig.eigenvectors.column(k);
            let s = StateVector::from_amplitudes(4, v.iter().map(|x| Complex64::new(*x, 0.0)).collect())
                .unwrap();
            assert_abs_diff_eq!(expectation(&t, &s).unwrap(), eig.eigenvalues[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn dense_commutes_with_total_sz() {
        let p = ModelParams::new(1.0, 0.4, 1.1, 5).unwrap();
        let h = build_dense(&p).unwrap();
        let mz = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            32,
            (0..32usize).map(|b| (0..5).map(|k| sz(b, k)).sum::<f64>()),
        ));
        let c = &h * &mz - &mz * &h;
        assert!(c.amax() < 1e-12);
    }

    #[test]
    fn short_range_limit() {
        // alpha = 50 suppresses every non-adjacent pair below 2^-50
        let p = ModelParams::new(1.0, -1.3, 50.0, 6).unwrap();
        let long = sorted_eigs(build_dense(&p).unwrap())[0];
        let mut nn = DMatrix::<f64>::zeros(64, 64);
        for b in 0..64usize {
            for i in 0..5 {
                nn[(b, b)] += -p.j * p.delta * sz(b, i) * sz(b, i + 1);
                if (b >> i & 1) != (b >> (i + 1) & 1) {
                    nn[(b ^ (3 << i), b)] += -0.5 * p.j;
                }
            }
        }
        assert_abs_diff_eq!(long, sorted_eigs(nn)[0], epsilon = 1e-10);
    }
}
