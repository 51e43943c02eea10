//! Independent dense oracles built from 2x2 Pauli matrices and Kronecker
//! products; nothing here calls into the library's own matrix builders.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

use lrxxz::statevec::{GateKind, GateOp};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye2() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

fn proj(bit: usize) -> CMat {
    let mut p = CMat::zeros(2, 2);
    p[(bit, bit)] = c(1.0, 0.0);
    p
}

/// Places single-qubit operators (by qubit) into the n-qubit space.
/// Qubit 0 is the least significant bit, i.e. the rightmost Kronecker factor.
pub fn embed(n: usize, ops: &[(usize, CMat)]) -> CMat {
    let mut m = CMat::from_element(1, 1, c(1.0, 0.0));
    for q in (0..n).rev() {
        let f = ops.iter().find(|(k, _)| *k == q).map(|(_, o)| o.clone()).unwrap_or_else(eye2);
        m = m.kronecker(&f);
    }
    m
}

/// `|0⟩⟨0|_c ⊗ 1 + |1⟩⟨1|_c ⊗ U_t`.
pub fn controlled(n: usize, control: usize, target: usize, u: CMat) -> CMat {
    embed(n, &[(control, proj(0))]) + embed(n, &[(control, proj(1)), (target, u)])
}

pub fn rz(t: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)])
}

pub fn rx(t: f64) -> CMat {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    CMat::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -si), c(0.0, -si), c(co, 0.0)])
}

/// Full unitary of one gate at rotation angle `angle` (sign already applied).
pub fn gate_unitary(n: usize, g: &GateOp, angle: f64) -> CMat {
    match g.kind {
        GateKind::X => embed(n, &[(g.target, pauli_x())]),
        GateKind::Cnot => controlled(n, g.control.unwrap(), g.target, pauli_x()),
        GateKind::Crz => controlled(n, g.control.unwrap(), g.target, rz(angle)),
        GateKind::Crx => controlled(n, g.control.unwrap(), g.target, rx(angle)),
    }
}

/// Dense Hamiltonian from Pauli strings: `-J Σ_{i<j} (XX + YY + Δ ZZ) / (4 r^α)`,
/// keeping only pairs with `|i-j| <= range`.
pub fn pauli_hamiltonian(n: usize, j: f64, delta: f64, alpha: f64, range: usize) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for a in 0..n {
        for b in a + 1..n {
            let r = b - a;
            if r > range {
                continue;
            }
            let w = -j / (4.0 * (r as f64).powf(alpha));
            let xx = embed(n, &[(a, pauli_x()), (b, pauli_x())]);
            let yy = embed(n, &[(a, pauli_y()), (b, pauli_y())]);
            let zz = embed(n, &[(a, pauli_z()), (b, pauli_z())]);
            h += (xx + yy + zz * c(delta, 0.0)) * c(w, 0.0);
        }
    }
    assert!(h.iter().all(|z| z.im.abs() < 1e-14));
    h.map(|z| z.re)
}

pub fn ground_energy(h: DMatrix<f64>) -> f64 {
    h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Total S^z of basis index `k`: +1/2 per 0 bit, -1/2 per 1 bit.
pub fn sz_of(n: usize, k: usize) -> f64 {
    (0..n).map(|q| if k >> q & 1 == 0 { 0.5 } else { -0.5 }).sum()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
