//! Statevector simulator restricted to the gates the ansatz uses.
//!
//! Qubit `k` is bit `k` of the amplitude index (qubit 0 least significant).
//! `|0⟩` is spin up (`S^z = +1/2`), `|1⟩` spin down. Rotations use the
//! half-angle convention: `RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2})`,
//! `RX(θ) = exp(-iθX/2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|00…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps amplitudes after checking the length and the normalization.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::from_amplitudes_unchecked(n_qubits, amps);
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("amplitudes are not normalized: {norm}")));
        }
        Ok(s)
    }

    /// Wraps amplitudes without a normalization check. Panics if the length is not `2^n_qubits`.
    pub fn from_amplitudes_unchecked(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n_qubits, "amplitude count must be 2^n");
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `g` with rotation angle `g.sign * angle`; the angle is ignored by X and CNOT.
    pub fn apply_gate(&mut self, g: &GateOp, angle: f64) -> Result<()> {
        g.check(self.n_qubits)?;
        let t = 1usize << g.target;
        let theta = g.sign * angle;
        match (g.kind, g.control) {
            (GateKind::X, _) => {
                for b in 0..self.amps.len() {
                    if b & t == 0 {
                        self.amps.swap(b, b | t);
                    }
                }
            }
            (GateKind::Cnot, Some(c)) => {
                let c = 1usize << c;
                for b in 0..self.amps.len() {
                    if b & c != 0 && b & t == 0 {
                        self.amps.swap(b, b | t);
                    }
                }
            }
            (GateKind::Crz, Some(c)) => {
                let c = 1usize << c;
                let lo = Complex64::from_polar(1.0, -0.5 * theta);
                let hi = lo.conj();
                for (b, a) in self.amps.iter_mut().enumerate() {
                    if b & c != 0 {
                        *a *= if b & t == 0 { lo } else { hi };
                    }
                }
            }
            (GateKind::Crx, Some(c)) => {
                let c = 1usize << c;
                let (s, co) = (0.5 * theta).sin_cos();
                let mis = Complex64::new(0.0, -s);
                for b in 0..self.amps.len() {
                    if b & c != 0 && b & t == 0 {
                        let a0 = self.amps[b];
                        let a1 = self.amps[b | t];
                        self.amps[b] = a0 * co + a1 * mis;
                        self.amps[b | t] = a0 * mis + a1 * co;
                    }
                }
            }
            // check() rejects controlled gates without a control
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Diagonal two-qubit block on bond `(i, i+1)`: CNOT(i→i+1), CRZ(i+1→i, φ), CNOT(i→i+1).
    pub fn zz_block(&mut self, bond: usize, phi: f64) -> Result<()> {
        for (g, angle) in zz_gates(bond, None).iter().zip([0.0, phi, 0.0]) {
            self.apply_gate(g, angle)?;
        }
        Ok(())
    }

    /// Exchange block on bond `(i, i+1)`: CNOT(i→i+1), CRX(i+1→i, −θ), CNOT(i→i+1).
    pub fn xy_block(&mut self, bond: usize, theta: f64) -> Result<()> {
        for (g, angle) in xy_gates(bond, None).iter().zip([0.0, theta, 0.0]) {
            self.apply_gate(g, angle)?;
        }
        Ok(())
    }

    /// `Σ_k ⟨S^z_k⟩`.
    pub fn total_sz(&self) -> f64 {
        let n = self.n_qubits as f64;
        self.amps
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * (0.5 * n - b.count_ones() as f64))
            .sum()
    }
}

/// X on every odd qubit of `|00…0⟩`.
pub fn neel_state(n: usize) -> Result<StateVector> {
    if n < 1 {
        return Err(Error::Domain("Neel state needs at least one qubit".into()));
    }
    let index = (0..n).filter(|k| k % 2 == 1).fold(0usize, |acc, k| acc | 1 << k);
    StateVector::basis(n, index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    X,
    Cnot,
    /// Controlled `RZ`.
    Crz,
    /// Controlled `RX`.
    Crx,
}

/// One gate of a circuit. Parametric gates read their angle from `param_slot`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    pub param_slot: Option<usize>,
    /// Multiplier applied to the angle, ±1.
    pub sign: f64,
}

impl GateOp {
    pub fn x(target: usize) -> Self {
        GateOp { kind: GateKind::X, target, control: None, param_slot: None, sign: 1.0 }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp { kind: GateKind::Cnot, target, control: Some(control), param_slot: None, sign: 1.0 }
    }

    pub fn crz(control: usize, target: usize, param_slot: Option<usize>, sign: f64) -> Self {
        GateOp { kind: GateKind::Crz, target, control: Some(control), param_slot, sign }
    }

    pub fn crx(control: usize, target: usize, param_slot: Option<usize>, sign: f64) -> Self {
        GateOp { kind: GateKind::Crx, target, control: Some(control), param_slot, sign }
    }

    pub fn is_parametric(&self) -> bool {
        matches!(self.kind, GateKind::Crz | GateKind::Crx)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.target >= n {
            return Err(Error::Domain(format!("target qubit {} out of range for {n} qubits", self.target)));
        }
        match (self.kind, self.control) {
            (GateKind::X, None) => Ok(()),
            (GateKind::X, Some(_)) => Err(Error::Domain("X gate takes no control".into())),
            (_, None) => Err(Error::Domain(format!("{:?} gate needs a control qubit", self.kind))),
            (_, Some(c)) if c >= n => {
                Err(Error::Domain(format!("control qubit {c} out of range for {n} qubits")))
            }
            (_, Some(c)) if c == self.target => {
                Err(Error::Domain(format!("control and target coincide at qubit {c}")))
            }
            _ => Ok(()),
        }
    }
}

/// Gate sequence of the zz block on bond `(i, i+1)`.
pub fn zz_gates(bond: usize, slot: Option<usize>) -> [GateOp; 3] {
    [GateOp::cnot(bond, bond + 1), GateOp::crz(bond + 1, bond, slot, 1.0), GateOp::cnot(bond, bond + 1)]
}

/// Gate sequence of the xy block on bond `(i, i+1)`; the rotation angle is negated.
pub fn xy_gates(bond: usize, slot: Option<usize>) -> [GateOp; 3] {
    [GateOp::cnot(bond, bond + 1), GateOp::crx(bond + 1, bond, slot, -1.0), GateOp::cnot(bond, bond + 1)]
}
