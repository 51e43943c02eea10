//! Layered magnetization-conserving ansatz.
//!
//! One layer applies a zz block to every nearest-neighbour bond in ascending
//! order, then an xy block to the same bonds. Every block owns its own
//! parameter. Slots are numbered layer-major, zz slots before xy slots,
//! ascending bond within each group. The circuit starts from the Neel state.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::statevec::{neel_state, xy_gates, zz_gates, GateOp, StateVector};

/// Tag written into parameter files describing the slot order.
pub const SLOT_ORDER: &str = "v1:layer-major,zz-then-xy,ascending-bond";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Zz,
    Xy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    /// Left site of the bond `(bond, bond + 1)`.
    pub bond: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSpec {
    n: usize,
    depth: usize,
    blocks: Vec<Block>,
    circuit: Vec<GateOp>,
}

pub fn param_count(n: usize, depth: usize) -> Result<usize> {
    if n < 2 || depth < 1 {
        return Err(Error::Domain(format!("ansatz needs N >= 2 and depth >= 1, got N = {n}, depth = {depth}")));
    }
    Ok(2 * (n - 1) * depth)
}

pub fn build_circuit(n: usize, depth: usize) -> Result<AnsatzSpec> {
    let count = param_count(n, depth)?;
    let bonds = n - 1;
    let mut blocks = Vec::with_capacity(count);
    for layer in 0..depth {
        let base = 2 * bonds * layer;
        blocks.extend((0..bonds).map(|b| Block { kind: BlockKind::Zz, bond: b, slot: base + b }));
        blocks.extend((0..bonds).map(|b| Block { kind: BlockKind::Xy, bond: b, slot: base + bonds + b }));
    }
    let circuit = blocks
        .iter()
        .flat_map(|blk| match blk.kind {
            BlockKind::Zz => zz_gates(blk.bond, Some(blk.slot)),
            BlockKind::Xy => xy_gates(blk.bond, Some(blk.slot)),
        })
        .collect();
    Ok(AnsatzSpec { n, depth, blocks, circuit })
}

impl AnsatzSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn param_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The expanded gate list, excluding the X gates of the Neel preparation.
    pub fn circuit(&self) -> &[GateOp] {
        &self.circuit
    }

    /// Neel state advanced through the circuit.
    pub fn prepare_state(&self, params: &ParameterVector) -> Result<StateVector> {
        if params.len() != self.param_count() {
            return Err(Error::Dimension { expected: self.param_count(), got: params.len() });
        }
        let mut s = neel_state(self.n)?;
        for g in &self.circuit {
            let angle = g.param_slot.map_or(0.0, |k| params.values[k]);
            s.apply_gate(g, angle)?;
        }
        Ok(s)
    }
}

/// Real circuit angles in radians, one per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector {
    values: Vec<f64>,
}

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite parameter {bad}")));
        }
        Ok(ParameterVector { values })
    }

    pub fn zeros(len: usize) -> Self {
        ParameterVector { values: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Embeds a shallower solution into `spec`, leaving the extra layers at zero.
    pub fn padded_to(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        values.resize(len, 0.0);
        ParameterVector { values }
    }

    /// Flat text: `#` header naming N, depth and slot order, then one value per line.
    pub fn to_text(&self, n: usize, depth: usize) -> String {
        let mut out = format!("# n = {n}\n# depth = {depth}\n# slot_order = {SLOT_ORDER}\n");
        for v in &self.values {
            writeln!(out, "{v:.17e}").unwrap();
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output, returning `(n, depth, params)`.
    pub fn from_text(text: &str, path: &Path) -> Result<(usize, usize, Self)> {
        let err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
        let (mut n, mut depth, mut order) = (None, None, None);
        let mut values = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let Some((key, val)) = header.split_once('=') else { continue };
                let val = val.trim();
                match key.trim() {
                    "n" => n = Some(val.parse::<usize>().map_err(|e| err(k + 1, e.to_string()))?),
                    "depth" => depth = Some(val.parse::<usize>().map_err(|e| err(k + 1, e.to_string()))?),
                    "slot_order" => order = Some(val.to_string()),
                    _ => {}
                }
                continue;
            }
            values.push(line.parse::<f64>().map_err(|e| err(k + 1, format!("{e}: {line:?}")))?);
        }
        let n = n.ok_or_else(|| err(0, "missing `n` header".into()))?;
        let depth = depth.ok_or_else(|| err(0, "missing `depth` header".into()))?;
        if order.as_deref() != Some(SLOT_ORDER) {
            return Err(err(0, format!("unsupported slot order {order:?}")));
        }
        let expected = param_count(n, depth)?;
        if values.len() != expected {
            return Err(err(0, format!("expected {expected} values, found {}", values.len())));
        }
        Ok((n, depth, ParameterVector::new(values)?))
    }
}
