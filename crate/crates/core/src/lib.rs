//! Ground-state energies of the long-range XXZ chain from a statevector VQE
//! with a magnetization-conserving ansatz, and phase-boundary detection from
//! the directional coherence of the VQE error field.

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod exact;
pub mod exec;
pub mod grid;
pub mod gridcsv;
pub mod manifest;
pub mod model;
pub mod optimize;
pub mod phases;
pub mod statevec;
pub mod svg;
pub mod vqe;

pub use error::{Error, Result};
