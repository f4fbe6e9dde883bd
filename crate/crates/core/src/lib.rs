//! Quantum discord measures, zero-discord decisions, and simulated process
//! tomography on correlated system–environment states.
//!
//! Entropies and discords are in bits throughout.

pub mod discord;
pub mod ensembles;
pub mod error;
pub mod fano;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod optimize;
pub mod random;
pub mod state;
pub mod tomography;

pub use error::{QError, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use state::{BipartiteState, DensityMatrix, Subsystem};
