//! Quantum circuit simulation on two backends: a dense state vector with
//! bitwise gate kernels, and a matrix product state with SVD truncation.
//!
//! On top of these sit the quantum Fourier transform, parameter-shift
//! gradients with a VQE driver, and Trotterized XYZ-chain dynamics.

pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod kernels;
pub mod linalg;
pub mod mps;
pub mod qft;
pub mod state;
pub mod variational;

pub use circuit::{execute_on_backend, Circuit, Operation, StateBackend};
pub use error::{Error, Result};
pub use mps::{MpsConfig, MpsState};
pub use gates::{FixedGate, Gate, GateKind, RotationGate};
pub use state::DenseState;
