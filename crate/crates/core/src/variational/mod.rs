//! Parameterized circuits, Pauli observables, parameter-shift gradients,
//! optimizers and the VQE driver.

mod gradient;
mod optim;
mod pauli;
mod vqe;

pub use gradient::{
    edge_case_circuit, edge_case_observable, energy, finite_difference_gradient, parameter_shift_gradient,
    parameter_shift_gradient_sequential, ParameterizedCircuit, ShiftRule, DEFAULT_FD_STEP, DEFAULT_SHIFT,
};
pub use optim::{sgd_step, Adam};
pub use pauli::{Pauli, PauliExpectation, PauliObservable, PauliString, MATRIX_MAX_QUBITS};
pub use vqe::{
    h2_hamiltonian, hardware_efficient_ansatz, initial_parameters, vqe_run, VqeConfig, VqeResult, DEFAULT_SEED,
    H2_NUCLEAR_REPULSION, H2_QUOTED_FCI, H2_STO3G_0735,
};
