//! Hardware-efficient ansatz, VQE loop, and the bundled H2 Hamiltonian.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gradient::{energy, parameter_shift_gradient, ParameterizedCircuit, DEFAULT_SHIFT};
use super::optim::Adam;
use super::pauli::PauliObservable;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Seed used for initial parameters when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Jordan-Wigner qubit Hamiltonian of H2 in STO-3G at 0.735 Angstrom,
/// electronic part only (nuclear repulsion excluded).
pub const H2_STO3G_0735: &str = include_str!("../../data/h2_sto3g_0735.txt");

/// Nuclear repulsion for the same geometry, in Hartree.
pub const H2_NUCLEAR_REPULSION: f64 = 0.719_968_994_448_979_7;

/// Reference FCI energy quoted alongside the original benchmark. It does not
/// correspond to the bundled Hamiltonian and is kept as metadata only.
pub const H2_QUOTED_FCI: f64 = -1.792_918_242_3;

pub fn h2_hamiltonian() -> PauliObservable {
    PauliObservable::parse(H2_STO3G_0735).expect("bundled Hamiltonian parses")
}

/// Per layer: `RY` on every qubit, then `CNOT(i, i+1)` down the chain.
pub fn hardware_efficient_ansatz(num_qubits: usize, num_layers: usize) -> Result<ParameterizedCircuit> {
    if num_qubits == 0 {
        return Err(Error::Size {
            requested: 0,
            cap: usize::MAX,
        });
    }
    if num_layers == 0 {
        return Err(Error::Input("ansatz needs at least one layer".into()));
    }
    Ok(ParameterizedCircuit::new(num_qubits, num_qubits * num_layers, move |t| {
        let mut c = Circuit::new(num_qubits);
        for layer in t.chunks(num_qubits) {
            for (q, &theta) in layer.iter().enumerate() {
                c.ry(q, theta)?;
            }
            for q in 0..num_qubits - 1 {
                c.cnot(q, q + 1)?;
            }
        }
        Ok(c)
    }))
}

/// Uniform in `[0, 0.1)` from a ChaCha8 stream.
pub fn initial_parameters(num_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_params).map(|_| rng.random_range(0.0..0.1)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VqeConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub learning_rate: f64,
    pub shift: f64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            max_iterations: 350,
            tolerance: 1e-7,
            learning_rate: 1e-2,
            shift: DEFAULT_SHIFT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult {
    pub params: Vec<f64>,
    pub energy: f64,
    /// `trace[0]` is the initial energy, `trace[t]` the energy after `t` steps.
    pub trace: Vec<f64>,
    /// Adam steps taken.
    pub iterations: usize,
    pub converged: bool,
}

/// Adam on parameter-shift gradients. Stops after the first step whose
/// energy change is below `tolerance`, or after `max_iterations` steps.
pub fn vqe_run(
    ansatz: &ParameterizedCircuit,
    hamiltonian: &PauliObservable,
    initial: &[f64],
    config: &VqeConfig,
) -> Result<VqeResult> {
    if !(config.tolerance >= 0.0) || !(config.learning_rate > 0.0) {
        return Err(Error::Input("tolerance must be >= 0 and learning rate > 0".into()));
    }
    let mut params = initial.to_vec();
    let mut adam = Adam::new(ansatz.num_params(), config.learning_rate);
    let e0 = finite_energy(ansatz, hamiltonian, &params, 0)?;
    let mut trace = vec![e0];
    let mut converged = false;
    for it in 1..=config.max_iterations {
        let grad = parameter_shift_gradient(ansatz, hamiltonian, &params, config.shift)?;
        adam.step(&mut params, &grad)?;
        let e = finite_energy(ansatz, hamiltonian, &params, it)?;
        let prev = trace[trace.len() - 1];
        trace.push(e);
        if (e - prev).abs() < config.tolerance {
            converged = true;
            break;
        }
    }
    Ok(VqeResult {
        energy: trace[trace.len() - 1],
        iterations: trace.len() - 1,
        params,
        trace,
        converged,
    })
}

fn finite_energy(pc: &ParameterizedCircuit, h: &PauliObservable, params: &[f64], it: usize) -> Result<f64> {
    let e = energy(pc, h, params)?;
    if !e.is_finite() {
        return Err(Error::NonFiniteEnergy {
            stage: "iteration",
            index: it,
        });
    }
    Ok(e)
}
