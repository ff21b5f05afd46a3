use qsim_core::variational::{
    h2_hamiltonian, hardware_efficient_ansatz, initial_parameters, vqe_run, PauliObservable, VqeConfig,
};

use crate::{best_of, check, sweep, BenchConfig, BenchError, Table};

pub const COLUMNS: [&str; 5] = ["num_params", "final_energy", "abs_error_vs_exact_diag", "iterations", "wall_time"];

/// Slack on the variational bound `E >= E_exact`.
const VARIATIONAL_SLACK: f64 = 1e-9;

/// One row per layer count. The reference energy is exact diagonalization of
/// the loaded Hamiltonian.
pub fn run_vqe_h2(config: &BenchConfig) -> Result<Table, BenchError> {
    let hamiltonian = match &config.hamiltonian {
        Some(path) => PauliObservable::from_file(path)?,
        None => h2_hamiltonian(),
    };
    let exact = hamiltonian.ground_energy()?;
    let vqe = VqeConfig::default();
    let n = hamiltonian.num_qubits();
    let layers: Vec<usize> = config.layers.clone().collect();
    let rows = sweep(layers, config.parallel_sweep, |&layers| {
        let ansatz = hardware_efficient_ansatz(n, layers)?;
        let init = initial_parameters(ansatz.num_params(), config.seed);
        let (result, wall) = best_of(config.reps, || Ok(vqe_run(&ansatz, &hamiltonian, &init, &vqe)?))?;
        check(result.trace.iter().all(|e| e.is_finite()), || {
            format!("non-finite energy in trace at {layers} layers")
        })?;
        check(result.energy >= exact - VARIATIONAL_SLACK, || {
            format!("energy {} below exact ground {exact} at {layers} layers", result.energy)
        })?;
        check(result.iterations <= vqe.max_iterations, || {
            format!("{} iterations exceed the limit", result.iterations)
        })?;
        Ok(vec![
            ansatz.num_params().into(),
            result.energy.into(),
            (result.energy - exact).abs().into(),
            result.iterations.into(),
            wall.into(),
        ])
    })?;
    let mut table = Table::new("vqe-h2", &COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
