use num_complex::Complex64;
use qsim_core::qft::{inverse_qft_circuit, inverse_qft_dense_fft, qft_circuit, qft_dense_fft};
use qsim_core::{execute_on_backend, DenseState, MpsState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{best_of, check, sweep, BenchConfig, BenchError, Cell, Table};

pub const COLUMNS: [&str; 5] = ["n", "backend", "wall_time", "peak_memory_estimate", "max_bond_dim"];

const ROUND_TRIP_TOL: f64 = 1e-10;

/// Dense rows time the FFT path on a seeded random state; MPS rows time the
/// gate circuit on a seeded basis state.
pub fn run_qft_bench(config: &BenchConfig) -> Result<Table, BenchError> {
    let points: Vec<(usize, &'static str)> = config
        .qubits
        .clone()
        .map(|n| config.resolve_backend(n).map(|b| (n, b)))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new("qft", &COLUMNS);
    for row in sweep(points, config.parallel_sweep, |&(n, backend)| qft_row(config, n, backend))? {
        table.push(row);
    }
    Ok(table)
}

fn qft_row(config: &BenchConfig, n: usize, backend: &'static str) -> Result<Vec<Cell>, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ n as u64);
    let (memory, bond, wall) = if backend == "dense" {
        let input = DenseState::random(n, &mut rng)?;
        let mut out = input.clone();
        qft_dense_fft(&mut out);
        let mut back = out.clone();
        inverse_qft_dense_fft(&mut back);
        let err = back.distance(&input)?;
        check(err <= ROUND_TRIP_TOL, || format!("dense QFT round trip at n={n}: error {err:e}"))?;
        // Repeated in place; the cost does not depend on the amplitudes.
        let (_, wall) = best_of(config.reps, || {
            qft_dense_fft(&mut out);
            Ok(())
        })?;
        (16 * input.dimension(), 1, wall)
    } else {
        if n >= usize::BITS as usize {
            return Err(BenchError::Capability(format!("basis index for n={n} does not fit a machine word")));
        }
        let index = rng.random_range(0..(1usize << n).max(1));
        let input = MpsState::basis_state(n, index, config.mps)?;
        let forward = qft_circuit(n)?;
        let (out, wall) = best_of(config.reps, || {
            let mut s = input.clone();
            execute_on_backend(&forward, &mut s)?;
            Ok(s)
        })?;
        let mut back = out.clone();
        execute_on_backend(&inverse_qft_circuit(n)?, &mut back)?;
        let overlap = input.inner_product(&back)?;
        let err = (overlap - Complex64::new(1.0, 0.0)).norm();
        check(err <= ROUND_TRIP_TOL, || format!("MPS QFT round trip at n={n}: error {err:e}"))?;
        (out.peak_memory_bytes(), out.peak_bond_dim(), wall)
    };
    Ok(vec![n.into(), backend.into(), wall.into(), memory.into(), bond.into()])
}
