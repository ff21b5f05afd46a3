//! Quantum Fourier transform: an FFT over dense amplitudes and a gate-level
//! circuit that runs on any backend.
//!
//! Both compute `|x> -> N^{-1/2} sum_k exp(2 pi i x k / N) |k>` with qubit 0 as
//! the most significant bit. The circuit's trailing SWAPs put the output in
//! natural order, so the FFT path needs no extra permutation.

use std::cell::RefCell;
use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::state::DenseState;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place QFT of a dense state in `O(N log N)`.
pub fn qft_dense_fft(state: &mut DenseState) {
    transform(state, false);
}

/// Inverse of [`qft_dense_fft`].
pub fn inverse_qft_dense_fft(state: &mut DenseState) {
    transform(state, true);
}

fn transform(state: &mut DenseState, inverse: bool) {
    let n = state.dimension();
    // The QFT sign convention is the "inverse" DFT in FFT terminology.
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    });
    let amps = state.amplitudes_mut();
    fft.process(amps);
    let scale = (n as f64).sqrt().recip();
    for a in amps.iter_mut() {
        *a *= scale;
    }
}

/// Gate-level QFT: `H(i)` then `CP(pi / 2^(j-i))` controlled by `i` on each
/// later `j`, followed by the reversal SWAPs.
pub fn qft_circuit(num_qubits: usize) -> Result<Circuit> {
    if num_qubits == 0 {
        return Err(Error::Size {
            requested: 0,
            cap: usize::MAX,
        });
    }
    let mut c = Circuit::new(num_qubits);
    for i in 0..num_qubits {
        c.h(i)?;
        for j in i + 1..num_qubits {
            c.cphase(i, j, PI / (1u64 << (j - i)) as f64)?;
        }
    }
    for i in 0..num_qubits / 2 {
        c.swap(i, num_qubits - 1 - i)?;
    }
    Ok(c)
}

/// Reversed gate order with negated phases.
pub fn inverse_qft_circuit(num_qubits: usize) -> Result<Circuit> {
    if num_qubits == 0 {
        return Err(Error::Size {
            requested: 0,
            cap: usize::MAX,
        });
    }
    let mut c = Circuit::new(num_qubits);
    for i in 0..num_qubits / 2 {
        c.swap(i, num_qubits - 1 - i)?;
    }
    for i in (0..num_qubits).rev() {
        for j in (i + 1..num_qubits).rev() {
            c.cphase(i, j, -PI / (1u64 << (j - i)) as f64)?;
        }
        c.h(i)?;
    }
    Ok(c)
}

/// `n + n(n-1)/2 + floor(n/2)`.
pub fn qft_gate_count(num_qubits: usize) -> usize {
    num_qubits + num_qubits * num_qubits.saturating_sub(1) / 2 + num_qubits / 2
}
