//! In-place dense-state kernels.
//!
//! Controlled gates are implemented as conditional swaps or phase multiplies
//! on bit masks; general gates visit each amplitude group once. Every kernel
//! is O(2^n) with no allocation beyond a fixed-size local buffer.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{is_unitary, Matrix8, UNITARY_TOLERANCE};
use crate::state::DenseState;

/// Unitarity checks on caller-supplied matrices run in debug builds only.
const VALIDATE: bool = cfg!(debug_assertions);

fn distinct(qubits: &[usize]) -> Result<()> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(Error::DuplicateQubit(*q));
        }
    }
    Ok(())
}

fn check_all(state: &DenseState, qubits: &[usize]) -> Result<()> {
    for &q in qubits {
        state.check_qubit(q)?;
    }
    distinct(qubits)
}

fn validate<const D: usize>(m: &nalgebra::SMatrix<Complex64, D, D>) -> Result<()> {
    if VALIDATE {
        let dm = DMatrix::from_iterator(D, D, m.iter().copied());
        if !is_unitary(&dm, UNITARY_TOLERANCE) {
            return Err(Error::InvalidGate("matrix is not unitary".into()));
        }
    }
    Ok(())
}

/// CNOT by swapping `psi[i] <-> psi[i ^ t_mask]` wherever the control bit is
/// set and the target bit is clear.
pub fn apply_cnot(state: &mut DenseState, control: usize, target: usize) -> Result<()> {
    check_all(state, &[control, target])?;
    let c_mask = state.mask(control);
    let t_mask = state.mask(target);
    let psi = state.amplitudes_mut();
    for i in 0..psi.len() {
        if i & c_mask != 0 && i & t_mask == 0 {
            psi.swap(i, i ^ t_mask);
        }
    }
    Ok(())
}

/// Toffoli: flips the target where both controls are set.
pub fn apply_toffoli(state: &mut DenseState, c1: usize, c2: usize, target: usize) -> Result<()> {
    check_all(state, &[c1, c2, target])?;
    let both = state.mask(c1) | state.mask(c2);
    let t_mask = state.mask(target);
    let psi = state.amplitudes_mut();
    for i in 0..psi.len() {
        if i & both == both && i & t_mask == 0 {
            psi.swap(i, i ^ t_mask);
        }
    }
    Ok(())
}

/// Controlled phase: multiplies amplitudes with both bits set by `e^{i phi}`.
pub fn apply_cphase(state: &mut DenseState, control: usize, target: usize, phi: f64) -> Result<()> {
    check_all(state, &[control, target])?;
    let both = state.mask(control) | state.mask(target);
    let phase = Complex64::from_polar(1.0, phi);
    for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if i & both == both {
            *a *= phase;
        }
    }
    Ok(())
}

pub fn apply_single_qubit(state: &mut DenseState, qubit: usize, m: &Matrix2<Complex64>) -> Result<()> {
    state.check_qubit(qubit)?;
    validate(m)?;
    let mask = state.mask(qubit);
    let psi = state.amplitudes_mut();
    let dim = psi.len();
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for block in (0..dim).step_by(2 * mask) {
        for i in block..block + mask {
            let j = i | mask;
            let (a0, a1) = (psi[i], psi[j]);
            psi[i] = m00 * a0 + m01 * a1;
            psi[j] = m10 * a0 + m11 * a1;
        }
    }
    Ok(())
}

/// General two-qubit gate; `q_a` is the high bit of the 4x4 matrix index.
pub fn apply_two_qubit(state: &mut DenseState, q_a: usize, q_b: usize, m: &Matrix4<Complex64>) -> Result<()> {
    check_all(state, &[q_a, q_b])?;
    validate(m)?;
    let (ma, mb) = (state.mask(q_a), state.mask(q_b));
    let both = ma | mb;
    let offsets = [0, mb, ma, ma | mb];
    apply_grouped::<4>(state.amplitudes_mut(), both, &offsets, |k, l| m[(k, l)]);
    Ok(())
}

/// General three-qubit gate; `qubits[0]` is the most significant bit of the
/// 8x8 matrix index.
pub fn apply_three_qubit(state: &mut DenseState, qubits: [usize; 3], m: &Matrix8) -> Result<()> {
    check_all(state, &qubits)?;
    validate(m)?;
    let masks = qubits.map(|q| state.mask(q));
    let all = masks[0] | masks[1] | masks[2];
    let mut offsets = [0usize; 8];
    for (k, off) in offsets.iter_mut().enumerate() {
        for (bit, mask) in masks.iter().enumerate() {
            if k & (4 >> bit) != 0 {
                *off |= mask;
            }
        }
    }
    apply_grouped::<8>(state.amplitudes_mut(), all, &offsets, |k, l| m[(k, l)]);
    Ok(())
}

fn apply_grouped<const D: usize>(
    psi: &mut [Complex64],
    group_mask: usize,
    offsets: &[usize; D],
    m: impl Fn(usize, usize) -> Complex64,
) {
    let mut buf = [Complex64::new(0.0, 0.0); D];
    for base in 0..psi.len() {
        if base & group_mask != 0 {
            continue;
        }
        for (k, off) in offsets.iter().enumerate() {
            buf[k] = psi[base | off];
        }
        for (k, off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, b) in buf.iter().enumerate() {
                acc += m(k, l) * b;
            }
            psi[base | off] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{FixedGate, Gate, RotationGate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn assert_close(a: &DenseState, b: &DenseState, tol: f64) {
        let d = a.distance(b).unwrap();
        assert!(d <= tol, "distance {d} > {tol}");
    }

    #[test]
    fn cnot_on_bell_state() {
        let mut s = DenseState::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap();
        apply_cnot(&mut s, 0, 1).unwrap();
        assert_eq!(s.amplitudes(), &[c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)]);
    }

    #[test]
    fn cnot_control_unset_and_involution() {
        let mut s = DenseState::zero_state(2).unwrap();
        apply_cnot(&mut s, 0, 1).unwrap();
        assert_eq!(s, DenseState::zero_state(2).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let orig = DenseState::random(3, &mut rng).unwrap();
        let mut s = orig.clone();
        apply_cnot(&mut s, 2, 0).unwrap();
        apply_cnot(&mut s, 2, 0).unwrap();
        assert_close(&s, &orig, 1e-12);
    }

    #[test]
    fn cnot_errors() {
        let mut s = DenseState::zero_state(2).unwrap();
        assert!(matches!(apply_cnot(&mut s, 0, 2), Err(Error::Bounds { .. })));
        assert!(matches!(apply_cnot(&mut s, 1, 1), Err(Error::DuplicateQubit(1))));
    }

    #[test]
    fn toffoli_examples() {
        let h = FRAC_1_SQRT_2;
        let mut s = DenseState::from_amplitudes(vec![c(0.), c(0.), c(0.), c(0.), c(0.), c(h), c(h), c(0.)]).unwrap();
        apply_toffoli(&mut s, 0, 1, 2).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.), c(0.), c(0.), c(0.), c(0.), c(h), c(0.), c(h)]);

        let mut s = DenseState::basis_state(3, 0b110).unwrap();
        apply_toffoli(&mut s, 0, 1, 2).unwrap();
        assert_eq!(s, DenseState::basis_state(3, 0b111).unwrap());

        let mut s = DenseState::zero_state(3).unwrap();
        apply_toffoli(&mut s, 0, 1, 2).unwrap();
        assert_eq!(s, DenseState::zero_state(3).unwrap());

        assert!(matches!(apply_toffoli(&mut s, 0, 0, 2), Err(Error::DuplicateQubit(0))));
    }

    #[test]
    fn single_qubit_examples() {
        let mut s = DenseState::zero_state(1).unwrap();
        apply_single_qubit(&mut s, 0, &Gate::fixed(FixedGate::H).matrix2()).unwrap();
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2)).norm() < 1e-15);

        let mut s = DenseState::zero_state(2).unwrap();
        apply_single_qubit(&mut s, 1, &Gate::fixed(FixedGate::X).matrix2()).unwrap();
        assert_eq!(s, DenseState::basis_state(2, 0b01).unwrap());

        let mut s = DenseState::zero_state(1).unwrap();
        apply_single_qubit(&mut s, 0, &Gate::rotation(RotationGate::Ry, PI / 2.0).matrix2()).unwrap();
        // RY(pi/2)|0> = cos(pi/4)|0> + sin(pi/4)|1>
        assert!((s.amplitudes()[0] - c((PI / 4.0).cos())).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c((PI / 4.0).sin())).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_rejected_in_debug() {
        let mut s = DenseState::zero_state(1).unwrap();
        let bad = Matrix2::new(c(1.0), c(1.0), c(0.0), c(1.0));
        let res = apply_single_qubit(&mut s, 0, &bad);
        if cfg!(debug_assertions) {
            assert!(matches!(res, Err(Error::InvalidGate(_))));
        }
    }

    #[test]
    fn two_qubit_examples() {
        let mut s = DenseState::basis_state(2, 0b01).unwrap();
        apply_two_qubit(&mut s, 0, 1, &Gate::fixed(FixedGate::Swap).matrix4()).unwrap();
        assert_eq!(s, DenseState::basis_state(2, 0b10).unwrap());

        let mut s = DenseState::basis_state(2, 0b10).unwrap();
        apply_two_qubit(&mut s, 0, 1, &Gate::rotation(RotationGate::Cry, PI).matrix4()).unwrap();
        assert!((s.amplitudes()[3] - c(1.0)).norm() < 1e-15);
        assert!(s.amplitudes()[2].norm() < 1e-15);
    }

    #[test]
    fn controlled_kernels_match_generic_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cnot = Gate::fixed(FixedGate::Cnot).matrix4();
        let toff = Gate::fixed(FixedGate::Toffoli).matrix8();
        for n in 3..=8 {
            for _ in 0..25 {
                let orig = DenseState::random(n, &mut rng).unwrap();
                let picks = rand::seq::index::sample(&mut rng, n, 3).into_vec();
                let (a, b, t) = (picks[0], picks[1], picks[2]);

                let mut fast = orig.clone();
                let mut slow = orig.clone();
                apply_cnot(&mut fast, a, b).unwrap();
                apply_two_qubit(&mut slow, a, b, &cnot).unwrap();
                assert_close(&fast, &slow, 1e-12);

                let phi = 0.37 * (a + 1) as f64;
                let mut fast = orig.clone();
                let mut slow = orig.clone();
                apply_cphase(&mut fast, a, b, phi).unwrap();
                apply_two_qubit(&mut slow, a, b, &Gate::rotation(RotationGate::CPhase, phi).matrix4()).unwrap();
                assert_close(&fast, &slow, 1e-12);

                let mut fast = orig.clone();
                let mut slow = orig.clone();
                apply_toffoli(&mut fast, a, b, t).unwrap();
                apply_three_qubit(&mut slow, [a, b, t], &toff).unwrap();
                assert_close(&fast, &slow, 1e-12);
            }
        }
    }

    #[test]
    fn two_qubit_order_convention() {
        // CNOT with q_a = 1 as control, q_b = 0 as target on |01> gives |11>.
        let mut s = DenseState::basis_state(2, 0b01).unwrap();
        apply_two_qubit(&mut s, 1, 0, &Gate::fixed(FixedGate::Cnot).matrix4()).unwrap();
        assert_eq!(s, DenseState::basis_state(2, 0b11).unwrap());
    }
}
