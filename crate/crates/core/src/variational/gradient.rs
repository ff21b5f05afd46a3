//! Parameterized circuits and their gradients.
//!
//! Each evaluation rebuilds the circuit from scratch and runs it on a fresh
//! zero state, so gradient components are independent and can run in
//! parallel without changing the result.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::pauli::{Pauli, PauliObservable, PauliString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::state::DenseState;

pub const DEFAULT_SHIFT: f64 = FRAC_PI_2;
pub const DEFAULT_FD_STEP: f64 = 1e-5;

type Builder = dyn Fn(&[f64]) -> Result<Circuit> + Send + Sync;

/// How the shift rule differentiates one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftRule {
    /// `[f(t + s) - f(t - s)] / 2`. Exact for `exp(-i t P / 2)` with `P` a
    /// Pauli string, at `s = pi/2`.
    TwoTerm,
    /// Shifts of `pi/2` and `3pi/2`. Exact for controlled rotations, whose
    /// generator has eigenvalues `{0, +-1/2}`.
    FourTerm,
}

const FOUR_TERM_PLUS: f64 = (std::f64::consts::SQRT_2 + 1.0) / (4.0 * std::f64::consts::SQRT_2);
const FOUR_TERM_MINUS: f64 = (std::f64::consts::SQRT_2 - 1.0) / (4.0 * std::f64::consts::SQRT_2);

/// A pure map from a parameter vector to a circuit.
///
/// Each parameter must enter exactly one gate for the shift rule to be
/// exact; parameters feeding a controlled rotation are marked
/// [`ShiftRule::FourTerm`].
#[derive(Clone)]
pub struct ParameterizedCircuit {
    num_qubits: usize,
    num_params: usize,
    builder: Arc<Builder>,
    rules: Vec<ShiftRule>,
}

impl fmt::Debug for ParameterizedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParameterizedCircuit")
            .field("num_qubits", &self.num_qubits)
            .field("num_params", &self.num_params)
            .finish_non_exhaustive()
    }
}

impl ParameterizedCircuit {
    pub fn new<F>(num_qubits: usize, num_params: usize, builder: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Circuit> + Send + Sync + 'static,
    {
        ParameterizedCircuit {
            num_qubits,
            num_params,
            builder: Arc::new(builder),
            rules: vec![ShiftRule::TwoTerm; num_params],
        }
    }

    pub fn with_shift_rules(mut self, rules: Vec<ShiftRule>) -> Result<Self> {
        if rules.len() != self.num_params {
            return Err(Error::Dimension {
                expected: self.num_params,
                found: rules.len(),
            });
        }
        self.rules = rules;
        Ok(self)
    }

    pub fn shift_rules(&self) -> &[ShiftRule] {
        &self.rules
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    /// Validates `params` and builds a fresh circuit.
    pub fn build(&self, params: &[f64]) -> Result<Circuit> {
        check_params(params, self.num_params)?;
        let c = (self.builder)(params)?;
        if c.num_qubits() != self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                found: c.num_qubits(),
            });
        }
        Ok(c)
    }

    /// Final state after running the circuit on `|0...0>`.
    pub fn state(&self, params: &[f64]) -> Result<DenseState> {
        let c = self.build(params)?;
        let mut s = DenseState::zero_state(self.num_qubits)?;
        c.execute(&mut s)?;
        Ok(s)
    }
}

fn check_params(params: &[f64], expected: usize) -> Result<()> {
    if params.len() != expected {
        return Err(Error::Dimension {
            expected,
            found: params.len(),
        });
    }
    if let Some(i) = params.iter().position(|x| !x.is_finite()) {
        return Err(Error::Input(format!("parameter {i} is not finite")));
    }
    Ok(())
}

/// `<psi(theta)|H|psi(theta)>` on the dense backend.
pub fn energy(pc: &ParameterizedCircuit, obs: &PauliObservable, params: &[f64]) -> Result<f64> {
    if obs.num_qubits() != pc.num_qubits() {
        return Err(Error::Dimension {
            expected: pc.num_qubits(),
            found: obs.num_qubits(),
        });
    }
    obs.expectation(&pc.state(params)?)
}

/// Shift-rule gradient, components evaluated in parallel.
///
/// [`ShiftRule::TwoTerm`] parameters use `[E(theta + s e_i) - E(theta - s e_i)] / 2`;
/// [`ShiftRule::FourTerm`] parameters ignore `shift` and use fixed shifts.
pub fn parameter_shift_gradient(
    pc: &ParameterizedCircuit,
    obs: &PauliObservable,
    params: &[f64],
    shift: f64,
) -> Result<Vec<f64>> {
    gradient(pc, obs, params, Method::Shift(shift), true)
}

/// Same as [`parameter_shift_gradient`] on the calling thread only.
pub fn parameter_shift_gradient_sequential(
    pc: &ParameterizedCircuit,
    obs: &PauliObservable,
    params: &[f64],
    shift: f64,
) -> Result<Vec<f64>> {
    gradient(pc, obs, params, Method::Shift(shift), false)
}

/// Central differences `[E(theta + h e_i) - E(theta - h e_i)] / 2h`.
pub fn finite_difference_gradient(
    pc: &ParameterizedCircuit,
    obs: &PauliObservable,
    params: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Input(format!("finite-difference step must be positive, got {step}")));
    }
    gradient(pc, obs, params, Method::Central(step), true)
}

#[derive(Clone, Copy)]
enum Method {
    Shift(f64),
    Central(f64),
}

fn gradient(
    pc: &ParameterizedCircuit,
    obs: &PauliObservable,
    params: &[f64],
    method: Method,
    parallel: bool,
) -> Result<Vec<f64>> {
    check_params(params, pc.num_params())?;
    if let Method::Shift(s) = method {
        if !s.is_finite() || s == 0.0 {
            return Err(Error::Input(format!("shift must be finite and nonzero, got {s}")));
        }
    }
    // f(theta + d e_i) - f(theta - d e_i)
    let diff = |i: usize, d: f64| -> Result<f64> {
        let mut p = params.to_vec();
        p[i] = params[i] + d;
        let plus = energy(pc, obs, &p)?;
        p[i] = params[i] - d;
        let minus = energy(pc, obs, &p)?;
        Ok(plus - minus)
    };
    let component = |i: usize| -> Result<f64> {
        let g = match (method, pc.rules[i]) {
            (Method::Central(h), _) => diff(i, h)? / (2.0 * h),
            (Method::Shift(s), ShiftRule::TwoTerm) => diff(i, s)? / 2.0,
            (Method::Shift(_), ShiftRule::FourTerm) => {
                FOUR_TERM_PLUS * diff(i, FRAC_PI_2)? - FOUR_TERM_MINUS * diff(i, 3.0 * FRAC_PI_2)?
            }
        };
        if !g.is_finite() {
            return Err(Error::NonFiniteGradient { index: i });
        }
        Ok(g)
    };
    if parallel {
        (0..params.len()).into_par_iter().map(component).collect()
    } else {
        (0..params.len()).map(component).collect()
    }
}

/// Two qubits, four parameters:
/// `RX(t0) q0, RY(t1) q1, RZ(t2) q0, CNOT(0 -> 1), CRY(t3) with control q1 on q0`.
pub fn edge_case_circuit() -> ParameterizedCircuit {
    ParameterizedCircuit::new(2, 4, |t| {
        let mut c = Circuit::new(2);
        c.rx(0, t[0])?.ry(1, t[1])?.rz(0, t[2])?.cnot(0, 1)?.cry(1, 0, t[3])?;
        Ok(c)
    })
    .with_shift_rules(vec![ShiftRule::TwoTerm, ShiftRule::TwoTerm, ShiftRule::TwoTerm, ShiftRule::FourTerm])
    .expect("four rules")
}

/// `Z` on qubit 0 of a two-qubit register.
pub fn edge_case_observable() -> PauliObservable {
    let mut o = PauliObservable::new(2);
    o.add_term(1.0, PauliString::from_sparse(2, &[(0, Pauli::Z)]).expect("in range"))
        .expect("width matches");
    o
}
