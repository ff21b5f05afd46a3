//! Circuits and backend dispatch.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{FixedGate, Gate, GateKind, Matrix8, RotationGate};
use crate::kernels;
use crate::state::DenseState;

/// A gate bound to concrete qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operation {
    gate: Arc<Gate>,
    qubits: Vec<usize>,
}

impl Operation {
    pub fn new(gate: Gate, qubits: Vec<usize>) -> Result<Self> {
        if qubits.len() != gate.arity() {
            return Err(Error::InvalidGate(format!(
                "{} acts on {} qubits, got {}",
                gate.name(),
                gate.arity(),
                qubits.len()
            )));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        Ok(Self {
            gate: Arc::new(gate),
            qubits,
        })
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn name(&self) -> &str {
        self.gate.name()
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qubits: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, "{} {}", self.name(), qubits.join(","))?;
        if let Some(theta) = self.gate.parameter() {
            write!(f, " {theta}")?;
        }
        Ok(())
    }
}

/// Anything that can absorb gates: the dense state vector and the MPS.
pub trait StateBackend {
    fn num_qubits(&self) -> usize;

    fn apply_single_qubit(&mut self, qubit: usize, matrix: &Matrix2<Complex64>) -> Result<()>;

    /// `q_a` indexes the high bit of the 4x4 matrix.
    fn apply_two_qubit(&mut self, q_a: usize, q_b: usize, matrix: &Matrix4<Complex64>) -> Result<()>;

    fn supports_three_qubit(&self) -> bool {
        false
    }

    fn apply_three_qubit(&mut self, _qubits: [usize; 3], _matrix: &Matrix8) -> Result<()> {
        Err(Error::Capability("three-qubit gates".into()))
    }

    /// Applies one operation. The default dispatches on arity; backends
    /// override this to route specific gates to dedicated kernels.
    fn apply_operation(&mut self, op: &Operation) -> Result<()> {
        let q = op.qubits();
        match q.len() {
            1 => self.apply_single_qubit(q[0], &op.gate().matrix2()),
            2 => self.apply_two_qubit(q[0], q[1], &op.gate().matrix4()),
            3 => self.apply_three_qubit([q[0], q[1], q[2]], &op.gate().matrix8()),
            k => Err(Error::Capability(format!("{k}-qubit gates"))),
        }
    }
}

impl StateBackend for DenseState {
    fn num_qubits(&self) -> usize {
        DenseState::num_qubits(self)
    }

    fn apply_single_qubit(&mut self, qubit: usize, matrix: &Matrix2<Complex64>) -> Result<()> {
        kernels::apply_single_qubit(self, qubit, matrix)
    }

    fn apply_two_qubit(&mut self, q_a: usize, q_b: usize, matrix: &Matrix4<Complex64>) -> Result<()> {
        kernels::apply_two_qubit(self, q_a, q_b, matrix)
    }

    fn supports_three_qubit(&self) -> bool {
        true
    }

    fn apply_three_qubit(&mut self, qubits: [usize; 3], matrix: &Matrix8) -> Result<()> {
        kernels::apply_three_qubit(self, qubits, matrix)
    }

    fn apply_operation(&mut self, op: &Operation) -> Result<()> {
        let q = op.qubits();
        match op.gate().kind() {
            GateKind::Fixed(FixedGate::Cnot) => kernels::apply_cnot(self, q[0], q[1]),
            GateKind::Fixed(FixedGate::Cz) => kernels::apply_cphase(self, q[0], q[1], std::f64::consts::PI),
            GateKind::Fixed(FixedGate::Toffoli) => kernels::apply_toffoli(self, q[0], q[1], q[2]),
            GateKind::Rotation(RotationGate::CPhase, phi) => kernels::apply_cphase(self, q[0], q[1], *phi),
            _ => match q.len() {
                1 => kernels::apply_single_qubit(self, q[0], &op.gate().matrix2()),
                2 => kernels::apply_two_qubit(self, q[0], q[1], &op.gate().matrix4()),
                3 => kernels::apply_three_qubit(self, [q[0], q[1], q[2]], &op.gate().matrix8()),
                k => Err(Error::Capability(format!("{k}-qubit gates"))),
            },
        }
    }
}

/// Ordered gate list on a fixed register width.
///
/// Builder methods validate indices at append time and return `&mut Self`
/// for chaining with `?`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    operations: Vec<Operation>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            operations: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn operations(&self) -> &[Operation] {
        &self.operations
    }

    pub fn len(&self) -> usize {
        self.operations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operations.is_empty()
    }

    /// Appends an already-constructed operation after checking its width.
    pub fn push(&mut self, op: Operation) -> Result<&mut Self> {
        for &q in op.qubits() {
            if q >= self.num_qubits {
                return Err(Error::Bounds {
                    what: "qubit",
                    index: q,
                    size: self.num_qubits,
                });
            }
        }
        self.operations.push(op);
        Ok(self)
    }

    pub fn append(&mut self, gate: Gate, qubits: &[usize]) -> Result<&mut Self> {
        let op = Operation::new(gate, qubits.to_vec())?;
        self.push(op)
    }

    /// Appends every operation of `other` (same width required).
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        self.operations.extend(other.operations.iter().cloned());
        Ok(self)
    }

    fn fixed(&mut self, g: FixedGate, qubits: &[usize]) -> Result<&mut Self> {
        self.append(Gate::fixed(g), qubits)
    }

    fn rot(&mut self, g: RotationGate, theta: f64, qubits: &[usize]) -> Result<&mut Self> {
        self.append(Gate::rotation(g, theta), qubits)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::H, &[q])
    }
    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::X, &[q])
    }
    pub fn y(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Y, &[q])
    }
    pub fn z(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Z, &[q])
    }
    pub fn s(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::S, &[q])
    }
    pub fn t(&mut self, q: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::T, &[q])
    }
    pub fn rx(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Rx, theta, &[q])
    }
    pub fn ry(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Ry, theta, &[q])
    }
    pub fn rz(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Rz, theta, &[q])
    }
    pub fn phase(&mut self, q: usize, phi: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Phase, phi, &[q])
    }
    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Cnot, &[control, target])
    }
    pub fn cz(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Cz, &[control, target])
    }
    pub fn cphase(&mut self, control: usize, target: usize, phi: f64) -> Result<&mut Self> {
        self.rot(RotationGate::CPhase, phi, &[control, target])
    }
    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Swap, &[a, b])
    }
    pub fn cry(&mut self, control: usize, target: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Cry, theta, &[control, target])
    }
    pub fn rxx(&mut self, a: usize, b: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Rxx, theta, &[a, b])
    }
    pub fn ryy(&mut self, a: usize, b: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Ryy, theta, &[a, b])
    }
    pub fn rzz(&mut self, a: usize, b: usize, theta: f64) -> Result<&mut Self> {
        self.rot(RotationGate::Rzz, theta, &[a, b])
    }
    pub fn toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<&mut Self> {
        self.fixed(FixedGate::Toffoli, &[c1, c2, target])
    }

    /// Runs the circuit on a dense state using the bitwise kernels.
    pub fn execute(&self, state: &mut DenseState) -> Result<()> {
        execute_on_backend(self, state)
    }

    /// One `name qubit_list [param]` line per operation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.operations {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }
}

/// Applies `circuit` to any backend. Toffoli gates on backends without a
/// three-qubit path are expanded into CNOT, H and T gates.
pub fn execute_on_backend<B: StateBackend + ?Sized>(circuit: &Circuit, backend: &mut B) -> Result<()> {
    if backend.num_qubits() != circuit.num_qubits() {
        return Err(Error::Dimension {
            expected: circuit.num_qubits(),
            found: backend.num_qubits(),
        });
    }
    for op in circuit.operations() {
        if op.qubits().len() == 3 && !backend.supports_three_qubit() {
            match op.gate().kind() {
                GateKind::Fixed(FixedGate::Toffoli) => {
                    let q = op.qubits();
                    for sub in toffoli_decomposition(q[0], q[1], q[2])? {
                        backend.apply_operation(&sub)?;
                    }
                }
                _ => {
                    return Err(Error::Capability(format!(
                        "three-qubit gate '{}' on this backend",
                        op.name()
                    )))
                }
            }
        } else {
            backend.apply_operation(op)?;
        }
    }
    Ok(())
}

/// Standard 6-CNOT Toffoli network (exact, no global phase).
pub fn toffoli_decomposition(c1: usize, c2: usize, target: usize) -> Result<Vec<Operation>> {
    use FixedGate::*;
    let seq: [(FixedGate, &[usize]); 15] = [
        (H, &[target]),
        (Cnot, &[c2, target]),
        (Tdg, &[target]),
        (Cnot, &[c1, target]),
        (T, &[target]),
        (Cnot, &[c2, target]),
        (Tdg, &[target]),
        (Cnot, &[c1, target]),
        (T, &[c2]),
        (T, &[target]),
        (H, &[target]),
        (Cnot, &[c1, c2]),
        (T, &[c1]),
        (Tdg, &[c2]),
        (Cnot, &[c1, c2]),
    ];
    seq.iter()
        .map(|(g, q)| Operation::new(Gate::fixed(*g), q.to_vec()))
        .collect()
}
