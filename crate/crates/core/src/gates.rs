//! Gate descriptors.
//!
//! Fixed gates and rotation families are separate enums, so a parameter can
//! only be attached to a gate that takes one. Rotations follow the
//! `exp(-i theta G / 2)` convention throughout.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix8 = SMatrix<Complex64, 8, 8>;

/// Tolerance used when checking `U^dagger U = I`.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Gates without a continuous parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedGate {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Cz,
    Swap,
    Toffoli,
}

/// One-parameter gate families; the angle is in radians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RotationGate {
    Rx,
    Ry,
    Rz,
    Phase,
    CPhase,
    Cry,
    Rxx,
    Ryy,
    Rzz,
}

impl FixedGate {
    pub fn arity(self) -> usize {
        use FixedGate::*;
        match self {
            H | X | Y | Z | S | Sdg | T | Tdg => 1,
            Cnot | Cz | Swap => 2,
            Toffoli => 3,
        }
    }

    pub fn name(self) -> &'static str {
        use FixedGate::*;
        match self {
            H => "h",
            X => "x",
            Y => "y",
            Z => "z",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            Cnot => "cnot",
            Cz => "cz",
            Swap => "swap",
            Toffoli => "toffoli",
        }
    }

    pub fn matrix(self) -> DMatrix<Complex64> {
        use FixedGate::*;
        let i = Complex64::i();
        match self {
            H => dmat2(matrix2(r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2))),
            X => dmat2(pauli_x()),
            Y => dmat2(pauli_y()),
            Z => dmat2(pauli_z()),
            S => dmat2(diag2(r(1.0), i)),
            Sdg => dmat2(diag2(r(1.0), -i)),
            T => dmat2(diag2(r(1.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))),
            Tdg => dmat2(diag2(r(1.0), Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4))),
            Cnot => dmat4(controlled(&pauli_x())),
            Cz => dmat4(controlled(&pauli_z())),
            Swap => {
                let mut m = Matrix4::zeros();
                m[(0, 0)] = r(1.0);
                m[(1, 2)] = r(1.0);
                m[(2, 1)] = r(1.0);
                m[(3, 3)] = r(1.0);
                dmat4(m)
            }
            Toffoli => {
                let mut m = DMatrix::identity(8, 8);
                m[(6, 6)] = r(0.0);
                m[(7, 7)] = r(0.0);
                m[(6, 7)] = r(1.0);
                m[(7, 6)] = r(1.0);
                m
            }
        }
    }
}

impl RotationGate {
    pub fn arity(self) -> usize {
        use RotationGate::*;
        match self {
            Rx | Ry | Rz | Phase => 1,
            CPhase | Cry | Rxx | Ryy | Rzz => 2,
        }
    }

    pub fn name(self) -> &'static str {
        use RotationGate::*;
        match self {
            Rx => "rx",
            Ry => "ry",
            Rz => "rz",
            Phase => "phase",
            CPhase => "cphase",
            Cry => "cry",
            Rxx => "rxx",
            Ryy => "ryy",
            Rzz => "rzz",
        }
    }

    pub fn matrix(self, theta: f64) -> DMatrix<Complex64> {
        use RotationGate::*;
        match self {
            Rx => dmat2(rotation(&pauli_x(), theta)),
            Ry => dmat2(ry(theta)),
            Rz => dmat2(rotation(&pauli_z(), theta)),
            Phase => dmat2(diag2(r(1.0), Complex64::from_polar(1.0, theta))),
            CPhase => {
                let mut m = Matrix4::identity();
                m[(3, 3)] = Complex64::from_polar(1.0, theta);
                dmat4(m)
            }
            Cry => dmat4(controlled(&ry(theta))),
            Rxx => dmat4(rotation4(&pauli_x().kronecker(&pauli_x()), theta)),
            Ryy => dmat4(rotation4(&pauli_y().kronecker(&pauli_y()), theta)),
            Rzz => dmat4(rotation4(&pauli_z().kronecker(&pauli_z()), theta)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    Fixed(FixedGate),
    Rotation(RotationGate, f64),
    Custom(String),
}

/// An immutable gate: its identity plus the unitary it applies.
///
/// For multi-qubit gates the first listed qubit is the most significant bit
/// of the matrix index (the control, for controlled gates).
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    matrix: DMatrix<Complex64>,
}

impl Gate {
    pub fn fixed(gate: FixedGate) -> Self {
        Self {
            kind: GateKind::Fixed(gate),
            matrix: gate.matrix(),
        }
    }

    pub fn rotation(gate: RotationGate, theta: f64) -> Self {
        Self {
            kind: GateKind::Rotation(gate, theta),
            matrix: gate.matrix(theta),
        }
    }

    /// A user-supplied 2x2, 4x4 or 8x8 unitary. Non-unitary input is rejected.
    pub fn custom(name: impl Into<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !matches!(dim, 2 | 4 | 8) {
            return Err(Error::InvalidGate(format!(
                "custom gate must be 2x2, 4x4 or 8x8, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !is_unitary(&matrix, UNITARY_TOLERANCE) {
            return Err(Error::InvalidGate("matrix is not unitary".into()));
        }
        Ok(Self {
            kind: GateKind::Custom(name.into()),
            matrix,
        })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            GateKind::Fixed(g) => g.name(),
            GateKind::Rotation(g, _) => g.name(),
            GateKind::Custom(name) => name,
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match self.kind {
            GateKind::Rotation(_, theta) => Some(theta),
            _ => None,
        }
    }

    pub fn matrix2(&self) -> Matrix2<Complex64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn matrix4(&self) -> Matrix4<Complex64> {
        self.matrix.fixed_view::<4, 4>(0, 0).into_owned()
    }

    pub fn matrix8(&self) -> Matrix8 {
        self.matrix.fixed_view::<8, 8>(0, 0).into_owned()
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(theta) => write!(f, "{}({theta})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

pub fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let prod = m.adjoint() * m;
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (prod - id).iter().all(|z| z.norm() <= tol)
}

pub fn pauli_x() -> Matrix2<Complex64> {
    matrix2(r(0.0), r(1.0), r(1.0), r(0.0))
}

pub fn pauli_y() -> Matrix2<Complex64> {
    let i = Complex64::i();
    matrix2(r(0.0), -i, i, r(0.0))
}

pub fn pauli_z() -> Matrix2<Complex64> {
    diag2(r(1.0), r(-1.0))
}

fn ry(theta: f64) -> Matrix2<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    matrix2(r(c), r(-s), r(s), r(c))
}

/// `exp(-i theta P / 2)` for an involutory `P`.
fn rotation(p: &Matrix2<Complex64>, theta: f64) -> Matrix2<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix2::identity() * r(c) - p * Complex64::new(0.0, s)
}

fn rotation4(p: &Matrix4<Complex64>, theta: f64) -> Matrix4<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix4::identity() * r(c) - p * Complex64::new(0.0, s)
}

fn controlled(u: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(u);
    m
}

#[inline]
fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn matrix2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Matrix2<Complex64> {
    Matrix2::new(a, b, c, d)
}

fn diag2(a: Complex64, d: Complex64) -> Matrix2<Complex64> {
    matrix2(a, r(0.0), r(0.0), d)
}

fn dmat2(m: Matrix2<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_iterator(2, 2, m.iter().copied())
}

fn dmat4(m: Matrix4<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}
