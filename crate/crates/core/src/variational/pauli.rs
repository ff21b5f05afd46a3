//! Pauli strings, weighted observables, and their expectation values.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::{pauli_x, pauli_y, pauli_z};
use crate::mps::MpsState;
use crate::state::DenseState;

/// Largest width for which [`PauliObservable::to_matrix`] will build a matrix.
pub const MATRIX_MAX_QUBITS: usize = 12;

const IMAG_TOLERANCE: f64 = 1e-10;
const PARALLEL_MIN_DIM: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix2<Complex64> {
        match self {
            Pauli::I => Matrix2::identity(),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis; index 0 is qubit 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { ops }
    }

    pub fn identity(num_qubits: usize) -> Self {
        PauliString {
            ops: vec![Pauli::I; num_qubits],
        }
    }

    /// Identity everywhere except the listed `(qubit, pauli)` pairs.
    pub fn from_sparse(num_qubits: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        let mut ops = vec![Pauli::I; num_qubits];
        for &(q, p) in sites {
            if q >= num_qubits {
                return Err(Error::Bounds {
                    what: "qubit",
                    index: q,
                    size: num_qubits,
                });
            }
            ops[q] = p;
        }
        Ok(PauliString { ops })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Bit masks over the amplitude index: `(flip, phase, y_count)` where
    /// `flip` marks X/Y sites and `phase` marks Y/Z sites.
    fn masks(&self) -> (usize, usize, usize) {
        let n = self.ops.len();
        let (mut flip, mut phase, mut ys) = (0usize, 0usize, 0usize);
        for (q, p) in self.ops.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase |= bit;
                    ys += 1;
                }
                Pauli::Z => phase |= bit,
            }
        }
        (flip, phase, ys)
    }

    /// Dense `2^n x 2^n` matrix, MSB-first.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.ops.len();
        let (flip, phase, ys) = self.masks();
        let global = Complex64::i().powu(ys as u32);
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let sign = if (j & phase).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(j ^ flip, j)] = global * sign;
        }
        m
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Input(format!("invalid Pauli symbol '{c}'"))))
            .collect::<Result<Vec<_>>>()
            .map(PauliString::new)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// States that can report `<psi|P|psi>` for a Pauli string.
pub trait PauliExpectation {
    fn width(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64>;

    /// Batch form; backends override it to share work between terms.
    fn pauli_expectations(&self, ps: &[&PauliString]) -> Result<Vec<Complex64>> {
        ps.iter().map(|p| self.pauli_expectation(p)).collect()
    }
}

impl PauliExpectation for DenseState {
    fn width(&self) -> usize {
        self.num_qubits()
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        check_width(p, self.num_qubits())?;
        let (flip, phase, ys) = p.masks();
        let amps = self.amplitudes();
        // P|j> = i^ys (-1)^{|j & phase|} |j ^ flip>
        let term = |j: usize| {
            let v = amps[j ^ flip].conj() * amps[j];
            if (j & phase).count_ones() % 2 == 1 {
                -v
            } else {
                v
            }
        };
        let sum: Complex64 = if amps.len() >= PARALLEL_MIN_DIM {
            (0..amps.len()).into_par_iter().map(term).sum()
        } else {
            (0..amps.len()).map(term).sum()
        };
        Ok(sum * Complex64::i().powu(ys as u32))
    }
}

impl PauliExpectation for MpsState {
    fn width(&self) -> usize {
        self.num_qubits()
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        check_width(p, self.num_qubits())?;
        let ops: Vec<Option<Matrix2<Complex64>>> = p
            .ops()
            .iter()
            .map(|&o| if o == Pauli::I { None } else { Some(o.matrix()) })
            .collect();
        self.sandwich(self, &ops)
    }

    fn pauli_expectations(&self, ps: &[&PauliString]) -> Result<Vec<Complex64>> {
        for p in ps {
            check_width(p, self.num_qubits())?;
        }
        let env = self.environments();
        ps.iter()
            .map(|p| {
                let ops = p.ops();
                let Some(first) = ops.iter().position(|&o| o != Pauli::I) else {
                    return self.local_expectation(&env, 0, &[]);
                };
                let last = ops.iter().rposition(|&o| o != Pauli::I).unwrap_or(first);
                let window: Vec<_> = ops[first..=last]
                    .iter()
                    .map(|&o| if o == Pauli::I { None } else { Some(o.matrix()) })
                    .collect();
                self.local_expectation(&env, first, &window)
            })
            .collect()
    }
}

fn check_width(p: &PauliString, n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: p.len(),
        });
    }
    Ok(())
}

/// `H = sum_i c_i P_i` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliObservable {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliObservable {
    pub fn new(num_qubits: usize) -> Self {
        PauliObservable {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: f64, string: PauliString) -> Result<&mut Self> {
        if !coefficient.is_finite() {
            return Err(Error::Input(format!("non-finite coefficient {coefficient}")));
        }
        check_width(&string, self.num_qubits)?;
        self.terms.push((coefficient, string));
        Ok(self)
    }

    /// Parses `coefficient pauli_word` lines. Blank lines and `#` comments
    /// are skipped; the width is taken from the first term.
    pub fn parse(text: &str) -> Result<Self> {
        let mut obs: Option<PauliObservable> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| Error::Parse {
                line: line_no,
                reason,
            };
            let mut fields = line.split_whitespace();
            let (Some(c), Some(w), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err("expected `coefficient pauli_word`".into()));
            };
            let coefficient: f64 = c.parse().map_err(|_| parse_err(format!("bad coefficient '{c}'")))?;
            if !coefficient.is_finite() {
                return Err(parse_err(format!("non-finite coefficient '{c}'")));
            }
            let string: PauliString = w.parse().map_err(|e: Error| match e {
                Error::Input(m) => parse_err(m),
                other => parse_err(other.to_string()),
            })?;
            if string.is_empty() {
                return Err(parse_err("empty Pauli word".into()));
            }
            let o = obs.get_or_insert_with(|| PauliObservable::new(string.len()));
            if string.len() != o.num_qubits {
                return Err(parse_err(format!(
                    "word '{w}' has {} qubits, expected {}",
                    string.len(),
                    o.num_qubits
                )));
            }
            o.terms.push((coefficient, string));
        }
        obs.ok_or_else(|| Error::Parse {
            line: 0,
            reason: "no terms".into(),
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.terms.iter().map(|(c, p)| format!("{c:.16e} {p}\n")).collect()
    }

    /// `sum_i c_i Re<psi|P_i|psi>`.
    pub fn expectation<S: PauliExpectation + ?Sized>(&self, state: &S) -> Result<f64> {
        if state.width() != self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                found: state.width(),
            });
        }
        let strings: Vec<&PauliString> = self.terms.iter().map(|(_, p)| p).collect();
        let values = state.pauli_expectations(&strings)?;
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for ((c, _), v) in self.terms.iter().zip(values) {
            total += v * *c;
            scale += c.abs();
        }
        if total.im.abs() > IMAG_TOLERANCE * scale.max(1.0) {
            return Err(Error::Numerical {
                site: 0,
                reason: format!("expectation has imaginary part {:e}", total.im),
            });
        }
        if !total.re.is_finite() {
            return Err(Error::Numerical {
                site: 0,
                reason: "non-finite expectation".into(),
            });
        }
        Ok(total.re)
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.num_qubits > MATRIX_MAX_QUBITS {
            return Err(Error::Size {
                requested: self.num_qubits,
                cap: MATRIX_MAX_QUBITS,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (c, p) in &self.terms {
            m += p.to_matrix() * Complex64::new(*c, 0.0);
        }
        Ok(m)
    }

    /// Lowest eigenvalue by exact diagonalization.
    pub fn ground_energy(&self) -> Result<f64> {
        let m = self.to_matrix()?;
        let eig = m.symmetric_eigen();
        Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
    }
}
