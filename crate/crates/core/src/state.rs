//! Dense state-vector representation.
//!
//! Qubit `q` of an `n`-qubit register occupies bit `n - 1 - q` of the
//! amplitude index (MSB-first), so `|q0 q1 ... q(n-1)>` reads left to right as
//! the binary expansion of the index.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default upper bound on the dense register width (2^26 amplitudes, 1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

impl DenseState {
    /// `|0...0>` on `num_qubits` qubits, capped at [`DEFAULT_QUBIT_CAP`].
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::zero_state_with_cap(num_qubits, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_state_with_cap(num_qubits: usize, cap: usize) -> Result<Self> {
        Self::basis_state_with_cap(num_qubits, 0, cap)
    }

    /// Computational basis state `|index>` (MSB-first labelling).
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        Self::basis_state_with_cap(num_qubits, index, DEFAULT_QUBIT_CAP)
    }

    pub fn basis_state_with_cap(num_qubits: usize, index: usize, cap: usize) -> Result<Self> {
        check_width(num_qubits, cap)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Bounds {
                what: "basis index",
                index,
                size: dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    /// Wraps a raw amplitude vector. The length must be a power of two; no
    /// normalization is applied or checked.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Input(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_width(num_qubits, DEFAULT_QUBIT_CAP)?;
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    /// Haar-like random normalized state (complex Gaussian entries, normalized).
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_width(num_qubits, DEFAULT_QUBIT_CAP)?;
        let dim = 1usize << num_qubits;
        let mut amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<self|other> = sum_i conj(a_i) b_i`.
    pub fn inner_product(&self, other: &DenseState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &DenseState) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Writes `index<TAB>re<TAB>im` per basis index with 17 significant digits.
    pub fn dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, a) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{i}\t{:.16e}\t{:.16e}", a.re, a.im)?;
        }
        Ok(())
    }

    /// Bit mask selecting qubit `q` in the amplitude index.
    #[inline]
    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Bounds {
                what: "qubit",
                index: qubit,
                size: self.num_qubits,
            });
        }
        Ok(())
    }
}

fn check_width(num_qubits: usize, cap: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > cap {
        return Err(Error::Size {
            requested: num_qubits,
            cap,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_states() {
        assert_eq!(DenseState::zero_state(1).unwrap().amplitudes(), &[c(1.0), c(0.0)]);
        assert_eq!(
            DenseState::zero_state(2).unwrap().amplitudes(),
            &[c(1.0), c(0.0), c(0.0), c(0.0)]
        );
        let s = DenseState::zero_state(3).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0)));
    }

    #[test]
    fn zero_state_size_errors() {
        assert!(matches!(DenseState::zero_state(0), Err(Error::Size { .. })));
        assert!(matches!(DenseState::zero_state(27), Err(Error::Size { .. })));
        assert!(DenseState::zero_state_with_cap(5, 4).is_err());
    }

    #[test]
    fn basis_states() {
        // |110> is index 6 with qubit 0 as the most significant bit.
        let s = DenseState::basis_state(3, 0b110).unwrap();
        assert_eq!(s.amplitudes()[6], c(1.0));
        assert_eq!(DenseState::basis_state(2, 0).unwrap(), DenseState::zero_state(2).unwrap());
        assert_eq!(DenseState::basis_state(1, 1).unwrap().amplitudes(), &[c(0.0), c(1.0)]);
        assert!(matches!(
            DenseState::basis_state(2, 4),
            Err(Error::Bounds { index: 4, .. })
        ));
    }

    #[test]
    fn inner_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = DenseState::random(4, &mut rng).unwrap();
        let ip = psi.inner_product(&psi).unwrap();
        assert!((ip - c(1.0)).norm() < 1e-12);

        let a = DenseState::basis_state(2, 0).unwrap();
        let b = DenseState::basis_state(2, 3).unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0));

        let plus = DenseState::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let zero = DenseState::zero_state(1).unwrap();
        assert!((plus.inner_product(&zero).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);

        assert!(matches!(a.inner_product(&zero), Err(Error::Dimension { .. })));
    }

    #[test]
    fn probability_vectors() {
        assert_eq!(DenseState::zero_state(1).unwrap().probabilities(), vec![1.0, 0.0]);
        let bell = DenseState::from_amplitudes(vec![
            c(FRAC_1_SQRT_2),
            c(0.0),
            c(0.0),
            c(FRAC_1_SQRT_2),
        ])
        .unwrap();
        let p = bell.probabilities();
        for (x, y) in p.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
        let uniform = DenseState::from_amplitudes(vec![c(1.0 / 8f64.sqrt()); 8]).unwrap();
        for x in uniform.probabilities() {
            assert!((x - 0.125).abs() < 1e-15);
        }
        let sum: f64 = uniform.probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_probabilities_are_unit_vectors() {
        for i in 0..8 {
            let p = DenseState::basis_state(3, i).unwrap().probabilities();
            for (j, x) in p.iter().enumerate() {
                assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn from_amplitudes_rejects_bad_lengths() {
        assert!(DenseState::from_amplitudes(vec![c(1.0); 3]).is_err());
        assert!(DenseState::from_amplitudes(vec![c(1.0)]).is_err());
    }

    #[test]
    fn dump_format() {
        let s = DenseState::basis_state(1, 1).unwrap();
        let mut buf = Vec::new();
        s.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "0\t0.0000000000000000e0\t0.0000000000000000e0");
        assert_eq!(lines[1], "1\t1.0000000000000000e0\t0.0000000000000000e0");
    }
}
