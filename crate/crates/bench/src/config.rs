use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use qsim_core::mps::MpsConfig;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Qft,
    VqeH2,
    Xyz,
    GradEdge,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Qft => "qft",
            Experiment::VqeH2 => "vqe-h2",
            Experiment::Xyz => "xyz",
            Experiment::GradEdge => "grad-edge",
        }
    }
}

impl FromStr for Experiment {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "qft" => Ok(Experiment::Qft),
            "vqe-h2" => Ok(Experiment::VqeH2),
            "xyz" => Ok(Experiment::Xyz),
            "grad-edge" => Ok(Experiment::GradEdge),
            _ => Err(BenchError::Config(format!(
                "unknown experiment '{s}' (expected qft, vqe-h2, xyz or grad-edge)"
            ))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    Dense,
    Mps,
    Auto,
}

impl FromStr for BackendChoice {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "dense" => Ok(BackendChoice::Dense),
            "mps" => Ok(BackendChoice::Mps),
            "auto" => Ok(BackendChoice::Auto),
            _ => Err(BenchError::Config(format!("unknown backend '{s}' (expected dense, mps or auto)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(BenchError::Config(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

/// Parses `A..B` (inclusive) or a single `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, BenchError> {
    let bad = || BenchError::Config(format!("invalid range '{s}' (expected A..B)"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(BenchError::Config(format!("empty range '{s}'")));
    }
    Ok(a..=b)
}

/// Everything a benchmark run needs. Unset fields take per-experiment
/// defaults in [`BenchConfig::new`].
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub experiment: Experiment,
    pub qubits: RangeInclusive<usize>,
    pub backend: BackendChoice,
    pub mps: MpsConfig,
    /// Largest `n` that `auto` runs on the dense backend.
    pub auto_threshold: usize,
    /// Largest `n` the dense backend accepts at all.
    pub dense_cap: usize,
    pub steps: usize,
    pub time: f64,
    pub layers: RangeInclusive<usize>,
    pub seed: u64,
    pub reps: usize,
    pub parallel_sweep: bool,
    pub hamiltonian: Option<PathBuf>,
    pub series_dir: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_AUTO_THRESHOLD: usize = 12;

impl BenchConfig {
    pub fn new(experiment: Experiment) -> Self {
        let (qubits, mps, dense_cap) = match experiment {
            Experiment::Qft => (1..=10, MpsConfig::default(), 24),
            Experiment::Xyz => (
                4..=8,
                MpsConfig::new(32, 1e-8).expect("valid"),
                qsim_core::dynamics::DENSE_MAX_SITES,
            ),
            Experiment::VqeH2 => (4..=4, MpsConfig::default(), 4),
            Experiment::GradEdge => (2..=2, MpsConfig::default(), 2),
        };
        BenchConfig {
            experiment,
            qubits,
            backend: BackendChoice::Auto,
            mps,
            auto_threshold: DEFAULT_AUTO_THRESHOLD,
            dense_cap,
            steps: 100,
            time: 1.0,
            layers: 3..=10,
            seed: DEFAULT_SEED,
            reps: 1,
            parallel_sweep: false,
            hamiltonian: None,
            series_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.qubits.is_empty() || *self.qubits.start() == 0 {
            return Err(BenchError::Config("qubit range must be nonempty and start at 1 or more".into()));
        }
        if self.layers.is_empty() || *self.layers.start() == 0 {
            return Err(BenchError::Config("layer range must be nonempty and start at 1 or more".into()));
        }
        if self.reps == 0 {
            return Err(BenchError::Config("--reps must be at least 1".into()));
        }
        self.mps.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        if !self.time.is_finite() || self.time < 0.0 {
            return Err(BenchError::Config(format!("--time must be finite and >= 0, got {}", self.time)));
        }
        if self.experiment == Experiment::Xyz && *self.qubits.start() < 2 {
            return Err(BenchError::Config("xyz chains need at least 2 sites".into()));
        }
        Ok(())
    }

    /// Backend for a sweep point of size `n`.
    pub fn resolve_backend(&self, n: usize) -> Result<&'static str, BenchError> {
        match self.backend {
            BackendChoice::Dense if n > self.dense_cap => Err(BenchError::Capability(format!(
                "dense backend limited to {} qubits, requested {n}",
                self.dense_cap
            ))),
            BackendChoice::Dense => Ok("dense"),
            BackendChoice::Mps => Ok("mps"),
            BackendChoice::Auto if n <= self.auto_threshold.min(self.dense_cap) => Ok("dense"),
            BackendChoice::Auto => Ok("mps"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), 3..=10);
        assert_eq!(parse_range("3..=10").unwrap(), 3..=10);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
        assert!(parse_range("").is_err());
    }

    #[test]
    fn auto_switches_at_threshold() {
        let c = BenchConfig::new(Experiment::Qft);
        assert_eq!(c.resolve_backend(12).unwrap(), "dense");
        assert_eq!(c.resolve_backend(20).unwrap(), "mps");
        let mut d = c.clone();
        d.backend = BackendChoice::Dense;
        assert!(matches!(d.resolve_backend(30), Err(BenchError::Capability(_))));
        let x = BenchConfig::new(Experiment::Xyz);
        assert_eq!(x.resolve_backend(16).unwrap(), "mps");
    }

    #[test]
    fn validation() {
        let mut c = BenchConfig::new(Experiment::Qft);
        c.validate().unwrap();
        c.reps = 0;
        assert!(c.validate().is_err());
        let mut c = BenchConfig::new(Experiment::Xyz);
        c.qubits = 1..=3;
        assert!(c.validate().is_err());
    }
}
