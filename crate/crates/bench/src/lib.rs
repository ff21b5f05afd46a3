//! Benchmark harness for the qsim simulators: four experiment families, each
//! self-checked before any timing is reported.

pub mod config;
mod grad_edge;
mod qft;
pub mod table;
mod vqe;
mod xyz;

use std::time::Instant;

use rayon::prelude::*;

pub use config::{parse_range, BackendChoice, BenchConfig, Experiment, Format};
pub use grad_edge::{run_grad_edge, EdgeCase, EDGE_CASES};
pub use qft::run_qft_bench;
pub use table::{Cell, Table};
pub use vqe::run_vqe_h2;
pub use xyz::run_xyz;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("correctness check failed: {0}")]
    Correctness(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Io(_) => 2,
            BenchError::Correctness(_) => 3,
            BenchError::Capability(_) => 4,
        }
    }
}

impl From<qsim_core::Error> for BenchError {
    fn from(e: qsim_core::Error) -> Self {
        use qsim_core::Error as E;
        match e {
            E::Size { .. } | E::Capability(_) => BenchError::Capability(e.to_string()),
            E::Input(_) | E::Parse { .. } | E::Io(_) => BenchError::Config(e.to_string()),
            _ => BenchError::Correctness(e.to_string()),
        }
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Io(e.to_string())
    }
}

/// Output of one experiment. `failures` lists rows whose checks failed but
/// were still emitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn run(config: &BenchConfig) -> Result<Report, BenchError> {
    config.validate()?;
    match config.experiment {
        Experiment::Qft => run_qft_bench(config).map(Report::clean),
        Experiment::VqeH2 => run_vqe_h2(config).map(Report::clean),
        Experiment::Xyz => run_xyz(config).map(Report::clean),
        Experiment::GradEdge => Ok(run_grad_edge(config)),
    }
}

impl Report {
    fn clean(table: Table) -> Self {
        Report {
            table,
            failures: Vec::new(),
        }
    }
}

/// Runs `f` `reps` times and returns the last value with the fastest time in
/// seconds.
pub(crate) fn best_of<T>(reps: usize, mut f: impl FnMut() -> Result<T, BenchError>) -> Result<(T, f64), BenchError> {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let v = f()?;
        best = best.min(start.elapsed().as_secs_f64());
        last = Some(v);
    }
    Ok((last.expect("at least one rep"), best))
}

/// Maps each sweep point to a row, in order, optionally across threads.
pub(crate) fn sweep<P, F>(points: Vec<P>, parallel: bool, f: F) -> Result<Vec<Vec<Cell>>, BenchError>
where
    P: Send + Sync,
    F: Fn(&P) -> Result<Vec<Cell>, BenchError> + Send + Sync,
{
    if parallel {
        points.par_iter().map(&f).collect()
    } else {
        points.iter().map(&f).collect()
    }
}

pub(crate) fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), BenchError> {
    if ok {
        Ok(())
    } else {
        Err(BenchError::Correctness(msg()))
    }
}
