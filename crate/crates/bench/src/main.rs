use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qsim_bench::{parse_range, BackendChoice, BenchConfig, BenchError, Experiment, Format};

#[derive(Parser, Debug)]
#[command(name = "qsim-bench", version, about = "Run a qsim benchmark experiment")]
struct Cli {
    /// qft, vqe-h2, xyz or grad-edge
    experiment: String,
    /// Qubit (or chain length) range, `A..B` or `A`
    #[arg(long)]
    qubits: Option<String>,
    /// dense, mps or auto
    #[arg(long, default_value = "auto")]
    backend: String,
    #[arg(long)]
    max_bond_dim: Option<usize>,
    #[arg(long)]
    trunc_eps: Option<f64>,
    /// Trotter steps
    #[arg(long)]
    steps: Option<usize>,
    /// Total evolution time
    #[arg(long)]
    time: Option<f64>,
    /// Ansatz layer range, `L..M` or `L`
    #[arg(long)]
    layers: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Timing repetitions; the fastest is reported
    #[arg(long)]
    reps: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Run sweep points on a thread pool
    #[arg(long)]
    parallel_sweep: bool,
    /// Hamiltonian file for vqe-h2; the bundled H2 data when absent
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Directory for per-chain energy series (xyz)
    #[arg(long)]
    series_dir: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> Result<(BenchConfig, Format), BenchError> {
    let mut c = BenchConfig::new(cli.experiment.parse::<Experiment>()?);
    c.backend = cli.backend.parse::<BackendChoice>()?;
    if let Some(q) = &cli.qubits {
        c.qubits = parse_range(q)?;
    }
    if let Some(l) = &cli.layers {
        c.layers = parse_range(l)?;
    }
    if let Some(k) = cli.max_bond_dim {
        c.mps.max_bond_dim = k;
    }
    if let Some(e) = cli.trunc_eps {
        c.mps.truncation_threshold = e;
    }
    if let Some(s) = cli.steps {
        c.steps = s;
    }
    if let Some(t) = cli.time {
        c.time = t;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(r) = cli.reps {
        c.reps = r;
    }
    c.parallel_sweep = cli.parallel_sweep;
    c.hamiltonian = cli.hamiltonian.clone();
    c.series_dir = cli.series_dir.clone();
    Ok((c, cli.format.parse()?))
}

fn execute(cli: &Cli) -> Result<(), BenchError> {
    let (config, format) = build_config(cli)?;
    let report = qsim_bench::run(&config)?;
    let out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            BenchError::Config(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => report.table.write_csv(out)?,
        Format::Json => report.table.write_json(out)?,
    }
    if !report.failures.is_empty() {
        return Err(BenchError::Correctness(report.failures.join("; ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsim-bench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
