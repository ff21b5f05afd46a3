use std::fs::{self, File};
use std::io::BufWriter;

use qsim_core::dynamics::{evolve, write_series_csv, Backend, TrotterPlan, XyzParams};

use crate::{best_of, check, sweep, BenchConfig, BenchError, Table};

pub const COLUMNS: [&str; 7] = ["N", "backend", "E_initial", "E_final", "ΔE", "wall_time", "peak_bond_dim"];

const INITIAL_TOL: f64 = 1e-10;
const CROSS_CHECK_TOL: f64 = 1e-4;
/// Largest chain cross-checked against dense when the bond cap is exact.
const CROSS_CHECK_MAX_SITES: usize = 10;

/// Isotropic chain, `J = 1`, field `2 sin t`, started from `|1...1>`.
pub fn run_xyz(config: &BenchConfig) -> Result<Table, BenchError> {
    let plan = TrotterPlan::new(config.time, config.steps)?;
    let points: Vec<(usize, &'static str)> = config
        .qubits
        .clone()
        .map(|n| config.resolve_backend(n).map(|b| (n, b)))
        .collect::<Result<_, _>>()?;
    if let Some(dir) = &config.series_dir {
        fs::create_dir_all(dir)?;
    }
    let rows = sweep(points, config.parallel_sweep, |&(n, name)| {
        let params = XyzParams::isotropic(n);
        let backend = if name == "dense" { Backend::Dense } else { Backend::Mps(config.mps) };
        let (evo, wall) = best_of(config.reps, || Ok(evolve(&params, &plan, backend, 1)?))?;
        let expected = -params.jz * (n - 1) as f64;
        check((evo.initial_energy - expected).abs() <= INITIAL_TOL, || {
            format!("initial energy {} at N={n}, expected {expected}", evo.initial_energy)
        })?;
        let exact_bond = n / 2 < usize::BITS as usize && config.mps.max_bond_dim >= 1 << (n / 2);
        if name == "mps" && exact_bond && n <= CROSS_CHECK_MAX_SITES {
            let dense = evolve(&params, &plan, Backend::Dense, plan.steps().max(1))?;
            let diff = (dense.final_energy - evo.final_energy).abs();
            check(diff <= CROSS_CHECK_TOL, || format!("MPS and dense final energies differ by {diff:e} at N={n}"))?;
        }
        if let Some(dir) = &config.series_dir {
            let path = dir.join(format!("xyz_N{n}_{name}.csv"));
            write_series_csv(&evo.series, BufWriter::new(File::create(path)?))?;
        }
        Ok(vec![
            n.into(),
            name.into(),
            evo.initial_energy.into(),
            evo.final_energy.into(),
            evo.delta_energy.into(),
            wall.into(),
            evo.peak_bond_dim.into(),
        ])
    })?;
    let mut table = Table::new("xyz", &COLUMNS);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
