use std::f64::consts::{FRAC_PI_2, PI};

use qsim_core::variational::{edge_case_circuit, edge_case_observable, parameter_shift_gradient, DEFAULT_SHIFT};
use qsim_core::Error;

use crate::{BenchConfig, Cell, Report, Table};

pub const COLUMNS: [&str; 7] = ["case", "g0", "g1", "g2", "g3", "nan_detected", "pass"];

pub struct EdgeCase {
    pub name: &'static str,
    pub theta: [f64; 4],
    pub expected: [f64; 4],
    pub tolerance: f64,
}

pub const EDGE_CASES: [EdgeCase; 5] = [
    EdgeCase {
        name: "normal",
        theta: [0.5, 0.3, 0.2, 0.1],
        expected: [-0.4808, -0.0053, -0.0069, -0.0101],
        tolerance: 1e-4,
    },
    EdgeCase {
        name: "large",
        theta: [10.0, 5.0, 3.0, 2.0],
        expected: [0.1072, 0.6889, 0.2348, 0.5258],
        tolerance: 1e-4,
    },
    EdgeCase {
        name: "near-zero",
        theta: [1e-8, 1e-7, 1e-6, 1e-5],
        expected: [-1.0e-8, 0.0, 0.0, 0.0],
        tolerance: 1e-6,
    },
    EdgeCase {
        name: "pi/2",
        theta: [FRAC_PI_2; 4],
        expected: [-0.5, -0.5, 0.0, 0.0],
        tolerance: 1e-4,
    },
    EdgeCase {
        name: "pi",
        theta: [PI; 4],
        expected: [0.0; 4],
        tolerance: 1e-4,
    },
];

/// Always emits all five rows; a NaN or a miss marks the row failed.
pub fn run_grad_edge(_config: &BenchConfig) -> Report {
    let circuit = edge_case_circuit();
    let observable = edge_case_observable();
    let mut table = Table::new("grad-edge", &COLUMNS);
    let mut failures = Vec::new();
    for case in &EDGE_CASES {
        let grad = match parameter_shift_gradient(&circuit, &observable, &case.theta, DEFAULT_SHIFT) {
            Ok(g) => g,
            Err(Error::NonFiniteGradient { .. } | Error::NonFiniteEnergy { .. }) => vec![f64::NAN; 4],
            Err(e) => {
                failures.push(format!("{}: {e}", case.name));
                table.push(row(case.name, &[f64::NAN; 4], false, false));
                continue;
            }
        };
        let nan = grad.len() != 4 || grad.iter().any(|g| !g.is_finite());
        let pass = !nan && grad.iter().zip(&case.expected).all(|(g, e)| (g - e).abs() <= case.tolerance);
        if !pass {
            failures.push(format!("{}: gradient {grad:?}, expected {:?}", case.name, case.expected));
        }
        table.push(row(case.name, &grad, nan, pass));
    }
    Report { table, failures }
}

fn row(name: &str, grad: &[f64], nan: bool, pass: bool) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![name.into()];
    row.extend((0..4).map(|i| Cell::Float(grad.get(i).copied().unwrap_or(f64::NAN))));
    row.push(nan.into());
    row.push(pass.into());
    row
}
