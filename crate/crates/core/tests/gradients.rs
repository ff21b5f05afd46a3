use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qsim_core::variational::{
    edge_case_circuit, edge_case_observable, finite_difference_gradient, parameter_shift_gradient,
    ParameterizedCircuit, PauliObservable, ShiftRule, DEFAULT_FD_STEP, DEFAULT_SHIFT,
};
use qsim_core::Circuit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random layout of RX/RY/RZ/CRY (parameterized) and CNOT (fixed) gates.
fn random_ansatz(n: usize, depth: usize, seed: u64) -> ParameterizedCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layout = Vec::new();
    let mut rules = Vec::new();
    for _ in 0..depth {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let kind = rng.random_range(0..5u8);
        match kind {
            3 => {}
            4 => rules.push(ShiftRule::FourTerm),
            _ => rules.push(ShiftRule::TwoTerm),
        }
        layout.push((kind, a, b));
    }
    let num_params = rules.len();
    ParameterizedCircuit::new(n, num_params, move |t| {
        let mut c = Circuit::new(n);
        let mut k = 0;
        for &(kind, a, b) in &layout {
            match kind {
                0 => c.rx(a, t[k])?,
                1 => c.ry(a, t[k])?,
                2 => c.rz(a, t[k])?,
                3 => {
                    c.cnot(a, b)?;
                    continue;
                }
                _ => c.cry(a, b, t[k])?,
            };
            k += 1;
        }
        Ok(c)
    })
    .with_shift_rules(rules)
    .unwrap()
}

fn random_observable(n: usize, rng: &mut ChaCha8Rng) -> PauliObservable {
    let mut o = PauliObservable::new(n);
    for _ in 0..4 {
        let word: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
        o.add_term(rng.random_range(-1.0..1.0), word.parse().unwrap()).unwrap();
    }
    o
}

fn sup_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn shift_rule_matches_finite_differences_on_fifty_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..50 {
        let pc = random_ansatz(4, 20, 1000 + k);
        let obs = random_observable(4, &mut rng);
        let theta: Vec<f64> = (0..pc.num_params()).map(|_| rng.random_range(-PI..PI)).collect();
        let psr = parameter_shift_gradient(&pc, &obs, &theta, DEFAULT_SHIFT).unwrap();
        let fd = finite_difference_gradient(&pc, &obs, &theta, DEFAULT_FD_STEP).unwrap();
        assert_eq!(psr.len(), pc.num_params());
        assert!(sup_norm(&psr, &fd) < 1e-5, "circuit {k}: {}", sup_norm(&psr, &fd));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shift_rule_agrees_with_differences(seed in any::<u64>(), depth in 1usize..16, offset in -10.0f64..10.0) {
        let pc = random_ansatz(4, depth, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let obs = random_observable(4, &mut rng);
        let theta: Vec<f64> = (0..pc.num_params()).map(|_| offset + rng.random_range(-1.0..1.0)).collect();
        let psr = parameter_shift_gradient(&pc, &obs, &theta, DEFAULT_SHIFT).unwrap();
        let fd = finite_difference_gradient(&pc, &obs, &theta, DEFAULT_FD_STEP).unwrap();
        prop_assert!(sup_norm(&psr, &fd) < 1e-5);
        prop_assert!(psr.iter().all(|g| g.is_finite()));
    }

    #[test]
    fn gradients_are_reproducible(seed in any::<u64>()) {
        let pc = random_ansatz(3, 10, seed);
        let obs = random_observable(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let theta = vec![0.3; pc.num_params()];
        let a = parameter_shift_gradient(&pc, &obs, &theta, DEFAULT_SHIFT).unwrap();
        let b = parameter_shift_gradient(&pc, &obs, &theta, DEFAULT_SHIFT).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn edge_gradient(theta: [f64; 4]) -> Vec<f64> {
    parameter_shift_gradient(&edge_case_circuit(), &edge_case_observable(), &theta, DEFAULT_SHIFT).unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64, label: &str) {
    assert_eq!(got.len(), 4, "{label}: empty or short gradient");
    assert!(got.iter().all(|g| g.is_finite()), "{label}: non-finite gradient {got:?}");
    assert!(sup_norm(got, want) < tol, "{label}: {got:?} vs {want:?}");
}

#[test]
fn edge_case_table() {
    assert_close(&edge_gradient([0.5, 0.3, 0.2, 0.1]), &[-0.4808, -0.0053, -0.0069, -0.0101], 1e-4, "normal");
    assert_close(&edge_gradient([10.0, 5.0, 3.0, 2.0]), &[0.1072, 0.6889, 0.2348, 0.5258], 1e-4, "large");
    assert_close(&edge_gradient([1e-8, 1e-7, 1e-6, 1e-5]), &[-1.0e-8, 0.0, 0.0, 0.0], 1e-6, "near zero");
    assert_close(&edge_gradient([FRAC_PI_2; 4]), &[-0.5, -0.5, 0.0, 0.0], 1e-4, "pi/2");
    assert_close(&edge_gradient([PI; 4]), &[0.0; 4], 1e-4, "pi");
}

#[test]
fn edge_case_matches_independent_formula() {
    // <Z0> written out by hand from the gate matrices, differentiated by
    // finite differences at a coarse step and compared loosely.
    let f = |t: &[f64]| -> f64 {
        use num_complex::Complex64 as C;
        let (c0, s0) = ((t[0] / 2.0).cos(), (t[0] / 2.0).sin());
        let (c1, s1) = ((t[1] / 2.0).cos(), (t[1] / 2.0).sin());
        let e = C::from_polar(1.0, -t[2] / 2.0);
        let q0 = [C::new(c0, 0.0) * e, C::new(0.0, -s0) * e.conj()];
        let q1 = [c1, s1];
        // amplitudes |q0 q1>
        let mut a = [C::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                a[i * 2 + j] = q0[i] * q1[j];
            }
        }
        a.swap(2, 3); // CNOT 0 -> 1
        let (c3, s3) = ((t[3] / 2.0).cos(), (t[3] / 2.0).sin());
        let (x, y) = (a[1], a[3]); // q1 = 1: rotate q0
        a[1] = x * c3 - y * s3;
        a[3] = x * s3 + y * c3;
        a[0].norm_sqr() + a[1].norm_sqr() - a[2].norm_sqr() - a[3].norm_sqr()
    };
    let theta = [0.5, 0.3, 0.2, 0.1];
    let g = edge_gradient(theta);
    for i in 0..4 {
        let mut p = theta;
        p[i] += 1e-6;
        let up = f(&p);
        p[i] -= 2e-6;
        let down = f(&p);
        assert!(((up - down) / 2e-6 - g[i]).abs() < 1e-8);
    }
}
