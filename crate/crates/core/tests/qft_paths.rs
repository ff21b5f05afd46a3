use qsim_core::mps::{MpsConfig, MpsState};
use qsim_core::qft::{inverse_qft_circuit, inverse_qft_dense_fft, qft_circuit, qft_dense_fft};
use qsim_core::{execute_on_backend, DenseState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fft_and_circuit_agree_on_basis_states() {
    for n in 1..=8 {
        let c = qft_circuit(n).unwrap();
        for x in 0..1usize << n {
            let mut a = DenseState::basis_state(n, x).unwrap();
            let mut b = a.clone();
            qft_dense_fft(&mut a);
            c.execute(&mut b).unwrap();
            let d = a.distance(&b).unwrap();
            assert!(d < 1e-10, "n={n} x={x} distance {d}");
        }
    }
}

#[test]
fn fft_and_circuit_agree_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..100 {
        let n = 1 + k % 8;
        let c = qft_circuit(n).unwrap();
        let mut a = DenseState::random(n, &mut rng).unwrap();
        let mut b = a.clone();
        qft_dense_fft(&mut a);
        c.execute(&mut b).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-10);
    }
}

#[test]
fn circuit_round_trip_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=8 {
        let s0 = DenseState::random(n, &mut rng).unwrap();
        let mut s = s0.clone();
        qft_circuit(n).unwrap().execute(&mut s).unwrap();
        inverse_qft_circuit(n).unwrap().execute(&mut s).unwrap();
        assert!(s.distance(&s0).unwrap() < 1e-10);

        let mut f = s0.clone();
        qft_dense_fft(&mut f);
        inverse_qft_circuit(n).unwrap().execute(&mut f).unwrap();
        assert!(f.distance(&s0).unwrap() < 1e-10);
        inverse_qft_dense_fft(&mut f);
        qft_dense_fft(&mut f);
        assert!(f.distance(&s0).unwrap() < 1e-10);
    }
}

#[test]
fn mps_circuit_matches_fft() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in [2, 5, 9, 12] {
        for _ in 0..3 {
            let x = rand::Rng::random_range(&mut rng, 0..1usize << n);
            let mut mps = MpsState::basis_state(n, x, MpsConfig::new(64, 1e-8).unwrap()).unwrap();
            execute_on_backend(&qft_circuit(n).unwrap(), &mut mps).unwrap();
            let mut dense = DenseState::basis_state(n, x).unwrap();
            qft_dense_fft(&mut dense);
            let d = dense.distance(&mps.to_dense().unwrap()).unwrap();
            assert!(d < 1e-8, "n={n} x={x} distance {d}");
            assert!(mps.peak_bond_dim() <= 64);
        }
    }
}
