//! Complex singular value decomposition by one-sided Jacobi rotations.
//!
//! Used for the MPS two-site split. One-sided Jacobi stays accurate on the
//! rank-deficient blocks that product-like states produce constantly, and
//! it resolves small singular values to high relative accuracy.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// `A = U diag(sigma) V^dagger`, thin form, singular values descending.
///
/// `u` has orthonormal columns and `v_t` orthonormal rows. Singular values
/// below roundoff of the largest one are reported as exactly zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DMatrix<Complex64>,
    pub singular_values: Vec<f64>,
    pub v_t: DMatrix<Complex64>,
}

/// Returns `None` if the rotations fail to converge or the input holds
/// non-finite entries.
pub fn svd(a: &DMatrix<Complex64>) -> Option<Svd> {
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    if a.nrows() < a.ncols() {
        let t = svd_tall(&a.adjoint())?;
        return Some(Svd {
            u: t.v_t.adjoint(),
            singular_values: t.singular_values,
            v_t: t.u.adjoint(),
        });
    }
    svd_tall(a)
}

fn svd_tall(a: &DMatrix<Complex64>) -> Option<Svd> {
    let (m, n) = a.shape();
    if n == 0 {
        return Some(Svd {
            u: DMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            v_t: DMatrix::zeros(0, 0),
        });
    }
    // Reduce tall input to its n x n triangular factor first.
    let (q, r) = if m > n {
        let qr = a.clone().qr();
        (Some(qr.q()), qr.r())
    } else {
        (None, a.clone())
    };

    let rows = r.nrows();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| r.column(j).iter().copied().collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let tol = f64::EPSILON * rows.max(1) as f64;
    let total: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let floor = (f64::EPSILON * f64::EPSILON) * total;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for qi in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[qi].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma: Complex64 = cols[p].iter().zip(&cols[qi]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate a_q by the phase of gamma so the pair is real-coupled.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, qi, phase, c, s);
                rotate(&mut v, p, qi, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }

    let sigma: Vec<f64> = cols
        .iter()
        .map(|c| {
            let w: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if w <= floor { 0.0 } else { w.sqrt() }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut u_r = DMatrix::<Complex64>::zeros(rows, n);
    let mut v_t = DMatrix::<Complex64>::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = sigma[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..rows {
                u_r[(i, k)] = cols[j][i] / s;
            }
        }
        for i in 0..n {
            v_t[(k, i)] = v[j][i].conj();
        }
    }
    complete_columns(&mut u_r, &singular_values);
    let u = match q {
        Some(q) => q * u_r,
        None => u_r,
    };
    Some(Svd {
        u,
        singular_values,
        v_t,
    })
}

/// Replace the columns paired with zero singular values by an orthonormal
/// completion of the others.
fn complete_columns(u: &mut DMatrix<Complex64>, sigma: &[f64]) {
    let rows = u.nrows();
    let mut basis = 0;
    for k in 0..sigma.len() {
        if sigma[k] > 0.0 {
            continue;
        }
        while basis < rows {
            let mut x = vec![Complex64::new(0.0, 0.0); rows];
            x[basis] = Complex64::new(1.0, 0.0);
            basis += 1;
            for _ in 0..2 {
                for j in 0..sigma.len() {
                    if j == k || (sigma[j] == 0.0 && j > k) {
                        continue;
                    }
                    let col = u.column(j);
                    let proj: Complex64 = col.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                    for (xi, ci) in x.iter_mut().zip(col.iter()) {
                        *xi -= proj * ci;
                    }
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                for (i, xi) in x.iter().enumerate() {
                    u[(i, k)] = xi / norm;
                }
                break;
            }
        }
    }
}

/// `x_p <- c x_p - s e^{i phi} x_q`, `x_q <- s x_p + c e^{i phi} x_q`.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (xp, xq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn check(a: &DMatrix<Complex64>) {
        let d = svd(a).expect("converges");
        let k = a.nrows().min(a.ncols());
        assert_eq!(d.singular_values.len(), k);
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            k,
            d.singular_values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let rec = &d.u * sigma * &d.v_t;
        let scale = a.norm().max(1.0);
        assert!((rec - a).norm() / scale < 1e-13);
        let vv = &d.v_t * d.v_t.adjoint();
        assert!((vv - DMatrix::identity(k, k)).norm() < 1e-13);
        let uu = d.u.adjoint() * &d.u;
        assert!((uu - DMatrix::identity(k, k)).norm() < 1e-12);
    }

    #[test]
    fn reconstructs_full_and_low_rank_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (r, c) in [(1, 1), (2, 2), (8, 2), (2, 8), (4, 4), (8, 8), (16, 4), (4, 16), (64, 64), (128, 64)] {
            for rank in [1, 2, r.min(c)] {
                let rank = rank.min(r.min(c));
                let a = random(r, rank, &mut rng) * random(rank, c, &mut rng);
                check(&a);
            }
        }
    }

    #[test]
    fn zero_and_diagonal_inputs() {
        check(&DMatrix::zeros(4, 3));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = DMatrix::from_diagonal_element(2, 2, Complex64::new(h, 0.0));
        let s = svd(&d).unwrap();
        assert!(s.singular_values.iter().all(|x| (x - h).abs() < 1e-15));
        check(&d);
    }

    #[test]
    fn known_spectrum() {
        // diag(3, 1) rotated on both sides keeps its singular values.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q1 = random(3, 3, &mut rng).qr().q();
        let q2 = random(3, 3, &mut rng).qr().q();
        let mut d = DMatrix::<Complex64>::zeros(3, 3);
        d[(0, 0)] = Complex64::new(3.0, 0.0);
        d[(1, 1)] = Complex64::new(1.0, 0.0);
        let a = q1 * d * q2;
        let s = svd(&a).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-13);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-13);
        assert!(s.singular_values[2].abs() < 1e-13);
    }

    #[test]
    fn rejects_nan() {
        let mut a = DMatrix::<Complex64>::identity(2, 2);
        a[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(svd(&a).is_none());
    }
}
