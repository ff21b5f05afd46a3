//! First-order optimizers for variational parameters.

use crate::error::{Error, Result};

/// Adam with bias-corrected moments.
#[derive(Clone, Debug, PartialEq)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(num_params: usize, learning_rate: f64) -> Self {
        Adam {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
        }
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.m
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.v
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One update of `params` in place. Nothing is modified on error.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        check(params, grad, self.m.len())?;
        self.t += 1;
        let t = self.t as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
        Ok(())
    }
}

/// Plain gradient descent.
pub fn sgd_step(params: &mut [f64], grad: &[f64], learning_rate: f64) -> Result<()> {
    check(params, grad, params.len())?;
    for (p, g) in params.iter_mut().zip(grad) {
        *p -= learning_rate * g;
    }
    Ok(())
}

fn check(params: &[f64], grad: &[f64], expected: usize) -> Result<()> {
    for len in [params.len(), grad.len()] {
        if len != expected {
            return Err(Error::Dimension { expected, found: len });
        }
    }
    if let Some(index) = grad.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFiniteGradient { index });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_no_op() {
        let mut adam = Adam::new(3, 0.1);
        let mut p = vec![1.0, -2.0, 0.5];
        adam.step(&mut p, &[0.0; 3]).unwrap();
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
        assert_eq!(adam.first_moment(), &[0.0; 3]);
        assert_eq!(adam.second_moment(), &[0.0; 3]);
        assert_eq!(adam.steps(), 1);
    }

    #[test]
    fn descends_on_a_parabola() {
        let mut adam = Adam::new(1, 0.1);
        let mut p = vec![1.0_f64];
        let g = [2.0 * p[0]];
        adam.step(&mut p, &g).unwrap();
        assert!(p[0] < 1.0);
        // First Adam step has magnitude lr regardless of gradient scale.
        assert!((p[0] - 0.9).abs() < 1e-7);
    }

    #[test]
    fn minimizes_cosine() {
        let mut adam = Adam::new(1, 0.01);
        let mut p = vec![0.1_f64];
        for _ in 0..2000 {
            let g = -p[0].sin();
            adam.step(&mut p, &[g]).unwrap();
        }
        assert!((p[0] - std::f64::consts::PI).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_gradients() {
        let mut adam = Adam::new(2, 0.1);
        let mut p = vec![0.0, 0.0];
        assert_eq!(adam.step(&mut p, &[0.0, f64::NAN]), Err(Error::NonFiniteGradient { index: 1 }));
        assert_eq!(adam.steps(), 0);
        assert!(adam.step(&mut p, &[0.0]).is_err());
        assert_eq!(sgd_step(&mut p, &[f64::INFINITY, 0.0], 0.1), Err(Error::NonFiniteGradient { index: 0 }));
        sgd_step(&mut p, &[1.0, -1.0], 0.5).unwrap();
        assert_eq!(p, vec![-0.5, 0.5]);
    }
}
