//! Matrix product state backend.
//!
//! Site `i` holds a rank-3 tensor `A_i[alpha_{i-1}, s, alpha_i]` with open
//! boundaries (`chi_0 = chi_n = 1`). Two-site gates contract neighbouring
//! tensors, apply the 4x4 unitary, split the result by SVD and truncate.
//!
//! The state keeps an orthogonality center: every tensor left of it is a left
//! isometry and every tensor right of it a right isometry. Before a two-site
//! update the center is shifted onto the left site with thin QR steps, so
//! the singular values of the two-site block are the Schmidt coefficients of
//! the full state and `sum sigma^2 = 1`. After the SVD, `Sigma` is absorbed
//! into the left tensor, which leaves the center there.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::circuit::StateBackend;
use crate::error::{Error, Result};
use crate::gates::FixedGate;
use crate::linalg;
use crate::state::DenseState;

/// Largest register `to_dense` will expand.
pub const TO_DENSE_MAX_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpsConfig {
    pub max_bond_dim: usize,
    pub truncation_threshold: f64,
}

impl Default for MpsConfig {
    fn default() -> Self {
        Self {
            max_bond_dim: 64,
            truncation_threshold: 1e-8,
        }
    }
}

impl MpsConfig {
    pub fn new(max_bond_dim: usize, truncation_threshold: f64) -> Result<Self> {
        let cfg = Self {
            max_bond_dim,
            truncation_threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_bond_dim == 0 {
            return Err(Error::Input("max_bond_dim must be at least 1".into()));
        }
        if !(self.truncation_threshold >= 0.0) || !self.truncation_threshold.is_finite() {
            return Err(Error::Input(format!(
                "truncation threshold must be finite and nonnegative, got {}",
                self.truncation_threshold
            )));
        }
        Ok(())
    }
}

/// One site tensor, stored row-major as `[left][physical][right]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    left: usize,
    right: usize,
    data: Vec<Complex64>,
}

impl SiteTensor {
    fn zeros(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            data: vec![ZERO; left * 2 * right],
        }
    }

    /// `(left, 2, right)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.left, 2, self.right)
    }

    #[inline]
    fn idx(&self, a: usize, s: usize, b: usize) -> usize {
        (a * 2 + s) * self.right + b
    }

    /// Element `A^s[a, b]` (zero-based indices).
    #[inline]
    pub fn get(&self, s: usize, a: usize, b: usize) -> Complex64 {
        self.data[self.idx(a, s, b)]
    }

    #[inline]
    fn set(&mut self, s: usize, a: usize, b: usize, v: Complex64) {
        let i = self.idx(a, s, b);
        self.data[i] = v;
    }

    /// The `left x right` matrix `A^s`.
    fn slice(&self, s: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.left, self.right, |a, b| self.get(s, a, b))
    }

    fn elements(&self) -> usize {
        self.data.len()
    }
}

/// What a two-site update did to its bond.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationReport {
    pub site: usize,
    /// Full singular spectrum in descending order, before renormalization.
    pub singular_values: Vec<f64>,
    /// Number of singular values retained; the new bond dimension.
    pub kept: usize,
    /// Sum of squared discarded singular values for this update.
    pub discarded_weight: f64,
}

#[derive(Clone, Debug)]
pub struct MpsState {
    tensors: Vec<SiteTensor>,
    config: MpsConfig,
    discarded_weight: f64,
    center: usize,
    peak_bond_dim: usize,
    peak_elements: usize,
}

impl MpsState {
    pub fn zero_state(num_qubits: usize, config: MpsConfig) -> Result<Self> {
        Self::product_state(&vec![false; num_qubits], config)
    }

    pub fn one_state(num_qubits: usize, config: MpsConfig) -> Result<Self> {
        Self::product_state(&vec![true; num_qubits], config)
    }

    /// Computational basis state, one bit per site (`true` = |1>).
    pub fn product_state(bits: &[bool], config: MpsConfig) -> Result<Self> {
        config.validate()?;
        if bits.is_empty() {
            return Err(Error::Size {
                requested: 0,
                cap: usize::MAX,
            });
        }
        let tensors: Vec<SiteTensor> = bits
            .iter()
            .map(|&bit| {
                let mut t = SiteTensor::zeros(1, 1);
                t.set(bit as usize, 0, 0, ONE);
                t
            })
            .collect();
        let peak_elements = tensors.iter().map(SiteTensor::elements).sum();
        Ok(Self {
            tensors,
            config,
            discarded_weight: 0.0,
            center: 0,
            peak_bond_dim: 1,
            peak_elements,
        })
    }

    /// Basis state `|index>` under the MSB-first convention.
    pub fn basis_state(num_qubits: usize, index: usize, config: MpsConfig) -> Result<Self> {
        if num_qubits < usize::BITS as usize && index >> num_qubits != 0 {
            return Err(Error::Bounds {
                what: "basis index",
                index,
                size: 1usize << num_qubits,
            });
        }
        let bits: Vec<bool> = (0..num_qubits)
            .map(|q| {
                let shift = num_qubits - 1 - q;
                shift < usize::BITS as usize && (index >> shift) & 1 == 1
            })
            .collect();
        Self::product_state(&bits, config)
    }

    pub fn num_qubits(&self) -> usize {
        self.tensors.len()
    }

    pub fn config(&self) -> MpsConfig {
        self.config
    }

    pub fn tensors(&self) -> &[SiteTensor] {
        &self.tensors
    }

    /// Accumulated `sum sigma^2` over all discarded singular values.
    pub fn discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    /// `chi_0 ..= chi_n`, including the trivial boundary bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(self.tensors[0].left)
            .chain(self.tensors.iter().map(|t| t.right))
            .collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Largest bond dimension seen since construction.
    pub fn peak_bond_dim(&self) -> usize {
        self.peak_bond_dim
    }

    /// 16 bytes per stored complex element.
    pub fn memory_bytes(&self) -> usize {
        16 * self.tensors.iter().map(SiteTensor::elements).sum::<usize>()
    }

    pub fn peak_memory_bytes(&self) -> usize {
        16 * self.peak_elements
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.num_qubits() {
            return Err(Error::Bounds {
                what: "site",
                index: site,
                size: self.num_qubits(),
            });
        }
        Ok(())
    }

    /// `A^s <- sum_{s'} U[s, s'] A^{s'}`; bond dimensions are untouched.
    pub fn apply_single_qubit(&mut self, site: usize, u: &Matrix2<Complex64>) -> Result<()> {
        self.check_site(site)?;
        let t = &mut self.tensors[site];
        for a in 0..t.left {
            for b in 0..t.right {
                let (x0, x1) = (t.get(0, a, b), t.get(1, a, b));
                t.set(0, a, b, u[(0, 0)] * x0 + u[(0, 1)] * x1);
                t.set(1, a, b, u[(1, 0)] * x0 + u[(1, 1)] * x1);
            }
        }
        Ok(())
    }

    /// The gated two-site block for sites `(site, site + 1)`, reshaped to a
    /// `(chi_left * 2) x (2 * chi_right)` matrix with rows `(alpha, s_i)` and
    /// columns `(s_{i+1}, beta)`.
    pub fn two_site_matrix(&self, site: usize, u: &Matrix4<Complex64>) -> Result<DMatrix<Complex64>> {
        if site + 1 >= self.num_qubits() {
            return Err(Error::Bounds {
                what: "adjacent pair start",
                index: site,
                size: self.num_qubits().saturating_sub(1),
            });
        }
        let (a_t, b_t) = (&self.tensors[site], &self.tensors[site + 1]);
        let (l, m, r) = (a_t.left, a_t.right, b_t.right);
        // theta[(a, s1), (s2, c)] = sum_k A^s1[a,k] B^s2[k,c]
        let mut theta = DMatrix::<Complex64>::zeros(l * 2, 2 * r);
        for s1 in 0..2 {
            let a_mat = a_t.slice(s1);
            for s2 in 0..2 {
                let block = &a_mat * b_t.slice(s2);
                for a in 0..l {
                    for c in 0..r {
                        theta[(a * 2 + s1, s2 * r + c)] = block[(a, c)];
                    }
                }
            }
        }
        debug_assert_eq!(m, b_t.left);
        // theta'[(a,s1),(s2,c)] = sum U[(s1 s2),(t1 t2)] theta[(a,t1),(t2,c)]
        let mut out = DMatrix::<Complex64>::zeros(l * 2, 2 * r);
        for a in 0..l {
            for c in 0..r {
                let v = [
                    theta[(a * 2, c)],
                    theta[(a * 2, r + c)],
                    theta[(a * 2 + 1, c)],
                    theta[(a * 2 + 1, r + c)],
                ];
                for k in 0..4 {
                    let mut acc = ZERO;
                    for (j, x) in v.iter().enumerate() {
                        acc += u[(k, j)] * x;
                    }
                    out[(a * 2 + (k >> 1), (k & 1) * r + c)] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Contract, apply, SVD, truncate, renormalize. `site` carries the high
    /// bit of the 4x4 matrix index.
    pub fn apply_two_qubit_adjacent(&mut self, site: usize, u: &Matrix4<Complex64>) -> Result<TruncationReport> {
        self.move_center(site)?;
        let theta = self.two_site_matrix(site, u)?;
        let l = self.tensors[site].left;
        let r = self.tensors[site + 1].right;

        let svd = linalg::svd(&theta).ok_or_else(|| Error::Numerical {
            site,
            reason: "SVD did not converge".into(),
        })?;
        let (u_mat, v_t, sigma) = (svd.u, svd.v_t, svd.singular_values);
        if sigma.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical {
                site,
                reason: "non-finite singular value".into(),
            });
        }

        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
        let spectrum: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();

        let eps = self.config.truncation_threshold;
        let above = spectrum.iter().take_while(|&&x| x >= eps).count();
        let kept = above.min(self.config.max_bond_dim).max(1);
        let discarded: f64 = spectrum[kept..].iter().map(|x| x * x).sum();
        let kept_weight: f64 = spectrum[..kept].iter().map(|x| x * x).sum();
        if !(kept_weight > 0.0) {
            return Err(Error::Numerical {
                site,
                reason: "two-site block has zero norm".into(),
            });
        }
        let scale = kept_weight.sqrt().recip();

        let mut left = SiteTensor::zeros(l, kept);
        let mut right = SiteTensor::zeros(kept, r);
        for (k, &src) in order[..kept].iter().enumerate() {
            // Gauge: make the largest-magnitude entry of each V^dagger row real positive.
            let mut pivot = ZERO;
            for col in 0..2 * r {
                let z = v_t[(src, col)];
                if z.norm() > pivot.norm() + 1e-14 {
                    pivot = z;
                }
            }
            let phase = if pivot.norm() > 0.0 { pivot / pivot.norm() } else { ONE };
            let s = spectrum[k] * scale;
            for a in 0..l {
                for s1 in 0..2 {
                    left.set(s1, a, k, u_mat[(a * 2 + s1, src)] * phase * s);
                }
            }
            for s2 in 0..2 {
                for c in 0..r {
                    right.set(s2, k, c, v_t[(src, s2 * r + c)] * phase.conj());
                }
            }
        }
        self.tensors[site] = left;
        self.tensors[site + 1] = right;
        self.center = site;
        self.discarded_weight += discarded;
        self.peak_bond_dim = self.peak_bond_dim.max(kept);
        let elements = self.tensors.iter().map(SiteTensor::elements).sum();
        self.peak_elements = self.peak_elements.max(elements);

        Ok(TruncationReport {
            site,
            singular_values: spectrum,
            kept,
            discarded_weight: discarded,
        })
    }

    /// Two-qubit gate on arbitrary sites; `q_a` is the high bit of the matrix
    /// index. Distant qubits are brought together with adjacent SWAPs and
    /// returned afterwards.
    pub fn apply_two_qubit(&mut self, q_a: usize, q_b: usize, u: &Matrix4<Complex64>) -> Result<()> {
        self.check_site(q_a)?;
        self.check_site(q_b)?;
        if q_a == q_b {
            return Err(Error::DuplicateQubit(q_a));
        }
        let (lo, hi) = (q_a.min(q_b), q_a.max(q_b));
        let oriented = if q_a < q_b { *u } else { swap_conjugate(u) };
        if hi - lo == 1 {
            self.apply_two_qubit_adjacent(lo, &oriented)?;
            return Ok(());
        }
        let swap = swap_matrix();
        for k in lo..hi - 1 {
            self.apply_two_qubit_adjacent(k, &swap)?;
        }
        self.apply_two_qubit_adjacent(hi - 1, &oriented)?;
        for k in (lo..hi - 1).rev() {
            self.apply_two_qubit_adjacent(k, &swap)?;
        }
        Ok(())
    }

    /// Shifts the orthogonality center to `target` with thin QR steps.
    fn move_center(&mut self, target: usize) -> Result<()> {
        while self.center < target {
            let k = self.center;
            let t = &self.tensors[k];
            let (l, r) = (t.left, t.right);
            let m = DMatrix::from_fn(l * 2, r, |row, b| t.get(row % 2, row / 2, b));
            let qr = m.qr();
            let (q, rmat) = (qr.q(), qr.r());
            let kdim = q.ncols();
            let mut new_t = SiteTensor::zeros(l, kdim);
            for row in 0..l * 2 {
                for j in 0..kdim {
                    new_t.set(row % 2, row / 2, j, q[(row, j)]);
                }
            }
            self.tensors[k] = new_t;
            let next = &self.tensors[k + 1];
            let mut new_next = SiteTensor::zeros(kdim, next.right);
            for s in 0..2 {
                let prod = &rmat * next.slice(s);
                for a in 0..kdim {
                    for b in 0..next.right {
                        new_next.set(s, a, b, prod[(a, b)]);
                    }
                }
            }
            self.tensors[k + 1] = new_next;
            self.center += 1;
        }
        while self.center > target {
            let k = self.center;
            let t = &self.tensors[k];
            let (l, r) = (t.left, t.right);
            // M = A reshaped l x (2r); QR of M^dagger gives M = R^dagger Q^dagger.
            let m_adj = DMatrix::from_fn(2 * r, l, |col, a| t.get(col / r, a, col % r).conj());
            let qr = m_adj.qr();
            let (q, rmat) = (qr.q(), qr.r());
            let kdim = q.ncols();
            let mut new_t = SiteTensor::zeros(kdim, r);
            for j in 0..kdim {
                for col in 0..2 * r {
                    new_t.set(col / r, j, col % r, q[(col, j)].conj());
                }
            }
            self.tensors[k] = new_t;
            let r_adj = rmat.adjoint();
            let prev = &self.tensors[k - 1];
            let mut new_prev = SiteTensor::zeros(prev.left, kdim);
            for s in 0..2 {
                let prod = prev.slice(s) * &r_adj;
                for a in 0..prev.left {
                    for b in 0..kdim {
                        new_prev.set(s, a, b, prod[(a, b)]);
                    }
                }
            }
            self.tensors[k - 1] = new_prev;
            self.center -= 1;
        }
        Ok(())
    }

    /// Full contraction to a dense vector in MSB-first order.
    pub fn to_dense(&self) -> Result<DenseState> {
        let n = self.num_qubits();
        if n > TO_DENSE_MAX_QUBITS {
            return Err(Error::Size {
                requested: n,
                cap: TO_DENSE_MAX_QUBITS,
            });
        }
        // acc[(prefix, bond)]
        let mut acc = DMatrix::<Complex64>::from_element(1, 1, ONE);
        for t in &self.tensors {
            let slices = [t.slice(0), t.slice(1)];
            let prefixes = acc.nrows();
            let mut next = DMatrix::<Complex64>::zeros(prefixes * 2, t.right);
            for (s, slice) in slices.iter().enumerate() {
                let prod = &acc * slice;
                for p in 0..prefixes {
                    for b in 0..t.right {
                        next[(p * 2 + s, b)] = prod[(p, b)];
                    }
                }
            }
            acc = next;
        }
        DenseState::from_amplitudes(acc.column(0).iter().copied().collect())
    }

    /// `<self|other>` by transfer-matrix contraction.
    pub fn inner_product(&self, other: &MpsState) -> Result<Complex64> {
        self.sandwich(other, &vec![None; self.num_qubits()])
    }

    /// `<self| (O_0 x O_1 x ...) |other>` with `None` meaning identity.
    pub fn sandwich(&self, other: &MpsState, ops: &[Option<Matrix2<Complex64>>]) -> Result<Complex64> {
        let n = self.num_qubits();
        if other.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                found: other.num_qubits(),
            });
        }
        if ops.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: ops.len(),
            });
        }
        let mut env = DMatrix::<Complex64>::from_element(1, 1, ONE);
        for ((bra, ket), op) in self.tensors.iter().zip(&other.tensors).zip(ops) {
            env = transfer_left(&env, bra, ket, op.as_ref());
        }
        Ok(env[(0, 0)])
    }

    /// Identity transfer environments of `<self|self>`: `left[i]` contracts
    /// sites `0..i`, `right[i]` contracts sites `i..n`.
    pub fn environments(&self) -> Environments {
        let n = self.num_qubits();
        let mut left = Vec::with_capacity(n + 1);
        left.push(DMatrix::from_element(1, 1, ONE));
        for t in &self.tensors {
            let next = transfer_left(&left[left.len() - 1], t, t, None);
            left.push(next);
        }
        let mut right = vec![DMatrix::from_element(1, 1, ONE); n + 1];
        for i in (0..n).rev() {
            right[i] = transfer_right(&right[i + 1], &self.tensors[i], &self.tensors[i], None);
        }
        Environments { left, right }
    }

    /// `<self| O_start x O_start+1 x ... |self>` with identity elsewhere,
    /// using precomputed environments. Cost scales with `ops.len()` only.
    pub fn local_expectation(
        &self,
        env: &Environments,
        start: usize,
        ops: &[Option<Matrix2<Complex64>>],
    ) -> Result<Complex64> {
        let end = start + ops.len();
        if end > self.num_qubits() || env.left.len() != self.num_qubits() + 1 {
            return Err(Error::Bounds {
                what: "operator window",
                index: end,
                size: self.num_qubits(),
            });
        }
        let mut e = env.left[start].clone();
        for (t, op) in self.tensors[start..end].iter().zip(ops) {
            e = transfer_left(&e, t, t, op.as_ref());
        }
        let r = &env.right[end];
        Ok(e.iter().zip(r.iter()).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner_product(self).map(|z| z.re.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }
}

/// Cached transfer environments for repeated local expectations.
#[derive(Clone, Debug)]
pub struct Environments {
    left: Vec<DMatrix<Complex64>>,
    right: Vec<DMatrix<Complex64>>,
}

/// `E' = sum_{s', s} O[s', s] bra_{s'}^dagger E ket_s`, indices `(bra, ket)`.
fn transfer_left(
    env: &DMatrix<Complex64>,
    bra: &SiteTensor,
    ket: &SiteTensor,
    op: Option<&Matrix2<Complex64>>,
) -> DMatrix<Complex64> {
    let bra_s = [bra.slice(0).adjoint(), bra.slice(1).adjoint()];
    let env_ket = [env * ket.slice(0), env * ket.slice(1)];
    let mut next = DMatrix::<Complex64>::zeros(bra.right, ket.right);
    match op {
        None => {
            for s in 0..2 {
                next += &bra_s[s] * &env_ket[s];
            }
        }
        Some(o) => {
            for sp in 0..2 {
                // Fold the operator into the ket side first.
                let mut mixed = DMatrix::<Complex64>::zeros(env.nrows(), ket.right);
                for s in 0..2 {
                    let w = o[(sp, s)];
                    if w != ZERO {
                        mixed += &env_ket[s] * w;
                    }
                }
                next += &bra_s[sp] * mixed;
            }
        }
    }
    next
}

/// `R' = sum_{s', s} O[s', s] conj(bra_{s'}) R ket_s^T`, indices `(bra, ket)`.
fn transfer_right(
    env: &DMatrix<Complex64>,
    bra: &SiteTensor,
    ket: &SiteTensor,
    op: Option<&Matrix2<Complex64>>,
) -> DMatrix<Complex64> {
    let bra_s = [bra.slice(0).conjugate(), bra.slice(1).conjugate()];
    let env_ket = [env * ket.slice(0).transpose(), env * ket.slice(1).transpose()];
    let mut next = DMatrix::<Complex64>::zeros(bra.left, ket.left);
    for sp in 0..2 {
        for s in 0..2 {
            let w = match op {
                None if s == sp => ONE,
                None => ZERO,
                Some(o) => o[(sp, s)],
            };
            if w != ZERO {
                next += (&bra_s[sp] * &env_ket[s]) * w;
            }
        }
    }
    next
}

fn swap_matrix() -> Matrix4<Complex64> {
    let m = FixedGate::Swap.matrix();
    m.fixed_view::<4, 4>(0, 0).into_owned()
}

/// `SWAP * U * SWAP`: the same gate with its two qubits relabelled.
fn swap_conjugate(u: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let s = swap_matrix();
    s * u * s
}

impl StateBackend for MpsState {
    fn num_qubits(&self) -> usize {
        MpsState::num_qubits(self)
    }

    fn apply_single_qubit(&mut self, qubit: usize, matrix: &Matrix2<Complex64>) -> Result<()> {
        MpsState::apply_single_qubit(self, qubit, matrix)
    }

    fn apply_two_qubit(&mut self, q_a: usize, q_b: usize, matrix: &Matrix4<Complex64>) -> Result<()> {
        MpsState::apply_two_qubit(self, q_a, q_b, matrix)
    }
}
