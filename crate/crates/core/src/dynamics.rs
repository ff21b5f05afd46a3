//! XYZ Heisenberg chain with a driven longitudinal field, evolved by
//! first-order Trotter steps on either backend.
//!
//! `H(t) = -sum_i (Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1}) - h(t) sum_i Z_i`
//! on an open chain, with `h(t) = A sin(omega t)`.

use std::io::Write;

use crate::circuit::{execute_on_backend, Circuit};
use crate::error::{Error, Result};
use crate::mps::{MpsConfig, MpsState};
use crate::state::DenseState;
use crate::variational::{Pauli, PauliObservable, PauliString};

/// Largest chain the dense backend will evolve.
pub const DENSE_MAX_SITES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XyzParams {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub num_sites: usize,
}

impl XyzParams {
    /// `J = 1` on all axes, `A = 2`, `omega = 1`.
    pub fn isotropic(num_sites: usize) -> Self {
        XyzParams {
            jx: 1.0,
            jy: 1.0,
            jz: 1.0,
            amplitude: 2.0,
            omega: 1.0,
            num_sites,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sites < 2 {
            return Err(Error::Input(format!("chain needs at least 2 sites, got {}", self.num_sites)));
        }
        let values = [self.jx, self.jy, self.jz, self.amplitude, self.omega];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("XYZ parameters must be finite".into()));
        }
        Ok(())
    }

    pub fn field(&self, t: f64) -> f64 {
        self.amplitude * (self.omega * t).sin()
    }
}

/// `steps` equal slices of `total_time`. A plan with zero time and zero
/// steps is allowed and means "measure only".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterPlan {
    total_time: f64,
    steps: usize,
}

impl TrotterPlan {
    pub fn new(total_time: f64, steps: usize) -> Result<Self> {
        if !total_time.is_finite() || total_time < 0.0 {
            return Err(Error::Input(format!("total time must be finite and >= 0, got {total_time}")));
        }
        if (steps == 0) != (total_time == 0.0) {
            return Err(Error::Input(format!(
                "need steps >= 1 and time > 0 (or both zero), got steps={steps}, time={total_time}"
            )));
        }
        Ok(TrotterPlan { total_time, steps })
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.total_time / self.steps as f64
        }
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt()
    }
}

/// `3(N-1)` bond terms in XX, YY, ZZ order followed by `N` field terms.
pub fn build_xyz_hamiltonian(params: &XyzParams, t: f64) -> Result<PauliObservable> {
    params.validate()?;
    let n = params.num_sites;
    let mut h = PauliObservable::new(n);
    for (pauli, j) in [(Pauli::X, params.jx), (Pauli::Y, params.jy), (Pauli::Z, params.jz)] {
        for i in 0..n - 1 {
            h.add_term(-j, PauliString::from_sparse(n, &[(i, pauli), (i + 1, pauli)])?)?;
        }
    }
    let field = params.field(t);
    for i in 0..n {
        h.add_term(-field, PauliString::from_sparse(n, &[(i, Pauli::Z)])?)?;
    }
    Ok(h)
}

/// One first-order step: all `RXX(-2 Jx dt)`, then `RYY`, then `RZZ`, then
/// `RZ(-2 h(t_j) dt)` on every site.
pub fn trotter_step_circuit(params: &XyzParams, t_j: f64, dt: f64) -> Result<Circuit> {
    params.validate()?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Input(format!("time step must be positive, got {dt}")));
    }
    let n = params.num_sites;
    let mut c = Circuit::new(n);
    for i in 0..n - 1 {
        c.rxx(i, i + 1, -2.0 * params.jx * dt)?;
    }
    for i in 0..n - 1 {
        c.ryy(i, i + 1, -2.0 * params.jy * dt)?;
    }
    for i in 0..n - 1 {
        c.rzz(i, i + 1, -2.0 * params.jz * dt)?;
    }
    let angle = -2.0 * params.field(t_j) * dt;
    for i in 0..n {
        c.rz(i, angle)?;
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Dense,
    Mps(MpsConfig),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Dense => "dense",
            Backend::Mps(_) => "mps",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyPoint {
    pub step: usize,
    pub t: f64,
    pub energy: f64,
    /// Largest current bond; 1 on the dense backend.
    pub bond_dim_max: usize,
}

#[derive(Clone, Debug)]
pub enum FinalState {
    Dense(DenseState),
    Mps(MpsState),
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub series: Vec<EnergyPoint>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub delta_energy: f64,
    /// Largest bond seen at any point; 1 on the dense backend.
    pub peak_bond_dim: usize,
    /// 16 bytes per stored amplitude or tensor element, at the peak.
    pub peak_memory_bytes: usize,
    pub final_state: FinalState,
}

/// Evolves `|1...1>` through `plan.steps()` Trotter steps, recording
/// `E(t_j)` every `record_every` steps and always at both ends.
pub fn evolve(params: &XyzParams, plan: &TrotterPlan, backend: Backend, record_every: usize) -> Result<Evolution> {
    params.validate()?;
    if record_every == 0 {
        return Err(Error::Input("record_every must be >= 1".into()));
    }
    let n = params.num_sites;
    match backend {
        Backend::Dense => {
            if n > DENSE_MAX_SITES {
                return Err(Error::Capability(format!(
                    "dense evolution limited to {DENSE_MAX_SITES} sites, requested {n}"
                )));
            }
            let mut state = DenseState::basis_state(n, (1usize << n) - 1)?;
            let series = run(params, plan, record_every, &mut state, |_| 1)?;
            let mem = 16 * state.dimension();
            finish(series, 1, mem, FinalState::Dense(state))
        }
        Backend::Mps(config) => {
            let mut state = MpsState::one_state(n, config)?;
            let series = run(params, plan, record_every, &mut state, |s| s.max_bond_dim())?;
            let peak = state.peak_bond_dim();
            let mem = state.peak_memory_bytes();
            finish(series, peak, mem, FinalState::Mps(state))
        }
    }
}

fn run<S>(
    params: &XyzParams,
    plan: &TrotterPlan,
    record_every: usize,
    state: &mut S,
    bond: impl Fn(&S) -> usize,
) -> Result<Vec<EnergyPoint>>
where
    S: crate::circuit::StateBackend + crate::variational::PauliExpectation,
{
    let measure = |state: &S, step: usize| -> Result<EnergyPoint> {
        let t = plan.time(step);
        let energy = build_xyz_hamiltonian(params, t)?.expectation(state)?;
        if !energy.is_finite() {
            return Err(Error::NonFiniteEnergy { stage: "step", index: step });
        }
        Ok(EnergyPoint {
            step,
            t,
            energy,
            bond_dim_max: bond(state),
        })
    };
    let mut series = vec![measure(state, 0)?];
    for j in 0..plan.steps() {
        let step = trotter_step_circuit(params, plan.time(j), plan.dt())?;
        execute_on_backend(&step, state)?;
        let done = j + 1;
        if done % record_every == 0 || done == plan.steps() {
            series.push(measure(state, done)?);
        }
    }
    Ok(series)
}

fn finish(series: Vec<EnergyPoint>, peak_bond_dim: usize, peak_memory_bytes: usize, state: FinalState) -> Result<Evolution> {
    let initial_energy = series[0].energy;
    let final_energy = series[series.len() - 1].energy;
    Ok(Evolution {
        initial_energy,
        final_energy,
        delta_energy: final_energy - initial_energy,
        peak_bond_dim: peak_bond_dim.max(series.iter().map(|p| p.bond_dim_max).max().unwrap_or(1)),
        peak_memory_bytes,
        series,
        final_state: state,
    })
}

/// CSV `step,t,energy,bond_dim_max` with 17 significant digits.
pub fn write_series_csv<W: Write>(series: &[EnergyPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "step,t,energy,bond_dim_max")?;
    for p in series {
        writeln!(out, "{},{:.16e},{:.16e},{}", p.step, p.t, p.energy, p.bond_dim_max)?;
    }
    Ok(())
}
