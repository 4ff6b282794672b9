use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{FilterApplication, Model, SimConfig};
use super::state::{apply_filter, electric_field_modes, initial_state, SpectralState};
use crate::analysis::electric_energy;
use crate::error::{invalid, Error, Result};
use crate::hermite::{build_operators, OperatorSet, CUTOFF_SENTINEL};
use crate::linalg::{expm, ComplexMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_STEPS: f64 = 1e7;

/// One recorded point of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// Electric energy `sqrt(D sum_{m != 0} |E^(m)|^2)`.
    pub energy: f64,
    /// `||f^(m)||` for `m = m_lo..=m_hi`.
    pub mode_norms: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub dt: f64,
    pub m_lo: i32,
    pub m_hi: i32,
    pub samples: Vec<Sample>,
    pub checkpoints: Vec<SpectralState>,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.energy).collect()
    }

    pub fn final_state(&self) -> Option<&SpectralState> {
        self.checkpoints.last()
    }

    /// Norm of mode `m` at every sample.
    pub fn mode_norm_series(&self, m: i32) -> Vec<f64> {
        assert!((self.m_lo..=self.m_hi).contains(&m));
        let idx = (m - self.m_lo) as usize;
        self.samples.iter().map(|s| s.mode_norms[idx]).collect()
    }
}

/// Semi-discrete system of one configuration together with its operators.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SimConfig,
    ops: OperatorSet,
}

impl Solver {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let ops = build_operators(config.params, config.filter, config.dt())?;
        Ok(Self { config, ops })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn operators(&self) -> &OperatorSet {
        &self.ops
    }

    fn continuous_h(&self) -> bool {
        self.config.filter_application == FilterApplication::Continuous
            && !self.config.filter.is_none()
    }

    /// Time derivative of `state` at time `t`.
    pub fn rhs(&self, state: &SpectralState, t: f64) -> SpectralState {
        let mut out = state.clone();
        self.rhs_into(state, t, &mut out.coeffs);
        out
    }

    fn rhs_into(&self, state: &SpectralState, t: f64, out: &mut [Complex64]) {
        let n = state.len();
        let k = self.config.params.k;
        let continuous = self.continuous_h();
        for (m, x) in state.modes() {
            let o = (m - state.m_lo) as usize * n;
            let dst = &mut out[o..o + n];
            self.ops.apply_a(x, dst);
            let scale = Complex64::new(0.0, -(m as f64) * k);
            for z in dst.iter_mut() {
                *z *= scale;
            }
            if continuous {
                for (i, z) in dst.iter_mut().enumerate() {
                    *z += x[i] * self.ops.h[i];
                }
            }
        }

        match self.config.model {
            Model::Advection => {}
            Model::LinearizedLandau => {
                if n > 1 {
                    let o = (1 - state.m_lo) as usize * n;
                    out[o + 1] += Complex64::new(0.0, -1.0 / k) * state.mode(1)[0];
                }
            }
            Model::Forced => {
                let f = &self.config.force;
                let e = self.config.epsilon * (-f.gamma * t).exp() * (f.omega * t).cos();
                let field = Complex64::new(e, 0.0);
                self.add_convolution(state, &[(1, field), (-1, field)], out);
            }
            Model::VlasovPoisson => {
                let fields: Vec<(i32, Complex64)> = (state.m_lo..)
                    .zip(electric_field_modes(state, &self.config.params))
                    .filter(|(l, e)| *l != 0 && *e != ZERO)
                    .collect();
                self.add_convolution(state, &fields, out);
            }
        }

        if continuous {
            for chunk in out.chunks_exact_mut(n) {
                for (z, &h) in chunk.iter_mut().zip(&self.ops.h) {
                    if h == CUTOFF_SENTINEL {
                        *z = ZERO;
                    }
                }
            }
        }
    }

    /// `out^(m) += sum_l E^(l) B f^(m-l)`, dropping `m - l` outside the window.
    fn add_convolution(
        &self,
        state: &SpectralState,
        fields: &[(i32, Complex64)],
        out: &mut [Complex64],
    ) {
        let n = state.len();
        for m in state.m_lo..=state.m_hi {
            let o = (m - state.m_lo) as usize * n;
            for &(l, e) in fields {
                if !state.contains(m - l) {
                    continue;
                }
                let src = state.mode(m - l);
                for i in 1..n {
                    out[o + i] += e * self.ops.b_sub[i - 1] * src[i - 1];
                }
            }
        }
    }

    /// One classical Runge-Kutta step of length `dt`; the filter is not applied.
    pub fn step_rk4(&self, state: &SpectralState, dt: f64) -> Result<SpectralState> {
        if !(dt > 0.0 && dt.is_finite()) {
            return invalid(format!("time step must be positive, got {dt}"));
        }
        let t = state.time;
        let len = state.coeffs.len();
        let mut k1 = vec![ZERO; len];
        let mut k2 = vec![ZERO; len];
        let mut k3 = vec![ZERO; len];
        let mut k4 = vec![ZERO; len];
        let mut stage = state.clone();

        self.rhs_into(state, t, &mut k1);
        axpy_into(&mut stage.coeffs, &state.coeffs, 0.5 * dt, &k1);
        self.rhs_into(&stage, t + 0.5 * dt, &mut k2);
        axpy_into(&mut stage.coeffs, &state.coeffs, 0.5 * dt, &k2);
        self.rhs_into(&stage, t + 0.5 * dt, &mut k3);
        axpy_into(&mut stage.coeffs, &state.coeffs, dt, &k3);
        self.rhs_into(&stage, t + dt, &mut k4);

        let mut next = state.clone();
        for (i, z) in next.coeffs.iter_mut().enumerate() {
            *z += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        next.time = t + dt;
        if let Some(pos) = next.coeffs.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                time: next.time,
                mode: next.m_lo + (pos / next.len()) as i32,
                index: pos % next.len(),
            });
        }
        Ok(next)
    }

    /// A full step as used by [`run_simulation`]: RK4, then the filter when applied per step.
    pub fn advance(&self, state: &SpectralState, dt: f64) -> Result<SpectralState> {
        let mut next = self.step_rk4(state, dt)?;
        if self.config.filter.is_none() {
            return Ok(next);
        }
        match self.config.filter_application {
            FilterApplication::PerStep => apply_filter(&mut next, &self.ops.sigma),
            FilterApplication::Continuous => {
                let n = next.len();
                for chunk in next.coeffs.chunks_exact_mut(n) {
                    for (i, z) in chunk.iter_mut().enumerate() {
                        if self.ops.is_cut(i) {
                            *z = ZERO;
                        }
                    }
                }
            }
        }
        Ok(next)
    }

    pub fn sample(&self, state: &SpectralState) -> Sample {
        Sample {
            t: state.time,
            energy: electric_energy(state, &self.config.params),
            mode_norms: (state.m_lo..=state.m_hi)
                .map(|m| state.mode_norm(m))
                .collect(),
            mass: state.mass(),
        }
    }
}

fn axpy_into(dst: &mut [Complex64], x: &[Complex64], a: f64, y: &[Complex64]) {
    for ((d, &xi), &yi) in dst.iter_mut().zip(x).zip(y) {
        *d = xi + yi * a;
    }
}

/// Number of uniform steps of length `dt` needed to reach `t_end`.
fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    let n = (t_end / dt * (1.0 - 1e-12)).ceil().max(1.0);
    if n > MAX_STEPS {
        return invalid(format!("{n} steps exceed the limit of {MAX_STEPS}"));
    }
    Ok(n as usize)
}

/// Integrates `config` from its initial state with `dt = cfl_c / sqrt(M)`.
///
/// The final sample lands on the first step boundary at or after `t_end`.
pub fn run_simulation(config: &SimConfig) -> Result<TimeSeries> {
    let solver = Solver::new(config.clone())?;
    let dt = config.dt();
    let n_steps = step_count(config.t_end, dt)?;
    let mut state = initial_state(config)?;
    let mut series = TimeSeries {
        dt,
        m_lo: state.m_lo,
        m_hi: state.m_hi,
        samples: vec![solver.sample(&state)],
        checkpoints: Vec::new(),
    };
    for step in 1..=n_steps {
        state = solver.advance(&state, dt)?;
        state.time = step as f64 * dt;
        if step % config.sample_every == 0 || step == n_steps {
            series.samples.push(solver.sample(&state));
        }
        if let Some(every) = config.checkpoint_every {
            if step % every == 0 && step != n_steps {
                series.checkpoints.push(state.clone());
            }
        }
    }
    series.checkpoints.push(state);
    Ok(series)
}

fn initial_mode(config: &SimConfig, m: i32) -> Result<Vec<Complex64>> {
    let state = initial_state(config)?;
    if !state.contains(m) {
        return invalid(format!(
            "mode {m} is outside the window {}..={}",
            state.m_lo, state.m_hi
        ));
    }
    Ok(state.mode(m).to_vec())
}

fn require_linear(config: &SimConfig) -> Result<bool> {
    match config.model {
        Model::Advection => Ok(false),
        Model::LinearizedLandau => Ok(true),
        other => Err(Error::Unsupported(format!(
            "exact propagation needs a linear mode-decoupled model, got {other:?}"
        ))),
    }
}

/// `exp(t A_m) f^(m)(0)` with the continuous damping `H`.
///
/// For the linearized Landau model the generator also carries the `G` coupling.
/// Rows removed by a cutoff filter are returned as zero.
pub fn propagate_linear_exact(config: &SimConfig, m: i32, t: f64) -> Result<Vec<Complex64>> {
    config.validate()?;
    let with_g = require_linear(config)? && m != 0;
    if !(t >= 0.0 && t.is_finite()) {
        return invalid(format!("propagation time must be non-negative, got {t}"));
    }
    let x0 = initial_mode(config, m)?;
    let ops = build_operators(config.params, config.filter, config.dt())?;
    let r = ops.retained();
    let gen = ops.mode_generator(m, with_g)?;
    let mut out = expm(&gen, t)?.mat_vec(&x0[..r]);
    out.resize(x0.len(), ZERO);
    Ok(out)
}

/// Exact discrete propagator: `steps` repetitions of `exp(dt (-imkA)) then sigma`.
///
/// This is what RK4 with the per-step filter approximates at the same `dt`.
pub fn propagate_linear_split(config: &SimConfig, m: i32, steps: usize) -> Result<Vec<Complex64>> {
    config.validate()?;
    let with_g = require_linear(config)? && m != 0;
    let x0 = initial_mode(config, m)?;
    let dt = config.dt();
    let unfiltered = build_operators(config.params, crate::hermite::FilterSpec::none(), dt)?;
    let gen: ComplexMatrix = unfiltered.mode_generator(m, with_g)?;
    let stepper = expm(&gen, dt)?;
    let sigma = config.filter.sigma_vector(config.params.order, dt);
    let mut x = x0;
    for _ in 0..steps {
        x = stepper.mat_vec(&x);
        for (z, &s) in x.iter_mut().zip(&sigma) {
            *z *= s;
        }
    }
    Ok(x)
}
