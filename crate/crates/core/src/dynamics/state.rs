use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{Model, SimConfig};
use crate::error::{invalid, Result};
use crate::hermite::HermiteParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermite coefficient vectors `f^(m)` for every stored Fourier mode.
///
/// Modes `m_lo..=m_hi` are stored contiguously, each of length `M + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralState {
    pub order: usize,
    pub m_lo: i32,
    pub m_hi: i32,
    pub coeffs: Vec<Complex64>,
    pub time: f64,
}

impl SpectralState {
    pub fn zeros(order: usize, m_lo: i32, m_hi: i32) -> Self {
        assert!(m_lo <= m_hi);
        let modes = (m_hi - m_lo + 1) as usize;
        Self {
            order,
            m_lo,
            m_hi,
            coeffs: vec![ZERO; modes * (order + 1)],
            time: 0.0,
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn contains(&self, m: i32) -> bool {
        (self.m_lo..=self.m_hi).contains(&m)
    }

    fn offset(&self, m: i32) -> usize {
        assert!(
            self.contains(m),
            "mode {m} outside {}..={}",
            self.m_lo,
            self.m_hi
        );
        (m - self.m_lo) as usize * self.len()
    }

    pub fn mode(&self, m: i32) -> &[Complex64] {
        let o = self.offset(m);
        &self.coeffs[o..o + self.len()]
    }

    pub fn mode_mut(&mut self, m: i32) -> &mut [Complex64] {
        let o = self.offset(m);
        let n = self.len();
        &mut self.coeffs[o..o + n]
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &[Complex64])> {
        (self.m_lo..).zip(self.coeffs.chunks_exact(self.order + 1))
    }

    pub fn mode_norm(&self, m: i32) -> f64 {
        self.mode(m)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `f_0^(0)`, the total particle number per unit length.
    pub fn mass(&self) -> f64 {
        if self.contains(0) {
            self.mode(0)[0].re
        } else {
            0.0
        }
    }

    /// `sum_{m != 0} ||f^(m)||^2`.
    pub fn nonconstant_energy(&self) -> f64 {
        self.modes()
            .filter(|(m, _)| *m != 0)
            .map(|(_, v)| v.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Largest `|f^(-m) - conj(f^(m))|` over stored mode pairs.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..=self.m_hi {
            if !self.contains(-m) {
                continue;
            }
            for (a, b) in self.mode(m).iter().zip(self.mode(-m)) {
                worst = worst.max((a.conj() - b).norm());
            }
        }
        worst
    }
}

/// Initial coefficients of each model.
///
/// Advection, forced and nonlinear Landau runs start from the real cosine
/// perturbation `f^(+-1) = (epsilon/2, 0, ...)`. The linearized Landau run
/// keeps the single complex mode `f^(1) = (epsilon, 0, ...)`.
pub fn initial_state(config: &SimConfig) -> Result<SpectralState> {
    if config.m_c < 1 {
        return invalid("the Fourier cutoff m_c must be at least 1");
    }
    let (lo, hi) = config.mode_window();
    let mut state = SpectralState::zeros(config.params.order, lo, hi);
    state.mode_mut(0)[0] = Complex64::new(1.0, 0.0);
    match config.model {
        Model::LinearizedLandau => {
            state.mode_mut(1)[0] = Complex64::new(config.epsilon, 0.0);
        }
        Model::Advection | Model::Forced | Model::VlasovPoisson => {
            let half = Complex64::new(config.epsilon / 2.0, 0.0);
            state.mode_mut(1)[0] = half;
            state.mode_mut(-1)[0] = half;
        }
    }
    Ok(state)
}

/// Fourier coefficients `E^(m) = -i f_0^(m) / (m k)` of the self-consistent field.
///
/// Indexed by `m - state.m_lo`; the `m = 0` entry is zero.
pub fn electric_field_modes(state: &SpectralState, params: &HermiteParams) -> Vec<Complex64> {
    state
        .modes()
        .map(|(m, v)| {
            if m == 0 {
                ZERO
            } else {
                Complex64::new(0.0, -1.0 / (m as f64 * params.k)) * v[0]
            }
        })
        .collect()
}

/// Multiplies coefficient `i` of every mode by `sigma[i]`.
pub fn apply_filter(state: &mut SpectralState, sigma: &[f64]) {
    assert_eq!(sigma.len(), state.len(), "filter length must be M + 1");
    let n = state.len();
    for chunk in state.coeffs.chunks_exact_mut(n) {
        for (z, &s) in chunk.iter_mut().zip(sigma) {
            *z *= s;
        }
    }
}
