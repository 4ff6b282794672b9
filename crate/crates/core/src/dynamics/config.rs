use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hermite::{FilterSpec, HermiteParams};

/// Which semi-discrete system is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Free streaming, `E = 0`.
    #[serde(rename = "advection")]
    Advection,
    /// Streaming under a prescribed, exponentially decaying force.
    #[serde(rename = "forced")]
    Forced,
    /// Self-consistent field from Poisson's equation (nonlinear).
    #[serde(rename = "vlasov-poisson")]
    VlasovPoisson,
    /// First-order perturbation equation for the single mode `m = 1`.
    #[serde(rename = "linearized-landau")]
    LinearizedLandau,
}

impl Model {
    pub fn is_linear_decoupled(self) -> bool {
        matches!(self, Model::Advection | Model::LinearizedLandau)
    }
}

/// How the filter enters the time integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterApplication {
    /// Multiply by `sigma` after every full step.
    #[default]
    #[serde(rename = "per-step")]
    PerStep,
    /// Integrate `H f` as part of the right-hand side instead.
    #[serde(rename = "continuous")]
    Continuous,
}

/// Decaying force `E^(+-1)(t) = epsilon exp(-gamma t) cos(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceParams {
    pub gamma: f64,
    pub omega: f64,
}

impl Default for ForceParams {
    fn default() -> Self {
        Self {
            gamma: 0.15336,
            omega: 1.416,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: Model,
    pub params: HermiteParams,
    pub filter: FilterSpec,
    /// Perturbation amplitude.
    pub epsilon: f64,
    /// Fourier modes `|m| <= m_c` are retained.
    pub m_c: usize,
    /// Step rule `dt = cfl_c / sqrt(M)`.
    pub cfl_c: f64,
    pub t_end: f64,
    pub sample_every: usize,
    #[serde(default)]
    pub force: ForceParams,
    #[serde(default)]
    pub filter_application: FilterApplication,
    /// Keep a full state every this many steps (the final state is always kept).
    #[serde(default)]
    pub checkpoint_every: Option<usize>,
}

/// `D = 4 pi`; an order of zero is left for `validate` to reject.
fn default_params(order: usize) -> HermiteParams {
    HermiteParams {
        order,
        k: 2.0 * PI / (4.0 * PI),
        period: 4.0 * PI,
    }
}

impl SimConfig {
    fn base(model: Model, order: usize, epsilon: f64, m_c: usize, t_end: f64) -> Self {
        Self {
            model,
            params: default_params(order),
            filter: FilterSpec::hou_li(),
            epsilon,
            m_c,
            cfl_c: 0.5,
            t_end,
            sample_every: 1,
            force: ForceParams::default(),
            filter_application: FilterApplication::PerStep,
            checkpoint_every: None,
        }
    }

    /// Advection with `D = 4 pi`, `epsilon = 0.01`.
    pub fn advection(order: usize) -> Self {
        Self::base(Model::Advection, order, 0.01, 1, 100.0)
    }

    /// Forced advection with `epsilon = 0.9`, run to `t = 80`.
    pub fn forced(order: usize, m_c: usize) -> Self {
        Self::base(Model::Forced, order, 0.9, m_c, 80.0)
    }

    /// Landau damping with `epsilon = 0.001`.
    pub fn landau(order: usize) -> Self {
        Self::base(Model::VlasovPoisson, order, 0.001, 3, 60.0)
    }

    pub fn linearized_landau(order: usize) -> Self {
        Self::base(Model::LinearizedLandau, order, 0.001, 1, 60.0)
    }

    pub fn with_filter(mut self, filter: FilterSpec) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn dt(&self) -> f64 {
        self.cfl_c / (self.params.order as f64).sqrt()
    }

    /// Inclusive range of stored Fourier modes.
    pub fn mode_window(&self) -> (i32, i32) {
        match self.model {
            Model::LinearizedLandau => (0, 1),
            _ => (-(self.m_c as i32), self.m_c as i32),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.filter.validate()?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return invalid(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.m_c < 1 {
            return invalid("the Fourier cutoff m_c must be at least 1");
        }
        if !(self.cfl_c > 0.0 && self.cfl_c.is_finite()) {
            return invalid(format!("cfl_c must be positive, got {}", self.cfl_c));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return invalid(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.sample_every == 0 {
            return invalid("sample_every must be at least 1");
        }
        if self.checkpoint_every == Some(0) {
            return invalid("checkpoint_every must be at least 1");
        }
        if self.model == Model::Forced
            && !(self.force.gamma.is_finite() && self.force.omega.is_finite())
        {
            return invalid("force parameters must be finite");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_validated_params() {
        let cfg = SimConfig::landau(30);
        assert_eq!(cfg.params, HermiteParams::new(30, 4.0 * PI).unwrap());
        assert!(cfg.validate().is_ok());
        assert!(SimConfig::advection(0).validate().is_err());
    }
}
