//! Normalized Hermite basis, velocity-space operator matrices and filters.
//!
//! The basis is `He_n(xi) exp(-xi^2/2) / sqrt(2 pi)` with `He_n` the
//! orthonormal probabilists' Hermite polynomials. In that basis the free
//! streaming term is the symmetric tridiagonal matrix `A`, the force term the
//! lower bidiagonal `B`, and a spectral filter is a diagonal multiplier.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::ComplexMatrix;

/// Placeholder filter rate for rows a cutoff filter removes outright.
pub const CUTOFF_SENTINEL: f64 = -1e30;

const NEWTON_BUDGET: usize = 100;

/// Moment order and spatial period of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteParams {
    /// Highest retained Hermite index `M`.
    #[serde(rename = "M")]
    pub order: usize,
    /// Base wavenumber `k = 2 pi / D`.
    pub k: f64,
    /// Spatial period `D`.
    pub period: f64,
}

impl HermiteParams {
    pub fn new(order: usize, period: f64) -> Result<Self> {
        let p = Self {
            order,
            k: TAU / period,
            period,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_wavenumber(order: usize, k: f64) -> Result<Self> {
        let p = Self {
            order,
            k,
            period: TAU / k,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return invalid("moment order M must be at least 1");
        }
        if !(self.k > 0.0 && self.k.is_finite()) || !(self.period > 0.0 && self.period.is_finite())
        {
            return invalid(format!(
                "k = {} and D = {} must be positive",
                self.k, self.period
            ));
        }
        if ((self.k * self.period) / TAU - 1.0).abs() > 1e-12 {
            return invalid(format!("k * D = {} is not 2 pi", self.k * self.period));
        }
        Ok(())
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.order + 1
    }
}

/// `He_n(xi)` by the upward three-term recursion.
pub fn hermite_he(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let next = (xi * cur - (j as f64).sqrt() * prev) / ((j + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `[He_0(xi), ..., He_n(xi)]`.
pub fn hermite_he_all(n: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(xi);
    }
    for j in 1..n {
        let next = (xi * out[j] - (j as f64).sqrt() * out[j - 1]) / ((j + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

/// `n`-point Gauss rule for the standard normal weight `exp(-xi^2/2)/sqrt(2 pi)`.
///
/// Nodes are found by Newton iteration on the orthonormal physicists'
/// recursion from the usual asymptotic starting guesses, with roots already
/// found deflated out, then rescaled.
/// Returned nodes are ascending and the weights sum to one.
pub fn gauss_hermite_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(1..=200).contains(&n) {
        return invalid(format!(
            "Gauss-Hermite rule supports 1 <= n <= 200, got {n}"
        ));
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut converged = false;
        let mut pp = 0.0;
        for _ in 0..NEWTON_BUDGET {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            // Maehly deflation keeps Newton away from roots already found.
            let found: f64 = x[..i].iter().map(|&r| 1.0 / (z - r) + 1.0 / (z + r)).sum();
            let mut next = z - p1 / (pp - p1 * found);
            // Roots come out in decreasing order: stay inside (0, previous root).
            let ceiling = if i > 0 { x[i - 1] } else { f64::INFINITY };
            if next >= ceiling {
                next = 0.5 * (z + ceiling);
            }
            if next < 0.0 {
                next = 0.5 * z;
            }
            let dz = z - next;
            z = next;
            if dz.abs() <= 3e-14 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Gauss-Hermite Newton iteration",
                budget: NEWTON_BUDGET,
            });
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let nodes: Vec<f64> = x.iter().rev().map(|z| z * 2f64.sqrt()).collect();
    let weights: Vec<f64> = w.iter().rev().map(|wi| wi / PI.sqrt()).collect();
    Ok((nodes, weights))
}

/// Which damping profile a filter uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterVariant {
    #[serde(rename = "none")]
    None,
    /// `exp(-alpha (i/M)^p)` on every index.
    #[serde(rename = "exponential")]
    Exponential,
    /// Exponential profile above the threshold fraction, identity below.
    #[serde(rename = "houli-threshold")]
    HouLiThreshold,
    /// Zero above the threshold fraction, identity below.
    #[serde(rename = "cutoff")]
    Cutoff,
    /// Threshold profile whose strength rescales with `(dt/dt_ref)^(1-(i/M)^p)`.
    #[serde(rename = "timestep-scaled")]
    TimestepScaled,
}

/// Filter profile `sigma_M(i)` and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub variant: FilterVariant,
    pub alpha: f64,
    pub p: f64,
    /// Fraction `i/M` at or below which threshold variants leave modes alone.
    pub threshold: f64,
    /// Reference step of the timestep-scaled variant.
    pub dt_ref: Option<f64>,
    /// Indices `i <= protected` are never damped.
    pub protected: usize,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self::hou_li()
    }
}

impl FilterSpec {
    pub fn none() -> Self {
        Self {
            variant: FilterVariant::None,
            alpha: 0.0,
            p: 1.0,
            threshold: 2.0 / 3.0,
            dt_ref: None,
            protected: 0,
        }
    }

    pub fn exponential(alpha: f64, p: f64) -> Self {
        Self {
            variant: FilterVariant::Exponential,
            alpha,
            p,
            ..Self::none()
        }
    }

    /// The `alpha = p = 36` exponential filter used for all recurrence runs.
    pub fn hou_li() -> Self {
        Self::exponential(36.0, 36.0)
    }

    pub fn threshold(alpha: f64, p: f64) -> Self {
        Self {
            variant: FilterVariant::HouLiThreshold,
            ..Self::exponential(alpha, p)
        }
    }

    pub fn cutoff() -> Self {
        Self {
            variant: FilterVariant::Cutoff,
            ..Self::none()
        }
    }

    pub fn timestep_scaled(alpha: f64, p: f64, dt_ref: f64) -> Self {
        Self {
            variant: FilterVariant::TimestepScaled,
            dt_ref: Some(dt_ref),
            ..Self::exponential(alpha, p)
        }
    }

    pub fn with_protected(mut self, protected: usize) -> Self {
        self.protected = protected;
        self
    }

    pub fn is_none(&self) -> bool {
        self.variant == FilterVariant::None
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_none() {
            return Ok(());
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) || !(self.p > 0.0 && self.p.is_finite()) {
            return invalid(format!(
                "filter needs alpha >= 0 and p > 0, got {} and {}",
                self.alpha, self.p
            ));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return invalid(format!(
                "filter threshold must lie in (0, 1), got {}",
                self.threshold
            ));
        }
        if self.variant == FilterVariant::TimestepScaled {
            match self.dt_ref {
                Some(r) if r > 0.0 && r.is_finite() => {}
                _ => return invalid("timestep-scaled filter needs a positive dt_ref"),
            }
        }
        Ok(())
    }

    fn below_threshold(&self, i: usize, order: usize) -> bool {
        i as f64 <= self.threshold * order as f64 * (1.0 + 1e-14)
    }

    /// Multiplier `sigma_M(i)` applied after a step of length `dt`.
    pub fn sigma(&self, i: usize, order: usize, dt: f64) -> f64 {
        if self.is_none() || i <= self.protected {
            return 1.0;
        }
        let frac = i as f64 / order as f64;
        match self.variant {
            FilterVariant::None => 1.0,
            FilterVariant::Exponential => (-self.alpha * frac.powf(self.p)).exp(),
            FilterVariant::HouLiThreshold => {
                if self.below_threshold(i, order) {
                    1.0
                } else {
                    (-self.alpha * frac.powf(self.p)).exp()
                }
            }
            FilterVariant::Cutoff => {
                if self.below_threshold(i, order) {
                    1.0
                } else {
                    0.0
                }
            }
            FilterVariant::TimestepScaled => {
                if self.below_threshold(i, order) {
                    1.0
                } else {
                    let x = frac.powf(self.p);
                    let dt_ref = self.dt_ref.unwrap_or(dt);
                    let g = (dt / dt_ref).powf(1.0 - x);
                    (-self.alpha * x * g).exp()
                }
            }
        }
    }

    pub fn sigma_vector(&self, order: usize, dt: f64) -> Vec<f64> {
        (0..=order).map(|i| self.sigma(i, order, dt)).collect()
    }
}

/// Assembled velocity-space operators for one `(M, k, filter, dt)`.
///
/// `A` and `B` are stored by their nonzero bands. `G` has a single unit entry
/// at row 1, column 0 and is applied implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    pub params: HermiteParams,
    pub filter: FilterSpec,
    pub dt: f64,
    /// `A[i][i+1] = A[i+1][i] = sqrt(i+1)`.
    pub a_off: Vec<f64>,
    /// `B[i][i-1] = sqrt(i)`, stored at index `i - 1`.
    pub b_sub: Vec<f64>,
    /// Diagonal of `H`; `h[i] = ln(sigma[i]) / dt`.
    pub h: Vec<f64>,
    pub sigma: Vec<f64>,
    pub dm_cache: BTreeMap<i32, Vec<f64>>,
}

/// Builds `A`, `B`, the filter multipliers and the matching rates `H`.
pub fn build_operators(params: HermiteParams, filter: FilterSpec, dt: f64) -> Result<OperatorSet> {
    params.validate()?;
    filter.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    let order = params.order;
    if !filter.is_none() && order < 2 {
        return invalid("a filtered run needs M >= 2");
    }
    if filter.protected >= order && !filter.is_none() {
        return invalid(format!(
            "protected band {} leaves nothing to filter at M = {order}",
            filter.protected
        ));
    }
    let sigma = filter.sigma_vector(order, dt);
    if !filter.is_none() && sigma[order] >= 1.0 {
        return Err(Error::InertFilter);
    }
    let h = sigma
        .iter()
        .map(|&s| {
            if s == 0.0 {
                CUTOFF_SENTINEL
            } else {
                s.ln() / dt
            }
        })
        .collect();
    Ok(OperatorSet {
        params,
        filter,
        dt,
        a_off: (1..=order).map(|i| (i as f64).sqrt()).collect(),
        b_sub: (1..=order).map(|i| (i as f64).sqrt()).collect(),
        h,
        sigma,
        dm_cache: BTreeMap::new(),
    })
}

/// `diag{1, mk/sqrt((mk)^2+1), ...}`, the scaling that symmetrizes `A + (mk)^-2 G`.
pub fn build_dm_scaling(params: &HermiteParams, m: i32) -> Result<Vec<f64>> {
    if m == 0 {
        return invalid("D_m is undefined for the m = 0 mode");
    }
    let mk = m as f64 * params.k;
    let s = mk / (mk * mk + 1.0).sqrt();
    let mut d = vec![s; params.order + 1];
    d[0] = 1.0;
    Ok(d)
}

impl OperatorSet {
    pub fn order(&self) -> usize {
        self.params.order
    }

    /// Whether row `i` is removed outright by a cutoff filter.
    pub fn is_cut(&self, i: usize) -> bool {
        self.sigma[i] == 0.0
    }

    /// Number of leading rows that survive filtering (all rows unless a cutoff is present).
    pub fn retained(&self) -> usize {
        self.sigma.iter().take_while(|&&s| s > 0.0).count()
    }

    /// Per-step multipliers `exp(dt * h)` for a different step length, keeping `H` fixed.
    pub fn sigma_for_step(&self, dt: f64) -> Vec<f64> {
        self.h
            .iter()
            .map(|&h| {
                if h == CUTOFF_SENTINEL {
                    0.0
                } else {
                    (dt * h).exp()
                }
            })
            .collect()
    }

    pub fn dm(&mut self, m: i32) -> Result<&[f64]> {
        if !self.dm_cache.contains_key(&m) {
            let d = build_dm_scaling(&self.params, m)?;
            self.dm_cache.insert(m, d);
        }
        Ok(&self.dm_cache[&m])
    }

    /// `A x` written into `out`.
    pub fn apply_a(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = x.len();
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            if i > 0 {
                acc += x[i - 1] * self.a_off[i - 1];
            }
            if i + 1 < n {
                acc += x[i + 1] * self.a_off[i];
            }
            out[i] = acc;
        }
    }

    /// Dense `A`.
    pub fn a_matrix(&self) -> ComplexMatrix {
        let n = self.params.len();
        let off: Vec<Complex64> = self.a_off.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        ComplexMatrix::tridiagonal(&off, &vec![Complex64::new(0.0, 0.0); n], &off)
    }

    /// Dense `-imk (A + (mk)^-2 G) + H` restricted to the first `retained()` rows.
    ///
    /// With `with_g = false` this is `A_m = -imk A + H`.
    pub fn mode_generator(&self, m: i32, with_g: bool) -> Result<ComplexMatrix> {
        let n = self.retained();
        let mk = m as f64 * self.params.k;
        let mut gen = ComplexMatrix::zeros(n);
        for i in 0..n {
            gen[(i, i)] = Complex64::new(self.h[i], 0.0);
            if i + 1 < n {
                let v = Complex64::new(0.0, -mk * self.a_off[i]);
                gen[(i, i + 1)] = v;
                gen[(i + 1, i)] = v;
            }
        }
        if with_g {
            if m == 0 {
                return invalid("the G coupling is undefined for m = 0");
            }
            if n > 1 {
                gen[(1, 0)] += Complex64::new(0.0, -1.0 / mk);
            }
        }
        Ok(gen)
    }
}
