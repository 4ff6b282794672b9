use num_complex::Complex64;

use crate::dynamics::{electric_field_modes, SpectralState};
use crate::hermite::HermiteParams;

/// `sqrt(D sum_{m != 0} |E^(m)|^2)`.
pub fn electric_energy(state: &SpectralState, params: &HermiteParams) -> f64 {
    let sum: f64 = electric_field_modes(state, params)
        .iter()
        .map(|e| e.norm_sqr())
        .sum();
    (params.period * sum).sqrt()
}

/// Free-streaming energy of the cosine perturbation: `(eps/k) sqrt(D/2) exp(-k^2 t^2 / 2)`.
pub fn exact_advection_energy(epsilon: f64, params: &HermiteParams, t: f64) -> f64 {
    let k = params.k;
    epsilon / k * (params.period / 2.0).sqrt() * (-0.5 * k * k * t * t).exp()
}

/// Free-streaming coefficient `f_i^(m)(t)` for `m = +-1` of the cosine perturbation.
///
/// Equals `(eps/2) (-imkt)^i / sqrt(i!) exp(-k^2 t^2 / 2)`.
pub fn exact_advection_coefficient(epsilon: f64, k: f64, m: i32, i: usize, t: f64) -> Complex64 {
    if m.abs() != 1 {
        return Complex64::new(0.0, 0.0);
    }
    let x = m as f64 * k * t;
    // (x^i / sqrt(i!)) built incrementally to avoid overflow in i!
    let mut mag = 1.0;
    for j in 1..=i {
        mag *= x.abs() / (j as f64).sqrt();
    }
    let phase = Complex64::new(0.0, -x.signum()).powu(i as u32);
    phase * (0.5 * epsilon * mag * (-0.5 * k * k * t * t).exp())
}
