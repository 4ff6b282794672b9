//! Diagnostics of simulated runs and of the filtered operators.

mod dispersion;
mod energy;
mod peaks;
mod spectrum;

pub use dispersion::{dispersion_residual, plasma_dispersion_z, solve_dispersion, DispersionRoot};
pub use energy::{electric_energy, exact_advection_coefficient, exact_advection_energy};
pub use peaks::{
    detect_peaks, fit_decay_rate, fit_peaks, peaks_of, recurrence_metric, recurrence_ratio,
    DecayFit,
};
pub use spectrum::{eigen_report_filtered, propagator_norms};
