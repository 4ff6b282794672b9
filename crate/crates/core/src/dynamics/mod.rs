//! Fourier-Hermite semi-discrete systems and their time integration.

mod config;
mod solver;
mod state;

pub use config::{FilterApplication, ForceParams, Model, SimConfig};
pub use solver::{
    propagate_linear_exact, propagate_linear_split, run_simulation, Sample, Solver, TimeSeries,
};
pub use state::{apply_filter, electric_field_modes, initial_state, SpectralState};
