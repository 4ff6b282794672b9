//! Filtered Fourier-Hermite spectral method for 1D kinetic transport.
//!
//! The distribution `f(x, xi, t)` is expanded in Fourier modes `exp(i m k x)`
//! in space and normalized Hermite functions in velocity. A diagonal filter is
//! applied to the Hermite coefficients after every time step; it suppresses
//! the recurrence that plain Hermite discretizations exhibit while leaving the
//! Landau damping rate unchanged.
//!
//! - [`hermite`]: basis, operator matrices `A`, `B`, `G`, filters.
//! - [`linalg`]: dense complex eigenvalues, matrix exponential, line fits.
//! - [`dynamics`]: the four models and their time integration.
//! - [`analysis`]: electric energy, decay-rate fits, recurrence metric,
//!   filtered-operator spectra, and the Landau dispersion relation.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod hermite;
pub mod linalg;

pub use error::{Error, Result};
