use serde::{Deserialize, Serialize};

use crate::dynamics::TimeSeries;
use crate::error::{invalid, Error, Result};
use crate::linalg::fit_line;

/// Least-squares line through the log-energy peaks before `t_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub t_f: f64,
    /// `(t, log E)` of every peak used.
    pub peaks: Vec<(f64, f64)>,
    pub slope: f64,
    /// `-slope`, positive for decay.
    pub rate: f64,
    pub n_peaks: usize,
}

/// Strict interior maxima of `values`, returned as `(t, log value)`.
pub fn peaks_of(times: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    assert_eq!(times.len(), values.len());
    values
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
        .map(|(i, w)| (times[i + 1], w[1].ln()))
        .collect()
}

/// Peaks of the electric energy of a run.
pub fn detect_peaks(series: &TimeSeries) -> Vec<(f64, f64)> {
    peaks_of(&series.times(), &series.energies())
}

pub fn fit_peaks(peaks: &[(f64, f64)], t_f: f64) -> Result<DecayFit> {
    let used: Vec<(f64, f64)> = peaks
        .iter()
        .copied()
        .filter(|&(t, y)| t <= t_f && y.is_finite())
        .collect();
    if used.len() < 2 {
        return Err(Error::TooFewPeaks {
            t_f,
            found: used.len(),
        });
    }
    let (slope, _) = fit_line(&used)?;
    Ok(DecayFit {
        t_f,
        n_peaks: used.len(),
        peaks: used,
        slope,
        rate: -slope,
    })
}

/// Decay rate from the energy peaks at `t <= t_f`.
pub fn fit_decay_rate(series: &TimeSeries, t_f: f64) -> Result<DecayFit> {
    if !(t_f > 0.0 && t_f.is_finite()) {
        return invalid(format!("fit horizon must be positive, got {t_f}"));
    }
    fit_peaks(&detect_peaks(series), t_f)
}

/// `max_{t >= t_min} E(t) / E(0)`.
pub fn recurrence_ratio(times: &[f64], values: &[f64], t_min: f64) -> f64 {
    let e0 = values[0];
    times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= t_min)
        .map(|(_, e)| e / e0)
        .fold(0.0, f64::max)
}

pub fn recurrence_metric(series: &TimeSeries, t_min: f64) -> f64 {
    recurrence_ratio(&series.times(), &series.energies(), t_min)
}
