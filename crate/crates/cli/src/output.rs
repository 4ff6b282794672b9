use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;

use filtered_hermite::analysis::{exact_advection_energy, DispersionRoot};
use filtered_hermite::dynamics::{SimConfig, TimeSeries};

use crate::run::RunManifest;

/// Window over which the advection run is compared with its closed-form energy.
pub const EXACT_WINDOW: f64 = 5.0;

/// Shortest round-trip text, switching to exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn energy_csv(series: &TimeSeries) -> String {
    let m_hi = series.m_hi.max(0);
    let mut out = String::from("t,E,logE,mass");
    for m in 0..=m_hi {
        let _ = write!(out, ",mode_norm_{m}");
    }
    out.push('\n');
    let lo = series.m_lo;
    for s in &series.samples {
        let _ = write!(
            out,
            "{},{},{},{}",
            num(s.t),
            num(s.energy),
            num(s.energy.ln()),
            num(s.mass)
        );
        for m in 0..=m_hi {
            let _ = write!(out, ",{}", num(s.mode_norms[(m - lo) as usize]));
        }
        out.push('\n');
    }
    out
}

pub fn write_energy_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    write(path, &energy_csv(series))
}

/// Writes `t, E, E_exact, rel_error` and returns the largest relative error for `t <= 5`.
pub fn write_exact_csv(path: &Path, series: &TimeSeries, cfg: &SimConfig) -> Result<f64> {
    let mut out = String::from("t,E,E_exact,rel_error\n");
    let mut worst = 0.0f64;
    for s in &series.samples {
        let exact = exact_advection_energy(cfg.epsilon, &cfg.params, s.t);
        let rel = (s.energy - exact).abs() / exact;
        if s.t <= EXACT_WINDOW {
            worst = worst.max(rel);
        }
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(s.t),
            num(s.energy),
            num(exact),
            num(rel)
        );
    }
    write(path, &out)?;
    Ok(worst)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, &text)
}

pub fn eigen_text(eigenvalues: &[Complex64]) -> String {
    eigenvalues.iter().fold(String::new(), |mut out, z| {
        let _ = writeln!(out, "{} {}", num(z.re), num(z.im));
        out
    })
}

pub fn dispersion_csv(roots: &[DispersionRoot]) -> String {
    let mut out = String::from("k,omega_p,gamma,residual\n");
    for r in roots {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(r.k),
            num(r.omega_p),
            num(r.gamma),
            num(r.residual)
        );
    }
    out
}

pub fn print_run(manifest: &RunManifest) {
    let s = &manifest.summary;
    println!(
        "{}: M={} k={} dt={} samples={} E(0)={} E({})={}",
        manifest.command,
        manifest.config.params.order,
        manifest.config.params.k,
        num(s.dt),
        s.samples,
        num(s.initial_energy),
        num(s.final_time),
        num(s.final_energy)
    );
    for fit in &s.fits {
        match (fit.rate, &fit.error) {
            (Some(rate), _) => {
                println!("  tF={} rate={} peaks={}", fit.t_f, num(rate), fit.n_peaks)
            }
            (None, Some(err)) => println!("  tF={} {err}", fit.t_f),
            (None, None) => {}
        }
    }
    if let Some(r) = &s.recurrence {
        println!("  recurrence metric (t >= {}) = {}", r.t_min, num(r.metric));
    }
    if let Some(a) = s.spectral_abscissa {
        println!("  spectral abscissa (m = 1) = {}", num(a));
    }
    if let Some(e) = s.max_exact_rel_error {
        println!(
            "  max relative deviation from exact energy (t <= {EXACT_WINDOW}) = {}",
            num(e)
        );
    }
    for path in &manifest.outputs {
        println!("  wrote {}", path.display());
    }
}
