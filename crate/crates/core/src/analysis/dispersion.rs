use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const SERIES_RADIUS: f64 = 3.0;
const MAX_ABS: f64 = 10.0;
const MIN_IM: f64 = -2.0;
const CONTINUATION_STEP: f64 = 0.25;

/// Complex root `omega = omega_p - i gamma` of the Landau dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRoot {
    pub k: f64,
    pub omega_p: f64,
    /// Damping rate, positive for decaying waves.
    pub gamma: f64,
    pub residual: f64,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// `Z = i sqrt(pi) exp(-z^2) - 2 Dawson(z)`, Dawson by its Maclaurin series.
fn z_series(z: Complex64) -> Complex64 {
    let q = -2.0 * z * z;
    let mut term = z;
    let mut sum = term;
    for n in 1..400 {
        term *= q / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    i() * PI.sqrt() * (-z * z).exp() - 2.0 * sum
}

/// `Z = -1 / (z - (1/2) / (z - 1 / (z - (3/2) / ...)))`, valid for `Im z > 0`.
fn z_continued_fraction(z: Complex64) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = z;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for j in 1..5000 {
        let a = -(j as f64) / 2.0;
        d = z + a * d;
        if d.norm() < TINY {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok(-f.inv());
        }
    }
    Err(Error::NonConvergence {
        what: "plasma dispersion continued fraction",
        budget: 5000,
    })
}

/// Taylor step of `Z' = -2 (1 + z Z)` from `z0` to `z0 + h`.
fn z_taylor_step(z0: Complex64, zv: Complex64, h: Complex64) -> Complex64 {
    let mut prev = zv;
    let mut cur = -2.0 - 2.0 * z0 * zv;
    let mut hp = h;
    let mut sum = prev + cur * hp;
    for n in 1..200 {
        let next = (-2.0 * z0 * cur - 2.0 * prev) / (n + 1) as f64;
        hp *= h;
        let term = next * hp;
        sum += term;
        prev = cur;
        cur = next;
        if term.norm() <= 1e-17 * sum.norm() && n > 4 {
            break;
        }
    }
    sum
}

/// Plasma dispersion function `Z(z) = i sqrt(pi) w(z)`.
///
/// Validated for `|z| <= 10` and `Im z >= -2`; anything else is rejected.
pub fn plasma_dispersion_z(zeta: Complex64) -> Result<Complex64> {
    if !zeta.is_finite() || zeta.norm() > MAX_ABS || zeta.im < MIN_IM {
        return Err(Error::OutOfRegion(format!("{zeta}")));
    }
    let r = zeta.norm();
    if r <= SERIES_RADIUS {
        return Ok(z_series(zeta));
    }
    if zeta.im >= zeta.re.abs() {
        return z_continued_fraction(zeta);
    }
    // integrate the ODE outward along the ray from just inside the series disc
    let start_r = SERIES_RADIUS - 0.1;
    let dir = zeta / r;
    let mut z = dir * start_r;
    let mut value = z_series(z);
    let steps = ((r - start_r) / CONTINUATION_STEP).ceil() as usize;
    let h = (zeta - z) / steps as f64;
    for _ in 0..steps {
        value = z_taylor_step(z, value, h);
        z += h;
    }
    Ok(value)
}

/// `1 + k^-2 (1 + zeta Z(zeta))` and its `zeta` derivative.
fn dispersion_function(k: f64, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    let z = plasma_dispersion_z(zeta)?;
    let w = 1.0 + zeta * z;
    let inv_k2 = 1.0 / (k * k);
    Ok((1.0 + inv_k2 * w, inv_k2 * (z - 2.0 * zeta * w)))
}

/// `|1 + k^-2 (1 + zeta Z(zeta))|` at `zeta = omega / (sqrt 2 k)`.
pub fn dispersion_residual(k: f64, omega: Complex64) -> Result<f64> {
    Ok(dispersion_function(k, omega / (SQRT_2 * k))?.0.norm())
}

fn newton(k: f64, mut zeta: Complex64) -> Result<Complex64> {
    const BUDGET: usize = 100;
    for _ in 0..BUDGET {
        let (f, df) = dispersion_function(k, zeta)?;
        let delta = f / df;
        zeta -= delta;
        // the residual has a rounding floor near 1e-12, so stop on the step size
        if delta.norm() <= 1e-12 * zeta.norm() {
            return Ok(zeta);
        }
    }
    Err(Error::NonConvergence {
        what: "dispersion Newton iteration",
        budget: BUDGET,
    })
}

/// Least-damped Langmuir root for `0.1 <= k <= 1`.
///
/// Newton is started from the Bohm-Gross frequency at `k = 0.3` (or at `k`
/// itself below that) and continued in small steps of `k`.
pub fn solve_dispersion(k: f64) -> Result<DispersionRoot> {
    if !(0.1..=1.0).contains(&k) {
        return invalid(format!("k = {k} is outside the validated range [0.1, 1]"));
    }
    let start = k.min(0.3);
    let mut omega = Complex64::new((1.0 + 3.0 * start * start).sqrt(), -1e-3);
    let mut kk = start;
    loop {
        omega = newton(kk, omega / (SQRT_2 * kk))? * (SQRT_2 * kk);
        if kk >= k {
            break;
        }
        kk = (kk + 0.05).min(k);
    }
    let residual = dispersion_residual(k, omega)?;
    Ok(DispersionRoot {
        k,
        omega_p: omega.re,
        gamma: -omega.im,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `Z(z) = pi^-1/2 int exp(-t^2) / (t - z) dt` for `Im z > 0`, by the trapezoid rule.
    fn z_integral(z: Complex64) -> Complex64 {
        let h = 0.01;
        let n = 1200;
        let mut s = c(0.0, 0.0);
        for j in -n..=n {
            let t = j as f64 * h;
            s += (-t * t).exp() / (t - z);
        }
        s * h / PI.sqrt()
    }

    /// Continuation into the lower half plane: `Z(z) = conj(Z(conj z)) + 2i sqrt(pi) exp(-z^2)`.
    fn z_oracle(z: Complex64) -> Complex64 {
        if z.im > 0.0 {
            z_integral(z)
        } else {
            z_integral(z.conj()).conj() + 2.0 * i() * PI.sqrt() * (-z * z).exp()
        }
    }

    #[test]
    fn z_examples() {
        let z0 = plasma_dispersion_z(c(0.0, 0.0)).unwrap();
        assert!((z0 - c(0.0, PI.sqrt())).norm() < 1e-15);
        let z1 = plasma_dispersion_z(c(1.0, 0.0)).unwrap();
        assert!((z1.im - PI.sqrt() / 1f64.exp()).abs() < 1e-14);
        assert!((z1.im - 0.6520).abs() < 1e-4);
    }

    #[test]
    fn z_derivative_identity() {
        let z = c(0.3, 0.1);
        let h = 1e-5;
        let fd =
            (plasma_dispersion_z(z + h).unwrap() - plasma_dispersion_z(z - h).unwrap()) / (2.0 * h);
        let want = -2.0 * (1.0 + z * plasma_dispersion_z(z).unwrap());
        assert!((fd - want).norm() < 1e-6);
    }

    #[test]
    fn z_matches_integral_oracle() {
        let points = [
            c(0.5, 0.5),
            c(2.0, 1.0),
            c(-2.5, 0.7),
            c(2.9, 0.4),
            c(3.5, 0.4),
            c(5.0, 0.3),
            c(8.0, 1.5),
            c(-7.0, 0.6),
            c(2.0, 3.0),
            c(0.5, 6.0),
            c(2.0, -0.2),
            c(3.2, -0.5),
            c(6.0, -1.5),
            c(-4.0, -2.0),
            c(9.5, -1.0),
            c(1.0, -2.0),
        ];
        for z in points {
            let got = plasma_dispersion_z(z).unwrap();
            let want = z_oracle(z);
            let rel = (got - want).norm() / want.norm();
            assert!(rel <= 1e-10, "z = {z}: {got} vs {want} (rel {rel:e})");
        }
    }

    #[test]
    fn z_reflection_symmetry() {
        for z in [c(1.3, 0.2), c(4.5, -1.0), c(7.0, 2.0), c(0.2, -1.9)] {
            let a = plasma_dispersion_z(z).unwrap();
            let b = plasma_dispersion_z(-z.conj()).unwrap();
            assert!((a + b.conj()).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn z_region_is_enforced() {
        assert!(matches!(
            plasma_dispersion_z(c(11.0, 0.0)),
            Err(Error::OutOfRegion(_))
        ));
        assert!(matches!(
            plasma_dispersion_z(c(0.0, -2.5)),
            Err(Error::OutOfRegion(_))
        ));
        assert!(plasma_dispersion_z(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn langmuir_root_at_half() {
        let r = solve_dispersion(0.5).unwrap();
        assert!((r.omega_p - 1.416).abs() <= 1e-3, "{r:?}");
        assert!((r.gamma - 0.15336).abs() <= 5e-4, "{r:?}");
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn damping_increases_with_k() {
        let mut prev = 0.0;
        for j in 0..=18 {
            let k = 0.1 + 0.05 * j as f64;
            let r = solve_dispersion(k).unwrap();
            assert!(r.gamma > prev, "k = {k}: {r:?}");
            assert!(r.residual <= 1e-10);
            prev = r.gamma;
        }
        assert!(solve_dispersion(0.05).is_err());
        assert!(solve_dispersion(1.2).is_err());
    }

    #[test]
    fn grid_scan_brackets_root_at_04() {
        let k = 0.4;
        let root = solve_dispersion(k).unwrap();
        let mut best = (f64::INFINITY, c(0.0, 0.0));
        for a in 0..=200 {
            for b in 0..=100 {
                let w = c(1.1 + 0.003 * a as f64, -0.002 * b as f64);
                let r = dispersion_residual(k, w).unwrap();
                if r < best.0 {
                    best = (r, w);
                }
            }
        }
        assert!((best.1.re - root.omega_p).abs() <= 0.003);
        assert!((-best.1.im - root.gamma).abs() <= 0.002);
        assert!(root.gamma < solve_dispersion(0.5).unwrap().gamma);
    }
}
