use std::f64::consts::PI;

use num_complex::Complex64;

use filtered_hermite::analysis::{eigen_report_filtered, propagator_norms, solve_dispersion};
use filtered_hermite::hermite::{FilterSpec, HermiteParams};

/// Dielectric function `1 - k^-2 int f0'(v) / (v - u) dv` on the Landau contour,
/// with `u = omega / k` and `f0` the unit Maxwellian.
///
/// For `Im u < 0` the pole lies below the real line and the contour picks up
/// `2 pi i f0'(u)`. The real-line integral uses the trapezoid rule, halving the
/// step until two successive values agree.
fn dielectric_by_quadrature(k: f64, omega: Complex64) -> Complex64 {
    let u = omega / k;
    let df0 = |v: Complex64| -v * (-0.5 * v * v).exp() / (2.0 * PI).sqrt();
    let trapezoid = |h: f64| {
        let n = (14.0 / h).ceil() as i64;
        let mut s = Complex64::new(0.0, 0.0);
        for j in -n..=n {
            let v = Complex64::new(j as f64 * h, 0.0);
            s += df0(v) / (v - u);
        }
        s * h
    };
    let mut h = 0.1;
    let mut prev = trapezoid(h);
    loop {
        h /= 2.0;
        let next = trapezoid(h);
        if (next - prev).norm() <= 1e-14 || h < 1e-4 {
            prev = next;
            break;
        }
        prev = next;
    }
    let mut integral = prev;
    if u.im < 0.0 {
        integral += Complex64::new(0.0, 2.0 * PI) * df0(u);
    }
    1.0 - integral / (k * k)
}

#[test]
fn dispersion_root_passes_quadrature_check() {
    for k in [0.3, 0.4, 0.5, 0.7, 1.0] {
        let r = solve_dispersion(k).unwrap();
        let omega = Complex64::new(r.omega_p, -r.gamma);
        let eps = dielectric_by_quadrature(k, omega);
        assert!(eps.norm() <= 1e-8, "k={k}: {eps}");
        assert!(r.gamma > 0.0);
        // a point off the root is clearly nonzero, so the check has teeth
        assert!(dielectric_by_quadrature(k, omega + 0.01).norm() > 1e-3);
    }
}

#[test]
fn filtered_abscissa_negative_for_every_mode() {
    let p = HermiteParams::new(30, 4.0 * PI).unwrap();
    let dt = 0.5 / 30f64.sqrt();
    let mut abscissae = Vec::new();
    for m in 1..=10 {
        let r = eigen_report_filtered(&p, &FilterSpec::hou_li(), dt, m, false).unwrap();
        assert!(r.spectral_abscissa < 0.0, "m={m}");
        let g = eigen_report_filtered(&p, &FilterSpec::hou_li(), dt, m, true).unwrap();
        assert!(g.spectral_abscissa < 0.0, "m={m} with G");
        abscissae.push(r.spectral_abscissa);
    }
    // monotonicity in m is only observed, not required
    println!("spectral abscissa of A_m, m = 1..10: {abscissae:?}");
    let r0 = eigen_report_filtered(&p, &FilterSpec::hou_li(), dt, 0, false).unwrap();
    assert_eq!(r0.spectral_abscissa, 0.0);
}

#[test]
fn coupled_operator_without_filter_has_imaginary_spectrum() {
    for order in [10, 30, 60] {
        let p = HermiteParams::new(order, 4.0 * PI).unwrap();
        for m in [1, 2, 5] {
            let r = eigen_report_filtered(&p, &FilterSpec::none(), 0.1, m, true).unwrap();
            assert!(
                r.max_abs_real() <= 1e-10,
                "M={order} m={m}: {}",
                r.max_abs_real()
            );
        }
    }
}

#[test]
fn propagator_norm_decreases_with_time() {
    let p = HermiteParams::new(30, 4.0 * PI).unwrap();
    let n = propagator_norms(
        &p,
        &FilterSpec::hou_li(),
        0.5 / 30f64.sqrt(),
        1,
        &[10.0, 20.0, 40.0],
    )
    .unwrap();
    assert!(n[0] > n[1] && n[1] > n[2], "{n:?}");
    let free = propagator_norms(&p, &FilterSpec::none(), 0.1, 1, &[10.0, 40.0]).unwrap();
    assert!(free.iter().all(|v| (v - 1.0).abs() < 1e-9));
}
