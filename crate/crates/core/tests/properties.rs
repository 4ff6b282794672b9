use num_complex::Complex64;
use proptest::prelude::*;

use filtered_hermite::analysis::{
    electric_energy, fit_peaks, peaks_of, plasma_dispersion_z, solve_dispersion,
};
use filtered_hermite::dynamics::{initial_state, run_simulation, Model, SimConfig, SpectralState};
use filtered_hermite::hermite::FilterSpec;

fn filter_strategy() -> impl Strategy<Value = FilterSpec> {
    prop_oneof![
        Just(FilterSpec::none()),
        Just(FilterSpec::hou_li()),
        Just(FilterSpec::threshold(36.0, 36.0)),
        Just(FilterSpec::cutoff()),
        (4.0..40.0f64, 4.0..40.0f64).prop_map(|(a, p)| FilterSpec::exponential(a, p)),
        (0.01..1.0f64).prop_map(|r| FilterSpec::timestep_scaled(36.0, 36.0, r)),
    ]
}

fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![
        Just(Model::Advection),
        Just(Model::Forced),
        Just(Model::VlasovPoisson),
        Just(Model::LinearizedLandau),
    ]
}

fn config(model: Model, order: usize, m_c: usize, epsilon: f64, filter: FilterSpec) -> SimConfig {
    let mut cfg = match model {
        Model::Advection => SimConfig::advection(order),
        Model::Forced => SimConfig::forced(order, m_c),
        Model::VlasovPoisson => SimConfig::landau(order),
        Model::LinearizedLandau => SimConfig::linearized_landau(order),
    };
    cfg.m_c = m_c;
    cfg.epsilon = epsilon;
    cfg.filter = filter;
    cfg.t_end = 3.0;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_is_conserved(
        model in model_strategy(),
        order in 4usize..24,
        m_c in 1usize..4,
        epsilon in 0.001..0.5f64,
        filter in filter_strategy(),
    ) {
        let series = run_simulation(&config(model, order, m_c, epsilon, filter)).unwrap();
        for s in &series.samples {
            prop_assert!((s.mass - 1.0).abs() <= 1e-12);
            prop_assert!(s.energy >= 0.0);
        }
        prop_assert!(series.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn real_models_keep_conjugate_symmetry(
        model in prop_oneof![Just(Model::Advection), Just(Model::Forced), Just(Model::VlasovPoisson)],
        order in 4usize..20,
        m_c in 1usize..4,
        epsilon in 0.001..0.5f64,
        filter in filter_strategy(),
    ) {
        let series = run_simulation(&config(model, order, m_c, epsilon, filter)).unwrap();
        let last = series.final_state().unwrap();
        prop_assert!(last.reality_defect() <= 1e-12);
    }

    #[test]
    fn energy_is_homogeneous(scale in -5.0..5.0f64, re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let cfg = SimConfig::landau(6);
        let mut s = initial_state(&cfg).unwrap();
        s.mode_mut(2)[0] = Complex64::new(re, im);
        let mut scaled: SpectralState = s.clone();
        for (m, chunk) in (scaled.m_lo..).zip(scaled.coeffs.chunks_exact_mut(7)) {
            if m != 0 {
                chunk.iter_mut().for_each(|z| *z *= scale);
            }
        }
        let (a, b) = (electric_energy(&s, &cfg.params), electric_energy(&scaled, &cfg.params));
        prop_assert!((b - scale.abs() * a).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn peak_fit_recovers_damping(gamma in 0.05..0.3f64, omega in 1.0..2.0f64) {
        let times: Vec<f64> = (0..=6000).map(|i| i as f64 * 0.005).collect();
        let values: Vec<f64> = times.iter().map(|t| (-gamma * t).exp() * (omega * t).cos().abs()).collect();
        let fit = fit_peaks(&peaks_of(&times, &values), 30.0).unwrap();
        prop_assert!((fit.rate - gamma).abs() <= 1e-3);
    }

    #[test]
    fn z_reflection(re in -9.0..9.0f64, im in -1.9..4.0f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() <= 10.0);
        let a = plasma_dispersion_z(z).unwrap();
        let b = plasma_dispersion_z(-z.conj()).unwrap();
        prop_assert!((a + b.conj()).norm() <= 1e-10 * a.norm());
    }

    #[test]
    fn z_satisfies_its_differential_equation(re in -8.0..8.0f64, im in -1.8..3.0f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() <= 9.5);
        let h = 1e-5;
        let fd = (plasma_dispersion_z(z + h).unwrap() - plasma_dispersion_z(z - h).unwrap()) / (2.0 * h);
        let want = -2.0 * (1.0 + z * plasma_dispersion_z(z).unwrap());
        prop_assert!((fd - want).norm() <= 1e-5 * want.norm().max(1.0));
    }

    #[test]
    fn dispersion_roots_are_damped(k in 0.1..1.0f64) {
        let r = solve_dispersion(k).unwrap();
        prop_assert!(r.residual <= 1e-10);
        prop_assert!(r.gamma > 0.0);
        prop_assert!(r.omega_p > 1.0);
    }
}
