use num_complex::Complex64;
use proptest::prelude::*;
use qshutter_core::dynamics::{evolve_trace, uniform_grid, Method, ShutterProblem};
use qshutter_core::model::{triple_barrier, HBAR_EV_PS, MEV};
use qshutter_core::two_level::{
    chi, density_resonant_exponential, density_stationary_two_level, density_two_level, dominant_frequency,
    xi, DoubletFrequencies, Spectrum, TwoLevel,
};

fn doublet() -> ShutterProblem {
    let p = triple_barrier(3.0).unwrap();
    ShutterProblem::new(&p, 10.0 * MEV, 2).unwrap()
}

fn at_energy(base: &ShutterProblem, e: f64) -> ShutterProblem {
    ShutterProblem::with_modes(base.profile(), e, base.modes().to_vec()).unwrap()
}

fn freqs_at(base: &ShutterProblem, e: f64) -> DoubletFrequencies {
    let m = base.modes();
    DoubletFrequencies::new(e, &m[0].pole, &m[1].pole, HBAR_EV_PS).unwrap()
}

/// 1 − e^{iω̂t − Γt/2ħ}, written out independently of the crate.
fn factor(omega_hat: f64, gamma: f64, t: f64) -> Complex64 {
    let decay = (-gamma * t / (2.0 * HBAR_EV_PS)).exp();
    Complex64::new(
        1.0 - decay * (omega_hat * t).cos(),
        -decay * (omega_hat * t).sin(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chi_is_a_squared_modulus(n in 1usize..=2, t in 0.0f64..30.0, e_mev in 10.0f64..16.0) {
        let base = doublet();
        let f = freqs_at(&base, e_mev * MEV);
        let a = factor(f.omega_hat(n), f.gamma(n), t);
        let c = chi(&f, n, t).unwrap();
        prop_assert!((c - a.norm_sqr()).abs() < 1e-13);
        prop_assert!((0.0..=4.0).contains(&c));
        prop_assert!((xi(&f, n, n, t).unwrap() - c).norm() < 1e-13);
    }

    #[test]
    fn xi_factorizes(t in 0.0f64..30.0, e_mev in 10.0f64..16.0) {
        let base = doublet();
        let f = freqs_at(&base, e_mev * MEV);
        let product = factor(f.omega_hat_1, f.gamma_1, t) * factor(f.omega_hat_2, f.gamma_2, t).conj();
        prop_assert!((xi(&f, 1, 2, t).unwrap() - product).norm() < 1e-13);
        prop_assert!((xi(&f, 2, 1, t).unwrap() - product.conj()).norm() < 1e-13);
    }

    #[test]
    fn density_matches_the_factored_amplitude(x_frac in 0.0f64..=1.0, t in 0.0f64..30.0) {
        let base = doublet();
        let m = base.modes();
        let e = 0.5 * (m[0].pole.position + m[1].pole.position) - 0.3 * MEV;
        let prob = at_energy(&base, e);
        let x = x_frac * prob.profile().length();
        let two = prob.two_level_at(x).unwrap();
        let f = two.freqs;
        let rho = [m[0].rho(prob.k(), x).unwrap(), m[1].rho(prob.k(), x).unwrap()];
        let amplitude = rho[0] * factor(f.omega_hat_1, f.gamma_1, t) + rho[1] * factor(f.omega_hat_2, f.gamma_2, t);
        prop_assert!((two.density(t).unwrap() - amplitude.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn frequencies_at_the_special_energies() {
    let base = doublet();
    let m = base.modes();
    let (e1, e2) = (m[0].pole.position, m[1].pole.position);
    let centre = freqs_at(&base, 0.5 * (e1 + e2));
    assert!((centre.omega_hat_1 + centre.omega_hat_2).abs() < 1e-12);
    assert!((centre.omega_hat_1 - 0.5 * centre.omega_hat_21).abs() < 1e-12);
    let on = freqs_at(&base, e1);
    assert_eq!(on.omega_hat_1, 0.0);
    assert!((on.omega_hat_2 + on.omega_hat_21).abs() < 1e-12);
    assert!(on.omega_hat_21 > 0.0);
}

#[test]
fn long_time_limits() {
    let base = doublet();
    let m = base.modes();
    let e = m[0].pole.position + 2.0 * m[0].pole.width;
    let prob = at_energy(&base, e);
    let t = 50.0 * m[0].pole.lifetime.max(m[1].pole.lifetime);
    let two = prob.two_level_at(prob.profile().length()).unwrap();
    assert!((chi(&two.freqs, 1, t).unwrap() - 1.0).abs() < 1e-9);
    assert!((chi(&two.freqs, 2, t).unwrap() - 1.0).abs() < 1e-9);
    assert!((xi(&two.freqs, 1, 2, t).unwrap() - 1.0).norm() < 1e-9);
    assert!((two.density(t).unwrap() - two.stationary()).abs() < 1e-9);
    let far = 1e6 * m[0].pole.lifetime;
    assert!((two.density(far).unwrap() - two.stationary()).abs() < 1e-9);
    assert_eq!(two.density(0.0).unwrap(), 0.0);
}

#[test]
fn stationary_two_level_density() {
    let base = doublet();
    let m = base.modes();
    let prob = at_energy(&base, 0.5 * (m[0].pole.position + m[1].pole.position));
    let l = prob.profile().length();
    let two = prob.two_level_at(l).unwrap();
    let t_e = prob.transmission();
    assert!((two.stationary() - t_e).abs() < 0.1 * t_e);
    let at_rest = TwoLevel::new(&m[0], &m[1], two.freqs, l, 0.0).unwrap();
    assert_eq!(at_rest.stationary(), 0.0);
    assert_eq!(density_stationary_two_level(at_rest.rho), 0.0);
    assert_eq!(density_two_level(at_rest.rho, &two.freqs, 3.0).unwrap(), 0.0);
}

#[test]
fn exponential_buildup_values() {
    assert_eq!(density_resonant_exponential(0.9, 1.6, 0.0).unwrap(), 0.0);
    let one_tau = density_resonant_exponential(1.0, 1.6, 1.6).unwrap();
    assert!((one_tau - (1.0 - (-1.0f64).exp()).powi(2)).abs() < 1e-15);
    assert!((one_tau - 0.39958).abs() < 1e-5);
    let base = doublet();
    let prob = at_energy(&base, base.modes()[0].pole.position);
    let peak = prob.peak_transmission().unwrap();
    assert!(peak > 0.98);
    let late = density_resonant_exponential(peak, prob.tau1().unwrap(), 100.0).unwrap();
    assert!((late - peak).abs() < 1e-12);
}

#[test]
fn closed_form_follows_the_doublet_solution_on_the_fig1_condition() {
    let base = doublet();
    let m = base.modes();
    let prob = at_energy(&base, m[0].pole.position + 2.0 * m[0].pole.width);
    let tau = prob.tau1().unwrap();
    let grid: Vec<f64> = uniform_grid(10.0 * tau, 1000)
        .into_iter()
        .filter(|t| *t >= 0.5 * tau)
        .collect();
    let trace = evolve_trace(
        &prob,
        prob.profile().length(),
        &grid,
        &[Method::DoubletM, Method::TwoLevelClosed],
    )
    .unwrap();
    let (a, b) = (
        trace.curve(Method::DoubletM).unwrap(),
        trace.curve(Method::TwoLevelClosed).unwrap(),
    );
    let worst = a
        .iter()
        .zip(b)
        .map(|(a, b)| (a - b).abs() / a)
        .fold(0.0, f64::max);
    assert!(worst < 0.05, "{worst}");
}

#[test]
fn single_frequency_at_the_doublet_centre() {
    let base = doublet();
    let m = base.modes();
    let prob = at_energy(&base, 0.5 * (m[0].pole.position + m[1].pole.position));
    let grid = uniform_grid(10.0 * prob.tau1().unwrap(), 2000);
    let trace = evolve_trace(&prob, prob.profile().length(), &grid, &[Method::TwoLevelClosed]).unwrap();
    let omega = dominant_frequency(&grid, trace.curve(Method::TwoLevelClosed).unwrap()).unwrap();
    let expected = 0.5 * freqs_at(&base, prob.energy()).omega_hat_21;
    assert!(
        (omega - expected).abs() < 0.03 * expected,
        "{omega} vs {expected}"
    );
}

#[test]
fn three_frequencies_off_centre() {
    let base = doublet();
    let m = base.modes();
    let prob = at_energy(&base, m[0].pole.position + 2.0 * m[0].pole.width);
    let grid = uniform_grid(20.0 * prob.tau1().unwrap(), 4000);
    let trace = evolve_trace(&prob, prob.profile().length(), &grid, &[Method::TwoLevelClosed]).unwrap();
    let spectrum = Spectrum::new(&grid, trace.curve(Method::TwoLevelClosed).unwrap()).unwrap();
    let f = freqs_at(&base, prob.energy());
    let peaks = spectrum.peaks();
    // each line is broadened by the decay of its factor
    for (omega, gamma) in [(f.omega(1), f.gamma_1), (f.omega(2), f.gamma_2)] {
        let tolerance = spectrum.resolution().max(gamma / HBAR_EV_PS);
        assert!(
            peaks.iter().take(4).any(|(w, _)| (w - omega).abs() < tolerance),
            "no peak near {omega}: {peaks:?}"
        );
    }
}
