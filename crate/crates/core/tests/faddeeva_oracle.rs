//! Production Faddeeva kernel against the arbitrary-precision series.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use qshutter_core::mfunc::{faddeeva, m_function};
use qshutter_oracles::faddeeva as oracle;
use rand::{Rng, SeedableRng};

fn worst_in_annulus(rmin: f64, rmax: f64, per_quadrant: usize, seed: u64) -> [f64; 4] {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut worst = [0.0f64; 4];
    for (q, w) in worst.iter_mut().enumerate() {
        for _ in 0..per_quadrant {
            // Uniform in area.
            let r = (rmin * rmin + (rmax * rmax - rmin * rmin) * rng.gen::<f64>()).sqrt();
            let theta = (q as f64 + rng.gen::<f64>()) * FRAC_PI_2;
            let z = Complex64::from_polar(r, theta);
            let (got, want) = (faddeeva(z), oracle::faddeeva(z));
            *w = w.max((got - want).norm() / want.norm());
        }
    }
    worst
}

#[test]
fn disc_of_radius_ten() {
    let worst = worst_in_annulus(0.0, 10.0, 500, 0x5eed);
    println!("worst relative error per quadrant, |z| <= 10: {worst:?}");
    assert!(worst.iter().all(|&e| e < 1e-12));
}

#[test]
fn ring_beyond_ten() {
    let worst = worst_in_annulus(10.0, 20.0, 40, 0xfeed);
    println!("worst relative error per quadrant, 10 < |z| <= 20: {worst:?}");
    assert!(worst.iter().all(|&e| e < 1e-10));
}

#[test]
fn m_function_symmetry_on_ring() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    for _ in 0..100 {
        let r = 5.0 + 15.0 * rng.gen::<f64>();
        let y = Complex64::from_polar(r, 4.0 * FRAC_PI_2 * rng.gen::<f64>());
        // Exponent-safe: divide the identity through by e^{y²}.
        let damp = (-y * y).exp();
        let lhs = m_function(y) * damp + m_function(-y) * damp;
        let scale = (m_function(y) * damp).norm().max(1.0);
        assert!((lhs - 1.0).norm() < 1e-8 * scale, "y = {y}: {lhs}");
    }
}
