//! Closed-form free-particle shutter solution, built on the
//! arbitrary-precision Faddeeva oracle.

use num_complex::Complex64;

use crate::faddeeva::faddeeva;

/// M(y) = w(iy)/2
pub fn moshinsky_m(y: Complex64) -> Complex64 {
    0.5 * faddeeva(Complex64::new(-y.im, y.re))
}

/// Ψ(x, t) = e^{ix²/4Dt} [M(y′_k) − M(y′_{−k})] for the cutoff wave
/// e^{ikx} − e^{−ikx} released at t = 0, with D = ħ/2m in nm²/ps and
/// y′_q = e^{−iπ/4}(x − 2Dqt) / (2√(Dt)).
pub fn free_shutter(x: f64, t: f64, k: f64, diffusion: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let scale = 2.0 * (diffusion * t).sqrt();
    let y = |q: f64| phase * ((x - 2.0 * diffusion * q * t) / scale);
    let chirp = Complex64::from_polar(1.0, x * x / (4.0 * diffusion * t));
    chirp * (moshinsky_m(y(k)) - moshinsky_m(y(-k)))
}
