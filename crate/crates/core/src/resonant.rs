//! Resonant (Gamow) states and the expansion factors ρ_n(x, k).
//!
//! A resonant state solves the stationary equation at a pole k_n with purely
//! outgoing waves at both edges, `u′(0) = −ik_n u(0)` and
//! `u′(L) = ik_n u(L)`. States are normalized with the complex (non-Hermitian)
//! condition
//!
//! ```text
//! ∫₀ᴸ u²(x) dx + i [u²(0) + u²(L)] / (2k_n) = 1
//! ```
//!
//! using the square of u, not its modulus. The remaining sign freedom is fixed
//! by requiring arg u_n(0) ∈ (−π/2, π/2].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialProfile;
use crate::poles::ResonancePole;
use crate::scattering::{LayerKernel, LayeredWave, WaveState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Outgoing-condition residual at x = L above which the pole is rejected.
pub const OUTGOING_LIMIT: f64 = 1e-6;

/// ∫₀ᵈ u² dx for `u = a cos(qx) + b sin(qx)/q`, in closed form.
pub(crate) fn layer_square_integral(state: WaveState, q2: Complex64, width: f64) -> Complex64 {
    let [a, b] = state;
    let kernel = LayerKernel::new(q2, width);
    let (c, s) = (kernel.cos, kernel.sinc);
    let sc = s * c;
    // (d − sin(2qd)/(2q)) / (2q²), smooth at q → 0.
    let w = 4.0 * q2 * width * width;
    let g = if w.norm() < 1.0 {
        let mut term = Complex64::new(1.0 / 6.0, 0.0);
        let mut sum = term;
        for j in 2..14 {
            let n = (2 * j) as f64;
            term *= -w / (n * (n + 1.0));
            sum += term;
        }
        2.0 * width.powi(3) * sum
    } else {
        (width - sc) / (2.0 * q2)
    };
    a * a * (width + sc) * 0.5 + a * b * s * s + b * b * g
}

/// A pole together with its normalized resonant state.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantMode {
    pub pole: ResonancePole,
    wave: LayeredWave,
    /// u_n(0)
    pub u_start: Complex64,
    /// u_n(L)
    pub u_end: Complex64,
    /// |normalization integral − 1| after rescaling.
    pub normalization_residual: f64,
    /// Relative residuals of the outgoing conditions at x = 0 and x = L.
    pub outgoing_residual: [f64; 2],
}

fn normalization_integral(wave: &LayeredWave, k: Complex64) -> Complex64 {
    let bulk: Complex64 = wave
        .layer_states()
        .iter()
        .zip(wave.layer_q2s())
        .zip(wave.layer_widths())
        .map(|((&s, &q2), d)| layer_square_integral(s, q2, d))
        .sum();
    let u0 = wave.at_start()[0];
    let ul = wave.at_end()[0];
    bulk + I * (u0 * u0 + ul * ul) / (2.0 * k)
}

fn outgoing_residuals(wave: &LayeredWave, k: Complex64) -> [f64; 2] {
    let [u0, d0] = wave.at_start();
    let [ul, dl] = wave.at_end();
    [
        (d0 + I * k * u0).norm() / (k * u0).norm(),
        (dl - I * k * ul).norm() / (k * ul).norm(),
    ]
}

impl ResonantMode {
    /// Resonant state at `pole`, integrated from `(u, u′) = scale·(1, −ik_n)`
    /// at x = 0. The normalized result does not depend on `scale`.
    pub fn solve_scaled(profile: &PotentialProfile, pole: &ResonancePole, scale: Complex64) -> Result<Self> {
        let k = pole.k;
        let raw = LayeredWave::propagate_forward(profile, k, [scale, -I * k * scale])?;
        let residual = outgoing_residuals(&raw, k);
        if residual[1] > OUTGOING_LIMIT || !residual[1].is_finite() {
            return Err(Error::PoleQuality {
                k,
                residual: residual[1],
            });
        }
        let mut factor = normalization_integral(&raw, k).sqrt().inv();
        let u0 = raw.at_start()[0] * factor;
        if u0.re < 0.0 || (u0.re == 0.0 && u0.im <= 0.0) {
            factor = -factor;
        }
        let wave = raw.scaled(factor);
        let normalization_residual = (normalization_integral(&wave, k) - 1.0).norm();
        Ok(Self {
            pole: *pole,
            u_start: wave.at_start()[0],
            u_end: wave.at_end()[0],
            outgoing_residual: outgoing_residuals(&wave, k),
            normalization_residual,
            wave,
        })
    }

    pub fn solve(profile: &PotentialProfile, pole: &ResonancePole) -> Result<Self> {
        Self::solve_scaled(profile, pole, Complex64::new(1.0, 0.0))
    }

    pub fn k(&self) -> Complex64 {
        self.pole.k
    }

    /// u_n(x) for `x ∈ [0, L]`.
    pub fn value(&self, x: f64) -> Result<Complex64> {
        self.wave.value(x)
    }

    pub fn wave(&self) -> &LayeredWave {
        &self.wave
    }

    /// ρ_n(x, k) = 2ik u_n(0) u_n(x) / (k² − k_n²).
    pub fn rho(&self, k: f64, x: f64) -> Result<Complex64> {
        let kn = self.pole.k;
        Ok(2.0 * I * k * self.u_start * self.value(x)? / (k * k - kn * kn))
    }

    /// ρ_{−n}(x, k) of the third-quadrant partner, with u_{−n} = u_n* and
    /// k_{−n} = −k_n*.
    pub fn rho_mirror(&self, k: f64, x: f64) -> Result<Complex64> {
        let kn = self.pole.mirror_k();
        let u = self.value(x)?.conj();
        Ok(2.0 * I * k * self.u_start.conj() * u / (k * k - kn * kn))
    }
}

/// `solve_mode(profile, pole)`.
pub fn solve_mode(profile: &PotentialProfile, pole: &ResonancePole) -> Result<ResonantMode> {
    ResonantMode::solve(profile, pole)
}

/// Resonant states for a list of poles, in the same order.
pub fn solve_modes(profile: &PotentialProfile, poles: &[ResonancePole]) -> Result<Vec<ResonantMode>> {
    poles.iter().map(|p| ResonantMode::solve(profile, p)).collect()
}
