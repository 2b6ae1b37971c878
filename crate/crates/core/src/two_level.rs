//! Closed-form two-level density for an incidence energy inside a resonance
//! doublet.
//!
//! Keeping only the exponential part of the doublet solution gives
//!
//! ```text
//! |Ψ|² = |ρ₁|² χ₁ + |ρ₂|² χ₂ + 2 Re(ρ₁ ρ₂* ξ₁₂)
//! χ_n  = 1 + e^{−Γ_n t/ħ} − 2 cos(ω̂_n t) e^{−Γ_n t/2ħ}
//! ξ_mn = 1 + e^{i(ω̂_m − ω̂_n)t − (Γ_m + Γ_n)t/2ħ}
//!          − e^{iω̂_m t − Γ_m t/2ħ} − e^{−iω̂_n t − Γ_n t/2ħ}
//! ```
//!
//! with ω̂_n = (E − 𝓔_n)/ħ. Both factors are products
//! a_m a_n* of a_n = 1 − e^{iω̂_n t − Γ_n t/2ħ}, so χ_n = ξ_nn.

pub mod spectrum;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::ResonancePole;
use crate::resonant::ResonantMode;

pub use spectrum::{dominant_frequency, Spectrum};

static NEGATIVE_CLAMPS: AtomicUsize = AtomicUsize::new(0);

/// How many two-level densities came out negative through round-off and were
/// clamped to zero since the process started.
pub fn negative_clamp_count() -> usize {
    NEGATIVE_CLAMPS.load(Ordering::Relaxed)
}

/// Detunings and widths of a resonance doublet for one incidence energy.
///
/// Levels are numbered 1 and 2 in order of increasing resonance energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletFrequencies {
    /// E in eV
    pub energy: f64,
    /// ω̂₁ = (E − 𝓔₁)/ħ in rad/ps
    pub omega_hat_1: f64,
    /// ω̂₂ = (E − 𝓔₂)/ħ in rad/ps
    pub omega_hat_2: f64,
    /// ω̂₂₁ = (𝓔₂ − 𝓔₁)/ħ > 0
    pub omega_hat_21: f64,
    /// Γ₁ in eV
    pub gamma_1: f64,
    /// Γ₂ in eV
    pub gamma_2: f64,
    pub hbar: f64,
}

impl DoubletFrequencies {
    /// The two poles may come in either order.
    pub fn new(energy: f64, a: &ResonancePole, b: &ResonancePole, hbar: f64) -> Result<Self> {
        if !(energy > 0.0) {
            return Err(Error::InvalidEnergy(energy));
        }
        if a.position == b.position {
            return Err(Error::DegenerateDoublet(a.position));
        }
        let (first, second) = if a.position < b.position { (a, b) } else { (b, a) };
        Ok(Self {
            energy,
            omega_hat_1: (energy - first.position) / hbar,
            omega_hat_2: (energy - second.position) / hbar,
            omega_hat_21: (second.position - first.position) / hbar,
            gamma_1: first.width,
            gamma_2: second.width,
            hbar,
        })
    }

    /// ω̂_n for n = 1, 2.
    pub fn omega_hat(&self, n: usize) -> f64 {
        match n {
            1 => self.omega_hat_1,
            2 => self.omega_hat_2,
            _ => panic!("doublet level must be 1 or 2, got {n}"),
        }
    }

    /// ω_n = |ω̂_n|
    pub fn omega(&self, n: usize) -> f64 {
        self.omega_hat(n).abs()
    }

    /// ω₂₁ = |ω̂₂₁|
    pub fn omega_21(&self) -> f64 {
        self.omega_hat_21.abs()
    }

    /// Γ_n in eV.
    pub fn gamma(&self, n: usize) -> f64 {
        match n {
            1 => self.gamma_1,
            2 => self.gamma_2,
            _ => panic!("doublet level must be 1 or 2, got {n}"),
        }
    }

    /// Amplitude decay rate Γ_n/2ħ in 1/ps.
    pub fn decay(&self, n: usize) -> f64 {
        self.gamma(n) / (2.0 * self.hbar)
    }

    /// a_n(t) = 1 − e^{iω̂_n t − Γ_n t/2ħ}
    pub fn amplitude(&self, n: usize, t: f64) -> Complex64 {
        1.0 - Complex64::new(-self.decay(n) * t, self.omega_hat(n) * t).exp()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// χ_n(t) for n = 1, 2.
pub fn chi(freqs: &DoubletFrequencies, n: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    let g = freqs.decay(n) * t;
    Ok(1.0 + (-2.0 * g).exp() - 2.0 * (freqs.omega_hat(n) * t).cos() * (-g).exp())
}

/// ξ_mn(t) for m, n ∈ {1, 2}; ξ_nn = χ_n.
pub fn xi(freqs: &DoubletFrequencies, m: usize, n: usize, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let (gm, gn) = (freqs.decay(m) * t, freqs.decay(n) * t);
    let (wm, wn) = (freqs.omega_hat(m) * t, freqs.omega_hat(n) * t);
    Ok(1.0 + Complex64::new(-(gm + gn), wm - wn).exp()
        - Complex64::new(-gm, wm).exp()
        - Complex64::new(-gn, -wn).exp())
}

/// T(𝓔₁)(1 − e^{−t/τ₁})²
pub fn density_resonant_exponential(peak_transmission: f64, tau: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(peak_transmission * (-(-t / tau).exp_m1()).powi(2))
}

/// Two-level density at a fixed position and incidence energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevel {
    pub rho: [Complex64; 2],
    pub freqs: DoubletFrequencies,
}

impl TwoLevel {
    pub fn new(
        first: &ResonantMode,
        second: &ResonantMode,
        freqs: DoubletFrequencies,
        x: f64,
        k: f64,
    ) -> Result<Self> {
        Ok(Self {
            rho: [first.rho(k, x)?, second.rho(k, x)?],
            freqs,
        })
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        density_two_level(self.rho, &self.freqs, t)
    }

    /// t → ∞ limit |ρ₁ + ρ₂|².
    pub fn stationary(&self) -> f64 {
        density_stationary_two_level(self.rho)
    }
}

pub fn density_two_level(rho: [Complex64; 2], freqs: &DoubletFrequencies, t: f64) -> Result<f64> {
    let value = rho[0].norm_sqr() * chi(freqs, 1, t)?
        + rho[1].norm_sqr() * chi(freqs, 2, t)?
        + 2.0 * (rho[0] * rho[1].conj() * xi(freqs, 1, 2, t)?).re;
    if value < 0.0 {
        NEGATIVE_CLAMPS.fetch_add(1, Ordering::Relaxed);
        return Ok(0.0);
    }
    Ok(value)
}

pub fn density_stationary_two_level(rho: [Complex64; 2]) -> f64 {
    (rho[0] + rho[1]).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{triple_barrier, HBAR_EV_PS, MEV};
    use crate::poles::find_poles;

    fn freqs() -> DoubletFrequencies {
        let p = triple_barrier(3.0).unwrap();
        let poles = find_poles(&p, 2).unwrap();
        DoubletFrequencies::new(12.9 * MEV, &poles[0], &poles[1], HBAR_EV_PS).unwrap()
    }

    #[test]
    fn vanish_at_release() {
        let f = freqs();
        assert_eq!(chi(&f, 1, 0.0).unwrap(), 0.0);
        assert_eq!(xi(&f, 1, 2, 0.0).unwrap(), Complex64::default());
        assert_eq!(density_resonant_exponential(0.7, 1.6, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_time_rejected() {
        let f = freqs();
        assert!(matches!(chi(&f, 1, -1.0), Err(Error::NegativeTime(_))));
        assert!(matches!(xi(&f, 1, 2, -1e-9), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn degenerate_doublet_rejected() {
        let p = triple_barrier(3.0).unwrap();
        let poles = find_poles(&p, 1).unwrap();
        assert!(matches!(
            DoubletFrequencies::new(0.01, &poles[0], &poles[0], HBAR_EV_PS),
            Err(Error::DegenerateDoublet(_))
        ));
    }

    #[test]
    fn long_time_limits() {
        let f = freqs();
        let t = 400.0;
        assert!((chi(&f, 2, t).unwrap() - 1.0).abs() < 1e-12);
        assert!((xi(&f, 1, 2, t).unwrap() - 1.0).norm() < 1e-12);
        assert!((density_resonant_exponential(0.7, 1.6, t).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn splitting_matches_pole_spacing_in_either_order() {
        let p = triple_barrier(3.0).unwrap();
        let poles = find_poles(&p, 2).unwrap();
        let f = freqs();
        let expected = (poles[1].position - poles[0].position) / HBAR_EV_PS;
        assert!((f.omega_hat_21 - expected).abs() < 1e-12 * expected);
        assert!((f.omega_hat_1 - f.omega_hat_2 - f.omega_hat_21).abs() < 1e-12 * expected);
        let swapped = DoubletFrequencies::new(12.9 * MEV, &poles[1], &poles[0], HBAR_EV_PS).unwrap();
        assert_eq!(swapped, f);
    }
}
