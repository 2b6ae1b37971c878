//! Published values the presets and the self test compare against.
//! Energies in meV, times in ps, frequencies in rad/ps.

/// Triple barrier doublet (𝓔, Γ).
pub const TRIPLE_POLES: [(f64, f64); 2] = [(11.512, 0.4089), (14.387, 0.6365)];
pub const TRIPLE_TAU1: f64 = 1.61;
/// Ē = (𝓔₁ + 𝓔₂)/2
pub const TRIPLE_CENTER: f64 = 12.949;
/// Ē − 𝓔₁ in units of Γ₁
pub const CENTER_OFFSET: f64 = 3.515;
pub const TRIPLE_T_CENTER: f64 = 0.119;
/// 𝓔₁ + 2Γ₁
pub const FIG1_ENERGY: f64 = 12.33;
pub const OMEGA_21: f64 = 4.368;

pub const DOUBLE_POLE: (f64, f64) = (80.11, 1.033);
pub const DOUBLE_ENERGY: f64 = 83.740;
pub const DOUBLE_T: f64 = 0.0229;
/// As printed; ħ/Γ₁ gives a tenth of this.
pub const DOUBLE_TAU1_PRINTED: f64 = 6.37;

/// Central barrier widths of the enhancement study, nm.
pub const CENTRAL_WIDTHS: [f64; 3] = [3.0, 4.0, 5.0];
