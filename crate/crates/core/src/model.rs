//! Layered potentials, physical constants and the unit system.
//!
//! Energies are in eV, lengths in nm and times in ps throughout the crate.
//! Values in meV are only accepted or produced at I/O boundaries.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant in eV·ps.
pub const HBAR_EV_PS: f64 = 0.6582119569e-3;
/// ħ²/2mₑ in eV·nm².
pub const HBAR2_OVER_2ME: f64 = 0.0380998;

pub const MEV: f64 = 1e-3;

/// Physical constants for a particle of effective mass `mass_ratio · mₑ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub hbar2_over_2me: f64,
    pub mass_ratio: f64,
}

impl PhysicalConstants {
    pub fn new(mass_ratio: f64) -> Result<Self> {
        if !(mass_ratio > 0.0) || !mass_ratio.is_finite() {
            return Err(Error::NonPositiveMass(mass_ratio));
        }
        Ok(Self {
            hbar: HBAR_EV_PS,
            hbar2_over_2me: HBAR2_OVER_2ME,
            mass_ratio,
        })
    }

    /// ħ²/2m in eV·nm².
    pub fn hbar2_over_2m(&self) -> f64 {
        self.hbar2_over_2me / self.mass_ratio
    }

    /// ħ/2m in nm²/ps.
    pub fn hbar_over_2m(&self) -> f64 {
        self.hbar2_over_2m() / self.hbar
    }

    /// Complex wave number for a (possibly complex) energy.
    ///
    /// The principal square root maps the fourth quadrant of the energy plane
    /// onto the fourth quadrant of the k plane (Re k > 0, Im k < 0).
    pub fn wavenumber(&self, energy: Complex64) -> Complex64 {
        (energy / self.hbar2_over_2m()).sqrt()
    }

    pub fn energy_of(&self, k: Complex64) -> Complex64 {
        self.hbar2_over_2m() * k * k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    /// nm
    pub width: f64,
    /// eV
    pub height: f64,
}

/// Piecewise-constant potential on `[0, L]`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    layers: Vec<Layer>,
    total_length: f64,
    constants: PhysicalConstants,
}

impl PotentialProfile {
    /// Builds a validated profile from `(width nm, height eV)` pairs.
    pub fn build(layer_spec: &[(f64, f64)], mass_ratio: f64) -> Result<Self> {
        if layer_spec.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let mut layers = Vec::with_capacity(layer_spec.len());
        for (index, &(width, height)) in layer_spec.iter().enumerate() {
            if !(width > 0.0) || !width.is_finite() {
                return Err(Error::NonPositiveWidth { index, width });
            }
            if !(height >= 0.0) || !height.is_finite() {
                return Err(Error::InvalidHeight { index, height });
            }
            layers.push(Layer { width, height });
        }
        let constants = PhysicalConstants::new(mass_ratio)?;
        let total_length = layers.iter().map(|l| l.width).sum();
        Ok(Self {
            layers,
            total_length,
            constants,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// L in nm.
    pub fn length(&self) -> f64 {
        self.total_length
    }

    pub fn mass_ratio(&self) -> f64 {
        self.constants.mass_ratio
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn max_height(&self) -> f64 {
        self.layers.iter().map(|l| l.height).fold(0.0, f64::max)
    }

    /// Same profile with the layer order reversed.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.layers.reverse();
        out
    }

    /// Left edge of each layer, in nm.
    pub fn interfaces(&self) -> Vec<f64> {
        let mut x = 0.0;
        self.layers
            .iter()
            .map(|l| {
                let start = x;
                x += l.width;
                start
            })
            .collect()
    }

    /// Index of the layer containing `x`; interior interfaces belong to the
    /// layer on their right, and `x = L` to the last layer.
    pub fn layer_at(&self, x: f64) -> Option<(usize, f64)> {
        if !(0.0..=self.total_length).contains(&x) {
            return None;
        }
        let mut start = 0.0;
        for (i, l) in self.layers.iter().enumerate() {
            if x < start + l.width || i + 1 == self.layers.len() {
                return Some((i, start));
            }
            start += l.width;
        }
        None
    }

    pub fn wavenumber(&self, energy: Complex64) -> Complex64 {
        self.constants.wavenumber(energy)
    }

    pub fn energy_of(&self, k: Complex64) -> Complex64 {
        self.constants.energy_of(k)
    }

    /// Local wave number q inside a layer of the given height.
    pub fn local_wavenumber(&self, k: Complex64, height: f64) -> Complex64 {
        (k * k - height / self.constants.hbar2_over_2m()).sqrt()
    }
}

/// The periodic triple barrier used as the reference doublet structure:
/// 0.12 eV barriers of width `b0`, 16 nm wells, central barrier `b2`.
pub fn triple_barrier(central_width: f64) -> Result<PotentialProfile> {
    PotentialProfile::build(
        &[
            (3.0, 0.12),
            (16.0, 0.0),
            (central_width, 0.12),
            (16.0, 0.0),
            (3.0, 0.12),
        ],
        0.067,
    )
}

/// Symmetric double barrier: 0.23 eV, 5 nm barriers around a 5 nm well.
pub fn double_barrier() -> Result<PotentialProfile> {
    PotentialProfile::build(&[(5.0, 0.23), (5.0, 0.0), (5.0, 0.23)], 0.067)
}
