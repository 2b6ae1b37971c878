//! Transfer-matrix solution of the stationary problem for real or complex k.
//!
//! Inside a layer the wave is carried as the pair (ψ, ψ′) at the layer's left
//! edge. Propagation across a layer of width d only involves cos(qd),
//! sin(qd)/q and q·sin(qd), all even in q, so the result does not depend on
//! which square root is taken for the local wave number.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialProfile;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest |Im(q)·width| accepted before the layer exponentials are deemed
/// to overflow.
pub const OVERFLOW_EXPONENT: f64 = 300.0;

/// (ψ, ψ′) at a point.
pub type WaveState = [Complex64; 2];

/// cos(qd), sin(qd)/q and q² for one layer.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LayerKernel {
    pub cos: Complex64,
    pub sinc: Complex64,
    pub q2: Complex64,
}

impl LayerKernel {
    pub fn new(q2: Complex64, width: f64) -> Self {
        let q = q2.sqrt();
        let z = q * width;
        let sinc = if z.norm() < 1e-3 {
            let z2 = z * z;
            width * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
        } else {
            z.sin() / q
        };
        Self {
            cos: z.cos(),
            sinc,
            q2,
        }
    }

    pub fn forward(&self, s: WaveState) -> WaveState {
        [
            self.cos * s[0] + self.sinc * s[1],
            -self.q2 * self.sinc * s[0] + self.cos * s[1],
        ]
    }

    pub fn backward(&self, s: WaveState) -> WaveState {
        [
            self.cos * s[0] - self.sinc * s[1],
            self.q2 * self.sinc * s[0] + self.cos * s[1],
        ]
    }
}

/// Squared local wave number of every layer at exterior wave number `k`,
/// with the overflow guard applied.
pub(crate) fn layer_q2(profile: &PotentialProfile, k: Complex64) -> Result<Vec<Complex64>> {
    let c = profile.constants().hbar2_over_2m();
    profile
        .layers()
        .iter()
        .enumerate()
        .map(|(index, layer)| {
            let q2 = k * k - layer.height / c;
            let exponent = (q2.sqrt().im * layer.width).abs();
            if exponent > OVERFLOW_EXPONENT || !exponent.is_finite() {
                Err(Error::LayerOverflow { index, exponent })
            } else {
                Ok(q2)
            }
        })
        .collect()
}

/// Wave function on `[0, L]` stored as (ψ, ψ′) at every layer's left edge.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredWave {
    q2: Vec<Complex64>,
    starts: Vec<f64>,
    states: Vec<WaveState>,
    end: WaveState,
    length: f64,
}

impl LayeredWave {
    /// Integrates from x = 0 with initial (ψ, ψ′).
    pub(crate) fn propagate_forward(
        profile: &PotentialProfile,
        k: Complex64,
        initial: WaveState,
    ) -> Result<Self> {
        let q2 = layer_q2(profile, k)?;
        let mut states = Vec::with_capacity(q2.len());
        let mut s = initial;
        for (layer, &q2l) in profile.layers().iter().zip(&q2) {
            states.push(s);
            s = LayerKernel::new(q2l, layer.width).forward(s);
        }
        Ok(Self {
            q2,
            starts: profile.interfaces(),
            states,
            end: s,
            length: profile.length(),
        })
    }

    /// Integrates from x = L backwards with final (ψ, ψ′).
    pub(crate) fn propagate_backward(
        profile: &PotentialProfile,
        k: Complex64,
        last: WaveState,
    ) -> Result<Self> {
        let q2 = layer_q2(profile, k)?;
        let mut states = vec![[Complex64::default(); 2]; q2.len()];
        let mut s = last;
        for (i, layer) in profile.layers().iter().enumerate().rev() {
            s = LayerKernel::new(q2[i], layer.width).backward(s);
            states[i] = s;
        }
        Ok(Self {
            q2,
            starts: profile.interfaces(),
            states,
            end: last,
            length: profile.length(),
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub(crate) fn scaled(&self, factor: Complex64) -> Self {
        let scale = |s: &WaveState| [s[0] * factor, s[1] * factor];
        Self {
            q2: self.q2.clone(),
            starts: self.starts.clone(),
            states: self.states.iter().map(scale).collect(),
            end: scale(&self.end),
            length: self.length,
        }
    }

    pub(crate) fn layer_widths(&self) -> Vec<f64> {
        let mut widths: Vec<f64> = self.starts.windows(2).map(|w| w[1] - w[0]).collect();
        widths.push(self.length - self.starts[self.starts.len() - 1]);
        widths
    }

    /// (ψ, ψ′) at each layer's left edge.
    pub fn layer_states(&self) -> &[WaveState] {
        &self.states
    }

    pub(crate) fn layer_q2s(&self) -> &[Complex64] {
        &self.q2
    }

    pub fn at_start(&self) -> WaveState {
        self.states[0]
    }

    pub fn at_end(&self) -> WaveState {
        self.end
    }

    fn locate(&self, x: f64) -> Result<usize> {
        if !(0.0..=self.length).contains(&x) {
            return Err(Error::OutsideStructure {
                x,
                length: self.length,
            });
        }
        Ok(self.starts.partition_point(|&s| s <= x).saturating_sub(1))
    }

    /// (ψ, ψ′) at `x ∈ [0, L]`.
    pub fn state(&self, x: f64) -> Result<WaveState> {
        let i = self.locate(x)?;
        let kernel = LayerKernel::new(self.q2[i], x - self.starts[i]);
        Ok(kernel.forward(self.states[i]))
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.state(x)?[0])
    }

    /// State just left of interface `j` (end of layer j−1) evaluated from
    /// layer j−1's own coefficients.
    pub fn left_limit(&self, j: usize) -> WaveState {
        let width = self.starts[j] - self.starts[j - 1];
        LayerKernel::new(self.q2[j - 1], width).forward(self.states[j - 1])
    }
}

/// Relates the plane-wave amplitudes (A, B) of `A e^{ikx} + B e^{-ikx}` for
/// x ≤ 0 to (C, D) for x ≥ L: `(A, B) = M (C, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub fn determinant(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Transmission amplitude for unit incidence from the left.
    pub fn transmission_amplitude(&self) -> Complex64 {
        1.0 / self.m11
    }

    pub fn reflection_amplitude(&self) -> Complex64 {
        self.m21 / self.m11
    }
}

pub fn transfer_matrix(profile: &PotentialProfile, k: Complex64) -> Result<TransferMatrix> {
    if k == Complex64::default() {
        return Err(Error::ZeroWavenumber);
    }
    let q2 = layer_q2(profile, k)?;
    // Backward propagation of the two exterior plane waves at x = L.
    let l = profile.length();
    let ep = (I * k * l).exp();
    let em = (-I * k * l).exp();
    let mut plus = [ep, I * k * ep];
    let mut minus = [em, -I * k * em];
    for (layer, &q2l) in profile.layers().iter().zip(&q2).rev() {
        let kernel = LayerKernel::new(q2l, layer.width);
        plus = kernel.backward(plus);
        minus = kernel.backward(minus);
    }
    // Decompose (ψ, ψ′) at x = 0 into e^{±ikx}.
    let split = |s: WaveState| {
        let d = s[1] / (I * k);
        ((s[0] + d) * 0.5, (s[0] - d) * 0.5)
    };
    let (m11, m21) = split(plus);
    let (m12, m22) = split(minus);
    Ok(TransferMatrix { m11, m12, m21, m22 })
}

/// Stationary scattering state for unit incidence from the left:
/// `e^{ikx} + r e^{-ikx}` for x ≤ 0 and `t e^{ikx}` for x ≥ L.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryField {
    pub k: Complex64,
    pub r: Complex64,
    pub t: Complex64,
    wave: LayeredWave,
}

impl StationaryField {
    pub fn solve(profile: &PotentialProfile, k: Complex64) -> Result<Self> {
        let m = transfer_matrix(profile, k)?;
        let t = m.transmission_amplitude();
        let r = m.reflection_amplitude();
        let exit = t * (I * k * profile.length()).exp();
        let wave = LayeredWave::propagate_backward(profile, k, [exit, I * k * exit])?;
        Ok(Self { k, r, t, wave })
    }

    /// Φ(x, k) for `x ∈ [0, L]`.
    pub fn value(&self, x: f64) -> Result<Complex64> {
        self.wave.value(x)
    }

    /// Φ(x, k) on the whole line, using the exterior plane waves outside.
    pub fn value_anywhere(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            (I * self.k * x).exp() + self.r * (-I * self.k * x).exp()
        } else if x > self.wave.length() {
            self.t * (I * self.k * x).exp()
        } else {
            self.wave.value(x).expect("x inside structure")
        }
    }

    pub fn wave(&self) -> &LayeredWave {
        &self.wave
    }

    pub fn transmission_coefficient(&self) -> f64 {
        self.t.norm_sqr()
    }
}

/// `stationary_wave(field, x)`.
pub fn stationary_wave(field: &StationaryField, x: f64) -> Result<Complex64> {
    field.value(x)
}

/// Transmission amplitude and coefficient at real energy `energy` (eV).
pub fn transmission(profile: &PotentialProfile, energy: f64) -> Result<(Complex64, f64)> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::InvalidEnergy(energy));
    }
    let k = profile.wavenumber(Complex64::new(energy, 0.0));
    let t = transfer_matrix(profile, k)?.transmission_amplitude();
    Ok((t, t.norm_sqr()))
}
