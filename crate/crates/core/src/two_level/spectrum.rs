//! Dominant oscillation frequency of a uniformly sampled trace.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Zero padding factor applied before the transform.
const PADDING: usize = 16;
/// Minimum number of full periods the trace must span.
const MIN_PERIODS: f64 = 5.0;

/// Magnitude of the zero-padded transform of a mean-subtracted trace on a
/// uniform angular-frequency grid.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// bin spacing in rad per time unit
    pub step: f64,
    pub magnitude: Vec<f64>,
    /// total time covered by the trace
    pub span: f64,
}

impl Spectrum {
    pub fn new(times: &[f64], values: &[f64]) -> Result<Self> {
        let n = times.len();
        if n != values.len() || n < 8 {
            return Err(Error::ShortTrace(format!("{n} samples")));
        }
        let span = times[n - 1] - times[0];
        let dt = span / (n - 1) as f64;
        if !(dt > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
            return Err(Error::InvalidTimeGrid);
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let size = (n * PADDING).next_power_of_two();
        let mut buffer = vec![Complex::new(0.0, 0.0); size];
        for (b, v) in buffer.iter_mut().zip(values) {
            b.re = v - mean;
        }
        FftPlanner::new().plan_fft_forward(size).process(&mut buffer);
        Ok(Self {
            step: 2.0 * std::f64::consts::PI / (size as f64 * dt),
            magnitude: buffer[..size / 2].iter().map(|c| c.norm()).collect(),
            span,
        })
    }

    /// Bin spacing of the unpadded transform, 2π/span.
    pub fn resolution(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.span
    }

    /// Local maxima outside the lobe around zero frequency, strongest first,
    /// as (frequency, magnitude) with parabolic refinement.
    pub fn peaks(&self) -> Vec<(f64, f64)> {
        let m = &self.magnitude;
        let mut start = 1;
        while start + 1 < m.len() && m[start] <= m[start - 1] {
            start += 1;
        }
        let mut peaks: Vec<(f64, f64)> = (start.max(1)..m.len() - 1)
            .filter(|&i| m[i] > m[i - 1] && m[i] >= m[i + 1])
            .map(|i| {
                let (a, b, c) = (m[i - 1], m[i], m[i + 1]);
                let denom = a - 2.0 * b + c;
                let offset = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
                ((i as f64 + offset) * self.step, b)
            })
            .collect();
        peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
        peaks
    }
}

/// Angular frequency (rad per time unit) of the strongest non-DC peak.
///
/// The mean is removed, the trace is zero-padded and the peak bin is refined
/// by a parabola through its neighbours.
pub fn dominant_frequency(times: &[f64], values: &[f64]) -> Result<f64> {
    let spectrum = Spectrum::new(times, values)?;
    let floor = 1e-12 * spectrum.magnitude.iter().cloned().fold(0.0, f64::max);
    let &(omega, height) = spectrum
        .peaks()
        .first()
        .ok_or_else(|| Error::ShortTrace("no spectral peak".into()))?;
    if !(height > floor) {
        return Err(Error::ShortTrace("no dominant oscillation".into()));
    }
    let periods = omega * spectrum.span / (2.0 * std::f64::consts::PI);
    if periods < MIN_PERIODS {
        return Err(Error::ShortTrace(format!(
            "{periods:.2} periods at ω = {omega:.4}"
        )));
    }
    Ok(omega)
}
