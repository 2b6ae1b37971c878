//! Moshinsky M-functions `M(y) = w(iy)/2` and their arguments
//! `y_s = e^{i3π/4} (ħ/2m)^{1/2} s t^{1/2}`.

mod faddeeva;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use faddeeva::{erfc, faddeeva};

use crate::error::{Error, Result};
use crate::model::PhysicalConstants;

/// M(y) = w(iy)/2 = e^{y²} erfc(y)/2.
pub fn m_function(y: Complex64) -> Complex64 {
    0.5 * faddeeva(Complex64::new(-y.im, y.re))
}

/// M(y)·e^{−y²} = erfc(y)/2, finite where e^{y²} would overflow.
pub fn m_function_scaled(y: Complex64) -> Complex64 {
    0.5 * erfc(y)
}

/// Leading terms of the large-|y| expansion
/// `M(y) ~ 1/(2√π y) · [1 − 1/(2y²) + 3/(4y⁴) − …]`, valid for Re y > 0.
pub fn m_function_asymptotic(y: Complex64, terms: usize) -> Complex64 {
    let inv2 = 1.0 / (2.0 * y * y);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..terms {
        term *= -(2.0 * n as f64 - 1.0) * inv2;
        sum += term;
    }
    sum / (2.0 * PI.sqrt() * y)
}

/// The argument of an M-function, remembering what generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MArgument {
    pub y: Complex64,
    /// Generating wave number, nm⁻¹.
    pub s: Complex64,
    /// ps
    pub t: f64,
}

impl MArgument {
    pub fn m(&self) -> Complex64 {
        m_function(self.y)
    }

    /// e^{y²} = e^{−i(ħs²/2m)t}.
    pub fn exp_y2(&self) -> Complex64 {
        (self.y * self.y).exp()
    }
}

/// e^{i3π/4}
const PHASE: Complex64 = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);

pub fn y_argument(s: Complex64, t: f64, constants: &PhysicalConstants) -> Result<MArgument> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let y = PHASE * (constants.hbar_over_2m() * t).sqrt() * s;
    Ok(MArgument { y, s, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{triple_barrier, MEV};
    use crate::poles::find_poles;

    #[test]
    fn m_at_origin() {
        assert_eq!(m_function(Complex64::default()), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn symmetry_relation() {
        let mut state = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let y = Complex64::from_polar(5.0 * next().sqrt(), 2.0 * PI * next());
            let (a, b, rhs) = (m_function(y), m_function(-y), (y * y).exp());
            // Residual relative to the largest term of the identity.
            let scale = a.norm().max(b.norm()).max(rhs.norm());
            assert!((a + b - rhs).norm() <= 1e-11 * scale, "y = {y}");
        }
    }

    #[test]
    fn large_argument_series() {
        let y = Complex64::new(50.0, 0.0);
        let m = m_function(y);
        assert!((m - m_function_asymptotic(y, 4)).norm() < 1e-8 * m.norm());
        let lead = 1.0 / (2.0 * PI.sqrt() * 50.0);
        assert!((m.re - lead).abs() / lead < 2.1e-4);
    }

    #[test]
    fn y_argument_identities() {
        let p = triple_barrier(3.0).unwrap();
        let c = p.constants();
        let k = p.wavenumber(Complex64::new(12.3 * MEV, 0.0));
        assert_eq!(y_argument(k, 0.0, c).unwrap().y, Complex64::default());
        assert!(matches!(y_argument(k, -1.0, c), Err(Error::NegativeTime(_))));
        for &t in &[0.01, 0.7, 3.0, 40.0] {
            let arg = y_argument(k, t, c).unwrap();
            // y² = −i(ħk²/2m)t = −iEt/ħ.
            let expected = Complex64::new(0.0, -12.3 * MEV * t / c.hbar);
            assert!((arg.y * arg.y - expected).norm() < 1e-12 * expected.norm());
            assert!((arg.exp_y2().norm() - 1.0).abs() < 1e-12);
        }
        let pole = find_poles(&p, 1).unwrap()[0];
        for &t in &[0.5, 2.0, 8.0] {
            let arg = y_argument(pole.k, t, c).unwrap();
            let decay = (-pole.width * t / (2.0 * c.hbar)).exp();
            assert!((arg.exp_y2().norm() - decay).abs() < 1e-12);
            assert!(decay < 1.0);
        }
    }

    #[test]
    fn continuous_at_zero_time() {
        let p = triple_barrier(3.0).unwrap();
        let c = p.constants();
        let k = p.wavenumber(Complex64::new(12.3 * MEV, 0.0));
        let mut prev = m_function(y_argument(k, 0.0, c).unwrap().y);
        assert_eq!(prev, Complex64::new(0.5, 0.0));
        for i in 1..200 {
            let t = 1e-12 * 1.2f64.powi(i);
            let m = m_function(y_argument(k, t, c).unwrap().y);
            let y = y_argument(k, t, c).unwrap().y;
            // |dM/dy| ≤ 1/√π + O(|y|) near the origin.
            assert!((m - prev).norm() <= y.norm() + 1e-15);
            prev = m;
            if t > 1e-3 {
                break;
            }
        }
    }

    #[test]
    fn scaled_form_matches_where_finite() {
        for &(re, im) in &[(-3.0, 2.0), (0.5, -0.5), (-12.0, -1.0)] {
            let y = Complex64::new(re, im);
            let direct = m_function(y) * (-y * y).exp();
            assert!((m_function_scaled(y) - direct).norm() < 1e-11 * direct.norm().max(1e-300));
        }
    }
}
