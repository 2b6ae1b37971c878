//! The Faddeeva function w(z) = e^{−z²} erfc(−iz).
//!
//! Region-switched evaluation in the first quadrant, after Poppe & Wijers:
//!
//! * near the origin, the power series of erf multiplied by e^{−z²};
//! * for |z| large (scaled radius above 1), the Laplace continued fraction;
//! * in between, the continued fraction evaluated at z + ih and Taylor
//!   shifted back (Gautschi's scheme).
//!
//! The other quadrants follow from `w(−z̄) = w(z)̄` and, for Im z < 0,
//! `w(z) = 2e^{−z²} − w(−z)`.

use num_complex::Complex64;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Squared scaled radius below which the power series is used.
const SERIES_RADIUS2: f64 = 0.085264;

/// w(z) for the first-quadrant point (x, y), x, y ≥ 0, together with
/// e^{−z²} when it was computed on the way.
fn first_quadrant(x: f64, y: f64) -> (Complex64, Option<Complex64>) {
    let sx = x / 6.3;
    let sy = y / 4.4;
    let rho2 = sx * sx + sy * sy;
    let re_z2 = x * x - y * y;
    let im_z2 = 2.0 * x * y;

    if rho2 < SERIES_RADIUS2 {
        // erf(-iz) series, Horner form in z².
        let r = (1.0 - 0.85 * sy) * rho2.sqrt();
        let n = (6.0 + 72.0 * r).round() as i32;
        let mut j = 2 * n + 1;
        let mut sum_re = 1.0 / j as f64;
        let mut sum_im = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let fi = i as f64;
            let re = (sum_re * re_z2 - sum_im * im_z2) / fi;
            sum_im = (sum_re * im_z2 + sum_im * re_z2) / fi;
            sum_re = re + 1.0 / j as f64;
        }
        let erfc = Complex64::new(
            1.0 - TWO_OVER_SQRT_PI * (sum_re * y + sum_im * x),
            TWO_OVER_SQRT_PI * (sum_re * x - sum_im * y),
        );
        let gauss = Complex64::from_polar((-re_z2).exp(), -im_z2);
        return (erfc * gauss, Some(gauss));
    }

    let (h, kappa, nu) = if rho2 > 1.0 {
        let r = rho2.sqrt();
        (0.0, 0, (3.0 + 1442.0 / (26.0 * r + 77.0)) as i32)
    } else {
        let r = (1.0 - sy) * (1.0 - rho2).sqrt();
        (
            1.88 * r,
            (7.0 + 34.0 * r).round() as i32,
            (16.0 + 26.0 * r).round() as i32,
        )
    };
    let shifted = h > 0.0;
    let h2 = 2.0 * h;
    let mut lambda = if shifted { h2.powi(kappa) } else { 0.0 };
    let (mut rx, mut ry, mut sx_, mut sy_) = (0.0, 0.0, 0.0, 0.0);
    for n in (0..=nu).rev() {
        let np1 = (n + 1) as f64;
        let tx = y + h + np1 * rx;
        let ty = x - np1 * ry;
        let c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if shifted && n <= kappa {
            let tx = lambda + sx_;
            sx_ = rx * tx - ry * sy_;
            sy_ = ry * tx + rx * sy_;
            lambda /= h2;
        }
    }
    let mut w = if shifted {
        Complex64::new(TWO_OVER_SQRT_PI * sx_, TWO_OVER_SQRT_PI * sy_)
    } else {
        Complex64::new(TWO_OVER_SQRT_PI * rx, TWO_OVER_SQRT_PI * ry)
    };
    if y == 0.0 {
        w.re = (-x * x).exp();
    }
    (w, None)
}

/// w(z) = e^{−z²} erfc(−iz) for any complex z.
pub fn faddeeva(z: Complex64) -> Complex64 {
    let (x, y) = (z.re.abs(), z.im.abs());
    let (w, gauss) = first_quadrant(x, y);
    if z.im >= 0.0 {
        return if z.re < 0.0 { w.conj() } else { w };
    }
    // Lower half-plane: reflect through the origin. The Gaussian factor is
    // e^{−z²} for z in the lower half-plane, written from (x, y) so that its
    // modulus e^{y²−x²} is formed in one exponential.
    let re_z2 = x * x - y * y;
    let im_z2 = 2.0 * x * y;
    let gauss_conj = match gauss {
        Some(g) => g,
        None => Complex64::from_polar((-re_z2).exp(), -im_z2),
    };
    // 2e^{−z̄₁²} − w(z₁) with z₁ = x + iy is the conjugate of w(x − iy).
    let reflected = 2.0 * gauss_conj - w;
    if z.re > 0.0 {
        reflected.conj()
    } else {
        reflected
    }
}

/// Complementary error function for complex argument.
pub fn erfc(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        let iz = Complex64::new(-z.im, z.re);
        (-z * z).exp() * faddeeva(iz)
    } else {
        2.0 - erfc(-z)
    }
}
