//! Arbitrary-precision Faddeeva function.
//!
//! `w(z) = Σₙ (iz)ⁿ / Γ(n/2 + 1)` converges everywhere; cancellation costs
//! about |z|²·log₂e bits, so the working precision grows with |z|. The
//! Laplace continued fraction provides an independent route in the upper
//! half-plane.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    fn from_c64(z: Complex64, p: usize) -> Self {
        Self {
            re: BigFloat::from_f64(z.re, p),
            im: BigFloat::from_f64(z.im, p),
        }
    }

    fn zero(p: usize) -> Self {
        Self::from_c64(Complex64::new(0.0, 0.0), p)
    }

    fn add(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    fn sub(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    fn mul(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM),
            im: self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM),
        }
    }

    fn scale(&self, s: &BigFloat, p: usize) -> Self {
        Self {
            re: self.re.mul(s, p, RM),
            im: self.im.mul(s, p, RM),
        }
    }

    fn div(&self, o: &Self, p: usize) -> Self {
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let num = self.mul(
            &Self {
                re: o.re.clone(),
                im: o.im.neg(),
            },
            p,
        );
        Self {
            re: num.re.div(&den, p, RM),
            im: num.im.div(&den, p, RM),
        }
    }

    /// log₂ of the larger component magnitude, or very negative for zero.
    fn log2_magnitude(&self) -> i64 {
        let e = |x: &BigFloat| {
            if x.is_zero() {
                i64::MIN / 4
            } else {
                x.exponent().map(|e| e as i64).unwrap_or(i64::MIN / 4)
            }
        };
        e(&self.re).max(e(&self.im))
    }

    fn to_c64(&self, cc: &mut Consts) -> Complex64 {
        Complex64::new(to_f64(&self.re, cc), to_f64(&self.im, cc))
    }
}

fn to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut y = x.clone();
    y.set_precision(64, RM).expect("precision");
    let s = y.format(Radix::Dec, RM, cc).expect("format");
    s.parse()
        .unwrap_or_else(|_| panic!("unparseable oracle value {s}"))
}

/// Working precision in bits sufficient for ~50 correct digits at `z`.
pub fn precision_for(z: Complex64) -> usize {
    let bits = std::f64::consts::LOG2_E * z.norm_sqr() + 240.0;
    (bits as usize).div_ceil(64) * 64
}

/// w(z) from the power series at the given precision.
pub fn faddeeva_series(z: Complex64, p: usize) -> Complex64 {
    let mut cc = Consts::new().expect("constants");
    let iz = BigComplex::from_c64(Complex64::new(-z.im, z.re), p);
    let iz2 = iz.mul(&iz, p);
    let pi = cc.pi(p, RM);
    let sqrt_pi = pi.sqrt(p, RM);
    let two = BigFloat::from_f64(2.0, p);

    // Even and odd terms obey the same two-step recurrence.
    let mut even = BigComplex::from_c64(Complex64::new(1.0, 0.0), p);
    let mut odd = iz.scale(&two.div(&sqrt_pi, p, RM), p);
    let mut sum = even.add(&odd, p);
    let target = -(p as i64) - 8;
    let min_terms = (2.0 * z.norm_sqr()) as usize + 8;
    let mut n = 2usize;
    loop {
        let ne = two.div(&BigFloat::from_u64(n as u64, p), p, RM);
        even = even.mul(&iz2, p).scale(&ne, p);
        let no = two.div(&BigFloat::from_u64(n as u64 + 1, p), p, RM);
        odd = odd.mul(&iz2, p).scale(&no, p);
        sum = sum.add(&even, p).add(&odd, p);
        n += 2;
        let small = even.log2_magnitude().max(odd.log2_magnitude()) - sum.log2_magnitude();
        if n > min_terms && small < target {
            break;
        }
        assert!(n < 200_000, "series did not converge at {z}");
    }
    sum.to_c64(&mut cc)
}

/// w(z) for Im z > 0 from `terms` levels of the Laplace continued fraction
/// `w(z) = (i/√π) / (z − ½/(z − 1/(z − (3/2)/(z − …))))`.
pub fn faddeeva_continued_fraction(z: Complex64, terms: usize, p: usize) -> Complex64 {
    assert!(z.im > 0.0, "continued fraction needs Im z > 0");
    let mut cc = Consts::new().expect("constants");
    let zb = BigComplex::from_c64(z, p);
    let mut tail = BigComplex::zero(p);
    for n in (1..=terms).rev() {
        // n/2 is exact in binary.
        let a = BigComplex::from_c64(Complex64::new(n as f64 / 2.0, 0.0), p);
        let denom = zb.sub(&tail, p);
        tail = a.div(&denom, p);
    }
    let pi = cc.pi(p, RM);
    let sqrt_pi = pi.sqrt(p, RM);
    let i_over_sqrt_pi = BigComplex {
        re: BigFloat::from_f64(0.0, p),
        im: BigFloat::from_f64(1.0, p).div(&sqrt_pi, p, RM),
    };
    i_over_sqrt_pi.div(&zb.sub(&tail, p), p).to_c64(&mut cc)
}

/// w(z) to roughly 50 significant digits, rounded to f64.
pub fn faddeeva(z: Complex64) -> Complex64 {
    faddeeva_series(z, precision_for(z))
}
