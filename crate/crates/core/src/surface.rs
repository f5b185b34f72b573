//! Points on the Riemann surface of the logarithm.
//!
//! An angle is stored as `q·π + offset` with `q` rational, so sheet
//! bookkeeping and Stokes-line angles such as `π/2` stay exact.

use std::cmp::Ordering;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::num::{digits_to_bits, pi, Complex};

/// Target accuracy in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < 30 {
            return Err(Error::Config(format!("precision must be at least 30 digits, got {digits}")));
        }
        Ok(Precision { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Working bits, including a small guard.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits) + 16
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: Self::DEFAULT_DIGITS }
    }
}

#[derive(Clone, Debug)]
pub struct Angle {
    pi_multiple: Rational,
    offset: Float,
}

impl Angle {
    pub fn zero() -> Self {
        Angle { pi_multiple: Rational::new(), offset: Float::new(64) }
    }

    /// `num/den · π`, exactly.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Angle { pi_multiple: Rational::from((num, den)), offset: Float::new(64) }
    }

    pub fn pi_times(q: Rational) -> Self {
        Angle { pi_multiple: q, offset: Float::new(64) }
    }

    pub fn radians(x: Float) -> Self {
        Angle { pi_multiple: Rational::new(), offset: x }
    }

    pub fn from_f64(x: f64) -> Self {
        Angle::radians(Float::with_val(64, x))
    }

    pub fn pi_multiple(&self) -> &Rational {
        &self.pi_multiple
    }

    pub fn offset(&self) -> &Float {
        &self.offset
    }

    pub fn is_exact(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn add(&self, other: &Angle) -> Angle {
        let prec = self.offset.prec().max(other.offset.prec());
        Angle {
            pi_multiple: Rational::from(&self.pi_multiple + &other.pi_multiple),
            offset: Float::with_val(prec, &self.offset + &other.offset),
        }
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Angle {
        Angle { pi_multiple: Rational::from(-&self.pi_multiple), offset: Float::with_val(self.offset.prec(), -&self.offset) }
    }

    pub fn value(&self, prec: u32) -> Float {
        let p = prec + 16;
        let q = Float::with_val(p, &self.pi_multiple);
        let v = q * pi(p) + &self.offset;
        Float::with_val(prec, v)
    }

    pub fn to_f64(&self) -> f64 {
        self.value(64).to_f64()
    }

    /// Sign of `self − q·π`, exact when the offset is zero.
    pub fn cmp_pi(&self, q: &Rational) -> Ordering {
        let d = Rational::from(&self.pi_multiple - q);
        if self.offset.is_zero() {
            return d.cmp0();
        }
        let p = self.offset.prec().max(64) + 64;
        let v = Float::with_val(p, &d) * pi(p) + &self.offset;
        v.cmp0().unwrap_or(Ordering::Equal)
    }

    /// `(cos, sin)`, exact at integer multiples of `π/2`.
    pub fn cos_sin(&self, prec: u32) -> (Float, Float) {
        if self.offset.is_zero() {
            let twice = Rational::from(&self.pi_multiple * 2u32);
            if twice.denom() == &1u32 {
                let k = twice.numer().mod_u(4);
                let (c, s) = match k {
                    0 => (1, 0),
                    1 => (0, 1),
                    2 => (-1, 0),
                    _ => (0, -1),
                };
                return (Float::with_val(prec, c), Float::with_val(prec, s));
            }
        }
        let p = prec + 16;
        let reduced = self.reduced();
        let (s, c) = reduced.value(p).sin_cos(Float::new(p));
        (Float::with_val(prec, c), Float::with_val(prec, s))
    }

    /// Same point of the circle with the rational part reduced to [-1, 1).
    fn reduced(&self) -> Angle {
        let q = &self.pi_multiple;
        let shifted = Rational::from(q + 1u32);
        let two_k = (shifted / 2u32).floor() * 2u32;
        Angle { pi_multiple: (q - two_k), offset: self.offset.clone() }
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Angle) -> bool {
        self.sub(other).cmp_pi(&Rational::new()) == Ordering::Equal
    }
}

/// Nonzero complex number with an unbounded angle.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePoint {
    modulus: Float,
    angle: Angle,
}

impl SurfacePoint {
    pub fn new(modulus: Float, angle: Angle) -> Result<Self> {
        if !(modulus > 0) || !modulus.is_finite() {
            return Err(Error::Domain(format!("modulus must be positive and finite, got {modulus}")));
        }
        Ok(SurfacePoint { modulus, angle })
    }

    /// Modulus and an angle that is an exact rational multiple of `π`.
    pub fn polar_pi(prec: u32, modulus: f64, num: i64, den: i64) -> Self {
        SurfacePoint::new(Float::with_val(prec, modulus), Angle::pi_frac(num, den)).expect("positive modulus")
    }

    pub fn polar(prec: u32, modulus: f64, angle: f64) -> Self {
        SurfacePoint::new(Float::with_val(prec, modulus), Angle::radians(Float::with_val(prec, angle)))
            .expect("positive modulus")
    }

    /// Principal-sheet point for a nonzero complex number.
    pub fn from_complex(z: &Complex) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::Domain("zero has no place on the surface".into()));
        }
        SurfacePoint::new(z.abs(), Angle::radians(z.arg()))
    }

    pub fn modulus(&self) -> &Float {
        &self.modulus
    }

    pub fn angle(&self) -> &Angle {
        &self.angle
    }

    pub fn prec(&self) -> u32 {
        self.modulus.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let offset = Float::with_val(prec.max(self.angle.offset.prec()), &self.angle.offset);
        SurfacePoint {
            modulus: Float::with_val(prec, &self.modulus),
            angle: Angle { pi_multiple: self.angle.pi_multiple.clone(), offset },
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let (c, s) = self.angle.cos_sin(prec);
        Complex::new(c * &self.modulus, s * &self.modulus)
    }

    /// `ln r + iθ` with the stored angle.
    pub fn ln(&self, prec: u32) -> Complex {
        Complex::new(Float::with_val(prec, self.modulus.ln_ref()), self.angle.value(prec))
    }

    /// `exp(w·(ln r + iθ))`.
    pub fn power(&self, w: &Complex) -> Complex {
        (w * &self.ln(w.prec())).exp()
    }

    pub fn power_real(&self, w: &Float) -> Complex {
        self.power(&Complex::from_real(w.clone()))
    }

    pub fn rotate(&self, dtheta: &Angle) -> Self {
        SurfacePoint { modulus: self.modulus.clone(), angle: self.angle.add(dtheta) }
    }

    /// `self · e^{kπi}` for integer `k`.
    pub fn rotate_pi(&self, k: i64) -> Self {
        self.rotate(&Angle::pi_frac(k, 1))
    }

    pub fn mul(&self, other: &SurfacePoint) -> Self {
        let p = self.prec().max(other.prec());
        SurfacePoint { modulus: Float::with_val(p, &self.modulus * &other.modulus), angle: self.angle.add(&other.angle) }
    }

    pub fn recip(&self) -> Self {
        SurfacePoint { modulus: Float::with_val(self.prec(), self.modulus.recip_ref()), angle: self.angle.neg() }
    }

    /// Multiply the modulus by a positive real.
    pub fn scale(&self, k: &Float) -> Self {
        SurfacePoint { modulus: Float::with_val(self.prec(), &self.modulus * k), angle: self.angle.clone() }
    }

    pub fn with_modulus(&self, modulus: Float) -> Self {
        SurfacePoint { modulus, angle: self.angle.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn close(a: &Complex, b: &Complex) -> bool {
        (a - b).abs().to_f64() <= 1e-55 * b.abs().to_f64().max(1.0)
    }

    #[test]
    fn rotate_adds_to_angle() {
        let z = SurfacePoint::polar_pi(P, 5.0, 1, 2);
        let w = z.rotate(&Angle::pi_frac(-2, 1));
        assert_eq!(w.modulus(), z.modulus());
        assert_eq!(w.angle(), &Angle::pi_frac(-3, 2));
        assert_eq!(w.rotate(&Angle::pi_frac(2, 1)), z);
    }

    #[test]
    fn half_power_on_second_sheet() {
        let z = SurfacePoint::polar_pi(P, 1.0, 2, 1);
        let half = Complex::from_f64(P, 0.5, 0.0);
        assert!(close(&z.power(&half), &Complex::from_f64(P, -1.0, 0.0)));
        let four = SurfacePoint::polar_pi(P, 4.0, 0, 1);
        assert!(close(&four.power(&half), &Complex::from_f64(P, 2.0, 0.0)));
    }

    #[test]
    fn imaginary_power_of_e() {
        let e = SurfacePoint::new(Float::with_val(P, 1).exp(), Angle::zero()).unwrap();
        let w = Complex::new(Float::new(P), pi(P));
        assert!(close(&e.power(&w), &Complex::from_f64(P, -1.0, 0.0)));
    }

    #[test]
    fn exact_quarter_turns() {
        let z = SurfacePoint::polar_pi(P, 3.0, 5, 2).to_complex(P);
        assert!(z.re.is_zero());
        assert_eq!(z.im, 3);
    }

    #[test]
    fn exact_comparisons() {
        let a = Angle::pi_frac(1, 1);
        assert_eq!(a.cmp_pi(&Rational::from(1)), Ordering::Equal);
        let b = a.add(&Angle::from_f64(1e-15));
        assert_eq!(b.cmp_pi(&Rational::from(1)), Ordering::Greater);
    }

    #[test]
    fn rejects_low_precision() {
        assert!(Precision::new(29).is_err());
        assert_eq!(Precision::new(30).unwrap().digits(), 30);
    }
}
