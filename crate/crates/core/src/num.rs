//! Complex numbers over MPFR floats.
//!
//! Every result carries the precision of the left operand.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// log2 |x|, or -inf for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() || x.is_nan() {
        return f64::INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    e as f64 + m.abs().log2()
}

/// Bits needed to represent `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::from_real(Float::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    /// r·(cos t + i sin t) for a real angle t.
    pub fn polar(r: &Float, t: &Float) -> Self {
        let prec = r.prec().max(t.prec());
        let (s, c) = Float::with_val(prec, t).sin_cos(Float::new(prec));
        Complex::new(c * r, s * r)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn log2_abs(&self) -> f64 {
        log2_abs(&self.abs())
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(Float::with_val(self.prec(), &self.re / &n), -Float::with_val(self.prec(), &self.im / &n))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(c * &m, s * &m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, self.abs().ln_ref()), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        let p = self.prec();
        let r = self.abs();
        let mut a = (Float::with_val(p, self.re.abs_ref()) + &r) / 2u32;
        a.sqrt_mut();
        if self.re >= 0 {
            let b = Float::with_val(p, &self.im / &a) / 2u32;
            Complex::new(a, b)
        } else {
            let b = Float::with_val(p, self.im.abs_ref()) / &a / 2u32;
            if self.im < 0 {
                a = -a;
            }
            Complex::new(b, a)
        }
    }

    pub fn sin(&self) -> Self {
        // sin(x + iy) = sin x cosh y + i cos x sinh y
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Complex::new(s * ch, c * sh)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow_u(&self, n: u32) -> Self {
        let mut acc = Complex::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (decimal(&self.re, digits), decimal(&self.im, digits))
    }
}

pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(20);
        write!(f, "({re}, {im})")
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Mul<&Float> for &Complex {
    type Output = Complex;
    fn mul(self, k: &Float) -> Complex {
        self.scale(k)
    }
}

impl Div<&Float> for &Complex {
    type Output = Complex;
    fn div(self, k: &Float) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re / k), Float::with_val(p, &self.im / k))
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: Complex) -> Complex {
                (&self).$m(&o)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, o: &Complex) -> Complex {
                (&self).$m(o)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, o: Complex) -> Complex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, o: Complex) {
        *self += &o;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, o: &Complex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl SubAssign<Complex> for Complex {
    fn sub_assign(&mut self, o: Complex) {
        *self -= &o;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, o: &Complex) {
        *self = &*self * o;
    }
}

impl MulAssign<&Float> for Complex {
    fn mul_assign(&mut self, k: &Float) {
        self.re *= k;
        self.im *= k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1e-300)
    }

    #[test]
    fn sqrt_squares_back() {
        for (re, im) in [(3.0, 4.0), (-3.0, 4.0), (-3.0, -4.0), (0.5, -2.0), (-1.0, 0.0)] {
            let z = Complex::from_f64(P, re, im);
            let s = z.sqrt();
            assert!(s.re >= 0);
            assert!(close(&s.square(), &z, 1e-55));
        }
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = Complex::from_f64(P, -1.25, 2.5);
        assert!(close(&z.ln().exp(), &z, 1e-55));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Complex::from_f64(P, 1.5, -0.25);
        let b = Complex::from_f64(P, -2.0, 7.0);
        assert!(close(&(&(&a * &b) / &b), &a, 1e-55));
    }

    #[test]
    fn sine_matches_exponential_form() {
        let z = Complex::from_f64(P, 0.7, -1.3);
        let iz = z.mul_i();
        let two_i = Complex::from_f64(P, 0.0, 2.0);
        let expected = &(&iz.exp() - &(-iz).exp()) / &two_i;
        assert!(close(&z.sin(), &expected, 1e-55));
    }

    #[test]
    fn log2_of_powers_of_two() {
        assert_eq!(log2_abs(&Float::with_val(64, 1024)), 10.0);
        assert!((log2_abs(&Float::with_val(64, -0.75)) - 0.75f64.log2()).abs() < 1e-12);
        assert_eq!(log2_abs(&Float::new(64)), f64::NEG_INFINITY);
    }

    #[test]
    fn integer_power_matches_repeated_product() {
        let z = Complex::from_f64(P, 0.3, 1.1);
        let mut p = Complex::one(P);
        for _ in 0..13 {
            p = &p * &z;
        }
        assert!(close(&z.pow_u(13), &p, 1e-55));
    }
}
