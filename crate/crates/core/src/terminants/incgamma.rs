//! `I(N, w) = ∫_0^∞ e^{−s} s^{N−1}/(w + s) ds = Γ(N) e^w w^{N−1} Γ(1−N, w)`,
//! continued in `w` to the closed sector `|arg w| ≤ π` and beyond.

use rug::Float;

use crate::error::{Error, Result};
use crate::num::{euler_gamma, log2_abs, pi, Complex};
use crate::reference::gamma_fn;
use crate::surface::SurfacePoint;

/// Largest |arg w| at which the continued fraction is tried.
const CF_MAX_ARG: f64 = 0.92 * std::f64::consts::PI;

/// `I(N, w)` to `prec` bits. The series branch is valid on every sheet; the
/// continued fraction only near the positive axis.
pub fn i_integral(n: &Complex, w: &SurfacePoint, prec: u32) -> Result<Complex> {
    let r = w.modulus().to_f64();
    let phi = w.angle().to_f64();
    if phi.abs() <= CF_MAX_ARG && r >= cf_min_modulus(n, phi, prec) {
        if let Some(v) = continued_fraction(n, w, prec, cf_cap(prec))? {
            return Ok(v);
        }
    }
    i_series(n, w, prec)
}

/// Modulus above which the continued fraction is expected to beat the series.
fn cf_min_modulus(n: &Complex, phi: f64, prec: u32) -> f64 {
    let c = (phi / 2.0).cos().max(0.05);
    let bits = prec as f64;
    (bits / (8.0 * c * c)).max(0.25 * n.abs().to_f64()).max(6.0)
}

fn cf_cap(prec: u32) -> usize {
    20 * prec as usize + 200
}

/// Modified Lentz evaluation of
/// `I = Γ(N) / (w + N − 1·N/(w + N + 2 − 2(N+1)/(w + N + 4 − …)))`.
pub fn continued_fraction(n: &Complex, w: &SurfacePoint, prec: u32, cap: usize) -> Result<Option<Complex>> {
    let wp = prec + 24;
    let wc = w.to_complex(wp);
    let nn = n.with_prec(wp);
    let tiny = Complex::from_real(Float::with_val(wp, Float::i_exp(1, -(2 * wp as i32))));
    let eps = -(wp as f64) + 2.0;
    let fix = |v: Complex| if v.is_zero() { tiny.clone() } else { v };
    let base = &wc + &nn;
    let mut f = fix(base.clone());
    let mut c = f.clone();
    let mut d = Complex::zero(wp);
    let one = Complex::one(wp);
    for i in 1..=cap {
        let fi = Float::with_val(wp, i);
        // a_i = −i (i − 1 + N), b_i = w + N + 2i
        let mut a = nn.clone();
        a.re += i - 1;
        let a = -a.scale(&fi);
        let mut b = base.clone();
        b.re += 2 * i;
        d = fix(&b + &(&a * &d)).recip();
        c = fix(&b + &(&a / &c));
        let delta = &c * &d;
        f = &f * &delta;
        if (&delta - &one).log2_abs() < eps {
            let g = gamma_fn(&nn, wp)?;
            return Ok(Some((&g / &f).with_prec(prec)));
        }
    }
    Ok(None)
}

fn nearest_integer(n: &Complex) -> Option<u32> {
    if !n.im.is_zero() || !n.re.is_integer() {
        return None;
    }
    n.re.to_u32_saturating()
}

/// Series form with adaptive guard bits.
pub fn i_series(n: &Complex, w: &SurfacePoint, prec: u32) -> Result<Complex> {
    let r = w.modulus().to_f64();
    let re_w = r * w.angle().to_f64().cos();
    let mut guard = ((r + re_w).max(0.0) * std::f64::consts::LOG2_E) as u32 + 24;
    for _ in 0..6 {
        let wp = prec + guard;
        let (v, loss) = match nearest_integer(n) {
            Some(k) => series_integer(k, w, wp)?,
            None => series_generic(n, w, wp)?,
        };
        if loss + 12.0 < guard as f64 {
            return Ok(v.with_prec(prec));
        }
        guard = (loss + 32.0).ceil() as u32;
    }
    Err(Error::Precision("incomplete gamma series keeps losing precision".into()))
}

/// `(π/sin πN) e^w w^{N−1} − Γ(N) e^w Σ_k (−w)^k/(k!(k+1−N))`.
fn series_generic(n: &Complex, w: &SurfacePoint, wp: u32) -> Result<(Complex, f64)> {
    let wc = w.to_complex(wp);
    let nn = n.with_prec(wp);
    let neg_w = -wc.clone();
    let one = Complex::one(wp);
    let r = w.modulus().to_f64();
    let mut t = one.clone();
    let mut sum = (&one - &nn).recip();
    let mut max_term = sum.log2_abs();
    let mut k = 0u64;
    loop {
        k += 1;
        t = &(&t * &neg_w) / &Float::with_val(wp, k);
        let mut den = -nn.clone();
        den.re += k + 1;
        let term = &t / &den;
        let m = term.log2_abs();
        max_term = max_term.max(m);
        sum += &term;
        if k as f64 > r && m < sum.log2_abs() - wp as f64 - 4.0 {
            break;
        }
        if k > 1_000_000 {
            return Err(Error::Convergence("incomplete gamma series".into()));
        }
    }
    let ew = wc.exp();
    let mut nm1 = nn.clone();
    nm1.re -= 1;
    let sin = nn.scale(&pi(wp)).sin();
    let a = &(&Complex::from_real(pi(wp)) / &sin) * &(&ew * &w.power(&nm1));
    let gn = gamma_fn(&nn, wp)?;
    let front = &gn * &ew;
    let b = &front * &sum;
    let v = &a - &b;
    let scale = a.log2_abs().max(b.log2_abs()).max(front.log2_abs() + max_term);
    let loss = scale - v.log2_abs();
    Ok((v, loss))
}

/// Integer order `N = n + 1`:
/// `(−1)^n [e^w w^n E1(w) − Σ_{k<n} (−1)^k k! w^{n−1−k}]`.
fn series_integer(order: u32, w: &SurfacePoint, wp: u32) -> Result<(Complex, f64)> {
    let n = order - 1;
    let wc = w.to_complex(wp);
    let neg_w = -wc.clone();
    let r = w.modulus().to_f64();
    // E1(w) = −γ − Log w − Σ_{k≥1} (−w)^k/(k·k!)
    let mut t = Complex::one(wp);
    let mut sum = Complex::zero(wp);
    let mut max_term = f64::NEG_INFINITY;
    let mut k = 0u64;
    loop {
        k += 1;
        t = &(&t * &neg_w) / &Float::with_val(wp, k);
        let term = &t / &Float::with_val(wp, k);
        let m = term.log2_abs();
        max_term = max_term.max(m);
        sum += &term;
        if k as f64 > r && m < sum.log2_abs().max(0.0) - wp as f64 - 4.0 {
            break;
        }
        if k > 1_000_000 {
            return Err(Error::Convergence("exponential integral series".into()));
        }
    }
    let log_w = w.ln(wp);
    let mut e1 = -(&log_w + &sum);
    e1.re -= euler_gamma(wp);
    let wn = wc.pow_u(n);
    let front = &wc.exp() * &wn;
    let a = &front * &e1;
    // Σ_{k<n} (−1)^k k! w^{n−1−k}, by Horner in w
    let mut poly = Complex::zero(wp);
    let mut fact = Float::with_val(wp, 1);
    let mut coeffs = Vec::with_capacity(n as usize);
    for kk in 0..n {
        if kk > 0 {
            fact *= kk;
        }
        let c = if kk % 2 == 1 { Float::with_val(wp, -&fact) } else { fact.clone() };
        coeffs.push(c);
    }
    let mut poly_scale = f64::NEG_INFINITY;
    for c in coeffs.iter() {
        poly = &(&poly * &wc) + &Complex::from_real(c.clone());
        poly_scale = poly_scale.max(log2_abs(c) + (n as f64) * r.log2().max(0.0));
    }
    let mut v = &a - &poly;
    if n % 2 == 1 {
        v = -v;
    }
    let scale = a
        .log2_abs()
        .max(front.log2_abs() + max_term.max(log_w.log2_abs()))
        .max(poly_scale);
    let loss = scale - v.log2_abs();
    Ok((v, loss))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{half_line, QuadOptions};

    const P: u32 = 200;

    fn direct(n: &Complex, w: &SurfacePoint) -> Complex {
        // valid for |arg w| < π
        let wc = w.to_complex(P + 32);
        let nm1 = {
            let mut v = n.with_prec(P + 32);
            v.re -= 1;
            v
        };
        let peak = nm1.re.to_f64().max(0.5);
        half_line(
            |s: &Float| {
                let sp = SurfacePoint::new(s.clone(), crate::surface::Angle::zero()).unwrap();
                let num = &Complex::from_real(Float::with_val(P + 32, -s).exp()) * &sp.power(&nm1);
                Ok(&num / &(&wc + &Complex::from_real(s.clone())))
            },
            peak,
            &QuadOptions::new(P + 32, 1e-55),
        )
        .unwrap()
        .value
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        (a - b).abs().to_f64() / b.abs().to_f64()
    }

    #[test]
    fn series_matches_integral() {
        for (nr, ni, r, t) in [(5.0, 0.0, 3.0, 0.3), (4.37, 0.0, 7.5, -2.1), (2.5, 1.5, 1.2, 2.9), (9.0, 0.0, 0.4, -1.0)] {
            let n = Complex::from_f64(P, nr, ni);
            let w = SurfacePoint::polar(P, r, t);
            let a = i_series(&n, &w, P).unwrap();
            assert!(rel(&a, &direct(&n, &w)) < 1e-50, "N = {nr}+{ni}i, w = ({r}, {t})");
        }
    }

    #[test]
    fn continued_fraction_matches_series() {
        for (nr, r, t) in [(5.0, 40.0, 0.4), (31.5, 60.0, -1.9), (62.0, 90.0, 2.6), (12.25, 300.0, 2.8)] {
            let n = Complex::from_f64(P, nr, 0.0);
            let w = SurfacePoint::polar(P, r, t);
            let a = continued_fraction(&n, &w, P, 100_000).unwrap().expect("converges");
            let b = i_series(&n, &w, P).unwrap();
            assert!(rel(&a, &b) < 1e-55, "N = {nr}, w = ({r}, {t})");
        }
    }

    #[test]
    fn near_integer_order_is_continuous() {
        let w = SurfacePoint::polar(P, 2.5, 1.0);
        let a = i_series(&Complex::from_f64(P, 6.0, 0.0), &w, P).unwrap();
        let near = Float::with_val(P, 6) + Float::with_val(P, 1e-20);
        let b = i_series(&Complex::from_real(near), &w, P).unwrap();
        let c = rel(&a, &b);
        assert!(c < 1e-18 && c > 0.0, "{c}");
    }
}

