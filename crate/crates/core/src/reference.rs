//! High-accuracy values of `g(z)`, `Γ*(z) = e^{g(z)}` and `1/Γ*(z)`, and
//! level-0 remainders by subtraction.

use std::cmp::Ordering;

use rug::{Float, Rational};

use crate::coeffs;
use crate::error::{Error, Result};
use crate::hyper::TruncationScheme;
use crate::num::{log2_abs, pi, Complex};
use crate::surface::SurfacePoint;

/// Which asymptotic series is being truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// `Γ*(z) ~ Σ (−1)^n γ_n z^{−n}`.
    GammaStar,
    /// `1/Γ*(z) ~ Σ γ_n z^{−n}`.
    Reciprocal,
}

impl Expansion {
    /// Coefficient of `z^{−n}`.
    pub fn coefficient(&self, n: usize, prec: u32) -> Float {
        let g = &coeffs::stirling_floats(n + 1, prec)[n];
        match self {
            Expansion::GammaStar if n % 2 == 1 => Float::with_val(prec, -g),
            _ => g.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GammaStarValue {
    pub value: Complex,
    pub est_rel_error: f64,
}

/// A remainder at some level together with the pieces that produced it.
///
/// `partial_sum + level1 + level2 + remainder = oracle` as computed.
#[derive(Clone, Debug)]
pub struct RemainderReport {
    pub level: u8,
    pub truncation: TruncationScheme,
    pub expansion: Expansion,
    pub partial_sum: Complex,
    pub level1: Option<Complex>,
    pub level2: Option<Complex>,
    pub remainder: Complex,
    pub oracle: Complex,
    pub bits_used: u32,
}

const GUARD: u32 = 48;

fn is_principal(z: &SurfacePoint) -> bool {
    let a = z.angle();
    a.cmp_pi(&Rational::from(1)) != Ordering::Greater && a.cmp_pi(&Rational::from(-1)) != Ordering::Less
}

/// `g(z)` with an absolute error estimate (log2).
fn g_with_error(z: &SurfacePoint, prec: u32) -> Result<(Complex, f64)> {
    if is_principal(z) {
        return g_principal(z, prec);
    }
    // g(z) = −g(z e^{∓πi}) − log(1 − e^{±2πiz})
    let up = z.angle().cmp_pi(&Rational::new()) == Ordering::Greater;
    let k = if up { -1 } else { 1 };
    let (inner, err) = g_with_error(&z.rotate_pi(k), prec)?;
    let wp = prec + GUARD;
    let zc = z.to_complex(wp);
    let two_pi_i_z = zc.mul_i().scale(&(pi(wp) * 2u32));
    let e = if up { two_pi_i_z.exp() } else { (-two_pi_i_z).exp() };
    let l = (&Complex::one(wp) - &e).ln();
    Ok(((-inner - l).with_prec(prec), err))
}

fn g_principal(z: &SurfacePoint, prec: u32) -> Result<(Complex, f64)> {
    let wp = prec + GUARD;
    let zc = z.to_complex(wp);
    if zc.im.is_zero() && zc.re <= 0 && zc.re.is_integer() {
        return Err(Error::Pole(format!("Γ* has a pole at z = {}", zc.re.to_f64())));
    }
    let target = wp as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI) + 2.0;
    let re = zc.re.to_f64();
    let m = if re >= target { 0 } else { (target - re).ceil() as u64 };
    let w = &zc + &Complex::from_real(Float::with_val(wp, m));
    let (gw, series_err) = stirling_log_series(&w, wp)?;
    if m == 0 {
        return Ok((gw.with_prec(prec), series_err));
    }
    // g(z) = g(w) + (w − ½) Log w − (z − ½) Log z − m − Σ_{k<m} Log(z + k)
    let half = Complex::from_real(Float::with_val(wp, 0.5));
    let lw = w.ln();
    let lz = z.ln(wp);
    let mut acc = &gw + &(&(&w - &half) * &lw);
    acc -= &(&(&zc - &half) * &lz);
    acc.re -= m;
    let negative_sheet = z.angle().cmp_pi(&Rational::new()) == Ordering::Less;
    let mut scale = log2_abs(&acc.abs());
    for k in 0..m {
        let s = &zc + &Complex::from_real(Float::with_val(wp, k));
        let mut l = s.ln();
        if s.im.is_zero() && s.re < 0 && negative_sheet {
            l.im = -pi(wp);
        }
        scale = scale.max(l.log2_abs());
        acc -= &l;
    }
    let rounding = scale + (m as f64 + 4.0).log2() - wp as f64;
    Ok((acc.with_prec(prec), series_err.max(rounding)))
}

/// Optimally truncated `Σ a_n w^{1−2n}`; requires `Re w` large enough.
fn stirling_log_series(w: &Complex, prec: u32) -> Result<(Complex, f64)> {
    let inv = w.recip();
    let inv2 = inv.square();
    let mut pw = inv.clone();
    let mut sum = Complex::zero(prec);
    let mut n = 1usize;
    let mut last = f64::INFINITY;
    loop {
        let a = &coeffs::log_gamma_floats(n + 1, prec)[n];
        let term = pw.scale(a);
        let mag = term.log2_abs();
        if mag > last {
            return Err(Error::Convergence("log-gamma series diverged before reaching target precision".into()));
        }
        sum += &term;
        let floor = sum.log2_abs() - prec as f64;
        if mag < floor {
            return Ok((sum, mag.max(floor)));
        }
        last = mag;
        n += 1;
        if n + 1 >= coeffs::table(0).nmax() {
            coeffs::table(2 * n);
        }
        pw = &pw * &inv2;
    }
}

/// `g(z)` where `log Γ(z) = (z − ½) log z − z + ½ log 2π + g(z)`.
pub fn g(z: &SurfacePoint, prec: u32) -> Result<Complex> {
    Ok(g_with_error(z, prec)?.0)
}

pub fn gamma_star(z: &SurfacePoint, prec: u32) -> Result<GammaStarValue> {
    let (g, err) = g_with_error(z, prec + 8)?;
    let rel = (2f64.powf(err) + 2f64.powi(-(prec as i32))).max(0.0);
    Ok(GammaStarValue { value: g.exp().with_prec(prec), est_rel_error: rel })
}

pub fn reciprocal_gamma_star(z: &SurfacePoint, prec: u32) -> Result<GammaStarValue> {
    match g_with_error(z, prec + 8) {
        Ok((g, err)) => {
            let rel = 2f64.powf(err) + 2f64.powi(-(prec as i32));
            Ok(GammaStarValue { value: (-g).exp().with_prec(prec), est_rel_error: rel })
        }
        Err(Error::Pole(_)) => Ok(GammaStarValue { value: Complex::zero(prec), est_rel_error: 0.0 }),
        Err(e) => Err(e),
    }
}

/// `Γ*(z)` or `1/Γ*(z)`.
pub fn oracle(z: &SurfacePoint, expansion: Expansion, prec: u32) -> Result<Complex> {
    Ok(match expansion {
        Expansion::GammaStar => gamma_star(z, prec)?.value,
        Expansion::Reciprocal => reciprocal_gamma_star(z, prec)?.value,
    })
}

/// Log-gamma of a complex argument with positive real part.
pub fn ln_gamma(z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 16;
    let zs = SurfacePoint::from_complex(&z.with_prec(wp))?;
    let gz = g(&zs, wp)?;
    let half = Complex::from_real(Float::with_val(wp, 0.5));
    let zz = z.with_prec(wp);
    let mut v = &(&zz - &half) * &zs.ln(wp);
    v -= &zz;
    v.re += Float::with_val(wp, pi(wp) * 2u32).ln() / 2u32;
    v += &gz;
    Ok(v.with_prec(prec))
}

/// `Γ(N)` for complex `N`; exact MPFR gamma on the real axis.
pub fn gamma_fn(n: &Complex, prec: u32) -> Result<Complex> {
    if n.im.is_zero() {
        return Ok(Complex::from_real(Float::with_val(prec, n.re.gamma_ref())));
    }
    Ok(ln_gamma(n, prec + 16)?.exp().with_prec(prec))
}

/// Terms `c_n z^{−n}` of the truncated series, `n < N`.
pub fn series_terms(z: &SurfacePoint, n_terms: usize, expansion: Expansion, prec: u32) -> Vec<Complex> {
    let inv = z.recip().to_complex(prec);
    let coef = coeffs::stirling_floats(n_terms.max(1), prec);
    let mut out = Vec::with_capacity(n_terms);
    let mut p = Complex::one(prec);
    for n in 0..n_terms {
        let c = match expansion {
            Expansion::GammaStar if n % 2 == 1 => Float::with_val(prec, -&coef[n]),
            _ => coef[n].clone(),
        };
        out.push(p.scale(&c));
        p = &p * &inv;
    }
    out
}

/// Checks that `value` keeps at least ten significant digits against `scale`.
pub(crate) fn check_cancellation(value: &Complex, scale_log2: f64, prec: u32, what: &str) -> Result<()> {
    let lost = scale_log2 - value.log2_abs();
    let keep = prec as f64 - lost;
    if keep < 34.0 {
        return Err(Error::Precision(format!(
            "{what}: cancellation leaves {:.1} significant digits at {prec} bits",
            keep.max(0.0) * std::f64::consts::LOG10_2
        )));
    }
    Ok(())
}

/// `R_N = Γ* − Σ_{n<N}(−1)^nγ_n z^{−n}` or `R̃_N = 1/Γ* − Σ_{n<N} γ_n z^{−n}`.
pub fn remainder_level0(z: &SurfacePoint, n: usize, expansion: Expansion, prec: u32) -> Result<RemainderReport> {
    if n < 1 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if z.angle().cmp_pi(&Rational::from(1)) != Ordering::Less || z.angle().cmp_pi(&Rational::from(-1)) != Ordering::Greater {
        return Err(Error::Domain("level-0 remainder requires |arg z| < π".into()));
    }
    let oracle = oracle(z, expansion, prec)?;
    let terms = series_terms(z, n, expansion, prec);
    let mut partial = Complex::zero(prec);
    let mut scale = oracle.log2_abs();
    for t in &terms {
        scale = scale.max(t.log2_abs());
        partial += t;
    }
    let remainder = &oracle - &partial;
    check_cancellation(&remainder, scale, prec, "level-0 remainder")?;
    Ok(RemainderReport {
        level: 0,
        truncation: TruncationScheme::level0(n)?,
        expansion,
        partial_sum: partial,
        level1: None,
        level2: None,
        remainder,
        oracle,
        bits_used: prec,
    })
}
