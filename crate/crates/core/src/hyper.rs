//! Level-1 and level-2 hyperasymptotic re-expansions of `Γ*(z)` and `1/Γ*(z)`,
//! remainders by exact subtraction, the modified multipliers of the `e^{4πiz}`
//! terms and the discontinuous multipliers they approach.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rug::{Float, Rational};

use crate::coeffs;
use crate::error::{Error, Result};
use crate::num::{digits_to_bits, log2_abs, pi, Complex};
use crate::quad::{half_line, log2_add, QuadOptions};
use crate::reference::{check_cancellation, oracle, remainder_level0, series_terms, Expansion, RemainderReport};
use crate::surface::{Angle, SurfacePoint};
use crate::terminants::{evaluate, f1, lemma1_scale_log2, Level, Method, TerminantSpec};

/// Truncation indices `N > M > K` per level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationScheme {
    pub level: u8,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl TruncationScheme {
    pub fn level0(n: usize) -> Result<Self> {
        Self::new(0, n, 0, 0)
    }

    pub fn level1(n: usize, m: usize) -> Result<Self> {
        Self::new(1, n, m, 0)
    }

    pub fn level2(n: usize, m: usize, k: usize) -> Result<Self> {
        Self::new(2, n, m, k)
    }

    pub fn new(level: u8, n: usize, m: usize, k: usize) -> Result<Self> {
        let ok = match level {
            0 => n >= 1,
            1 => m < n,
            2 => k < m && m < n,
            _ => false,
        };
        if !ok {
            return Err(Error::Domain(format!("invalid truncation level {level} with N={n}, M={m}, K={k}")));
        }
        Ok(TruncationScheme { level, n, m, k })
    }

    /// `N = ⌊2π|z|(level+1)⌋`, `M = ⌊2π|z|·level⌋`, `K = ⌊2π|z|(level−1)⌋`.
    pub fn optimal(absz: f64, level: u8) -> Result<Self> {
        let span = |j: u8| (2.0 * PI * absz * j as f64).floor() as usize;
        match level {
            0 => Self::level0(span(1).max(1)),
            1 => Self::level1(span(2), span(1)),
            2 => Self::level2(span(3), span(2), span(1)),
            _ => Err(Error::Domain(format!("level {level} not supported"))),
        }
    }
}

/// `2πk e^{±πi/2}`.
pub fn singulant(k: u32, upper: bool, prec: u32) -> SurfacePoint {
    let m = Float::with_val(prec, pi(prec) * (2 * k));
    SurfacePoint::new(m, Angle::pi_frac(if upper { 1 } else { -1 }, 2)).expect("positive modulus")
}

/// Working precision for a scheme at `|z|`: enough bits to resolve the
/// expected final remainder below the largest term that enters it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitEstimate {
    pub digits: u32,
    pub bits: u32,
}

/// `log |γ_n|` for `n < len`, from the exact table.
fn log_gamma_coeffs(len: usize) -> Vec<f64> {
    let c = coeffs::stirling_floats(len.max(1), 64);
    c.iter().take(len).map(|g| if g.is_zero() { f64::NEG_INFINITY } else { g.to_f64().abs().ln() }).collect()
}

/// The largest term is `max_n |γ_n| |z|^{−n}` over the level-0 sum; each
/// level then gains about `e^{−2π|z|}|z|^{−index}`. Twenty digits of margin.
pub fn required_digits(absz: f64, scheme: &TruncationScheme) -> DigitEstimate {
    let lc = log_gamma_coeffs(scheme.n + 1);
    let lz = absz.ln();
    let term = |n: usize| lc[n] - n as f64 * lz;
    let largest = (0..scheme.n).map(term).fold(0.0f64, f64::max);
    let step = -2.0 * PI * absz;
    let mut smallest = term(scheme.n);
    if scheme.level >= 1 {
        smallest = smallest.min(step + term(scheme.m));
    }
    if scheme.level >= 2 {
        smallest = smallest.min(2.0 * step + term(scheme.k));
    }
    let span = (largest - smallest).max(0.0) / std::f64::consts::LN_10;
    let digits = (20.0 + span.ceil()).max(30.0) as u32;
    DigitEstimate { digits, bits: digits_to_bits(digits) }
}

fn prefactor(z: &SurfacePoint, n: usize, levels: u32, prec: u32) -> Complex {
    let zp = z.power(&Complex::from_f64(prec, n as f64 - 1.0, 0.0));
    let tpi = Complex::new(Float::new(prec), pi(prec) * 2u32);
    (&tpi.pow_u(levels) * &zp).recip()
}

/// The `F^(1)` sums of the level-1 re-expansions, for `R_N` and `R̃_N` in
/// that order:
/// `(1/2πi z^{N−1}) Σ_{m<M} (−1)^m γ_m [F^(1)(z; N−m, 2πe^{πi/2}) − F^(1)(z; N−m, 2πe^{−πi/2})]`
/// and `(1/2πi z^{N−1}) Σ_{m<M} γ_m [F^(1)(z; N−m, 2πe^{−πi/2}) − F^(1)(z; N−m, 2πe^{πi/2})]`.
pub fn level1_terms(z: &SurfacePoint, n: usize, m: usize, prec: u32) -> Result<(Complex, Complex)> {
    if m >= n {
        return Err(Error::Domain(format!("level 1 needs M < N, got M={m}, N={n}")));
    }
    let wp = prec + 16;
    let gam = coeffs::stirling_floats(m.max(1), wp);
    let up = singulant(1, true, wp);
    let down = singulant(1, false, wp);
    let mut r = Complex::zero(wp);
    let mut rt = Complex::zero(wp);
    for (j, g) in gam.iter().enumerate().take(m) {
        let order = Complex::from_f64(wp, (n - j) as f64, 0.0);
        let d = &f1(z, &order, &up, wp)? - &f1(z, &order, &down, wp)?;
        let t = d.scale(g);
        if j % 2 == 0 {
            r += &t;
        } else {
            r -= &t;
        }
        rt -= &t;
    }
    let p = prefactor(z, n, 1, wp);
    Ok(((&p * &r).with_prec(prec), (&p * &rt).with_prec(prec)))
}

/// `R_{N,M}(z)` or `R̃_{N,M}(z)` as `R_N` minus the level-1 sums.
pub fn remainder_level1(z: &SurfacePoint, n: usize, m: usize, expansion: Expansion, prec: u32) -> Result<RemainderReport> {
    let truncation = TruncationScheme::level1(n, m)?;
    let r0 = remainder_level0(z, n, expansion, prec)?;
    let (a, b) = level1_terms(z, n, m, prec)?;
    let l1 = match expansion {
        Expansion::GammaStar => a,
        Expansion::Reciprocal => b,
    };
    let remainder = &r0.remainder - &l1;
    check_cancellation(&remainder, r0.remainder.log2_abs().max(l1.log2_abs()), prec, "level-1 remainder")?;
    Ok(RemainderReport { level: 1, truncation, level1: Some(l1), remainder, ..r0 })
}

/// `R_{N,M}(z)` by quadrature of
/// `(1/2πi z^N) [∫_0^{[π/2]} − ∫_0^{[−π/2]}] e^{±2πit} t^{N−1} R_M(t)/(1 − t/z) dt`,
/// for `|arg z| < π/2`. An independent check on the subtraction.
pub fn remainder_level1_quadrature(z: &SurfacePoint, n: usize, m: usize, opts: &QuadOptions) -> Result<crate::quad::Estimate> {
    TruncationScheme::level1(n, m)?;
    let half = Rational::from((1, 2));
    let a = z.angle();
    if a.cmp_pi(&half) != Ordering::Less || a.cmp_pi(&-half) != Ordering::Greater {
        return Err(Error::Domain("the integral form needs |arg z| < π/2".into()));
    }
    let wp = opts.prec + 24;
    let zc = z.to_complex(wp);
    let nm1 = Float::with_val(wp, n - 1);
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let inner = opts.prec + 40;
    let peak = (n as f64 - 1.0) / (2.0 * PI);
    let mut total = Complex::zero(wp);
    let mut err = f64::NEG_INFINITY;
    for sign in [1i64, -1] {
        // t = ±is: e^{±2πit} = e^{−2πs}, t^{N−1} = s^{N−1} e^{±πi(N−1)/2}, dt = ±i ds
        let dir = if sign > 0 { Complex::i(wp) } else { -Complex::i(wp) };
        let angle = Angle::pi_frac(sign, 2);
        let r = half_line(
            |s: &Float| {
                let t = SurfacePoint::new(s.clone(), angle.clone())?;
                // Far out the remainder is lost to cancellation, but its weight is negligible there.
                let mut rm = oracle(&t, Expansion::GammaStar, inner)?;
                for term in series_terms(&t, m, Expansion::GammaStar, inner) {
                    rm -= &term;
                }
                let weight = Float::with_val(wp, Float::with_val(wp, s.ln_ref()) * &nm1 - Float::with_val(wp, s * &two_pi)).exp();
                Ok(&rm.with_prec(wp).scale(&weight) * &(&dir / &(&zc - &dir.scale(s))))
            },
            peak,
            &QuadOptions { prec: wp, ..*opts },
        )?;
        let phase = Complex::polar(&Float::with_val(wp, 1), &(Float::with_val(wp, pi(wp) * (n - 1)) * sign / 2u32));
        let v = &phase * &r.value;
        err = log2_add(err, r.err_log2);
        if sign > 0 {
            total += &v;
        } else {
            total -= &v;
        }
    }
    // 1/(z^N (1 − t/z)) = 1/(z^{N−1}(z − t))
    let p = prefactor(z, n, 1, wp);
    let value = &p * &total;
    Ok(crate::quad::Estimate { value: value.with_prec(opts.prec), err_log2: err + p.log2_abs() })
}

/// Level-2 sums for `R_{N,M}` and `R̃_{N,M}`, with the accumulated absolute
/// quadrature error estimate.
#[derive(Clone, Debug)]
pub struct Level2Terms {
    pub r: Complex,
    pub r_tilde: Complex,
    pub err_log2: f64,
}

/// With `E±± = F^(2)(z; N−M+1, 2πe^{±πi/2}; M−k, 2πe^{±πi/2})`, mixed pairs
/// `X±∓` likewise and `G± = F^(1)(z; N−k, 4πe^{±πi/2})`:
///
/// `R_{N,M} ≈ (1/(2πi)² z^{N−1}) Σ_{k<K} (−1)^k γ_k (E++ + E−− − X+− − X−+) − (1/2πi z^{N−1}) Σ_{k<K} (−1)^k γ_k G−`,
/// `R̃_{N,M} ≈ (1/(2πi)² z^{N−1}) Σ_{k<K} γ_k (E++ + E−− − X+− − X−+) − (1/2πi z^{N−1}) Σ_{k<K} γ_k G+`.
///
/// The `G` sums are the residues picked up where the `E` integrals place the
/// inner pole on the other side of the contour than the re-expanded integral
/// does. Each `F^(2)` is computed to an absolute error near `2^abs_tol_log2`
/// after the prefactors.
pub fn level2_terms(z: &SurfacePoint, n: usize, m: usize, k: usize, abs_tol_log2: f64, prec: u32) -> Result<Level2Terms> {
    TruncationScheme::level2(n, m, k)?;
    let wp = prec + 16;
    let gam = coeffs::stirling_floats(k.max(1), wp);
    let up = singulant(1, true, wp);
    let down = singulant(1, false, wp);
    let up2 = singulant(2, true, wp);
    let down2 = singulant(2, false, wp);
    let p2 = prefactor(z, n, 2, wp);
    let ratio = Complex::new(Float::new(wp), pi(wp) * 2u32);
    let a = (n - m + 1) as f64;
    let pairs = [(&up, &up, 1.0), (&down, &down, 1.0), (&up, &down, -1.0), (&down, &up, -1.0)];
    let mut r = Complex::zero(wp);
    let mut rt_f2 = Complex::zero(wp);
    let mut r_f1 = Complex::zero(wp);
    let mut rt_f1 = Complex::zero(wp);
    let mut err = f64::NEG_INFINITY;
    for (j, g) in gam.iter().enumerate().take(k) {
        let b = (m - j) as f64;
        let scale = p2.log2_abs() + log2_abs(g) + lemma1_scale_log2(z, &[a, b], 2.0 * PI);
        let tol = (abs_tol_log2 - scale).clamp(-(prec as f64) + 16.0, -8.0);
        // Later terms are smaller and need fewer bits.
        let qp = ((32.0 - tol).ceil() as u32).clamp(64, wp);
        let opts = QuadOptions::new(qp, 1.0).with_tol_log2(tol);
        let mut f2sum = Complex::zero(wp);
        for (s1, s2, sign) in pairs {
            let spec = TerminantSpec::new(vec![Level::real(qp, a, s1.clone()), Level::real(qp, b, s2.clone())])?;
            let e = evaluate(z, &spec, &opts, Method::Auto)?;
            err = log2_add(err, e.err_log2 + log2_abs(g));
            f2sum += &e.value.with_prec(wp).scale_f64(sign);
        }
        let order = Complex::from_f64(wp, (n - j) as f64, 0.0);
        let gp = f1(z, &order, &up2, wp)?.scale(g);
        let gm = f1(z, &order, &down2, wp)?.scale(g);
        let t = f2sum.scale(g);
        if j % 2 == 0 {
            r += &t;
            r_f1 += &gm;
        } else {
            r -= &t;
            r_f1 -= &gm;
        }
        rt_f2 += &t;
        rt_f1 += &gp;
    }
    // (1/2πi z^{N−1}) = 2πi · (1/(2πi)² z^{N−1})
    let r = &r - &(&ratio * &r_f1);
    let rt = &rt_f2 - &(&ratio * &rt_f1);
    Ok(Level2Terms {
        r: (&p2 * &r).with_prec(prec),
        r_tilde: (&p2 * &rt).with_prec(prec),
        err_log2: err + p2.log2_abs(),
    })
}

/// `R_{N,M,K}(z)` or `R̃_{N,M,K}(z)` as the level-1 remainder minus the level-2 sums.
/// The quadrature target sits `2^{−40}` below `|R_{N,M}| |z|^{−K}`.
pub fn remainder_level2(z: &SurfacePoint, n: usize, m: usize, k: usize, expansion: Expansion, prec: u32) -> Result<RemainderReport> {
    let truncation = TruncationScheme::level2(n, m, k)?;
    let r1 = remainder_level1(z, n, m, expansion, prec)?;
    let expected = r1.remainder.log2_abs() - k as f64 * z.modulus().to_f64().log2();
    let t = level2_terms(z, n, m, k, expected - 40.0, prec)?;
    let l2 = match expansion {
        Expansion::GammaStar => t.r,
        Expansion::Reciprocal => t.r_tilde,
    };
    let remainder = &r1.remainder - &l2;
    check_cancellation(&remainder, r1.remainder.log2_abs().max(l2.log2_abs()), prec, "level-2 remainder")?;
    Ok(RemainderReport { level: 2, truncation, level2: Some(l2), remainder, ..r1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// `R_{N,M}(z) = S e^{4πiz}`.
    S2,
    /// `R̃_{N,M}(z) = −S̃ e^{4πiz}`.
    S2Tilde,
}

#[derive(Clone, Debug)]
pub struct MultiplierSample {
    pub theta: f64,
    pub s: Complex,
    pub kind: MultiplierKind,
    pub n: usize,
    pub m: usize,
    pub digits: u32,
}

/// Modified multiplier at one `z`, with `N = ⌊4π|z|⌋` and `M = ⌊2π|z|⌋`.
pub fn multiplier_at(z: &SurfacePoint, kind: MultiplierKind, digits: Option<u32>) -> Result<MultiplierSample> {
    let absz = z.modulus().to_f64();
    let scheme = TruncationScheme::optimal(absz, 1)?;
    let digits = digits.unwrap_or_else(|| required_digits(absz, &scheme).digits);
    let prec = digits_to_bits(digits);
    let expansion = match kind {
        MultiplierKind::S2 => Expansion::GammaStar,
        MultiplierKind::S2Tilde => Expansion::Reciprocal,
    };
    let rep = remainder_level1(z, scheme.n, scheme.m, expansion, prec)?;
    // e^{−4πiz}
    let e = z.to_complex(prec).scale(&(pi(prec) * 4u32)).mul_i();
    let mut s = &rep.remainder * &(-e).exp();
    if kind == MultiplierKind::S2Tilde {
        s = -s;
    }
    Ok(MultiplierSample { theta: z.angle().to_f64(), s, kind, n: scheme.n, m: scheme.m, digits })
}

/// Multipliers along `arg z ∈ thetas` at fixed `|z|`, ordered as given.
/// Samples are independent and computed in parallel.
pub fn stokes_multiplier_curve(absz: f64, kind: MultiplierKind, thetas: &[f64], digits: Option<u32>) -> Result<Vec<MultiplierSample>> {
    let digits = digits.unwrap_or_else(|| required_digits(absz, &TruncationScheme::optimal(absz, 1).unwrap_or(TruncationScheme { level: 1, n: 2, m: 1, k: 0 })).digits);
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(thetas.len().max(1));
    let chunk = thetas.len().div_ceil(threads).max(1);
    let results: Vec<Result<Vec<MultiplierSample>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = thetas
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&theta| {
                            let prec = digits_to_bits(digits) + 64;
                            let z = SurfacePoint::new(Float::with_val(prec, absz), Angle::radians(Float::with_val(prec, theta)))?;
                            multiplier_at(&z, kind, Some(digits))
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("multiplier worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(thetas.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// `θ_k = θ_min + k(θ_max − θ_min)/steps`, `k = 0..=steps`.
pub fn theta_grid(theta_min: f64, theta_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| theta_min + (theta_max - theta_min) * k as f64 / steps as f64).collect()
}

/// `(a)_k / k!`.
fn rising_over_factorial(a: &Rational, k: u32) -> Rational {
    let mut r = Rational::from(1);
    for j in 0..k {
        r *= Rational::from(a + j) / Rational::from(j + 1);
    }
    r
}

/// The discontinuous multipliers `(S^(k), S̃^(k))` at `θ = arg z`, `|θ| < π`.
pub fn discontinuous_multipliers(k: u32, theta: &Angle) -> Result<(Rational, Rational)> {
    if k == 0 {
        return Err(Error::Domain("multipliers are indexed from k = 1".into()));
    }
    let one = Rational::from(1);
    if theta.cmp_pi(&one) != Ordering::Less || theta.cmp_pi(&-one.clone()) != Ordering::Greater {
        return Err(Error::Domain("multipliers are defined for |arg z| < π".into()));
    }
    let half = Rational::from((1, 2));
    let above = theta.cmp_pi(&half);
    let below = theta.cmp_pi(&-half.clone());
    let on_line = above == Ordering::Equal || below == Ordering::Equal;
    let inside = above == Ordering::Less && below == Ordering::Greater;
    Ok(if inside {
        (Rational::new(), Rational::new())
    } else if on_line {
        let s = rising_over_factorial(&half, k);
        let st = if k == 1 { half } else { -rising_over_factorial(&-half, k) };
        (s, st)
    } else {
        (one.clone(), if k == 1 { one } else { Rational::new() })
    })
}

#[cfg(test)]
mod tests;
