//! Error-function descriptions of Stokes transitions: the transition variable
//! `c(φ)`, the complementary error function, Olver's uniform approximation of
//! `F^(1)`, the erfc-polynomial approximation of equal-singulant `F^(m)`, and
//! the level-1 and level-2 smoothing laws for the gamma function remainders.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::num::{pi, Complex};
use crate::reference::{series_terms, Expansion};
use crate::surface::SurfacePoint;
use crate::terminants::{self, Level, Method, TerminantSpec};
use crate::quad::QuadOptions;

/// `φ = arg(σz)` with its transition variable `c(φ)`.
#[derive(Clone, Debug)]
pub struct TransitionVariable {
    pub phi: f64,
    pub c: Complex,
    pub branch_ok: bool,
}

const STEP: f64 = 0.05;
const TRACK_PREC: u32 = 96;

thread_local! {
    static C_CACHE: RefCell<HashMap<(u64, u32), Complex>> = RefCell::new(HashMap::new());
}

/// `1 + i(φ−π) − e^{i(φ−π)}`, the right side of the defining equation for `c²/2`.
fn half_c_squared(phi: &Float) -> Complex {
    let prec = phi.prec();
    let h = Float::with_val(prec, phi - pi(prec));
    let e = Complex::new(Float::new(prec), h.clone()).exp();
    &Complex::new(Float::with_val(prec, 1), h) - &e
}

/// Newton on `c²/2 = g`: `c ← c/2 + g/c`.
fn newton(mut c: Complex, g: &Complex, prec: u32) -> Result<Complex> {
    let tol = -(prec as f64) + 4.0;
    for _ in 0..200 {
        let next = &c.scale_f64(0.5) + &(g / &c);
        let step = (&next - &c).log2_abs() - next.log2_abs();
        c = next;
        if step < tol {
            return Ok(c);
        }
    }
    Err(Error::Convergence("Newton iteration for c(φ) did not settle".into()))
}

/// `c(φ)` on the branch `c = −(φ−π) − (i/6)(φ−π)² + (1/36)(φ−π)³ + …`,
/// tracked from `φ = π` by continuation. Valid for `−3π < φ < 3π`.
pub fn c_of_phi(phi: f64, prec: u32) -> Result<TransitionVariable> {
    if !(phi.abs() < 3.0 * PI) {
        return Err(Error::Domain(format!("c(φ) is tracked on −3π < φ < 3π, got {phi}")));
    }
    let key = (phi.to_bits(), prec);
    if let Some(c) = C_CACHE.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(TransitionVariable { phi, c, branch_ok: true });
    }
    let h = phi - PI;
    if h == 0.0 {
        return Ok(TransitionVariable { phi, c: Complex::zero(prec), branch_ok: true });
    }
    let series = |h: f64, p: u32| {
        let hf = Float::with_val(p, h);
        let h2 = Float::with_val(p, &hf * &hf);
        let h3 = Float::with_val(p, &h2 * &hf);
        Complex::new(Float::with_val(p, -&hf) + h3 / 36u32, Float::with_val(p, -h2) / 6u32)
    };
    let seed = if h.abs() <= STEP {
        series(h, TRACK_PREC)
    } else {
        // March from π ± STEP in equal steps no longer than STEP.
        let start = STEP.copysign(h);
        let steps = ((h - start).abs() / STEP).ceil() as usize;
        let dh = (h - start) / steps as f64;
        let phi0 = Float::with_val(TRACK_PREC, PI + start);
        let mut c = newton(series(start, TRACK_PREC), &half_c_squared(&phi0), TRACK_PREC)?;
        for j in 1..=steps {
            let hj = start + dh * j as f64;
            let phij = Float::with_val(TRACK_PREC, PI + hj);
            // Predictor from dc/dφ = i(1 − e^{i(φ−π)})/c.
            let e = Complex::from_f64(TRACK_PREC, 0.0, hj - dh).exp();
            let slope = &(&Complex::one(TRACK_PREC) - &e).mul_i() / &c;
            let guess = &c + &slope.scale_f64(dh);
            let next = newton(guess, &half_c_squared(&phij), TRACK_PREC)?;
            if (&next - &c).abs().to_f64() > 10.0 * dh.abs() {
                return Err(Error::Branch(format!("c(φ) jumped between φ = {} and {}", PI + hj - dh, PI + hj)));
            }
            c = next;
        }
        c
    };
    let phif = Float::with_val(prec + 16, phi);
    let c = newton(seed.with_prec(prec + 16), &half_c_squared(&phif), prec + 16)?.with_prec(prec);
    C_CACHE.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() > 100_000 {
            m.clear();
        }
        m.insert(key, c.clone());
    });
    Ok(TransitionVariable { phi, c, branch_ok: true })
}

/// Residual of the defining equation, as log2 of its magnitude.
pub fn c_residual_log2(phi: f64, c: &Complex) -> f64 {
    let prec = c.prec();
    let g = half_c_squared(&Float::with_val(prec + 16, phi));
    (&c.with_prec(prec + 16).square().scale_f64(0.5) - &g).log2_abs()
}

/// Complementary error function of a complex argument.
pub fn erfc(w: &Complex, prec: u32) -> Complex {
    if w.im.is_zero() {
        return Complex::from_real(Float::with_val(prec, w.re.erfc_ref()));
    }
    if w.re.is_sign_negative() {
        let r = erfc(&-w.clone(), prec + 4);
        return (&Complex::from_real(Float::with_val(prec + 4, 2)) - &r).with_prec(prec);
    }
    let (re, im) = w.to_f64();
    let r = re.hypot(im);
    if r >= 2.0 && re >= 0.4 * r {
        if let Some(v) = erfc_cf(w, prec) {
            return v;
        }
    }
    erfc_series(w, prec)
}

/// Laplace continued fraction
/// `erfc w = (e^{−w²}/√π) · 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + …))))`, for `Re w > 0`.
fn erfc_cf(w: &Complex, prec: u32) -> Option<Complex> {
    let wp = prec + 16;
    let wc = w.with_prec(wp);
    let tiny = Complex::from_real(Float::with_val(wp, Float::i_exp(1, -(2 * wp as i32))));
    let fix = |v: Complex| if v.is_zero() { tiny.clone() } else { v };
    let one = Complex::one(wp);
    let eps = -(wp as f64) + 2.0;
    let mut f = fix(wc.clone());
    let mut c = f.clone();
    let mut d = Complex::zero(wp);
    for i in 1..=(40 * prec as usize) {
        let a = Float::with_val(wp, i) / 2u32;
        d = fix(&wc + &d.scale(&a)).recip();
        c = fix(&wc + &(&Complex::from_real(a) / &c));
        let delta = &c * &d;
        f = &f * &delta;
        if (&delta - &one).log2_abs() < eps {
            let sqrt_pi = Float::with_val(wp, pi(wp).sqrt());
            let e = (-wc.square()).exp();
            return Some((&e / &f.scale(&sqrt_pi)).with_prec(prec));
        }
    }
    None
}

/// `erfc w = 1 − (2/√π) Σ (−1)^n w^{2n+1}/(n!(2n+1))` with guard bits for the
/// cancellation against `e^{|w|²}`-sized terms and for a small result.
fn erfc_series(w: &Complex, prec: u32) -> Complex {
    let (re, im) = w.to_f64();
    let size = (re * re + im * im) * std::f64::consts::LOG2_E;
    let small = ((re * re - im * im) * std::f64::consts::LOG2_E).max(0.0);
    let wp = prec + (size + small) as u32 + 24;
    let wc = w.with_prec(wp);
    let w2 = -wc.square();
    let mut t = wc.clone();
    let mut sum = wc.clone();
    let mut n = 0u64;
    loop {
        n += 1;
        t = &(&t * &w2) / &Float::with_val(wp, n);
        let term = &t / &Float::with_val(wp, 2 * n + 1);
        sum += &term;
        if term.log2_abs() < sum.log2_abs() - wp as f64 - 2.0 && n as f64 > size {
            break;
        }
    }
    let k = Float::with_val(wp, 2) / Float::with_val(wp, pi(wp).sqrt());
    (&Complex::one(wp) - &sum.scale(&k)).with_prec(prec)
}

/// Which asymptotic form of `F^(1)` was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `(1/2) erfc(c(φ)√(|σz|/2))`, for `−π+δ ≤ φ ≤ 3π−δ`.
    Erfc,
    /// `−(1/2) erfc(conj(c(−φ))√(|σz|/2))` after the factor `e^{−2πiN}`, for `−3π+δ ≤ φ ≤ π−δ`.
    ErfcConjugate,
    /// `−i e^{(π−φ)iN}/(1 + e^{−φi}) · e^{−σz−|σz|}/√(2π|σz|)`, for `|φ| ≤ π−δ`.
    Exponential,
}

/// Width kept away from the ends of each sector.
pub const DELTA: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct OlverApprox {
    pub value: Complex,
    pub regime: Regime,
}

/// Default regime for `φ`: the exponential form on `|φ| ≤ π−δ`, where it has
/// relative accuracy, and the erfc forms across the Stokes lines `φ = ±π`.
pub fn default_regime(phi: f64) -> Result<Regime> {
    if phi.abs() <= PI - DELTA {
        Ok(Regime::Exponential)
    } else if phi > 0.0 && phi <= 3.0 * PI - DELTA {
        Ok(Regime::Erfc)
    } else if (-3.0 * PI + DELTA..0.0).contains(&phi) {
        Ok(Regime::ErfcConjugate)
    } else {
        Err(Error::Domain(format!("no uniform approximation at φ = {phi}")))
    }
}

fn regime_range(regime: Regime) -> (f64, f64) {
    match regime {
        Regime::Erfc => (-PI + DELTA, 3.0 * PI - DELTA),
        Regime::ErfcConjugate => (-3.0 * PI + DELTA, PI - DELTA),
        Regime::Exponential => (-PI + DELTA, PI - DELTA),
    }
}

/// Olver's approximation of `e^{−σz} F^(1)(z; N−n, σ)/(2πi z^{N−1−n})`
/// (times `e^{−2πiN}` in the conjugate regime). `n` does not enter the
/// leading term.
pub fn olver_f1_approx(z: &SurfacePoint, n_order: &Float, sigma: &SurfacePoint, regime: Option<Regime>, prec: u32) -> Result<OlverApprox> {
    let w = sigma.mul(z);
    let phi = w.angle().to_f64();
    let regime = match regime {
        Some(r) => r,
        None => default_regime(phi)?,
    };
    let (lo, hi) = regime_range(regime);
    if phi < lo - 1e-12 || phi > hi + 1e-12 {
        return Err(Error::Domain(format!("φ = {phi} lies outside the {regime:?} sector")));
    }
    let wp = prec + 16;
    let s = w.modulus().clone();
    let root = Float::with_val(wp, &s / 2u32).sqrt();
    let value = match regime {
        Regime::Erfc => {
            let c = c_of_phi(phi, wp)?.c;
            erfc(&c.scale(&root), wp).scale_f64(0.5)
        }
        Regime::ErfcConjugate => {
            let c = c_of_phi(-phi, wp)?.c.conj();
            -erfc(&c.scale(&root), wp).scale_f64(0.5)
        }
        Regime::Exponential => {
            let nn = n_order.clone();
            let phase = Complex::new(Float::new(wp), Float::with_val(wp, PI - phi) * &nn).exp();
            let den = &Complex::one(wp) + &Complex::from_f64(wp, 0.0, -phi).exp();
            let sz = w.to_complex(wp);
            let tail = (&(-sz) - &Complex::from_real(s.clone())).exp();
            let norm = Float::with_val(wp, Float::with_val(wp, &s * pi(wp)) * 2u32).sqrt();
            let v = &(&phase / &den).mul_i() * &tail;
            -(v.scale(&norm.recip()))
        }
    };
    Ok(OlverApprox { value: value.with_prec(prec), regime })
}

/// `e^{−mσz} F^(m)(z; N,…,N,N−n; σ,…,σ)/((2πi)^m z^{mN−m−n})`, times
/// `e^{−2πimN}` when `conjugate` is set.
pub fn normalized_fm(z: &SurfacePoint, n_order: &Float, sigma: &SurfacePoint, n: u32, m: usize, conjugate: bool, opts: &QuadOptions) -> Result<Complex> {
    let wp = opts.prec + 16;
    let mut levels: Vec<Level> = (0..m).map(|_| Level::new(Complex::from_real(n_order.clone()), sigma.clone())).collect();
    if let Some(last) = levels.last_mut() {
        last.order.re -= n;
    }
    let spec = TerminantSpec::new(levels)?;
    let f = terminants::evaluate(z, &spec, &opts.with_prec(wp), Method::Auto)?.value;
    let mf = Float::with_val(wp, m);
    let sz = sigma.mul(z).to_complex(wp);
    let mut power = Complex::from_real(Float::with_val(wp, n_order * &mf));
    power.re -= m;
    power.re -= n;
    let zp = z.power(&power.with_prec(wp));
    let tpi = Complex::new(Float::new(wp), pi(wp) * 2u32);
    let mut den = &tpi.pow_u(m as u32) * &zp;
    den = &den * &sz.scale(&mf).exp();
    let mut v = &f / &den;
    if conjugate {
        let ph = Float::with_val(wp, n_order * &mf) * pi(wp) * 2u32;
        v = &v * &Complex::new(Float::new(wp), -ph).exp();
    }
    Ok(v.with_prec(opts.prec))
}

/// A partition of `m` by multiplicities: `Σ j·k_j = m`, `k[j−1] = k_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMultiplicity {
    pub m: usize,
    pub k: Vec<u32>,
}

/// All partitions of `m`, largest part first.
pub fn partitions(m: usize) -> Vec<PartitionMultiplicity> {
    fn go(rest: usize, max_part: usize, k: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(k.clone());
            return;
        }
        for j in (1..=max_part.min(rest)).rev() {
            k[j - 1] += 1;
            go(rest - j, j, k, out);
            k[j - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut vec![0; m], &mut out);
    out.into_iter().map(|k| PartitionMultiplicity { m, k }).collect()
}

/// `Π_j s^{k_j}/((2j)^{k_j} k_j!)` with `s = ±1`.
pub fn partition_coefficient(p: &PartitionMultiplicity, conjugate: bool) -> Rational {
    let mut c = Rational::from(1);
    for (idx, &kj) in p.k.iter().enumerate() {
        let j = idx as u32 + 1;
        let den = Integer::from(Integer::u_pow_u(2 * j, kj)) * Integer::from(Integer::factorial(kj));
        c /= Rational::from(den);
        if conjugate && kj % 2 == 1 {
            c = -c;
        }
    }
    c
}

/// Which form of the erfc-polynomial approximation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Arguments `c(φ)√(j|σz|/2)`, for `−π+δ ≤ φ ≤ 3π−δ`.
    Principal,
    /// Signed coefficients and arguments `conj(c(−φ))√(j|σz|/2)`, for the normalization with `e^{−2πimN}`.
    Conjugate,
}

#[derive(Clone, Debug)]
pub struct ErfcPolyTerm {
    pub partition: PartitionMultiplicity,
    pub coefficient: Rational,
    pub value: Complex,
}

#[derive(Clone, Debug)]
pub struct ErfcPolyApprox {
    pub m: usize,
    /// `N − |σz|`.
    pub rho: f64,
    pub variant: Variant,
    pub terms: Vec<ErfcPolyTerm>,
    pub value: Complex,
}

/// `Σ_{π(m)} Π_j (±1)^{k_j}/((2j)^{k_j} k_j!) erfc^{k_j}(c·√(j|σz|/2))`.
pub fn theorem_approx(z: &SurfacePoint, n_order: f64, sigma: &SurfacePoint, m: usize, variant: Variant, prec: u32) -> Result<ErfcPolyApprox> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let wp = prec + 16;
    let w = sigma.mul(z);
    let phi = w.angle().to_f64();
    let s = w.modulus().clone();
    let c = match variant {
        Variant::Principal => c_of_phi(phi, wp)?.c,
        Variant::Conjugate => c_of_phi(-phi, wp)?.c.conj(),
    };
    let erfcs: Vec<Complex> = (1..=m)
        .map(|j| {
            let root = Float::with_val(wp, Float::with_val(wp, &s * j as u32) / 2u32).sqrt();
            erfc(&c.scale(&root), wp)
        })
        .collect();
    let mut total = Complex::zero(wp);
    let mut terms = Vec::new();
    for p in partitions(m) {
        let coefficient = partition_coefficient(&p, variant == Variant::Conjugate);
        let mut v = Complex::from_real(Float::with_val(wp, &coefficient));
        for (idx, &kj) in p.k.iter().enumerate() {
            if kj > 0 {
                v = &v * &erfcs[idx].pow_u(kj);
            }
        }
        total += &v;
        terms.push(ErfcPolyTerm { partition: p, coefficient, value: v.with_prec(prec) });
    }
    Ok(ErfcPolyApprox { m, rho: n_order - s.to_f64(), variant, terms, value: total.with_prec(prec) })
}

/// `(1/2) erfc((π/2 − θ)√(π|z|))`, Berry's multiplier for the `e^{2πiz}` terms.
pub fn berry_factor(theta: f64, absz: f64, prec: u32) -> Float {
    let x = Float::with_val(prec, (PI / 2.0 - theta) * (PI * absz).sqrt());
    Float::with_val(prec, x.erfc_ref()) / 2u32
}

/// `(1/4) erfc(a√2) ± (1/8) erfc²(a)` with `a = (π/2 − θ)√(π|z|)`; `+` for
/// `R_{N,M}`, `−` for `R̃_{N,M}`.
pub fn level2_factors(theta: f64, absz: f64, prec: u32) -> (Float, Float) {
    let a = Float::with_val(prec, (PI / 2.0 - theta) * (PI * absz).sqrt());
    let a2 = Float::with_val(prec, &a * Float::with_val(prec, 2).sqrt());
    let first = Float::with_val(prec, a2.erfc_ref()) / 4u32;
    let e = Float::with_val(prec, a.erfc_ref());
    let second = Float::with_val(prec, &e * &e) / 8u32;
    (Float::with_val(prec, &first + &second), Float::with_val(prec, &first - &second))
}

fn exp_two_pi_i(z: &SurfacePoint, k: u32, prec: u32) -> Complex {
    z.to_complex(prec).scale(&(pi(prec) * (2 * k))).mul_i().exp()
}

fn partial(z: &SurfacePoint, terms: usize, expansion: Expansion, prec: u32) -> Complex {
    series_terms(z, terms, expansion, prec).iter().fold(Complex::zero(prec), |a, t| &a + t)
}

/// Approximations of `R_N(z)` and `R̃_N(z)` near `arg z = π/2`:
/// `±e^{2πiz} Σ_{m<M} (∓1)^m γ_m z^{−m} · (1/2) erfc((π/2 − θ)√(π|z|))`.
pub fn berry_smoothing_level1(z: &SurfacePoint, m_terms: usize, prec: u32) -> (Complex, Complex) {
    let theta = z.angle().to_f64();
    let f = berry_factor(theta, z.modulus().to_f64(), prec);
    let e = exp_two_pi_i(z, 1, prec);
    let r = &e * &partial(z, m_terms, Expansion::GammaStar, prec).scale(&f);
    let rt = -(&e * &partial(z, m_terms, Expansion::Reciprocal, prec).scale(&f));
    (r, rt)
}

/// Approximations of `R_{N,M}(z)` and `R̃_{N,M}(z)` near `arg z = π/2`, with
/// the factors of [`level2_factors`] and the prefactor `e^{4πiz}`.
pub fn level2_smoothing(z: &SurfacePoint, k_terms: usize, prec: u32) -> (Complex, Complex) {
    let theta = z.angle().to_f64();
    let (fr, ft) = level2_factors(theta, z.modulus().to_f64(), prec);
    let e = exp_two_pi_i(z, 2, prec);
    let r = &e * &partial(z, k_terms, Expansion::GammaStar, prec).scale(&fr);
    let rt = -(&e * &partial(z, k_terms, Expansion::Reciprocal, prec).scale(&ft));
    (r, rt)
}
