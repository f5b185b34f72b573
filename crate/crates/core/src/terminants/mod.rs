//! Hyperterminants `F^(m)`.
//!
//! `F^(1)` has a closed form through the incomplete gamma function. General
//! `F^(m)` are nested ray integrals whose inner levels are evaluated by this
//! module recursively. Rays are rotated away from the pole at `t_1 = z`
//! (the integrand is analytic in the swept sector), and the connection
//! formula carries the argument across sheets.

mod incgamma;

use rug::Float;

pub use incgamma::{continued_fraction, i_integral, i_series};

use crate::error::{Error, Result};
use crate::num::{pi, Complex};
use crate::quad::{half_line, log2_add, Estimate, QuadOptions};
use crate::reference::gamma_fn;
use crate::surface::{Angle, SurfacePoint};

use std::cell::RefCell;
use std::collections::HashMap;

/// Ray weights `e^{σt} t^{N−1} F^(m−1)(t; tail) dt/ds` keyed by spec, ray and
/// node. Inner levels of a nested integral revisit the same nodes for every
/// outer node; only the factor `1/(z − t)` changes.
type WeightKey = (String, u64, u64, u32, u64, bool);

const WEIGHT_CACHE_LIMIT: usize = 400_000;

thread_local! {
    static WEIGHTS: RefCell<HashMap<WeightKey, Complex>> = RefCell::new(HashMap::new());
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub order: Complex,
    pub singulant: SurfacePoint,
}

impl Level {
    pub fn new(order: Complex, singulant: SurfacePoint) -> Self {
        Level { order, singulant }
    }

    pub fn real(prec: u32, order: f64, singulant: SurfacePoint) -> Self {
        Level { order: Complex::from_f64(prec, order, 0.0), singulant }
    }
}

/// Ordered `(N_k, σ_k)` pairs defining `F^(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminantSpec {
    levels: Vec<Level>,
}

impl TerminantSpec {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        for (k, l) in levels.iter().enumerate() {
            if l.order.re <= 1 {
                return Err(Error::Domain(format!("order {} has real part ≤ 1", k + 1)));
            }
        }
        Ok(TerminantSpec { levels })
    }

    /// `m` copies of `(N, σ)`.
    pub fn equal(n: &Complex, sigma: &SurfacePoint, m: usize) -> Result<Self> {
        TerminantSpec::new(vec![Level::new(n.clone(), sigma.clone()); m])
    }

    pub fn empty() -> Self {
        TerminantSpec { levels: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn first(&self) -> &Level {
        &self.levels[0]
    }

    pub fn tail(&self) -> TerminantSpec {
        TerminantSpec { levels: self.levels[1..].to_vec() }
    }

    /// Whether `arg σ_k ≡ arg σ_{k+1} (mod 2π)`, for each adjacent pair.
    pub fn coincident(&self) -> Vec<bool> {
        self.levels
            .windows(2)
            .map(|p| {
                let d = p[0].singulant.angle().sub(p[1].singulant.angle());
                let turns = d.to_f64() / (2.0 * std::f64::consts::PI);
                (turns - turns.round()).abs() < 1e-12
            })
            .collect()
    }

    /// `(N, σ)` when every level is identical, the case of the Bell form.
    pub fn bell_form(&self) -> Option<(&Complex, &SurfacePoint)> {
        let f = self.levels.first()?;
        let same = self.levels.iter().all(|l| {
            l.order == f.order && l.singulant.modulus() == f.singulant.modulus() && l.singulant.angle() == f.singulant.angle()
        });
        same.then_some((&f.order, &f.singulant))
    }

    /// `Some(∓1)` for a pair `(σ, σe^{∓πi})` of equal modulus.
    pub fn mixed_turn(&self) -> Option<i32> {
        if self.m() != 2 || self.levels[0].singulant.modulus() != self.levels[1].singulant.modulus() {
            return None;
        }
        let d = self.levels[1].singulant.angle().sub(self.levels[0].singulant.angle());
        let q = d.pi_multiple();
        if !d.offset().is_zero() {
            return None;
        }
        if *q == rug::Rational::from(-1) {
            Some(-1)
        } else if *q == rug::Rational::from(1) {
            Some(1)
        } else {
            None
        }
    }

    fn total_order(&self) -> f64 {
        self.levels.iter().map(|l| l.order.re.to_f64()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Nested ray quadrature throughout.
    Quadrature,
    /// Bell form when every level is identical, the reduced single integral
    /// for mixed pairs `(σ, σe^{∓πi})`, quadrature otherwise.
    Auto,
}

fn two_pi_i(prec: u32) -> Complex {
    Complex::new(Float::new(prec), pi(prec) * 2u32)
}

/// `e^{σz} z^{N−1}` with `z` on its sheet.
fn exp_power(sigma: &SurfacePoint, z: &SurfacePoint, n: &Complex, prec: u32) -> Complex {
    let sz = sigma.mul(z).to_complex(prec);
    let mut nm1 = n.with_prec(prec);
    nm1.re -= 1;
    (&sz + &(&nm1 * &z.ln(prec))).exp()
}

/// `F^(1)(z; N, σ) = e^{πiN} σ^{1−N} I(N, σz)`, after reducing `arg(σz)`
/// into `[−π, π]` with the connection formula.
pub fn f1(z: &SurfacePoint, n: &Complex, sigma: &SurfacePoint, prec: u32) -> Result<Complex> {
    if n.re <= 1 {
        return Err(Error::Domain("F1 needs Re N > 1".into()));
    }
    let mut guard = 16;
    loop {
        let wp = prec + guard;
        let (v, loss) = f1_reduced(z, n, sigma, wp)?;
        if loss + 8.0 < guard as f64 || guard > 4 * prec {
            return Ok(v.with_prec(prec));
        }
        guard = (loss + 24.0).ceil() as u32;
    }
}

fn f1_reduced(z: &SurfacePoint, n: &Complex, sigma: &SurfacePoint, wp: u32) -> Result<(Complex, f64)> {
    let one = rug::Rational::from(1);
    let minus_one = rug::Rational::from(-1);
    let mut z = z.clone();
    let mut acc = Complex::zero(wp);
    let mut scale = f64::NEG_INFINITY;
    loop {
        let w = sigma.mul(&z);
        if w.angle().cmp_pi(&one) == std::cmp::Ordering::Greater {
            // F(z) = F(z e^{−2πi}) + 2πi e^{σz} z^{N−1}
            let c = &two_pi_i(wp) * &exp_power(sigma, &z, n, wp);
            scale = scale.max(c.log2_abs());
            acc += &c;
            z = z.rotate_pi(-2);
        } else if w.angle().cmp_pi(&minus_one) == std::cmp::Ordering::Less {
            // F(z) = F(z e^{2πi}) − 2πi e^{σz} (z e^{2πi})^{N−1}
            let z2 = z.rotate_pi(2);
            let c = &two_pi_i(wp) * &exp_power(sigma, &z2, n, wp);
            scale = scale.max(c.log2_abs());
            acc -= &c;
            z = z2;
        } else {
            break;
        }
    }
    let w = sigma.mul(&z);
    let i = i_integral(n, &w, wp)?;
    let nn = n.with_prec(wp);
    let front = nn.scale(&pi(wp)).mul_i().exp();
    let one_minus_n = &Complex::one(wp) - &nn;
    let base = &(&front * &sigma.power(&one_minus_n)) * &i;
    scale = scale.max(base.log2_abs());
    let v = &acc + &base;
    Ok((v.clone(), (scale - v.log2_abs()).max(0.0)))
}

/// Complete Bell polynomial by `Y_m = (1/m) Σ_k k y_k Y_{m−k}`.
pub fn bell_complete(y: &[Complex], prec: u32) -> Complex {
    bell_with_loss(y, prec).0
}

/// Bell value with the bits lost to cancellation in the recurrence.
fn bell_with_loss(y: &[Complex], prec: u32) -> (Complex, f64) {
    let m = y.len();
    let mut ys = vec![Complex::one(prec)];
    let mut loss: f64 = 0.0;
    for j in 1..=m {
        let mut acc = Complex::zero(prec);
        let mut big = f64::NEG_INFINITY;
        for k in 1..=j {
            let t = (&y[k - 1] * &ys[j - k]).scale(&Float::with_val(prec, k));
            big = big.max(t.log2_abs());
            acc += &t;
        }
        if !acc.is_zero() {
            loss = loss.max(big - acc.log2_abs());
        }
        ys.push(&acc / &Float::with_val(prec, j));
    }
    (ys.pop().expect("nonempty"), loss)
}

/// `F^(m)(z; N, σ, …, N, σ) = Y_m(F^(1)(z; N, σ), …, ((2πi)^{m−1}/m) F^(1)(z; mN−m+1, mσ))`.
pub fn f_bell(z: &SurfacePoint, n: &Complex, sigma: &SurfacePoint, m: usize, prec: u32) -> Result<Complex> {
    if n.re <= 1 {
        return Err(Error::Domain("Bell form needs Re N > 1".into()));
    }
    let mut guard = 16;
    loop {
        let wp = prec + guard;
        let tpi = two_pi_i(wp);
        let mut y = Vec::with_capacity(m);
        let mut p = Complex::one(wp);
        for k in 1..=m {
            let kf = Float::with_val(wp, k);
            let mut order = n.with_prec(wp).scale(&kf);
            order.re -= k - 1;
            let fk = f1(z, &order, &sigma.scale(&kf), wp)?;
            y.push(&(&p * &fk) / &kf);
            p = &p * &tpi;
        }
        let (v, loss) = bell_with_loss(&y, wp);
        if loss + 8.0 < guard as f64 || guard > 4 * prec {
            return Ok(v.with_prec(prec));
        }
        guard = (loss + 24.0).ceil() as u32;
    }
}

/// Ray rotation limit for a spec: keeps the growth `(1/cos β)^{ΣN}` below `2^40`.
fn beta_max(spec: &TerminantSpec) -> f64 {
    let total = spec.total_order().max(1.0);
    0.7f64.min((-40.0 / total).exp2().acos())
}

/// `F^(m)(z; spec)` on any sheet.
pub fn evaluate(z: &SurfacePoint, spec: &TerminantSpec, opts: &QuadOptions, method: Method) -> Result<Estimate> {
    match spec.m() {
        0 => Ok(Estimate::exact(Complex::one(opts.prec))),
        1 => {
            let l = spec.first();
            Ok(Estimate::exact(f1(z, &l.order, &l.singulant, opts.prec)?))
        }
        m => {
            if method == Method::Auto {
                if let Some((n, sigma)) = spec.bell_form() {
                    return Ok(Estimate::exact(f_bell(z, n, sigma, m, opts.prec)?));
                }
            }
            continued(z, spec, opts, method)
        }
    }
}

fn continued(z: &SurfacePoint, spec: &TerminantSpec, opts: &QuadOptions, method: Method) -> Result<Estimate> {
    let l = spec.first();
    let phi = l.singulant.angle().to_f64() + z.angle().to_f64();
    let bmax = beta_max(spec);
    let mixed = if method == Method::Auto { spec.mixed_turn() } else { None };
    if let Some(turn) = mixed {
        if phi.abs() <= std::f64::consts::PI {
            let t = spec.levels()[1].order.clone();
            return f2_mixed_reduced(z, &l.order, &t, &l.singulant, turn, opts);
        }
    }
    let lim = if mixed.is_some() { std::f64::consts::PI } else { std::f64::consts::PI + 0.5 * bmax };
    if phi.abs() <= lim {
        let beta = phi.clamp(-bmax, bmax);
        return ray_integral(z, spec, beta, opts, method);
    }
    let wp = opts.prec;
    let (other, zc, sign) = if phi > 0.0 { (z.rotate_pi(-2), z.clone(), 1) } else { (z.rotate_pi(2), z.rotate_pi(2), -1) };
    let a = continued(&other, spec, opts, method)?;
    let tail = evaluate(&zc, &spec.tail(), &opts.with_tol_log2(opts.tol_log2 - 2.0), method)?;
    let front = &two_pi_i(wp) * &exp_power(&l.singulant, &zc, &l.order, wp);
    let c = &front * &tail.value;
    let value = if sign > 0 { &a.value + &c } else { &a.value - &c };
    let err = log2_add(a.err_log2, front.log2_abs() + tail.err_log2);
    Ok(Estimate { value, err_log2: err })
}

/// Whole turns taken off `t_1` so that `σ_2 t_1` sits in the principal range of
/// the inner integral. Coincident neighbours keep `arg(σ_2 t_1) = π` and rely on
/// the ray rotation instead.
fn inner_turns(spec: &TerminantSpec) -> i64 {
    if spec.m() < 2 {
        return 0;
    }
    let l = spec.levels();
    let d = l[1].singulant.angle().sub(l[0].singulant.angle()).to_f64();
    let tau = 2.0 * std::f64::consts::PI;
    if spec.coincident()[0] {
        (d / tau).round() as i64
    } else {
        ((std::f64::consts::PI + d) / tau).round() as i64
    }
}

/// Outer integral along `arg t_1 = π − arg σ_1 + β`.
fn ray_integral(z: &SurfacePoint, spec: &TerminantSpec, beta: f64, opts: &QuadOptions, method: Method) -> Result<Estimate> {
    let l = spec.first();
    let amplification = spec.total_order() * (1.0 / beta.cos()).log2();
    let wp = opts.prec + amplification.ceil() as u32 + 8;
    let alpha = Angle::pi_frac(1, 1).sub(l.singulant.angle()).add(&Angle::radians(Float::with_val(wp, beta)));
    let (c, s) = alpha.cos_sin(wp);
    let dir = Complex::new(c, s);
    let alpha_val = alpha.value(wp);
    let inner_alpha = alpha.sub(&Angle::pi_times(rug::Rational::from(2 * inner_turns(spec))));
    let sigma = l.singulant.to_complex(wp);
    let zc = z.to_complex(wp);
    let mut nm1 = l.order.with_prec(wp);
    nm1.re -= 1;
    let tail = spec.tail();
    let inner = opts.with_tol_log2(opts.tol_log2 - 3.0).with_prec(wp);
    let s_peak = (l.order.re.to_f64() - 1.0).max(0.5) / (l.singulant.modulus().to_f64() * beta.cos());
    let outer = QuadOptions { prec: wp, ..*opts };
    let fingerprint = format!("{:?}", spec.levels());
    let r = half_line(
        |s: &Float| {
            let t = dir.scale(s);
            let key = (
                fingerprint.clone(),
                beta.to_bits(),
                s.to_f64().to_bits(),
                wp,
                inner.tol_log2.to_bits(),
                method == Method::Auto,
            );
            let cached = if tail.m() > 0 { WEIGHTS.with(|c| c.borrow().get(&key).cloned()) } else { None };
            let weight = match cached {
                Some(w) => w,
                None => {
                    let log_s = Complex::new(Float::with_val(wp, s.ln_ref()), alpha_val.clone());
                    let mut w = &(&(&sigma * &t) + &(&nm1 * &log_s)).exp() * &dir;
                    if tail.m() > 0 {
                        let tp = SurfacePoint::new(s.clone(), inner_alpha.clone())?;
                        w = &w * &evaluate(&tp, &tail, &inner, method)?.value;
                        WEIGHTS.with(|c| {
                            let mut c = c.borrow_mut();
                            if c.len() >= WEIGHT_CACHE_LIMIT {
                                c.clear();
                            }
                            c.insert(key, w.clone());
                        });
                    }
                    w
                }
            };
            Ok(&weight / &(&zc - &t))
        },
        s_peak,
        &outer,
    )?;
    Ok(Estimate { value: r.value.with_prec(opts.prec), err_log2: r.err_log2 })
}

/// Direct nested quadrature; requires `|arg(σ_1 z)| < π`.
pub fn fm_quadrature(z: &SurfacePoint, spec: &TerminantSpec, opts: &QuadOptions) -> Result<Estimate> {
    if spec.m() == 0 {
        return Ok(Estimate::exact(Complex::one(opts.prec)));
    }
    let phi = spec.first().singulant.mul(z);
    let one = rug::Rational::from(1);
    let a = phi.angle();
    if a.cmp_pi(&one) != std::cmp::Ordering::Less || a.cmp_pi(&-one) != std::cmp::Ordering::Greater {
        return Err(Error::Domain("direct quadrature needs |arg(σ_1 z)| < π; continue with the connection formula".into()));
    }
    let phi = a.to_f64();
    let beta = phi.clamp(-beta_max(spec), beta_max(spec));
    ray_integral(z, spec, beta, opts, Method::Quadrature)
}

/// `F^(m)(z e^{−2πi}) − F^(m)(z) + 2πi e^{σ_1 z} z^{N_1−1} F^(m−1)(z; tail)`, ideally zero.
pub fn connection(z: &SurfacePoint, spec: &TerminantSpec, opts: &QuadOptions, method: Method) -> Result<Estimate> {
    if spec.m() == 0 {
        return Err(Error::Domain("connection formula needs m ≥ 1".into()));
    }
    let l = spec.first();
    let a = evaluate(&z.rotate_pi(-2), spec, opts, method)?;
    let b = evaluate(z, spec, opts, method)?;
    let t = evaluate(z, &spec.tail(), opts, method)?;
    let front = &two_pi_i(opts.prec) * &exp_power(&l.singulant, z, &l.order, opts.prec);
    let value = &(&a.value - &b.value) + &(&front * &t.value);
    let err = log2_add(log2_add(a.err_log2, b.err_log2), front.log2_abs() + t.err_log2);
    Ok(Estimate { value, err_log2: err })
}

/// `F^(m)(0; spec)`. For `m ≥ 2`,
/// `e^{πiN_1} σ_1^{1−N_1} ∫_0^∞ e^{−t} t^{N_1−2} F^(m−1)(t e^{πi}/σ_1; tail) dt`.
pub fn f_origin(spec: &TerminantSpec, opts: &QuadOptions, method: Method) -> Result<Estimate> {
    let m = spec.m();
    if m == 0 {
        return Ok(Estimate::exact(Complex::one(opts.prec)));
    }
    for (k, l) in spec.levels().iter().enumerate() {
        let bound = if k == 0 { 2 } else { 1 };
        if !l.order.im.is_zero() || l.order.re <= bound {
            return Err(Error::Domain(format!("origin value needs real N_1 > 2 and N_k > 1 (level {})", k + 1)));
        }
    }
    let wp = opts.prec + 16;
    let l = spec.first();
    let n1 = l.order.with_prec(wp);
    let front = &n1.scale(&pi(wp)).mul_i().exp() * &l.singulant.power(&(&Complex::one(wp) - &n1));
    if m == 1 {
        let mut nm1 = n1.clone();
        nm1.re -= 1;
        let v = &front * &gamma_fn(&nm1, wp)?;
        return Ok(Estimate::exact(v.with_prec(opts.prec)));
    }
    let tail = spec.tail();
    let inner_angle = Angle::pi_frac(1, 1)
        .sub(l.singulant.angle())
        .sub(&Angle::pi_times(rug::Rational::from(2 * inner_turns(spec))));
    let inv_mod = Float::with_val(wp, l.singulant.modulus().recip_ref());
    let nm2 = n1.re.clone() - 2u32;
    let inner = opts.with_tol_log2(opts.tol_log2 - 3.0).with_prec(wp);
    let r = half_line(
        |t: &Float| {
            let w: Float = Float::with_val(wp, t.ln_ref()) * &nm2 - t;
            let tp = SurfacePoint::new(Float::with_val(wp, t * &inv_mod), inner_angle.clone())?;
            let g = evaluate(&tp, &tail, &inner, method)?;
            Ok(g.value.scale(&w.exp()))
        },
        nm2.to_f64().max(0.5),
        &QuadOptions { prec: wp, ..*opts },
    )?;
    let value = &front * &r.value;
    let err = front.log2_abs() + r.err_log2;
    Ok(Estimate { value: value.with_prec(opts.prec), err_log2: err })
}

/// Mixed pair `F^(2)(z; A, σ; B, σe^{∓πi})` through the substitution
/// `t_2 = u t_1 e^{±πi}`, which leaves the single integral
/// `e^{±πiB} ∫_0^∞ u^{B−1} (1+u)^{1−A−B} F^(1)((1+u)z; A+B−1, σ) du`.
/// `turn` is `−1` for `σe^{−πi}` and `+1` for `σe^{+πi}`.
pub fn f2_mixed_reduced(z: &SurfacePoint, a: &Complex, b: &Complex, sigma: &SurfacePoint, turn: i32, opts: &QuadOptions) -> Result<Estimate> {
    if turn != 1 && turn != -1 {
        return Err(Error::Domain("turn must be ±1".into()));
    }
    if a.re <= 1 || b.re <= 1 {
        return Err(Error::Domain("orders need real part > 1".into()));
    }
    let phi = sigma.mul(z).angle().to_f64();
    if phi.abs() > std::f64::consts::PI + 1e-12 {
        return Err(Error::Domain("reduced form needs |arg(σz)| ≤ π".into()));
    }
    let wp = opts.prec + 16;
    let aa = a.with_prec(wp);
    let bb = b.with_prec(wp);
    let mut order = &aa + &bb;
    order.re -= 1;
    let mut bm1 = bb.clone();
    bm1.re -= 1;
    let tail_power = -order.clone();
    let peak = (b.re.to_f64() - 1.0).max(0.1) / (a.re.to_f64() + 1.0);
    let inner = QuadOptions { prec: wp, ..*opts };
    let r = half_line(
        |u: &Float| {
            let up = SurfacePoint::new(u.clone(), Angle::zero())?;
            let onep = SurfacePoint::new(Float::with_val(wp, u + 1u32), Angle::zero())?;
            let w = &up.power(&bm1) * &onep.power(&tail_power);
            let zz = z.scale(onep.modulus());
            Ok(&w * &f1(&zz, &order, sigma, wp)?)
        },
        peak,
        &inner,
    )?;
    let front = bb.scale(&pi(wp)).mul_i().scale_f64(-(turn as f64)).exp();
    Ok(Estimate { value: (&front * &r.value).with_prec(opts.prec), err_log2: r.err_log2 })
}

/// Orders list `(N+1, N, …, N, N−n)` of length `j ≥ 2`, or `(N−n+1)` for `j = 1`.
fn shifted_orders(n: f64, shift: u32, j: usize) -> Vec<f64> {
    if j == 1 {
        return vec![n - shift as f64 + 1.0];
    }
    let mut v = vec![n + 1.0];
    v.extend(std::iter::repeat_n(n, j - 2));
    v.push(n - shift as f64);
    v
}

fn spec_of(orders: &[f64], sigma: &SurfacePoint, prec: u32) -> Result<TerminantSpec> {
    TerminantSpec::new(orders.iter().map(|&o| Level::real(prec, o, sigma.clone())).collect())
}

/// Residual of the order-shift identity
/// `z F^(m)(z; N,…,N,N−n) − F^(m)(z; N,…,N,N−n+1)
///  + Σ_{k<m} F^(k)(z; N,…,N) F^(m−k)(0; N+1,N,…,N,N−n)`,
/// where a single-level origin factor carries order `N−n+1`.
pub fn recurrence_shift(z: &SurfacePoint, n: f64, sigma: &SurfacePoint, m: usize, shift: u32, opts: &QuadOptions) -> Result<Estimate> {
    if m == 0 {
        return Err(Error::Domain("recurrence needs m ≥ 1".into()));
    }
    let wp = opts.prec;
    let mut lower = vec![n; m];
    lower[m - 1] = n - shift as f64;
    let mut upper = lower.clone();
    upper[m - 1] += 1.0;
    let a = evaluate(z, &spec_of(&lower, sigma, wp)?, opts, Method::Auto)?;
    let b = evaluate(z, &spec_of(&upper, sigma, wp)?, opts, Method::Auto)?;
    let zc = z.to_complex(wp);
    let mut value = &(&zc * &a.value) - &b.value;
    let mut err = log2_add(a.err_log2 + zc.log2_abs(), b.err_log2);
    for k in 0..m {
        let fz = evaluate(z, &spec_of(&vec![n; k], sigma, wp)?, opts, Method::Auto)?;
        let f0 = f_origin(&spec_of(&shifted_orders(n, shift, m - k), sigma, wp)?, opts, Method::Auto)?;
        value += &(&fz.value * &f0.value);
        err = log2_add(err, log2_add(fz.err_log2 + f0.value.log2_abs(), f0.err_log2 + fz.value.log2_abs()));
    }
    Ok(Estimate { value, err_log2: err })
}

/// Scale of the bound `(1/|z|) √N_m Γ(N_m)/|σ|^{N_m} Π_{k<m} √Σ_k Γ(N_k−1)/|σ|^{N_k−1}`
/// for equal singulant moduli, with `Σ_k = N_k + … + N_m`. Returned as log2.
pub fn lemma1_scale_log2(z: &SurfacePoint, orders: &[f64], sigma_mod: f64) -> f64 {
    let m = orders.len();
    let lg = |x: f64| -> f64 { Float::with_val(64, x).ln_gamma().to_f64() * std::f64::consts::LOG2_E };
    let nm = orders[m - 1];
    let mut acc = -z.modulus().to_f64().log2() + 0.5 * nm.log2() + lg(nm) - nm * sigma_mod.log2();
    for k in 0..m - 1 {
        let big_sigma: f64 = orders[k..].iter().sum();
        acc += 0.5 * big_sigma.log2() + lg(orders[k] - 1.0) - (orders[k] - 1.0) * sigma_mod.log2();
    }
    acc
}

/// Scale of the origin bound
/// `√N_m Γ(N_m)/|σ|^{N_m} · Γ(N_1−2)/|σ|^{N_1−2} · Π_{1<k<m} √Σ_k Γ(N_k−1)/|σ|^{N_k−1}`
/// for `m ≥ 2`, as log2.
pub fn lemma2_scale_log2(orders: &[f64], sigma_mod: f64) -> f64 {
    let lg = |x: f64| -> f64 { Float::with_val(64, x).ln_gamma().to_f64() * std::f64::consts::LOG2_E };
    let m = orders.len();
    let nm = orders[m - 1];
    let mut acc = 0.5 * nm.log2() + lg(nm) - nm * sigma_mod.log2();
    acc += lg(orders[0] - 2.0) - (orders[0] - 2.0) * sigma_mod.log2();
    for k in 1..m - 1 {
        let big_sigma: f64 = orders[k..].iter().sum();
        acc += 0.5 * big_sigma.log2() + lg(orders[k] - 1.0) - (orders[k] - 1.0) * sigma_mod.log2();
    }
    acc
}

#[cfg(test)]
mod tests;
