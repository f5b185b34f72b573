//! Trapezoidal quadrature on the real line after an exponential change of
//! variable, with step halving until successive sums agree.
//!
//! For integrands analytic in a strip around the real axis the error of the
//! trapezoidal sum decays like `exp(−2πd/h)`, so each halving roughly squares
//! the error.

use rug::Float;

use crate::error::{Error, Result};
use crate::num::{log2_abs, Complex};

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    /// Working precision in bits.
    pub prec: u32,
    /// log2 of the requested relative tolerance.
    pub tol_log2: f64,
    /// Initial step in the exponential variable.
    pub h0: f64,
    pub max_halvings: u32,
}

impl QuadOptions {
    pub fn new(prec: u32, rel_tol: f64) -> Self {
        QuadOptions { prec, tol_log2: rel_tol.log2(), h0: 0.5, max_halvings: 12 }
    }

    pub fn with_tol_log2(&self, tol_log2: f64) -> Self {
        QuadOptions { tol_log2, ..*self }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        QuadOptions { prec, ..*self }
    }

    pub fn rel_tol(&self) -> f64 {
        self.tol_log2.exp2()
    }
}

/// A value with a log2 absolute error estimate.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Complex,
    pub err_log2: f64,
}

impl Estimate {
    pub fn exact(value: Complex) -> Self {
        let err_log2 = value.log2_abs() - value.prec() as f64;
        Estimate { value, err_log2 }
    }

    pub fn abs_err(&self) -> f64 {
        self.err_log2.exp2()
    }

    /// Relative error estimate, as log2.
    pub fn rel_err_log2(&self) -> f64 {
        self.err_log2 - self.value.log2_abs()
    }
}

/// log2 of `2^a + 2^b`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// `∫_{−∞}^{∞} g(x) dx` for `g` decaying at both ends; `center` should lie
/// near the bulk of the integrand.
///
/// The range is cut where `|g|` drops below `|result| · tol · 2^{−24}`. The
/// result magnitude is not known in advance, so the cut is first set from the
/// peak and deepened whenever the sum turns out smaller than the peak.
pub fn real_line<G>(mut g: G, center: f64, opts: &QuadOptions) -> Result<Estimate>
where
    G: FnMut(&Float) -> Result<Complex>,
{
    let prec = opts.prec;
    let max_cut = prec as f64 + 24.0;
    let mut h = opts.h0;
    // Nodes are dyadic multiples of the step, hence exact in f64.
    let center = (center / h).round() * h;

    let mut st = Sweep { g: &mut g, prec, peak: f64::NEG_INFINITY, count: 0 };
    let mut sum = Complex::zero(prec);
    st.eval(center, &mut sum)?;
    // Outermost node index on each side, and the depth it was marched to.
    let mut reach = [0i64, 0i64];
    let mut cut = (24.0 - opts.tol_log2).min(max_cut);
    st.march(center, h, &mut reach, cut, &mut sum)?;
    loop {
        let need = st.peak - (sum.scale_f64(h).log2_abs() + opts.tol_log2 - 24.0);
        if need <= cut + 1.0 || cut >= max_cut {
            break;
        }
        cut = need.min(max_cut);
        st.march(center, h, &mut reach, cut, &mut sum)?;
    }
    let mut total = sum.scale_f64(h);

    let mut level = 0;
    loop {
        level += 1;
        if level > opts.max_halvings {
            return Err(Error::Convergence(format!("no agreement after {} halvings", opts.max_halvings)));
        }
        let coarse = h;
        h /= 2.0;
        let mut fresh = Complex::zero(prec);
        let lo = center - reach[0] as f64 * coarse;
        let steps = reach[0] + reach[1];
        for j in 0..steps {
            st.eval(lo + (2 * j + 1) as f64 * h, &mut fresh)?;
        }
        reach = [2 * reach[0], 2 * reach[1]];
        let mut next = &total.scale_f64(0.5) + &fresh.scale_f64(h);
        // The sum may have shrunk below what the current cut resolves.
        let need = st.peak - (next.log2_abs() + opts.tol_log2 - 24.0);
        if need > cut + 1.0 && cut < max_cut {
            cut = need.min(max_cut);
            let mut extra = Complex::zero(prec);
            st.march(center, h, &mut reach, cut, &mut extra)?;
            next += &extra.scale_f64(h);
        }
        let diff = (&next - &total).log2_abs();
        total = next;
        let span = (reach[0] + reach[1]) as f64 * h;
        let floor = st.peak + (st.count as f64).log2() + span.max(1.0).log2() + 4.0 - prec as f64;
        let target = (total.log2_abs() + opts.tol_log2).max(floor);
        if level >= 1 && diff <= target {
            // Tail beyond the cut, with a margin for slow decay.
            let trunc = st.peak - cut + 8.0;
            return Ok(Estimate { value: total, err_log2: diff.max(floor).max(trunc) });
        }
    }
}

struct Sweep<'a, G> {
    g: &'a mut G,
    prec: u32,
    peak: f64,
    count: usize,
}

impl<G> Sweep<'_, G>
where
    G: FnMut(&Float) -> Result<Complex>,
{
    fn eval(&mut self, x: f64, sum: &mut Complex) -> Result<f64> {
        let v = (self.g)(&Float::with_val(self.prec, x))?;
        if !v.is_finite() {
            return Err(Error::Convergence(format!("integrand not finite at x = {x}")));
        }
        let m = v.log2_abs();
        self.peak = self.peak.max(m);
        *sum += &v;
        self.count += 1;
        Ok(m)
    }

    /// Extends both ends at step `h` until three consecutive nodes fall `cut`
    /// bits below the peak.
    fn march(&mut self, center: f64, h: f64, reach: &mut [i64; 2], cut: f64, sum: &mut Complex) -> Result<()> {
        for (side, dir) in [(1usize, 1.0), (0usize, -1.0)] {
            let mut quiet = 0;
            loop {
                let j = reach[side] + 1;
                let m = self.eval(center + dir * j as f64 * h, sum)?;
                reach[side] = j;
                if m < self.peak - cut {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if j > 200_000 {
                    return Err(Error::Convergence("integrand does not decay".into()));
                }
            }
        }
        Ok(())
    }
}

/// `∫_0^∞ f(s) ds` through `s = e^x`; `s_peak` locates the bulk.
pub fn half_line<F>(mut f: F, s_peak: f64, opts: &QuadOptions) -> Result<Estimate>
where
    F: FnMut(&Float) -> Result<Complex>,
{
    let center = s_peak.max(1e-300).ln();
    real_line(
        |x| {
            let s = Float::with_val(opts.prec, x.exp_ref());
            let v = f(&s)?;
            Ok(v.scale(&s))
        },
        center,
        opts,
    )
}

/// log2 of a positive float's magnitude, re-exported for callers.
pub fn mag(x: &Float) -> f64 {
    log2_abs(x)
}
