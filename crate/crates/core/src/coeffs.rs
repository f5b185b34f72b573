//! Bernoulli numbers, log-gamma coefficients and Stirling coefficients,
//! all as exact rationals.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rug::{Float, Integer, Rational};

/// Default table length, enough for optimal truncation at |z| ≈ 30.
pub const DEFAULT_NMAX: usize = 200;

#[derive(Clone, Debug)]
pub struct CoeffTable {
    /// `B_0, B_1, …, B_{2 nmax}`.
    pub bernoulli: Vec<Rational>,
    /// `a_n = B_{2n}/(2n(2n−1))`, index 0 unused (zero).
    pub log_gamma: Vec<Rational>,
    /// `γ_0 … γ_nmax`.
    pub stirling: Vec<Rational>,
}

impl CoeffTable {
    pub fn new(nmax: usize) -> Self {
        let bernoulli = bernoulli_table(2 * nmax.max(1));
        let log_gamma: Vec<Rational> = (0..=nmax)
            .map(|n| {
                if n == 0 {
                    Rational::new()
                } else {
                    let d = Integer::from(2 * n) * Integer::from(2 * n - 1);
                    &bernoulli[2 * n] / Rational::from(d)
                }
            })
            .collect();
        let stirling = stirling_table(&log_gamma, nmax);
        CoeffTable { bernoulli, log_gamma, stirling }
    }

    pub fn nmax(&self) -> usize {
        self.stirling.len() - 1
    }
}

/// `B_0 … B_m` from `Σ_{k<m+1} C(m+1,k) B_k = 0`, odd entries beyond `B_1` zero.
fn bernoulli_table(m: usize) -> Vec<Rational> {
    let mut b = vec![Rational::new(); m + 1];
    b[0] = Rational::from(1);
    if m >= 1 {
        b[1] = Rational::from((-1, 2));
    }
    for n in (2..=m).step_by(2) {
        let mut acc = Rational::new();
        for k in 0..n {
            if k > 1 && k % 2 == 1 {
                continue;
            }
            let c = Integer::from(Integer::binomial_u(n as u32 + 1, k as u32));
            acc += Rational::from(&b[k] * &c);
        }
        b[n] = -acc / Rational::from(n + 1);
    }
    b
}

/// Coefficients of `exp(Σ a_n u^{2n−1}) = Σ c_k u^k`, returned as `γ_k = (−1)^k c_k`.
fn stirling_table(a: &[Rational], nmax: usize) -> Vec<Rational> {
    let b = |j: usize| -> Option<&Rational> {
        if j % 2 == 1 {
            a.get(j.div_ceil(2))
        } else {
            None
        }
    };
    let mut c: Vec<Rational> = Vec::with_capacity(nmax + 1);
    c.push(Rational::from(1));
    for k in 1..=nmax {
        let mut acc = Rational::new();
        for j in (1..=k).step_by(2) {
            if let Some(bj) = b(j) {
                acc += Rational::from(bj * &c[k - j]) * Integer::from(j);
            }
        }
        c.push(acc / Integer::from(k));
    }
    c.into_iter().enumerate().map(|(k, ck)| if k % 2 == 1 { -ck } else { ck }).collect()
}

fn shared() -> &'static RwLock<Arc<CoeffTable>> {
    static TABLE: OnceLock<RwLock<Arc<CoeffTable>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Arc::new(CoeffTable::new(DEFAULT_NMAX))))
}

/// The process-wide table, grown on demand to hold index `n`.
pub fn table(n: usize) -> Arc<CoeffTable> {
    {
        let t = shared().read().expect("coefficient table lock");
        if t.nmax() >= n {
            return t.clone();
        }
    }
    let mut w = shared().write().expect("coefficient table lock");
    if w.nmax() < n {
        let target = n.max(2 * w.nmax());
        *w = Arc::new(CoeffTable::new(target));
    }
    w.clone()
}

/// Exact `B_{2n}`.
pub fn bernoulli(two_n: usize) -> Rational {
    assert!(two_n >= 2 && two_n.is_multiple_of(2), "even index at least 2 required");
    table(two_n / 2).bernoulli[two_n].clone()
}

/// `B_{2n}/(2n(2n−1))`.
pub fn log_gamma_coeff(n: usize) -> Rational {
    assert!(n >= 1);
    table(n).log_gamma[n].clone()
}

/// Stirling coefficient `γ_n`: `Γ*(z) ~ Σ (−1)^n γ_n z^{−n}`, `1/Γ*(z) ~ Σ γ_n z^{−n}`.
pub fn stirling_gamma(n: usize) -> Rational {
    table(n).stirling[n].clone()
}

/// `γ_0 … γ_{len−1}` rounded to `prec` bits, cached per precision.
pub fn stirling_floats(len: usize, prec: u32) -> Arc<Vec<Float>> {
    float_cache(&STIRLING, len, prec, |t, n| &t.stirling[n])
}

/// `a_0 … a_{len−1}` rounded to `prec` bits, cached per precision.
pub fn log_gamma_floats(len: usize, prec: u32) -> Arc<Vec<Float>> {
    float_cache(&LOG_GAMMA, len, prec, |t, n| &t.log_gamma[n])
}

type FloatCache = OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>>;

static STIRLING: FloatCache = OnceLock::new();
static LOG_GAMMA: FloatCache = OnceLock::new();

fn float_cache(cache: &FloatCache, len: usize, prec: u32, pick: fn(&CoeffTable, usize) -> &Rational) -> Arc<Vec<Float>> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("float cache lock").get(&prec) {
        if v.len() >= len {
            return v.clone();
        }
    }
    let t = table(len.max(1) - 1);
    let n = len.max(t.nmax() + 1).min(t.nmax() + 1);
    let v: Arc<Vec<Float>> = Arc::new((0..n).map(|k| Float::with_val(prec, pick(&t, k))).collect());
    map.lock().expect("float cache lock").insert(prec, v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(6), q(1, 42));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn bernoulli_signs_alternate() {
        let t = table(60);
        for n in 1..60 {
            assert_ne!(t.bernoulli[2 * n].cmp0(), t.bernoulli[2 * n + 2].cmp0());
        }
    }

    #[test]
    fn log_gamma_coefficients() {
        assert_eq!(log_gamma_coeff(1), q(1, 12));
        assert_eq!(log_gamma_coeff(2), q(-1, 360));
        assert_eq!(log_gamma_coeff(3), q(1, 1260));
    }

    #[test]
    fn stirling_coefficients() {
        assert_eq!(stirling_gamma(0), q(1, 1));
        assert_eq!(stirling_gamma(1), q(-1, 12));
        assert_eq!(stirling_gamma(2), q(1, 288));
        assert_eq!(stirling_gamma(3), q(139, 51840));
        assert_eq!(stirling_gamma(4), q(-571, 2488320));
    }

    #[test]
    fn reciprocal_series_convolution_is_exact() {
        let t = table(40);
        for n in 0..=40usize {
            let mut s = Rational::new();
            for k in 0..=n {
                let term = Rational::from(&t.stirling[k] * &t.stirling[n - k]);
                if k % 2 == 1 {
                    s -= term;
                } else {
                    s += term;
                }
            }
            assert_eq!(s, if n == 0 { q(1, 1) } else { Rational::new() }, "n = {n}");
        }
    }

    #[test]
    fn table_grows_on_demand() {
        let t = CoeffTable::new(12);
        assert_eq!(t.nmax(), 12);
        assert_eq!(t.bernoulli.len(), 25);
        assert_eq!(t.stirling[3], q(139, 51840));
    }
}
