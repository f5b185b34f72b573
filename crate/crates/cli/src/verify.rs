//! Invariant suites behind `verify`: each check reports its measured residual
//! against a threshold.

use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use hyperstokes::coeffs;
use hyperstokes::hyper::{multiplier_at, MultiplierKind};
use hyperstokes::num::{digits_to_bits, pi};
use hyperstokes::quad::QuadOptions;
use hyperstokes::reference::{g, gamma_star};
use hyperstokes::smoothing::{c_of_phi, c_residual_log2, theorem_approx, Variant};
use hyperstokes::terminants::{connection, f_bell, fm_quadrature, Level, Method, TerminantSpec};
use hyperstokes::{Angle, Complex, SurfacePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{emit, json_text};
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Quadrature against the Bell form for m = 2, 3
    Howls,
    /// Sheet relations of F^(m)
    Connection,
    /// Exact Stirling coefficient identities
    Coeffs,
    /// Scaled gamma oracle values and the log relation
    Oracle,
    /// Transition variable residuals and Stokes-line coefficients
    Smoothing,
    /// Level-2 multipliers on the Stokes line at |z| = 5
    Multipliers,
    /// Every suite above
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Which invariant suite to run
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Random inputs per randomized check
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check { suite, name: name.into(), residual, threshold }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.threshold
    }
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    (a - b).abs().to_f64() / b.abs().to_f64()
}

/// `(z, N, σ)` with `|z| ∈ [1, 6]`, `Re N ∈ [4, 12]`, `|arg σz| < 0.95π`.
fn random_input(rng: &mut ChaCha8Rng, prec: u32) -> (SurfacePoint, Complex, SurfacePoint) {
    let r = rng.gen_range(1.0..6.0);
    let phi = rng.gen_range(-0.95..0.95) * PI;
    let sa = rng.gen_range(-1.0..1.0) * PI;
    let sm = rng.gen_range(1.0..8.0);
    let n = Complex::from_f64(prec, rng.gen_range(4.0..12.0), rng.gen_range(-0.5..0.5));
    (SurfacePoint::polar(prec, r, phi - sa), n, SurfacePoint::polar(prec, sm, sa))
}

fn howls(digits: u32, tol: f64, cases: usize, seed: u64) -> hyperstokes::Result<Vec<Check>> {
    let prec = digits_to_bits(digits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for m in [2usize, 3] {
        let mut worst: f64 = 0.0;
        for _ in 0..cases {
            let (z, n, sigma) = random_input(&mut rng, prec);
            let spec = TerminantSpec::equal(&n, &sigma, m)?;
            let q = fm_quadrature(&z, &spec, &QuadOptions::new(prec, tol))?.value;
            worst = worst.max(rel(&q, &f_bell(&z, &n, &sigma, m, prec)?));
        }
        checks.push(Check::new("howls", format!("quadrature vs Bell form, m={m}, {cases} inputs"), worst, 1e-8));
    }
    Ok(checks)
}

fn connections(digits: u32, tol: f64, cases: usize, seed: u64) -> hyperstokes::Result<Vec<Check>> {
    let prec = digits_to_bits(digits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut checks = Vec::new();
    for m in 1..=3usize {
        let mut worst: f64 = 0.0;
        for _ in 0..cases {
            let (z, n, sigma) = random_input(&mut rng, prec);
            let spec = TerminantSpec::equal(&n, &sigma, m)?;
            let res = connection(&z, &spec, &QuadOptions::new(prec, tol), Method::Auto)?.value;
            // relative to the largest of the three terms
            let a = f_bell(&z.rotate_pi(-2), &n, &sigma, m, prec)?.abs().to_f64();
            let b = f_bell(&z, &n, &sigma, m, prec)?.abs().to_f64();
            let mut nm1 = n.clone();
            nm1.re -= 1;
            let front = &sigma.mul(&z).to_complex(prec).exp() * &z.power(&nm1);
            let c = (&front * &f_bell(&z, &n, &sigma, m - 1, prec)?).abs().to_f64() * 2.0 * PI;
            worst = worst.max(res.abs().to_f64() / a.max(b).max(c));
        }
        let threshold = 10f64.powi(-(digits as i32 - 15));
        checks.push(Check::new("connection", format!("Bell form across a full turn, m={m}, {cases} inputs"), worst, threshold));
    }
    // unequal orders through nested quadrature, both sheets by direct rays:
    // near arg(σz) = π the rotated contour reaches either side
    let p = digits_to_bits(digits);
    let sigma = SurfacePoint::polar_pi(p, 2.0 * PI, 1, 2);
    let spec = TerminantSpec::new(vec![Level::real(p, 6.0, sigma.clone()), Level::real(p, 4.0, sigma)])?;
    let mut worst: f64 = 0.0;
    for (r, t) in [(2.0, 0.5 * PI + 0.2), (3.0, 0.5 * PI - 0.1), (1.5, 0.5 * PI + 0.3)] {
        let z = SurfacePoint::polar(p, r, t);
        let opts = QuadOptions::new(p, tol.min(1e-12));
        let res = connection(&z, &spec, &opts, Method::Quadrature)?.value;
        let scale = hyperstokes::terminants::evaluate(&z.rotate_pi(-2), &spec, &opts, Method::Quadrature)?.value.abs().to_f64();
        worst = worst.max(res.abs().to_f64() / scale);
    }
    checks.push(Check::new("connection", "nested quadrature across a full turn, orders (6, 4)", worst, 1e-8));
    Ok(checks)
}

fn coefficient_checks() -> Vec<Check> {
    let t = coeffs::table(40);
    let mut broken = 0;
    for n in 1..=40usize {
        let mut s = Rational::new();
        for k in 0..=n {
            let term = Rational::from(&t.stirling[k] * &t.stirling[n - k]);
            if k % 2 == 1 {
                s -= term;
            } else {
                s += term;
            }
        }
        if s != 0 {
            broken += 1;
        }
    }
    let q = |a: i64, b: i64| Rational::from((a, b));
    let literals = [(1, q(-1, 12)), (2, q(1, 288)), (3, q(139, 51840))];
    let wrong = literals.iter().filter(|(n, v)| t.stirling[*n] != *v).count() + usize::from(t.log_gamma[1] != q(1, 12));
    vec![
        Check::new("coeffs", "Σ(−1)^k γ_k γ_{n−k} = 0 for 1 ≤ n ≤ 40 (count of failures)", broken as f64, 0.0),
        Check::new("coeffs", "γ_1, γ_2, γ_3 and a_1 literals (count of mismatches)", wrong as f64, 0.0),
    ]
}

fn oracle_checks(digits: u32) -> hyperstokes::Result<Vec<Check>> {
    let p = digits_to_bits(digits);
    let tol = 10f64.powi(-(digits as i32 - 10));
    let v = gamma_star(&SurfacePoint::polar_pi(p, 1.0, 0, 1), p)?.value;
    let e = Float::with_val(p, 1).exp() / Float::with_val(p, pi(p) * 2u32).sqrt();
    let mut worst: f64 = 0.0;
    for j in 0..20 {
        let r = 0.5 + 0.4 * j as f64;
        let upper = j % 2 == 0;
        let t = 1.7 + 0.07 * j as f64;
        let z = SurfacePoint::polar(p, r, if upper { t } else { -t });
        let arg = z.to_complex(p).mul_i().scale(&(pi(p) * 2u32));
        let ex = if upper { arg.exp() } else { (-arg).exp() };
        let l = (&Complex::one(p) - &ex).ln();
        let res = &(&g(&z, p)? + &g(&z.rotate_pi(if upper { -1 } else { 1 }), p)?) + &l;
        worst = worst.max(res.abs().to_f64());
    }
    Ok(vec![
        Check::new("oracle", "Γ*(1) = e/√(2π), relative error", rel(&v, &Complex::from_real(e)), tol),
        Check::new("oracle", "g(z) + g(ze^{∓πi}) + ln(1 − e^{±2πiz}) = 0 on 20 points", worst, tol),
    ])
}

fn smoothing_checks(digits: u32) -> hyperstokes::Result<Vec<Check>> {
    let p = digits_to_bits(digits);
    let mut worst = f64::NEG_INFINITY;
    for j in 0..=60 {
        let phi = -2.9 * PI + 5.8 * PI * j as f64 / 60.0;
        worst = worst.max(c_residual_log2(phi, &c_of_phi(phi, p)?.c));
    }
    let sigma = SurfacePoint::polar_pi(p, 2.0 * PI, 1, 2);
    let z = SurfacePoint::polar_pi(p, 7.0, 1, 2);
    let mut wrong = 0;
    for m in 1..=5usize {
        let a = theorem_approx(&z, 14.0 * PI, &sigma, m, Variant::Principal, p)?;
        let sum: Rational = a.terms.iter().map(|t| t.coefficient.clone()).sum();
        let mut expected = Rational::from(1);
        for j in 0..m as i64 {
            expected *= Rational::from((2 * j + 1, 2 * (j + 1)));
        }
        if sum != expected {
            wrong += 1;
        }
    }
    Ok(vec![
        Check::new("smoothing", "c²/2 = 1 + i(φ−π) − e^{i(φ−π)} on 61 points of (−3π, 3π)", worst.exp2(), 1e-30),
        Check::new("smoothing", "Stokes-line coefficients (1/2)_m/m! for m ≤ 5 (count of mismatches)", wrong as f64, 0.0),
    ])
}

fn multiplier_checks(digits: Option<u32>) -> hyperstokes::Result<Vec<Check>> {
    let z = SurfacePoint::new(Float::with_val(256, 5), Angle::pi_frac(1, 2))?;
    let s = multiplier_at(&z, MultiplierKind::S2, digits)?.s.re.to_f64();
    let t = multiplier_at(&z, MultiplierKind::S2Tilde, digits)?.s.re.to_f64();
    Ok(vec![
        Check::new("multipliers", "Re S2 at θ = π/2, distance from 3/8", (s - 0.375).abs(), 0.02),
        Check::new("multipliers", "Re S2 tilde at θ = π/2, distance from 1/8", (t - 0.125).abs(), 0.02),
    ])
}

pub fn run_suite(suite: Suite, cfg: &RunConfig, cases: usize, seed: u64) -> hyperstokes::Result<Vec<Check>> {
    let digits = cfg.digits_or_default();
    let tol = cfg.tol;
    Ok(match suite {
        Suite::Howls => howls(digits, tol, cases, seed)?,
        Suite::Connection => connections(digits, tol, cases, seed)?,
        Suite::Coeffs => coefficient_checks(),
        Suite::Oracle => oracle_checks(digits)?,
        Suite::Smoothing => smoothing_checks(digits)?,
        Suite::Multipliers => multiplier_checks(cfg.digits)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Coeffs, Suite::Oracle, Suite::Smoothing, Suite::Connection, Suite::Howls, Suite::Multipliers] {
                all.extend(run_suite(s, cfg, cases, seed)?);
            }
            all
        }
    })
}

pub fn verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<i32, Failure> {
    if cfg.format == Some(Format::Csv) {
        return Err(Failure::Config("verify writes JSON only".into()));
    }
    if a.cases == 0 {
        return Err(Failure::Config("--cases must be at least 1".into()));
    }
    let checks = run_suite(a.suite, cfg, a.cases, a.seed)?;
    let passed = checks.iter().all(Check::passed);
    for c in checks.iter().filter(|c| !c.passed()) {
        eprintln!("FAIL {}: {}: residual {:.3e} exceeds {:.3e}", c.suite, c.name, c.residual, c.threshold);
    }
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "suite": c.suite,
                "name": c.name,
                "residual": format!("{:.3e}", c.residual),
                "threshold": format!("{:.3e}", c.threshold),
                "passed": c.passed(),
            })
        })
        .collect();
    let v = json!({
        "suite": format!("{:?}", a.suite).to_lowercase(),
        "digits": cfg.digits_or_default(),
        "passed": passed,
        "checks": rows,
    });
    emit(&json_text(&v), cfg.out.as_deref())?;
    Ok(if passed { 0 } else { 1 })
}
