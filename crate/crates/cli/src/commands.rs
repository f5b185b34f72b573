use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use hyperstokes::coeffs;
use hyperstokes::hyper::{remainder_level1, remainder_level2, required_digits, stokes_multiplier_curve, MultiplierKind, TruncationScheme};
use hyperstokes::num::{decimal, digits_to_bits};
use hyperstokes::quad::QuadOptions;
use hyperstokes::reference::{remainder_level0, Expansion};
use hyperstokes::smoothing::{c_of_phi, normalized_fm, theorem_approx, Variant};
use hyperstokes::terminants::{evaluate, f_bell, Level, Method, TerminantSpec};
use hyperstokes::{Angle, Complex, SurfacePoint};
use rug::Float;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{complex, emit, float, json_text, opt_complex};
use crate::parse;
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpansionArg {
    /// Γ*(z) ~ Σ (−1)^n γ_n z^{−n}
    GammaStar,
    /// 1/Γ*(z) ~ Σ γ_n z^{−n}
    Reciprocal,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// |z|, a positive decimal or a multiple of pi such as 2pi
    #[arg(long = "z-mod")]
    pub z_mod: String,
    /// arg z in radians, or a multiple of pi such as pi/2 or 0.4pi (exact)
    #[arg(long = "z-arg", default_value = "0", allow_hyphen_values = true)]
    pub z_arg: String,
    /// Hyperasymptotic level: 0, 1 or 2
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub level: u8,
    /// Terms of the leading series; defaults to the optimal ⌊2π|z|(level+1)⌋
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Terms at the first exponential level; defaults to ⌊2π|z|·level⌋
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Terms at the second exponential level; defaults to ⌊2π|z|⌋ at level 2
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Which expansion to truncate
    #[arg(long, value_enum, default_value_t = ExpansionArg::GammaStar)]
    pub expansion: ExpansionArg,
}

fn json_only(cfg: &RunConfig, what: &str) -> Result<(), Failure> {
    if cfg.format == Some(Format::Csv) {
        return Err(Failure::Config(format!("{what} writes JSON only")));
    }
    Ok(())
}

pub fn eval(cfg: &RunConfig, a: &EvalArgs) -> Result<i32, Failure> {
    json_only(cfg, "eval")?;
    let absz = parse::modulus(&a.z_mod, 128)?.to_f64();
    let opt = TruncationScheme::optimal(absz, a.level)?;
    let n = a.n.unwrap_or(opt.n);
    let m = if a.level >= 1 { a.m.unwrap_or(opt.m) } else { 0 };
    let k = if a.level == 2 { a.k.unwrap_or(opt.k) } else { 0 };
    let scheme = TruncationScheme::new(a.level, n, m, k)?;
    let digits = cfg.digits_or_default();
    let used = digits.max(required_digits(absz, &scheme).digits);
    let bits = digits_to_bits(used);
    let z = SurfacePoint::new(parse::modulus(&a.z_mod, bits + 64)?, parse::angle(&a.z_arg, bits + 64)?)?;
    let expansion = match a.expansion {
        ExpansionArg::GammaStar => Expansion::GammaStar,
        ExpansionArg::Reciprocal => Expansion::Reciprocal,
    };
    let r = match a.level {
        0 => remainder_level0(&z, n, expansion, bits)?,
        1 => remainder_level1(&z, n, m, expansion, bits)?,
        _ => remainder_level2(&z, n, m, k, expansion, bits)?,
    };
    let v = json!({
        "z_mod": float(z.modulus(), used),
        "z_arg": float(&z.angle().value(bits), used),
        "level": a.level,
        "N": n,
        "M": if a.level >= 1 { json!(m) } else { Value::Null },
        "K": if a.level == 2 { json!(k) } else { Value::Null },
        "expansion": match expansion { Expansion::GammaStar => "gamma_star", Expansion::Reciprocal => "reciprocal" },
        "digits": used,
        "partial_sum": complex(&r.partial_sum, used),
        "level1": opt_complex(r.level1.as_ref(), used),
        "level2": opt_complex(r.level2.as_ref(), used),
        "remainder": complex(&r.remainder, used),
        "oracle": complex(&r.oracle, used),
    });
    emit(&json_text(&v), cfg.out.as_deref())?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// R_{N,M} e^{−4πiz}
    S2,
    /// −R̃_{N,M} e^{−4πiz}
    #[value(name = "s2tilde")]
    S2Tilde,
}

#[derive(Args, Debug)]
pub struct SmoothArgs {
    /// |z|
    #[arg(long, default_value_t = 5.0)]
    pub absz: f64,
    /// Which multiplier to trace
    #[arg(long, value_enum, default_value_t = KindArg::S2)]
    pub kind: KindArg,
    /// Start of the θ grid, radians or a multiple of pi; defaults to 0.3pi (s2) or 0.05pi (s2tilde)
    #[arg(long = "theta-min", allow_hyphen_values = true)]
    pub theta_min: Option<String>,
    /// End of the θ grid; defaults to 0.75pi (s2) or 0.95pi (s2tilde)
    #[arg(long = "theta-max", allow_hyphen_values = true)]
    pub theta_max: Option<String>,
    /// Number of grid intervals; defaults to a spacing of pi/200
    #[arg(long)]
    pub steps: Option<usize>,
}

/// Grid value in units of π, rounded to 12 places for stable printing.
fn grid_label(t: f64) -> String {
    let s = format!("{:.12}", t);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

pub fn smooth(cfg: &RunConfig, a: &SmoothArgs) -> Result<i32, Failure> {
    if !(a.absz > 0.0) {
        return Err(Failure::Config(format!("--absz must be positive, got {}", a.absz)));
    }
    let (lo, hi) = match a.kind {
        KindArg::S2 => ("0.3pi", "0.75pi"),
        KindArg::S2Tilde => ("0.05pi", "0.95pi"),
    };
    let tmin = parse::angle_over_pi(a.theta_min.as_deref().unwrap_or(lo))?;
    let tmax = parse::angle_over_pi(a.theta_max.as_deref().unwrap_or(hi))?;
    if !(tmax >= tmin) {
        return Err(Failure::Config("--theta-max must not be below --theta-min".into()));
    }
    let steps = a.steps.unwrap_or(((tmax - tmin) * 200.0).round().max(1.0) as usize).max(1);
    let labels: Vec<f64> = (0..=steps).map(|k| tmin + (tmax - tmin) * k as f64 / steps as f64).collect();
    let thetas: Vec<f64> = labels.iter().map(|t| t * PI).collect();
    let kind = match a.kind {
        KindArg::S2 => MultiplierKind::S2,
        KindArg::S2Tilde => MultiplierKind::S2Tilde,
    };
    let samples = stokes_multiplier_curve(a.absz, kind, &thetas, cfg.digits)?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("theta_over_pi,re_S,im_S,N,M,digits_used\n");
            for (t, x) in labels.iter().zip(&samples) {
                let d = x.digits as usize;
                s += &format!("{},{},{},{},{},{}\n", grid_label(*t), decimal(&x.s.re, d), decimal(&x.s.im, d), x.n, x.m, x.digits);
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = labels
                .iter()
                .zip(&samples)
                .map(|(t, x)| {
                    json!({
                        "theta_over_pi": grid_label(*t),
                        "re_S": float(&x.s.re, x.digits),
                        "im_S": float(&x.s.im, x.digits),
                        "N": x.n,
                        "M": x.m,
                        "digits_used": x.digits,
                    })
                })
                .collect();
            json_text(&json!({ "absz": a.absz, "kind": format!("{:?}", a.kind).to_lowercase(), "samples": rows }))
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Nested ray quadrature
    Quad,
    /// Bell polynomial form, identical levels only
    Bell,
    /// Bell form when possible, reduced integral for mixed pairs, quadrature otherwise
    Auto,
}

#[derive(Args, Debug)]
pub struct TerminantArgs {
    /// Comma-separated orders N_1,…,N_m (real, decimal or fraction)
    #[arg(long)]
    pub orders: String,
    /// Comma-separated singulant arguments, radians or multiples of pi
    #[arg(long = "singulant-args", allow_hyphen_values = true)]
    pub singulant_args: String,
    /// Comma-separated singulant moduli; defaults to 2pi for every level
    #[arg(long = "singulant-mods")]
    pub singulant_mods: Option<String>,
    /// |z|
    #[arg(long = "z-mod")]
    pub z_mod: String,
    /// arg z, radians or a multiple of pi; any sheet
    #[arg(long = "z-arg", default_value = "0", allow_hyphen_values = true)]
    pub z_arg: String,
    /// Evaluation path
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

pub fn terminant(cfg: &RunConfig, a: &TerminantArgs) -> Result<i32, Failure> {
    json_only(cfg, "terminant")?;
    let digits = cfg.digits_or_default();
    let prec = digits_to_bits(digits);
    let orders = parse::list(&a.orders);
    let args = parse::list(&a.singulant_args);
    let mods = match &a.singulant_mods {
        Some(s) => parse::list(s),
        None => vec!["2pi".to_string(); orders.len()],
    };
    if orders.is_empty() || orders.len() != args.len() || orders.len() != mods.len() {
        return Err(Failure::Config(format!(
            "--orders, --singulant-args and --singulant-mods need equal nonzero lengths ({}, {}, {})",
            orders.len(),
            args.len(),
            mods.len()
        )));
    }
    let mut levels = Vec::new();
    for ((o, g), r) in orders.iter().zip(&args).zip(&mods) {
        let order = Complex::from_real(Float::with_val(prec, &parse::rational(o)?));
        levels.push(Level::new(order, SurfacePoint::new(parse::modulus(r, prec)?, parse::angle(g, prec)?)?));
    }
    let spec = TerminantSpec::new(levels)?;
    let z = SurfacePoint::new(parse::modulus(&a.z_mod, prec)?, parse::angle(&a.z_arg, prec)?)?;
    let opts = QuadOptions::new(prec, cfg.tol);
    let est = match a.method {
        MethodArg::Bell => {
            let (n, sigma) = spec
                .bell_form()
                .ok_or_else(|| Failure::Config("--method bell needs identical orders and singulants".into()))?;
            hyperstokes::quad::Estimate::exact(f_bell(&z, n, sigma, spec.m(), prec)?)
        }
        MethodArg::Quad => evaluate(&z, &spec, &opts, Method::Quadrature)?,
        MethodArg::Auto => evaluate(&z, &spec, &opts, Method::Auto)?,
    };
    let v = json!({
        "value_re": float(&est.value.re, digits),
        "value_im": float(&est.value.im, digits),
        "err_estimate": format!("{:.3e}", est.abs_err()),
        "method": format!("{:?}", a.method).to_lowercase(),
        "digits": digits,
    });
    emit(&json_text(&v), cfg.out.as_deref())?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Arguments c(φ)√(j|σz|/2)
    Principal,
    /// Arguments conj(c(−φ))√(j|σz|/2) with signed coefficients
    Conjugate,
}

#[derive(Args, Debug)]
pub struct SmoothingArgs {
    /// φ = arg(σz), radians or a multiple of pi
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// Number of levels m
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// |z|, with σ = 2πe^{iπ/2} so that |σz| = 2π|z|
    #[arg(long)]
    pub absz: f64,
    /// Which erfc-polynomial form
    #[arg(long, value_enum, default_value_t = VariantArg::Principal)]
    pub variant: VariantArg,
    /// Order N; defaults to ⌊|σz|⌋
    #[arg(long = "N")]
    pub n: Option<f64>,
    /// Also evaluate the normalized F^(m) by quadrature and report the difference
    #[arg(long)]
    pub compare: bool,
}

pub fn smoothing(cfg: &RunConfig, a: &SmoothingArgs) -> Result<i32, Failure> {
    json_only(cfg, "smoothing")?;
    if a.m == 0 {
        return Err(Failure::Config("--m must be at least 1".into()));
    }
    if !(a.absz > 0.0) {
        return Err(Failure::Config(format!("--absz must be positive, got {}", a.absz)));
    }
    let digits = cfg.digits_or_default();
    let prec = digits_to_bits(digits);
    let sigma = SurfacePoint::polar_pi(prec, 2.0 * PI, 1, 2);
    let phi_angle = parse::angle(&a.phi, prec)?;
    let phi = phi_angle.to_f64();
    let z = SurfacePoint::new(Float::with_val(prec, a.absz), phi_angle.sub(&Angle::pi_frac(1, 2)))?;
    let s = 2.0 * PI * a.absz;
    let n = a.n.unwrap_or(s.floor());
    let variant = match a.variant {
        VariantArg::Principal => Variant::Principal,
        VariantArg::Conjugate => Variant::Conjugate,
    };
    let approx = theorem_approx(&z, n, &sigma, a.m, variant, prec)?;
    let c = match variant {
        Variant::Principal => c_of_phi(phi, prec)?.c,
        Variant::Conjugate => c_of_phi(-phi, prec)?.c.conj(),
    };
    let terms: Vec<Value> = approx
        .terms
        .iter()
        .map(|t| {
            json!({
                "k": t.partition.k,
                "coefficient": t.coefficient.to_string(),
                "value": complex(&t.value, digits),
            })
        })
        .collect();
    let mut v = json!({
        "phi": float(&phi_angle.value(prec), digits),
        "absz": a.absz,
        "sigma_z_abs": float(&(hyperstokes::num::pi(prec) * 2u32 * a.absz), digits),
        "N": n,
        "rho": approx.rho,
        "m": a.m,
        "variant": format!("{:?}", a.variant).to_lowercase(),
        "c": complex(&c, digits),
        "terms": terms,
        "value": complex(&approx.value, digits),
    });
    if a.compare {
        let exact = normalized_fm(&z, &Float::with_val(prec, n), &sigma, 0, a.m, variant == Variant::Conjugate, &QuadOptions::new(prec, cfg.tol))?;
        let diff = (&exact - &approx.value).abs();
        v["normalized_fm"] = complex(&exact, digits);
        v["difference"] = float(&diff, 10);
    }
    emit(&json_text(&v), cfg.out.as_deref())?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    /// Largest index n
    #[arg(long, default_value_t = 20)]
    pub max: usize,
}

/// γ_n and the log-gamma coefficients a_n as exact numerator/denominator pairs.
pub fn coeffs_dump(cfg: &RunConfig, a: &DumpArgs) -> Result<i32, Failure> {
    let t = coeffs::table(a.max.max(1));
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,gamma_num,gamma_den,log_gamma_num,log_gamma_den\n");
            for n in 0..=a.max {
                let (g, l) = (&t.stirling[n], &t.log_gamma[n]);
                s += &format!("{n},{},{},{},{}\n", g.numer(), g.denom(), l.numer(), l.denom());
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = (0..=a.max)
                .map(|n| {
                    let (g, l) = (&t.stirling[n], &t.log_gamma[n]);
                    json!({
                        "n": n,
                        "gamma": { "num": g.numer().to_string(), "den": g.denom().to_string() },
                        "log_gamma": { "num": l.numer().to_string(), "den": l.denom().to_string() },
                    })
                })
                .collect();
            json_text(&Value::Array(rows))
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_labels_are_stable() {
        assert_eq!(grid_label(0.5), "0.5");
        assert_eq!(grid_label(0.3 + 0.45 * 40.0 / 90.0), "0.5");
        assert_eq!(grid_label(-0.0), "0");
        assert_eq!(grid_label(1.0), "1");
    }
}
