//! Text forms for angles and moduli: plain decimals in radians, or multiples
//! of π such as `pi/2`, `-3pi/4`, `0.4pi`, `2*pi`.

use hyperstokes::num::pi;
use hyperstokes::Angle;
use rug::{Float, Integer, Rational};

/// Exact rational from `"3"`, `"-0.25"`, `"7/8"` or `"1.5/4"`.
pub fn rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let den = rational(b)?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(rational(a)? / den);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a decimal or fraction: {s:?}"));
    }
    let digits = format!("{int}{frac}");
    let num = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|e| e.to_string())?;
    let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    let q = Rational::from((num, den));
    Ok(if neg { -q } else { q })
}

/// Splits `"<a>pi<rest>"` into the coefficient of π, or `None` without `pi`.
fn pi_multiple(s: &str) -> Result<Option<Rational>, String> {
    let t: String = s.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let Some(idx) = t.find("pi") else {
        return Ok(None);
    };
    let (a, rest) = (&t[..idx], &t[idx + 2..]);
    let coef = match a {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        _ => rational(a)?,
    };
    let coef = match rest.strip_prefix('/') {
        Some(d) => {
            let den = rational(d)?;
            if den == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            coef / den
        }
        None if rest.is_empty() => coef,
        None => return Err(format!("unexpected text after pi in {s:?}")),
    };
    Ok(Some(coef))
}

pub fn angle(s: &str, prec: u32) -> Result<Angle, String> {
    match pi_multiple(s)? {
        Some(q) => Ok(Angle::pi_times(q)),
        None => {
            let q = rational(s)?;
            Ok(Angle::radians(Float::with_val(prec, &q)))
        }
    }
}

pub fn modulus(s: &str, prec: u32) -> Result<Float, String> {
    let v = match pi_multiple(s)? {
        Some(q) => Float::with_val(prec, &q) * pi(prec),
        None => Float::with_val(prec, &rational(s)?),
    };
    if v <= 0 {
        return Err(format!("modulus must be positive, got {s:?}"));
    }
    Ok(v)
}

/// Angle in units of π as a float, for grids.
pub fn angle_over_pi(s: &str) -> Result<f64, String> {
    match pi_multiple(s)? {
        Some(q) => Ok(q.to_f64()),
        None => Ok(rational(s)?.to_f64() / std::f64::consts::PI),
    }
}

pub fn list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}
