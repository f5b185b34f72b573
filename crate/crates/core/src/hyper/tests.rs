use super::*;

const P: u32 = 200;

fn z_at(absz: f64, num: i64, den: i64) -> SurfacePoint {
    SurfacePoint::new(Float::with_val(P + 64, absz), Angle::pi_frac(num, den)).unwrap()
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    (a - b).abs().to_f64() / b.abs().to_f64()
}

fn e4(z: &SurfacePoint) -> f64 {
    // |e^{4πiz}| = e^{−4π Im z}
    let (_, im) = z.to_complex(64).to_f64();
    (-4.0 * PI * im).exp()
}

#[test]
fn truncation_schemes() {
    assert_eq!(TruncationScheme::optimal(5.0, 1).unwrap(), TruncationScheme { level: 1, n: 62, m: 31, k: 0 });
    assert_eq!(TruncationScheme::optimal(5.0, 2).unwrap(), TruncationScheme { level: 2, n: 94, m: 62, k: 31 });
    assert_eq!(TruncationScheme::optimal(5.0, 0).unwrap().n, 31);
    assert!(TruncationScheme::level1(10, 10).is_err());
    assert!(TruncationScheme::level2(10, 5, 5).is_err());
    assert!(TruncationScheme::level0(0).is_err());
    assert!(TruncationScheme::optimal(5.0, 3).is_err());
}

#[test]
fn digit_schedule_grows_with_depth() {
    let a = required_digits(5.0, &TruncationScheme::optimal(5.0, 0).unwrap());
    let b = required_digits(5.0, &TruncationScheme::optimal(5.0, 1).unwrap());
    let c = required_digits(5.0, &TruncationScheme::optimal(5.0, 2).unwrap());
    assert!(a.digits >= 30 && a.digits < b.digits && b.digits < c.digits, "{a:?} {b:?} {c:?}");
    assert_eq!(c.bits, digits_to_bits(c.digits));
}

#[test]
fn level1_remainder_is_small_below_the_stokes_line() {
    let z = z_at(5.0, 3, 10);
    let r = remainder_level1(&z, 31, 10, Expansion::GammaStar, P).unwrap();
    let bound = 1e3 * 5f64.powi(-10) * (-2.0 * PI * 5.0).exp();
    assert!(r.remainder.abs().to_f64() <= bound);
    let rt = remainder_level1(&z, 31, 10, Expansion::Reciprocal, P).unwrap();
    assert!(rt.remainder.abs().to_f64() <= bound);
    // the chain closes exactly
    let total = &(&r.partial_sum + r.level1.as_ref().unwrap()) + &r.remainder;
    assert!(rel(&total, &r.oracle) < 1e-50);
}

#[test]
fn empty_level1_sums() {
    let z = z_at(5.0, 2, 5);
    let (a, b) = level1_terms(&z, 31, 0, P).unwrap();
    assert!(a.is_zero() && b.is_zero());
    let r1 = remainder_level1(&z, 31, 0, Expansion::GammaStar, P).unwrap();
    let r0 = remainder_level0(&z, 31, Expansion::GammaStar, P).unwrap();
    assert_eq!(r1.remainder, r0.remainder);
}

#[test]
fn level1_sum_is_real_on_the_real_axis() {
    let z = z_at(5.0, 0, 1);
    let (a, b) = level1_terms(&z, 31, 10, P).unwrap();
    for v in [a, b] {
        let (re, im) = v.to_f64();
        assert!(im.abs() < 1e-45 * re.abs(), "{re} {im}");
    }
}

#[test]
fn level1_subtraction_matches_integral_form() {
    let z = z_at(5.0, 9, 20);
    let bits = required_digits(5.0, &TruncationScheme::level1(62, 31).unwrap()).bits;
    let a = remainder_level1(&z, 62, 31, Expansion::GammaStar, bits).unwrap().remainder;
    let b = remainder_level1_quadrature(&z, 62, 31, &QuadOptions::new(bits, 1e-20)).unwrap();
    assert!(rel(&b.value, &a) < 1e-15, "{}", rel(&b.value, &a));
}

#[test]
fn integral_form_needs_right_half_plane() {
    let z = z_at(5.0, 1, 2);
    assert!(remainder_level1_quadrature(&z, 62, 31, &QuadOptions::new(P, 1e-10)).is_err());
}

#[test]
fn level1_remainder_on_the_stokes_line() {
    let z = z_at(5.0, 1, 2);
    let r = remainder_level1(&z, 62, 31, Expansion::GammaStar, P).unwrap();
    let ratio = r.remainder.abs().to_f64() / (0.375 * e4(&z));
    assert!(ratio > 1.0 / 1.25 && ratio < 1.25, "{ratio}");
}

#[test]
fn level1_remainder_on_the_real_axis() {
    let z = z_at(5.0, 0, 1);
    let r = remainder_level1(&z, 62, 31, Expansion::GammaStar, P).unwrap();
    let bound = 1e3 * (-4.0 * PI * 5.0).exp();
    assert!(r.remainder.abs().to_f64() <= bound);
}

#[test]
fn level2_closes_the_level1_remainder() {
    let z = z_at(5.0, 9, 20);
    let (n, m, k) = (62, 31, 10);
    let bits = required_digits(5.0, &TruncationScheme::level2(n, m, k).unwrap()).bits;
    let r = remainder_level1(&z, n, m, Expansion::GammaStar, bits).unwrap().remainder;
    let rt = remainder_level1(&z, n, m, Expansion::Reciprocal, bits).unwrap().remainder;
    let target = r.log2_abs() - k as f64 * 5f64.log2() - 40.0;
    let t = level2_terms(&z, n, m, k, target, bits).unwrap();
    let bound = 1e3 * 5f64.powi(-(k as i32)) * (-4.0 * PI * 5.0).exp();
    assert!((&r - &t.r).abs().to_f64() <= bound);
    assert!((&rt - &t.r_tilde).abs().to_f64() <= bound);
    assert!(t.err_log2 < (bound * 1e-6).log2());
}

#[test]
fn empty_level2_sums() {
    let z = z_at(5.0, 2, 5);
    let t = level2_terms(&z, 62, 31, 0, -200.0, P).unwrap();
    assert!(t.r.is_zero() && t.r_tilde.is_zero());
    let r2 = remainder_level2(&z, 62, 31, 0, Expansion::Reciprocal, P).unwrap();
    let r1 = remainder_level1(&z, 62, 31, Expansion::Reciprocal, P).unwrap();
    assert_eq!(r2.remainder, r1.remainder);
}

#[test]
fn level2_reciprocal_sums_cancel_past_the_stokes_line() {
    let z = z_at(5.0, 9, 10);
    let t = level2_terms(&z, 62, 31, 3, -200.0, P).unwrap();
    assert!(t.r_tilde.abs().to_f64() < 0.05 * e4(&z), "{}", t.r_tilde.abs().to_f64() / e4(&z));
}

#[test]
fn multipliers_at_the_stokes_line_and_beyond() {
    let s = multiplier_at(&z_at(5.0, 1, 2), MultiplierKind::S2, None).unwrap();
    assert_eq!((s.n, s.m), (62, 31));
    assert!((s.s.re.to_f64() - 0.375).abs() <= 0.02);
    let st = multiplier_at(&z_at(5.0, 1, 2), MultiplierKind::S2Tilde, None).unwrap();
    assert!((st.s.re.to_f64() - 0.125).abs() <= 0.02);
    let s = multiplier_at(&z_at(5.0, 9, 10), MultiplierKind::S2, None).unwrap();
    assert!((0.95..=1.05).contains(&s.s.re.to_f64()));
    let st = multiplier_at(&z_at(5.0, 9, 10), MultiplierKind::S2Tilde, None).unwrap();
    assert!(st.s.re.to_f64().abs() < 0.05);
}

#[test]
fn curve_keeps_grid_order() {
    let thetas = theta_grid(0.45 * PI, 0.55 * PI, 4);
    let c = stokes_multiplier_curve(5.0, MultiplierKind::S2, &thetas, Some(40)).unwrap();
    assert_eq!(c.len(), 5);
    for (s, t) in c.iter().zip(thetas.iter()) {
        assert!((s.theta - t).abs() < 1e-15);
        assert_eq!(s.digits, 40);
    }
    for w in c.windows(2) {
        assert!(w[1].s.re > w[0].s.re);
    }
}

#[test]
fn discontinuous_values() {
    let q = |a: i64, b: i64| Rational::from((a, b));
    assert_eq!(discontinuous_multipliers(2, &Angle::pi_frac(1, 2)).unwrap(), (q(3, 8), q(1, 8)));
    assert_eq!(discontinuous_multipliers(1, &Angle::pi_frac(1, 2)).unwrap(), (q(1, 2), q(1, 2)));
    assert_eq!(discontinuous_multipliers(3, &Angle::pi_frac(3, 4)).unwrap(), (q(1, 1), q(0, 1)));
    assert_eq!(discontinuous_multipliers(1, &Angle::pi_frac(-3, 4)).unwrap(), (q(1, 1), q(1, 1)));
    assert_eq!(discontinuous_multipliers(3, &Angle::pi_frac(-1, 2)).unwrap(), (q(5, 16), q(1, 16)));
    assert_eq!(discontinuous_multipliers(4, &Angle::pi_frac(1, 5)).unwrap(), (q(0, 1), q(0, 1)));
    assert!(discontinuous_multipliers(0, &Angle::pi_frac(1, 2)).is_err());
    assert!(discontinuous_multipliers(1, &Angle::pi_frac(1, 1)).is_err());
}

#[test]
fn stokes_line_values_sum_like_binomial_series() {
    // Σ_k (1/2)_k/k! x^k = (1−x)^{−1/2}; partial sums at x = 1/2 approach √2.
    let mut total = Rational::new();
    let mut xk = Rational::from(1);
    for k in 1..=30 {
        xk /= 2;
        total += discontinuous_multipliers(k, &Angle::pi_frac(1, 2)).unwrap().0 * &xk;
    }
    assert!((total.to_f64() + 1.0 - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn curve_has_no_jumps() {
    // steps bounded by 5·h·(largest slope of the erfc smoothing law on the grid)
    let h = PI / 50.0;
    let thetas = theta_grid(0.3 * PI, 0.7 * PI, 20);
    let c = stokes_multiplier_curve(5.0, MultiplierKind::S2, &thetas, Some(40)).unwrap();
    let law = |t: f64| crate::smoothing::level2_factors(t, 5.0, 64).0.to_f64();
    let slope = thetas.windows(2).map(|w| (law(w[1]) - law(w[0])).abs() / h).fold(0.0, f64::max);
    for w in c.windows(2) {
        let step = (&w[1].s - &w[0].s).abs().to_f64();
        assert!(step <= 5.0 * h * slope, "θ = {}: {step}", w[0].theta);
    }
}
