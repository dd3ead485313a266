//! Closed-form periodicity criteria, in floating point and in exact
//! rational arithmetic.
//!
//! A trajectory from `γ₀` is `γ₀ exp(sD) exp(s q̃ k/2)` with
//! `|D| = Ω = √(sin²θ/α + (cos θ/α - q̃/2)²)`. Both factors are one-parameter
//! subgroups meeting only in `±1`, so the curve closes iff the closure ratio
//! `ρ = q̃/(2Ω)` is rational. On the round sphere `ρ = q/√(q² - 4q cos θ + 4)`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{big, rational_approx, rational_sqrt, RationalApprox};
use crate::error::{Error, Result};
use crate::sasaki::{check_cos, q_tilde_unchecked, SasakiParams};

/// `q/√(q² - 4q cos θ + 4)`.
pub fn s3_criterion(q: f64, cos_theta: f64) -> Result<f64> {
    check_cos(cos_theta)?;
    let radicand = q * q - 4.0 * q * cos_theta + 4.0;
    if !(radicand > 0.0) {
        return Err(Error::Degenerate(format!(
            "q^2 - 4 q cos(theta) + 4 = {radicand} is not positive"
        )));
    }
    Ok(q / radicand.sqrt())
}

/// `ω = √(5/4 - cos θ)`.
pub fn ikawa_omega(cos_theta: f64) -> Result<f64> {
    check_cos(cos_theta)?;
    Ok((1.25 - cos_theta).sqrt())
}

/// `Ω`, the angular rate of the left factor `exp(sD)`.
pub fn drift_rate(params: &SasakiParams<f64>, cos_theta: f64) -> Result<f64> {
    check_cos(cos_theta)?;
    let alpha = params.alpha();
    let sin2 = (1.0 - cos_theta * cos_theta).max(0.0);
    let qt = q_tilde_unchecked(params, cos_theta);
    let vert = cos_theta / alpha - qt / 2.0;
    Ok((sin2 / alpha + vert * vert).sqrt())
}

/// `ρ = q̃/(2Ω)`; fails for the fiber directions `sin θ = 0`.
pub fn closure_ratio(params: &SasakiParams<f64>, cos_theta: f64) -> Result<f64> {
    check_cos(cos_theta)?;
    if cos_theta.abs() == 1.0 {
        return Err(Error::DegenerateAngle { cos_theta });
    }
    let omega = drift_rate(params, cos_theta)?;
    Ok(q_tilde_unchecked(params, cos_theta) / (2.0 * omega))
}

/// Exact criterion: the square of the criterion value is always rational,
/// and the value itself is rational iff that square is a rational square.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCriterion {
    pub squared: BigRational,
    pub value: Option<BigRational>,
}

impl ExactCriterion {
    fn from_square(sign_source: &BigRational, squared: BigRational) -> Self {
        let value = rational_sqrt(&squared).map(|v| if sign_source.is_negative() { -v } else { v });
        Self { squared, value }
    }

    pub fn is_rational(&self) -> bool {
        self.value.is_some()
    }
}

fn check_cos_exact(cos_theta: &BigRational) -> Result<()> {
    if cos_theta.abs() > BigRational::one() {
        return Err(Error::domain(
            "cos_theta",
            super::rational::to_f64(cos_theta),
            "|cos_theta| <= 1",
        ));
    }
    Ok(())
}

/// `q/√(q² - 4q cos θ + 4)` for rational `q`, `cos θ`.
pub fn s3_criterion_exact(q: &BigRational, cos_theta: &BigRational) -> Result<ExactCriterion> {
    check_cos_exact(cos_theta)?;
    let radicand = q * q - big(4) * q * cos_theta + big(4);
    if !radicand.is_positive() {
        return Err(Error::Degenerate(format!(
            "q^2 - 4 q cos(theta) + 4 = {radicand} is not positive"
        )));
    }
    Ok(ExactCriterion::from_square(q, q * q / radicand))
}

/// `ω` for rational `cos θ`; `squared` is `5/4 - cos θ`.
pub fn ikawa_omega_exact(cos_theta: &BigRational) -> Result<ExactCriterion> {
    check_cos_exact(cos_theta)?;
    let sq = BigRational::new(5.into(), 4.into()) - cos_theta;
    Ok(ExactCriterion::from_square(&BigRational::one(), sq))
}

/// `ρ = q̃/(2Ω)` for rational `α`, `q`, `cos θ`.
pub fn closure_ratio_exact(
    alpha: &BigRational,
    q: &BigRational,
    cos_theta: &BigRational,
) -> Result<ExactCriterion> {
    check_cos_exact(cos_theta)?;
    if !alpha.is_positive() {
        return Err(Error::domain(
            "alpha",
            super::rational::to_f64(alpha),
            "alpha > 0",
        ));
    }
    if cos_theta.abs() == BigRational::one() {
        return Err(Error::DegenerateAngle {
            cos_theta: super::rational::to_f64(cos_theta),
        });
    }
    let c = big(4) / alpha - big(3);
    let half = BigRational::new(1.into(), 2.into());
    let qt = q + &half * (c - big(1)) * cos_theta;
    let vert = cos_theta / alpha - &half * &qt;
    let omega2 = (big(1) - cos_theta * cos_theta) / alpha + &vert * &vert;
    if omega2.is_zero() {
        return Err(Error::Degenerate("drift rate vanishes".into()));
    }
    Ok(ExactCriterion::from_square(
        &qt,
        &qt * &qt / (big(4) * omega2),
    ))
}

/// Length after which a trajectory with closure ratio `p/n` (lowest terms)
/// first returns with the same tangent: `n·t·π/Ω`, with `t = 1` when `p`
/// and `n` are both odd and `t = 2` otherwise.
pub fn period_from_ratio(numerator: i64, denominator: u64, omega: f64) -> f64 {
    let both_odd = numerator.rem_euclid(2) == 1 && denominator % 2 == 1;
    let t = if both_odd { 1.0 } else { 2.0 };
    denominator as f64 * t * std::f64::consts::PI / omega
}

/// Predicted minimal period, if the closure ratio is rational at the given
/// resolution. Fiber directions (`sin θ = 0`) close after `2πα`.
pub fn predicted_period(
    params: &SasakiParams<f64>,
    cos_theta: f64,
    max_denominator: u64,
    tol: f64,
) -> Result<(Option<f64>, Option<RationalApprox>)> {
    check_cos(cos_theta)?;
    if cos_theta.abs() == 1.0 {
        return Ok((Some(std::f64::consts::TAU * params.alpha()), None));
    }
    let rho = closure_ratio(params, cos_theta)?;
    let approx = rational_approx(rho, max_denominator, tol)?;
    let period = approx.verdict.is_periodic().then(|| {
        period_from_ratio(
            approx.numerator,
            approx.denominator,
            drift_rate(params, cos_theta).unwrap(),
        )
    });
    Ok((period, Some(approx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodicity::rational::parse_rational;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn s3_examples() {
        assert!((s3_criterion(1.0, 29.0 / 36.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((s3_criterion(2.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((s3_criterion(2.0, 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(s3_criterion(2.0, 1.0), Err(Error::Degenerate(_))));
        assert!(s3_criterion(1.0, 1.5).is_err());
    }

    #[test]
    fn omega_examples() {
        assert!((ikawa_omega(29.0 / 36.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(ikawa_omega(1.0).unwrap(), 0.5);
        assert_eq!(ikawa_omega(11.0 / 16.0).unwrap(), 0.75);
        assert_eq!(
            ikawa_omega_exact(&rat("29/36")).unwrap().value,
            Some(rat("2/3"))
        );
        let caption = ikawa_omega_exact(&rat("29/37")).unwrap();
        assert!(!caption.is_rational());
        assert_eq!(caption.squared, rat("5/4") - rat("29/37"));
    }

    #[test]
    fn exact_criteria() {
        let e = s3_criterion_exact(&rat("1"), &rat("29/36")).unwrap();
        assert_eq!(e.value, Some(rat("3/4")));
        let e = s3_criterion_exact(&rat("2"), &rat("1/2")).unwrap();
        assert_eq!(e.value, Some(rat("1")));
        let e = s3_criterion_exact(&rat("2"), &rat("0")).unwrap();
        assert_eq!(e.value, None);
        assert_eq!(e.squared, rat("1/2"));
        let e = s3_criterion_exact(&rat("-1"), &rat("29/36")).unwrap();
        assert_eq!(e.value, None);
        let e = s3_criterion_exact(&rat("-3"), &rat("1/4")).unwrap();
        assert_eq!(e.value, Some(rat("-3/4")));
        assert!(s3_criterion_exact(&rat("2"), &rat("1")).is_err());
        // the general ratio reduces to the sphere criterion at alpha = 1
        for (q, c) in [("1", "29/36"), ("2", "0"), ("-3", "1/4"), ("5/7", "1/3")] {
            let a = closure_ratio_exact(&rat("1"), &rat(q), &rat(c)).unwrap();
            let b = s3_criterion_exact(&rat(q), &rat(c)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn closure_ratio_matches_float_forms() {
        let p = SasakiParams::from_alpha(1.0, 1.3).unwrap();
        for c in [-0.7, 0.0, 0.4, 0.95] {
            let a = closure_ratio(&p, c).unwrap();
            assert!((a - s3_criterion(1.3, c).unwrap()).abs() < 1e-14);
        }
        let p = SasakiParams::from_alpha(2.5, -0.8).unwrap();
        let exact = closure_ratio_exact(&rat("5/2"), &rat("-4/5"), &rat("3/10")).unwrap();
        let sq = crate::periodicity::rational::to_f64(&exact.squared);
        assert!((closure_ratio(&p, 0.3).unwrap().powi(2) - sq).abs() < 1e-14);
        assert!(closure_ratio(&p, 1.0).is_err());
    }

    #[test]
    fn predicted_periods() {
        let p = SasakiParams::from_alpha(1.0, 1.0).unwrap();
        for (omega, expect) in [(2.0 / 3.0, 12.0 * PI), (0.75, 8.0 * PI), (0.8, 20.0 * PI)] {
            let c = 1.25 - omega * omega;
            let (period, approx) = predicted_period(&p, c, 64, 1e-9).unwrap();
            assert!((period.unwrap() - expect).abs() < 1e-9, "omega {omega}");
            assert!(approx.unwrap().verdict.is_periodic());
        }
        assert_eq!(
            predicted_period(&p, 1.0, 64, 1e-9).unwrap().0,
            Some(2.0 * PI)
        );
        let half = SasakiParams::from_alpha(0.5, 1.0).unwrap();
        assert_eq!(predicted_period(&half, -1.0, 64, 1e-9).unwrap().0, Some(PI));
        let two = SasakiParams::from_alpha(1.0, 2.0).unwrap();
        let (none, approx) = predicted_period(&two, 0.0, 64, 1e-9).unwrap();
        assert!(none.is_none());
        assert!(!approx.unwrap().verdict.is_periodic());
        assert_eq!(period_from_ratio(0, 1, 2.0), PI);
        assert_eq!(period_from_ratio(-3, 5, 1.0), 5.0 * PI);
    }

    proptest! {
        #[test]
        fn criterion_times_two_omega_is_one(c in -0.999f64..0.999) {
            let v = s3_criterion(1.0, c).unwrap() * 2.0 * ikawa_omega(c).unwrap();
            prop_assert!((v - 1.0).abs() < 1e-12);
        }

        #[test]
        fn exact_agrees_with_float(qn in -40i64..40, qd in 1i64..12, cn in -12i64..=12) {
            let q = BigRational::new(qn.into(), qd.into());
            let c = BigRational::new(cn.into(), 12.into());
            let qf = qn as f64 / qd as f64;
            let cf = cn as f64 / 12.0;
            if let Ok(e) = s3_criterion_exact(&q, &c) {
                let v = s3_criterion(qf, cf).unwrap();
                prop_assert!((v * v - crate::periodicity::rational::to_f64(&e.squared)).abs() < 1e-12);
                if let Some(x) = e.value {
                    prop_assert!((crate::periodicity::rational::to_f64(&x) - v).abs() < 1e-12);
                }
            }
        }
    }
}
