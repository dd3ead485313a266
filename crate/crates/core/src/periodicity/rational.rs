//! Best rational approximation with a bounded denominator, and exact
//! square roots of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DENOMINATOR: u64 = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Whether a value was matched by a small-denominator rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Periodic,
    /// No rational with denominator at most the bound lies within the
    /// tolerance. This is a statement about the resolution, not a proof of
    /// irrationality.
    AperiodicAtResolution,
}

impl Verdict {
    pub fn is_periodic(self) -> bool {
        matches!(self, Verdict::Periodic)
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Periodic => "periodic",
            Verdict::AperiodicAtResolution => "aperiodic-at-resolution",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub numerator: i64,
    pub denominator: u64,
    pub value: f64,
    /// `|value - numerator/denominator|`.
    pub error: f64,
    pub verdict: Verdict,
}

impl RationalApprox {
    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// The closest fraction to `x` with denominator at most `max_denominator`
/// (ties go to the smaller denominator), computed exactly from the binary
/// value of `x`. The verdict is periodic iff the error is below `tol`.
pub fn rational_approx(x: f64, max_denominator: u64, tol: f64) -> Result<RationalApprox> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    if max_denominator < 1 {
        return Err(Error::domain(
            "max_denominator",
            max_denominator as f64,
            "max_denominator >= 1",
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let exact = BigRational::from_float(x).ok_or(Error::NonFinite("x"))?;
    let best = limit_denominator(&exact, &BigInt::from(max_denominator));
    let error = (&exact - &best).abs().to_f64().unwrap_or(f64::INFINITY);
    let numerator = best.numer().to_i64().ok_or_else(|| {
        Error::Contract(format!(
            "numerator of the approximation to {x} overflows i64"
        ))
    })?;
    let denominator = best.denom().to_u64().unwrap();
    Ok(RationalApprox {
        numerator,
        denominator,
        value: x,
        error,
        verdict: if error < tol {
            Verdict::Periodic
        } else {
            Verdict::AperiodicAtResolution
        },
    })
}

/// Continued-fraction convergents plus the best semiconvergent.
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::from(1),
        BigInt::from(1),
        BigInt::zero(),
    );
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let rem = &n - &a * &d;
        n = std::mem::replace(&mut d, rem);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

/// `√x` when `x` is the square of a rational, else `None`.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Exact value of a finite float.
pub fn exact_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::NonFinite("x"))
}

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125` or `1e-3`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not a fraction or decimal"));
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("`{text}` has a zero denominator")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut num = BigInt::parse_bytes(all.as_bytes(), 10).ok_or_else(bad)?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Lossy conversion for display and for feeding float routines.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Small fractions as `p/q`, integers without a denominator.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn big(v: i64) -> BigRational {
    BigRational::from_i64(v).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive search over every denominator.
    fn brute(x: f64, max_den: u64) -> (i64, u64, f64) {
        let mut best = (0i64, 1u64, f64::INFINITY);
        for d in 1..=max_den {
            let p = (x * d as f64).round() as i64;
            for cand in [p - 1, p, p + 1] {
                let e = (x - cand as f64 / d as f64).abs();
                if e < best.2 - 1e-18 {
                    best = (cand, d, e);
                }
            }
        }
        best
    }

    #[test]
    fn examples() {
        let a = rational_approx(0.75, 64, 1e-9).unwrap();
        assert_eq!((a.numerator, a.denominator, a.error), (3, 4, 0.0));
        assert!(a.verdict.is_periodic());

        let x = 0.5f64.sqrt();
        let a = rational_approx(x, 64, 1e-9).unwrap();
        assert_eq!(a.verdict, Verdict::AperiodicAtResolution);
        let (p, d, e) = brute(x, 64);
        assert_eq!((a.numerator, a.denominator), (p, d));
        assert!((a.error - e).abs() < 1e-15 && e > 1e-9);
        assert_eq!((p, d), (41, 58));

        let a = rational_approx(2.0 / 3.0 + 1e-12, 64, 1e-9).unwrap();
        assert_eq!((a.numerator, a.denominator), (2, 3));
        assert!(a.verdict.is_periodic());

        assert!(matches!(
            rational_approx(f64::NAN, 64, 1e-9),
            Err(Error::NonFinite(_))
        ));
        assert!(rational_approx(0.3, 0, 1e-9).is_err());
        assert!(rational_approx(0.3, 10, 0.0).is_err());
        let neg = rational_approx(-1.0 / 7.0, 64, 1e-9).unwrap();
        assert_eq!((neg.numerator, neg.denominator), (-1, 7));
    }

    #[test]
    fn sqrt_and_parse() {
        let r = parse_rational("29/36").unwrap();
        assert_eq!(r, BigRational::new(29.into(), 36.into()));
        assert_eq!(
            parse_rational("-0.125").unwrap(),
            BigRational::new((-1).into(), 8.into())
        );
        assert_eq!(
            parse_rational("1e-3").unwrap(),
            BigRational::new(1.into(), 1000.into())
        );
        assert_eq!(parse_rational("2.5E1").unwrap(), big(25));
        assert_eq!(
            parse_rational(".5").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("0x10").is_err());
        let sixteen_ninths = BigRational::new(16.into(), 9.into());
        assert_eq!(
            rational_sqrt(&sixteen_ninths),
            Some(BigRational::new(4.into(), 3.into()))
        );
        assert_eq!(rational_sqrt(&big(2)), None);
        assert_eq!(rational_sqrt(&big(-4)), None);
        assert_eq!(format_rational(&sixteen_ninths), "16/9");
        assert_eq!(format_rational(&big(-3)), "-3");
    }

    proptest! {
        #[test]
        fn matches_exhaustive_search(x in -3.0f64..3.0, max_den in 1u64..80) {
            let a = rational_approx(x, max_den, 1e-9).unwrap();
            let (_, _, e) = brute(x, max_den);
            prop_assert!(a.denominator <= max_den);
            prop_assert!((a.error - e).abs() < 1e-14);
            prop_assert_eq!(num_integer::gcd(a.numerator.unsigned_abs(), a.denominator), 1);
            prop_assert_eq!(a.verdict.is_periodic(), a.error < 1e-9);
        }

        #[test]
        fn recovers_small_fractions(p in -200i64..200, q in 1u64..64) {
            let x = p as f64 / q as f64;
            let a = rational_approx(x, 64, 1e-9).unwrap();
            let g = num_integer::gcd(p.unsigned_abs(), q).max(1);
            prop_assert_eq!((a.numerator, a.denominator), (p / g as i64, q / g));
            prop_assert!(a.verdict.is_periodic());
        }
    }
}
