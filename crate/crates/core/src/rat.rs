//! Rational helpers on top of `num::BigRational`.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p`, `-p`, `p/q`. Decimal literals are rejected on purpose.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // float conversion of huge numerators/denominators
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact square root when `q` is the square of a rational.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    // continued fraction walk for 0 < lo <= hi
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl < hi.floor() || hi.is_integer() {
        return fl + one();
    }
    let rest = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + rest.recip()
}

/// Rational approximation of `sqrt(q)` within `tol`, chosen with a small denominator.
pub fn sqrt_approx(q: &Rational, tol: &Rational) -> Rational {
    if let Some(r) = sqrt_exact(q) {
        return r;
    }
    let mut lo = zero();
    let mut hi = if q > &one() { q.clone() } else { one() };
    while &(&hi - &lo) > tol {
        let mid = (&lo + &hi) / int(2);
        if &(&mid * &mid) <= q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    simplest_between(&lo, &hi)
}

/// Decimal rendering with `digits` significant digits, rounding half away from zero.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = q.is_negative();
    let a = q.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = BigInt::from(10);
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let (fl, rem) = scaled.numer().div_rem(scaled.denom());
    let mut m = fl;
    if &rem * BigInt::from(2) >= *scaled.denom() {
        m += BigInt::one();
    }
    // rounding may have produced one extra digit
    let mut s = m.to_string();
    if s.len() > digits {
        s.pop();
        e += 1;
    }
    let body = if (-6..15).contains(&e) {
        let point = e + 1; // digits before the decimal point
        let mut out = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), s)
        } else if point as usize >= s.len() {
            format!("{}{}", s, "0".repeat(point as usize - s.len()))
        } else {
            format!("{}.{}", &s[..point as usize], &s[point as usize..])
        };
        if out.contains('.') {
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
        }
        out
    } else {
        let mut mant = if s.len() > 1 {
            format!("{}.{}", &s[..1], &s[1..])
        } else {
            s.clone()
        };
        if mant.contains('.') {
            while mant.ends_with('0') {
                mant.pop();
            }
            if mant.ends_with('.') {
                mant.pop();
            }
        }
        format!("{mant}e{e}")
    };
    if neg && body.chars().any(|c| c.is_ascii_digit() && c != '0') {
        format!("-{body}")
    } else {
        body
    }
}

pub fn sign(q: &Rational) -> Sign {
    q.numer().sign()
}

pub fn display(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_rejects_decimals() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert!(parse("0.5").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&frac(1, 3), &frac(1, 2)), frac(1, 2));
        assert_eq!(simplest_between(&frac(3, 10), &frac(4, 10)), frac(1, 3));
        assert_eq!(simplest_between(&frac(-4, 10), &frac(-3, 10)), frac(-1, 3));
        assert_eq!(simplest_between(&frac(-1, 10), &frac(3, 10)), zero());
        assert_eq!(simplest_between(&frac(7, 5), &frac(7, 5)), frac(7, 5));
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        let r = sqrt_approx(&int(2), &frac(1, 1_000_000));
        assert!((to_f64(&r) - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&frac(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&int(-1), 12), "-1");
        assert_eq!(to_decimal(&frac(1, 2), 12), "0.5");
        assert_eq!(to_decimal(&frac(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&frac(999_999, 1_000_000), 3), "1");
        assert_eq!(to_decimal(&int(123_456), 2), "120000");
        assert_eq!(to_decimal(&frac(1, 300_000_000), 3), "3.33e-9");
        assert_eq!(to_decimal(&zero(), 12), "0");
    }
}
