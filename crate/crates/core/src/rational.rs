//! Exact rational helpers.
//!
//! Every value in the crate is a [`Rational`]; nothing is ever rounded. The
//! helpers here cover construction, the `p/q` text form used by the instance
//! format, and display-only decimal expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor: `q(1, 3)` is one third.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`. Decimal and exponent forms are rejected so that no
/// binary floating point value can leak into the computation.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let ok = !t.is_empty()
        && t.split('/').count() <= 2
        && t.split('/').all(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        });
    if !ok {
        return Err(Error::Parse(format!("not a rational literal: {text:?}")));
    }
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("not a rational literal: {text:?} ({e})")))
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal approximation with `digits` significant digits, truncated toward zero.
/// Display only.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let (int_part, mut rem) = a.numer().div_rem(a.denom());
    let den = a.denom().clone();
    let ten = BigInt::from(10);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_part.to_string());

    let mut significant = if int_part.is_zero() {
        0
    } else {
        int_part.to_string().len()
    };
    if rem.is_zero() || significant >= digits {
        return out;
    }
    out.push('.');
    let mut frac = String::new();
    while significant < digits && !rem.is_zero() {
        rem *= &ten;
        let (d, r2) = rem.div_rem(&den);
        rem = r2;
        let d = d.to_string();
        if significant > 0 || d != "0" {
            significant += 1;
        }
        frac.push_str(&d);
    }
    out.push_str(&frac);
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
