//! Exact rational scalars and the handful of integer helpers the rest of the
//! crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

/// Exact rational number. No floating point value is ever produced by the
/// geometry or measure code; decimals only appear in report output.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`, normalizing the result.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let parsed = match trimmed.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad numerator in {text:?}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad denominator in {text:?}")))?;
            if d.is_zero() {
                return Err(CoreError::Parse(format!("zero denominator in {text:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            trimmed
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad rational {text:?}")))?,
        ),
    };
    Ok(parsed)
}

/// Canonical `"p/q"` form (`"p"` for integers).
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    // numerator and denominator may overflow f64 individually
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = value.denom().bits().max(value.numer().bits()).saturating_sub(1000);
            let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn ceil_int(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn floor_int(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Ceiling of `numer / denom` for `denom > 0`.
pub fn ceil_div_i128(numer: i128, denom: i128) -> i128 {
    debug_assert!(denom > 0);
    let q = numer.div_euclid(denom);
    if numer.rem_euclid(denom) == 0 {
        q
    } else {
        q + 1
    }
}

pub fn to_i128(value: &BigInt) -> Result<i128> {
    value.to_i128().ok_or(CoreError::Overflow)
}
