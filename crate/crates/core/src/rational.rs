//! Exact rationals: the scalar of the ground-truth layer.
//!
//! Values are `num`'s arbitrary-precision `BigRational`, always kept in lowest
//! terms with a positive denominator.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{format_err, Result};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^k` for any (possibly negative) exponent.
pub fn pow2(k: i64) -> Rational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Smallest `k >= 0` with `|q| + 2 <= 2^k`.
pub fn magnitude_bits(q: &Rational) -> u32 {
    let bound = q.abs() + int(2);
    let mut k = bound.numer().bits().saturating_sub(bound.denom().bits()) as u32;
    while pow2(k as i64) < bound {
        k += 1;
    }
    while k > 0 && pow2(k as i64 - 1) >= bound {
        k -= 1;
    }
    k
}

/// Parses `p/q`, an integer, or a decimal literal as an exact rational.
///
/// Decimals are read exactly: `0.25` is `1/4`, never a float.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    if t.is_empty() {
        return Err(format_err("empty rational literal"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_int(n, token)?;
        let d = parse_int(d, token)?;
        if d.is_zero() {
            return Err(format_err(format!("zero denominator in `{token}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(format_err(format!("invalid decimal `{token}`")));
        }
        let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(whole) || !digits_ok(frac) {
            return Err(format_err(format!("invalid decimal `{token}`")));
        }
        let whole_part = if whole.is_empty() { BigInt::zero() } else { parse_int(whole, token)? };
        let frac_part = if frac.is_empty() { BigInt::zero() } else { parse_int(frac, token)? };
        let scale = num::pow(BigInt::from(10), frac.len());
        let value = Rational::new(whole_part * &scale + frac_part, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_int(t, token)?))
}

fn parse_int(s: &str, token: &str) -> Result<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format_err(format!("invalid rational literal `{token}`")));
    }
    s.parse::<BigInt>().map_err(|_| format_err(format!("invalid rational literal `{token}`")))
}

/// Rounds `q` to `digits` decimal places (half away from zero) and renders it.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let sign = if q.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Decimal digits needed so that rounding costs at most `2^-(bits+1)`.
pub fn digits_for_bits(bits: u32) -> usize {
    // 10^-d / 2 <= 2^-(bits+1)  <=>  d >= bits * log10(2)
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
