//! Exact integer and rational helpers shared by every module.
//!
//! Factorials and odd double factorials live in grow-only tables behind a
//! read-write lock: readers never block each other and an entry, once
//! written, never changes.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};

/// The universal value type: an exact rational in lowest terms.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

// Entry i holds (2i - 1)!!, so entry 0 is (-1)!! = 1.
fn odd_double_factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

fn grow_lookup(
    table: &RwLock<Vec<BigInt>>,
    idx: usize,
    next: impl Fn(usize, &BigInt) -> BigInt,
) -> BigInt {
    if let Some(v) = table.read().get(idx) {
        return v.clone();
    }
    let mut w = table.write();
    while w.len() <= idx {
        let i = w.len();
        let v = next(i, &w[i - 1]);
        w.push(v);
    }
    w[idx].clone()
}

/// `n!` for `n >= 0`.
pub fn factorial(n: u64) -> BigInt {
    grow_lookup(factorial_table(), n as usize, |i, prev| prev * BigInt::from(i))
}

/// `n!!` with the convention `(-1)!! = 1`, `0!! = 1`.
///
/// Anything below `-1` is a domain error; `(-3)!!` is deliberately left
/// undefined.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::Domain(format!("({n})!! is undefined")));
    }
    if n <= 0 {
        return Ok(BigInt::one());
    }
    if n % 2 == 1 {
        let idx = ((n + 1) / 2) as usize;
        Ok(grow_lookup(odd_double_factorial_table(), idx, |i, prev| {
            prev * BigInt::from(2 * i - 1)
        }))
    } else {
        // (2m)!! = 2^m m!
        let m = (n / 2) as u64;
        Ok(factorial(m) << (m as usize))
    }
}

pub fn pow_i(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `24^g g!` as an integer.
pub fn twenty_four_pow_fact(g: u64) -> BigInt {
    pow_i(24, g as u32) * factorial(g)
}

pub fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Serialize as `numerator/denominator` in base 10 (denominator always present).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer. The result is reduced; a zero
/// denominator is rejected.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
    let den: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

/// Decimal approximation for display columns only.
pub fn approx_decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale: BigInt = num_traits::pow(BigInt::from(10), digits);
    let scaled: BigInt = (a.numer() * &scale + a.denom() / 2) / a.denom();
    let int_part = &scaled / &scale;
    let frac: String = (&scaled % &scale).to_string();
    let pad = "0".repeat(digits.saturating_sub(frac.len()));
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{pad}{frac}")
}

/// Serde adapters writing rationals as `"num/den"` strings.
pub mod as_string {
    use serde::Serializer;

    use super::{format_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn option<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }
}
