use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{double_factorial, twenty_four_pow_fact, Rational};
use crate::error::{Error, Result};
use crate::index::MultiIndex;

/// Which engine produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Producer {
    Mr,
    Virasoro,
}

impl fmt::Display for Producer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Producer::Mr => "mr",
            Producer::Virasoro => "virasoro",
        })
    }
}

impl FromStr for Producer {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mr" => Ok(Producer::Mr),
            "virasoro" => Ok(Producer::Virasoro),
            other => Err(format!("unknown producer {other:?}")),
        }
    }
}

/// `24^g g! Π(2d_j+1)!! / (6g+2n-5)!!`, the factor taking a raw
/// correlator to its normalized value.
pub fn normalization_factor(d: &MultiIndex, g: i64) -> Result<Rational> {
    let n = d.n() as i64;
    let mut num = twenty_four_pow_fact(g as u64);
    for &dj in d.ds() {
        num *= double_factorial(2 * dj as i64 + 1)?;
    }
    Ok(Rational::new(num, double_factorial(6 * g + 2 * n - 5)?))
}

/// Anything that can evaluate intersection numbers exactly.
///
/// Dimension-mismatched indices evaluate to zero; unstable ones are
/// errors.
pub trait CorrelatorSource: Sync {
    fn producer(&self) -> Producer;

    /// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`.
    fn correlator(&self, d: &MultiIndex) -> Result<Rational>;

    /// The normalized number `G_d(g)`.
    fn normalized(&self, d: &MultiIndex) -> Result<Rational> {
        match d.stable_genus()? {
            None => Ok(Rational::zero()),
            Some(g) => Ok(self.correlator(d)? * normalization_factor(d, g)?),
        }
    }
}

/// Convert a normalized value back to the raw correlator.
pub fn denormalize(d: &MultiIndex, normalized: Rational) -> Result<Rational> {
    match d.stable_genus()? {
        None => Ok(Rational::zero()),
        Some(g) => Ok(normalized / normalization_factor(d, g)?),
    }
}

/// `1 / (24^g g!)`, the one-point value `⟨τ_{3g-2}⟩_g`.
pub fn one_point(g: i64) -> Result<Rational> {
    if g < 1 {
        return Err(Error::Unstable { g, n: 1 });
    }
    Ok(Rational::new(BigInt::one(), twenty_four_pow_fact(g as u64)))
}
