//! Finite-genus evidence tables for uniform large-genus statements.
//!
//! `G_d(g)` is symmetric in `d`, so scans run over partitions
//! `d_1 ≥ … ≥ d_n` rather than compositions.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::library::{g_k, MultiplicityProfile, LIBRARY_MAX_K};
use crate::arith::{int, pow_i, Rational};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::source::CorrelatorSource;

/// Enumeration limits; exceeding one is a refusal, never a silent cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanCaps {
    pub max_n: usize,
    pub max_total: i64,
    pub max_partitions: Option<usize>,
}

impl Default for ScanCaps {
    fn default() -> Self {
        ScanCaps { max_n: 4, max_total: 140, max_partitions: None }
    }
}

/// Partitions of `total` into exactly `parts` entries (zeros allowed),
/// each at least `min`, listed nonincreasing and in descending
/// lexicographic order.
pub fn partitions(total: i64, parts: usize, min: u32) -> Vec<Vec<u32>> {
    fn rec(left: i64, parts: usize, cap: i64, min: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining `parts` entries lie in [min, cap] and sum to `left`
        let hi = cap.min(left - min * (parts as i64 - 1));
        let lo = min.max((left + parts as i64 - 1) / parts as i64);
        for v in (lo..=hi).rev() {
            cur.push(v as u32);
            rec(left - v, parts - 1, v, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total >= min as i64 * parts as i64 {
        rec(total, parts, total, min as i64, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of partitions [`partitions`] would return, without building them.
pub fn count_partitions(total: i64, parts: usize, min: u32) -> usize {
    let shifted = total - min as i64 * parts as i64;
    if parts == 0 || shifted < 0 {
        return (parts == 0 && total == 0) as usize;
    }
    // partitions of `shifted` into at most `parts` parts
    let s = shifted as usize;
    let mut table = vec![0usize; s + 1];
    table[0] = 1;
    for part in 1..=parts {
        for v in part..=s {
            table[v] += table[v - part];
        }
    }
    table[s]
}

fn check_caps(n: usize, g: i64, count: usize, caps: &ScanCaps) -> Result<()> {
    if n > caps.max_n {
        return Err(Error::Refused(format!("n = {n} exceeds the cap max_n = {}", caps.max_n)));
    }
    let total = 3 * g - 3 + n as i64;
    if total > caps.max_total {
        return Err(Error::Refused(format!(
            "3g-3+n = {total} at g = {g} exceeds the cap max_total = {}",
            caps.max_total
        )));
    }
    if let Some(limit) = caps.max_partitions {
        if count > limit {
            return Err(Error::Refused(format!(
                "{count} partitions at g = {g} exceed the cap max_partitions = {limit}"
            )));
        }
    }
    Ok(())
}

fn check_stable(n: usize, g: i64) -> Result<()> {
    if n == 0 || g < 0 || 2 * g - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub g: i64,
    /// `None` when the restricted partition set is empty.
    #[serde(serialize_with = "crate::arith::as_string::option")]
    pub max_deviation: Option<Rational>,
    pub argmax: Option<Vec<u32>>,
    pub partitions: usize,
    pub note: Option<String>,
}

/// Maximum of `f` over partitions; ties go to the first partition in
/// enumeration order, so the result is independent of scheduling.
fn max_over(
    parts: &[Vec<u32>],
    f: impl Fn(&[u32]) -> Result<Rational> + Sync,
) -> Result<Option<(Rational, Vec<u32>)>> {
    let values = parts.par_iter().map(|p| f(p)).collect::<Result<Vec<_>>>()?;
    let mut best: Option<(Rational, Vec<u32>)> = None;
    for (v, p) in values.into_iter().zip(parts) {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, p.clone()));
        }
    }
    Ok(best)
}

fn normalized(source: &dyn CorrelatorSource, p: &[u32]) -> Result<Rational> {
    source.normalized(&MultiIndex::new(p.to_vec())?)
}

/// `max_d |G_d(g) − 1|` over partitions of `3g−3+n` into `n` parts.
pub fn dgzz_scan(source: &dyn CorrelatorSource, n: usize, genera: &[i64], caps: &ScanCaps) -> Result<Vec<ScanRow>> {
    restricted_scan(source, n, genera, 0, caps, |_| int(1), 0)
}

/// `max_d g^K |G_d(g) − Σ_{k≤K} P_k(n)/g^k|` over partitions with every
/// `d_i ≥ [3K/2]`, taking `P_k(n)` to be the closed-form `G_k` at vanishing
/// multiplicities.
///
/// On the restricted set every `p_i` with `i < [3K/2]` is zero, whether
/// multiplicities are counted over all `n` exponents or the first `n−1`,
/// so the two conventions give the same table here.
pub fn theorem3_scan(
    source: &dyn CorrelatorSource,
    n: usize,
    k: usize,
    genera: &[i64],
    caps: &ScanCaps,
) -> Result<Vec<ScanRow>> {
    if k > LIBRARY_MAX_K {
        return Err(Error::Domain(format!(
            "closed forms are available up to K = {LIBRARY_MAX_K}, asked for {k}"
        )));
    }
    let zero = MultiplicityProfile::new(n as i64, vec![0; 5]);
    let coeffs: Vec<Rational> = (0..=k).map(|i| g_k(i, &zero).expect("within library")).collect();
    let approx = move |g: i64| {
        coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, c)| acc + c / Rational::from_integer(pow_i(g, i as u32)))
    };
    restricted_scan(source, n, genera, (3 * k / 2) as u32, caps, approx, k as u32)
}

fn restricted_scan(
    source: &dyn CorrelatorSource,
    n: usize,
    genera: &[i64],
    min: u32,
    caps: &ScanCaps,
    target: impl Fn(i64) -> Rational,
    power: u32,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(genera.len());
    for &g in genera {
        check_stable(n, g)?;
        let total = 3 * g - 3 + n as i64;
        let count = count_partitions(total, n, min);
        check_caps(n, g, count, caps)?;
        if count == 0 {
            rows.push(ScanRow {
                g,
                max_deviation: None,
                argmax: None,
                partitions: 0,
                note: Some(format!("no partitions with every part ≥ {min}")),
            });
            continue;
        }
        let parts = partitions(total, n, min);
        let t = target(g);
        let scale = Rational::from_integer(pow_i(g, power));
        let best = max_over(&parts, |p| Ok((normalized(source, p)? - &t).abs() * &scale))?;
        let (dev, arg) = best.expect("nonempty partition set");
        rows.push(ScanRow { g, max_deviation: Some(dev), argmax: Some(arg), partitions: parts.len(), note: None });
    }
    Ok(rows)
}

/// Whether the deviations along the rows strictly decrease.
pub fn strictly_decreasing(rows: &[ScanRow]) -> bool {
    rows.windows(2).all(|w| match (&w[0].max_deviation, &w[1].max_deviation) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    })
}
