//! Dilaton- and string-type recursions among the closed-form `G_k`,
//! checked by exact substitution.

use num_traits::Zero;
use serde::Serialize;

use super::library::{g_k, MultiplicityProfile, LIBRARY_MAX_K};
use crate::arith::{int, pow_i, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RecursionRow {
    pub profile: MultiplicityProfile,
    pub k: usize,
    #[serde(serialize_with = "crate::arith::as_string::serialize")]
    pub dilaton_residual: Rational,
    #[serde(serialize_with = "crate::arith::as_string::serialize")]
    pub string_residual: Rational,
}

impl RecursionRow {
    pub fn is_zero(&self) -> bool {
        self.dilaton_residual.is_zero() && self.string_residual.is_zero()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub rows: Vec<RecursionRow>,
}

impl RecursionReport {
    /// Nonzero residuals at orders where the closed forms are proved.
    pub fn hard_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.k <= 2 && !r.is_zero()).count()
    }

    pub fn warnings(&self) -> usize {
        self.rows.iter().filter(|r| r.k > 2 && !r.is_zero()).count()
    }
}

fn gk(k: usize, p: &MultiplicityProfile) -> Rational {
    g_k(k, p).expect("order within library")
}

/// `(-1)^j (2n-5)^j / 6^{j+1}`.
fn weight(n: i64, j: usize) -> Rational {
    let r = Rational::new(pow_i(2 * n - 5, j as u32), pow_i(6, j as u32 + 1));
    if j.is_multiple_of(2) {
        r
    } else {
        -r
    }
}

/// Residual of the dilaton-type recursion at order `k`.
pub fn dilaton_residual(k: usize, prof: &MultiplicityProfile) -> Rational {
    let n = prof.n;
    let lower = prof.shifted(1, -1).with_n(n - 1);
    let lhs = gk(k, prof) - gk(k, &lower);
    let rhs = (0..k).fold(Rational::zero(), |acc, j| {
        acc + weight(n, j) * int(n - 4) * gk(k - 1 - j, &lower)
    });
    lhs - rhs
}

/// Residual of the string-type recursion at order `k`.
pub fn string_residual(k: usize, prof: &MultiplicityProfile) -> Rational {
    let n = prof.n;
    let drop0 = prof.shifted(0, -1).with_n(n - 1);
    let drop1 = prof.shifted(1, -1).with_n(n - 1);
    let lhs = gk(k, prof) - gk(k, &drop0);

    let mut rhs = Rational::zero();
    for j in 0..k {
        let w = weight(n, j);
        let order = k - 1 - j;
        rhs += &w * int(3 * prof.p(1)) * (gk(order, &drop1) - gk(order, &drop0));
        let base = gk(order, &drop0);
        for i in 2..=(3 * k - 3 - 3 * j) / 2 {
            let moved = drop0.shifted(i - 1, 1).shifted(i, -1);
            rhs += &w * int((2 * i as i64 + 1) * prof.p(i)) * (gk(order, &moved) - &base);
        }
        rhs += &w * int(3 * n - 6 - prof.p(0)) * base;
    }
    for j in 1..=k {
        rhs += weight(n, j) * int(6) * gk(k - j, &drop0);
    }
    lhs - rhs
}

/// Exact residuals of both recursions for every `k ≤ max_k` and profile.
pub fn check_gk_recursions(max_k: usize, profiles: &[MultiplicityProfile]) -> Result<RecursionReport> {
    if max_k > LIBRARY_MAX_K {
        return Err(Error::Domain(format!(
            "closed forms are available up to k = {LIBRARY_MAX_K}, asked for {max_k}"
        )));
    }
    let mut rows = Vec::new();
    for prof in profiles {
        for k in 0..=max_k {
            rows.push(RecursionRow {
                profile: prof.clone(),
                k,
                dilaton_residual: dilaton_residual(k, prof),
                string_residual: string_residual(k, prof),
            });
        }
    }
    Ok(RecursionReport { rows })
}

/// Profiles of every sorted `(d_1, …, d_{n-1})` with `2 ≤ n ≤ max_n` and
/// entries at most `max_entry`.
pub fn sample_profiles(max_n: i64, max_entry: u32) -> Vec<MultiplicityProfile> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let len = (n - 1) as usize;
        let mut cur = vec![0u32; len];
        loop {
            if cur.windows(2).all(|w| w[0] >= w[1]) {
                out.push(MultiplicityProfile::from_exponents(n, &cur));
            }
            let mut i = 0;
            while i < len && cur[i] == max_entry {
                cur[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
            cur[i] += 1;
        }
    }
    out
}
