//! Closed-form polynomial expressions for the first `1/g` coefficients.
//!
//! Every evaluator works on integer arguments (multiplicities may be
//! negative inside recursion identities) and returns an exact rational.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;

/// Exponent multiplicities of a fixed tuple `(d_1, …, d_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    pub n: i64,
    /// `p[i]` = multiplicity of `i`; entries past the end read as zero.
    pub p: Vec<i64>,
    /// `|d| = Σ i p_i`, when the profile came from a concrete tuple.
    pub total: Option<i64>,
}

impl MultiplicityProfile {
    pub fn new(n: i64, p: Vec<i64>) -> Self {
        MultiplicityProfile { n, p, total: None }
    }

    /// Profile of `exponents`, attached to point count `n`.
    pub fn from_exponents(n: i64, exponents: &[u32]) -> Self {
        let max = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut p = vec![0; (max + 1).max(5)];
        for &d in exponents {
            p[d as usize] += 1;
        }
        let total = exponents.iter().map(|&d| d as i64).sum();
        MultiplicityProfile { n, p, total: Some(total) }
    }

    pub fn p(&self, i: usize) -> i64 {
        self.p.get(i).copied().unwrap_or(0)
    }

    /// Copy with `p_i` shifted by `delta` (extending as needed).
    pub fn shifted(&self, i: usize, delta: i64) -> Self {
        let mut out = self.clone();
        if out.p.len() <= i {
            out.p.resize(i + 1, 0);
        }
        out.p[i] += delta;
        out.total = None;
        out
    }

    pub fn with_n(&self, n: i64) -> Self {
        MultiplicityProfile { n, ..self.clone() }
    }
}

fn q(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn g1(n: i64, p0: i64) -> Rational {
    let (n, p0) = (n as i128, p0 as i128);
    q((n - 1) * (n - 6) + (5 - p0) * p0, 12)
}

pub fn g2(n: i64, p0: i64, p1: i64, p2: i64) -> Rational {
    let (n, p0, p1, p2) = (n as i128, p0 as i128, p1 as i128, p2 as i128);
    let num = (n - 1) * (3 * n.pow(3) - 59 * n.pow(2) + 298 * n - 228)
        + p0 * (346 - 390 * n + 30 * n.pow(2))
        + p0.pow(2) * (69 + 78 * n - 6 * n.pow(2))
        - 46 * p0.pow(3)
        + 3 * p0.pow(4)
        - p1 * (204 - 180 * p0 + 36 * p0.pow(2))
        - 60 * p2;
    q(num, 864)
}

/// Conjecture-dependent third coefficient.
pub fn g3(n: i64, p0: i64, p1: i64, p2: i64, p3: i64) -> Rational {
    let (n, p0, p1, p2, p3) = (n as i128, p0 as i128, p1 as i128, p2 as i128, p3 as i128);
    // every term brought over the common denominator 10368
    let t1 = n.pow(6) - 41 * n.pow(5) + 555 * n.pow(4) - 3031 * n.pow(3) + 6092 * n.pow(2) - 5160 * n + 1584;
    let t2 = -p0.pow(6) + 31 * p0.pow(5) + 3 * p0.pow(4) * (n.pow(2) - 19 * n - 73 + 12 * p1);
    let t3 = -p0.pow(3) * (46 * n.pow(2) - 874 * n + 552 * p1 + 120 * p2 + 127);
    let t4 = p0.pow(2) * (-3 * n.pow(4) + 98 * n.pow(3) - 36 * n.pow(2) * (p1 + 20) + n * (684 * p1 - 1253));
    let t5 = 4 * p0.pow(2) * (-54 * p1.pow(2) + 312 * p1 + 285 * p2 + 409);
    let t6 = p0 * (15 * n.pow(4) - 490 * n.pow(3) + n.pow(2) * (4291 + 180 * p1) - 12 * n * (572 + 285 * p1));
    let t7 = 12 * p0 * (90 * p1.pow(2) + 171 * p1 - 285 * p2 - 70 * p3 + 258);
    let t8 = -12
        * (102 * p1.pow(2)
            + p1 * (17 * n.pow(2) - 323 * n + 60 * p2 + 402)
            + 5 * (n.pow(2) * p2 - 19 * n * p2 - 28 * p3));
    q(t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8, 10368)
}

/// `G_k(n, p_0, …)` for `k <= 3`; `None` past the shipped library.
pub fn g_k(k: usize, profile: &MultiplicityProfile) -> Option<Rational> {
    let n = profile.n;
    let p = |i| profile.p(i);
    match k {
        0 => Some(q(1, 1)),
        1 => Some(g1(n, p(0))),
        2 => Some(g2(n, p(0), p(1), p(2))),
        3 => Some(g3(n, p(0), p(1), p(2), p(3))),
        _ => None,
    }
}

pub const LIBRARY_MAX_K: usize = 3;

/// First coefficient of the Liu–Xu expansion, written in terms of the
/// number `m` of fixed insertions `(d_1, …, d_m)`.
pub fn c1(m: i64, total: i64, p0: i64) -> Rational {
    let (m, d, p0) = (m as i128, total as i128, p0 as i128);
    q(-2 * d * d + 4 * (m - 1) * d + m * m - 5 * m + 5 * p0 - p0 * p0, 12)
}

/// Second Liu–Xu coefficient, same conventions as [`c1`].
pub fn c2(m: i64, total: i64, p0: i64, p1: i64, p2: i64) -> Rational {
    let (n, d, p0, p1, p2) = (m as i128, total as i128, p0 as i128, p1 as i128, p2 as i128);
    let num = 12 * d.pow(4) - 16 * (3 * n - 2) * d.pow(3)
        + 12 * n * (3 * n + 1) * d.pow(2)
        + 4 * (6 * n.pow(3) - 48 * n.pow(2) + 54 * n - 11) * d
        + n * (3 * n.pow(3) - 50 * n.pow(2) + 189 * n + 14)
        + 3 * p0.pow(2) * (4 * d * d - 8 * n * d + 8 * d - 2 * n * n + 22 * n - 12 * p1 + 47)
        + 3 * p0.pow(4)
        - 46 * p0.pow(3)
        - 60 * p2
        - 204 * p1
        + 2 * p0 * (-30 * d * d + 60 * n * d - 60 * d + 15 * n * n - 165 * n + 90 * p1 - 7);
    q(num, 864)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};

    #[test]
    fn one_point_profile_vanishes() {
        // n = 1 has G ≡ 1, so every higher coefficient must vanish
        let prof = MultiplicityProfile::new(1, vec![0; 5]);
        for k in 1..=3 {
            assert_eq!(g_k(k, &prof).unwrap(), int(0), "k={k}");
        }
        assert_eq!(c1(0, 0, 0), int(0));
        assert_eq!(c2(0, 0, 0, 0, 0), int(0));
    }

    #[test]
    fn dilaton_anchor() {
        let prof = MultiplicityProfile::from_exponents(2, &[1]);
        assert_eq!(g_k(1, &prof).unwrap(), ratio(-1, 3));
        assert_eq!(g_k(2, &prof).unwrap(), ratio(-1, 18));
        assert_eq!(c1(1, 1, 0), ratio(-1, 2));
    }

    #[test]
    fn profile_shifts() {
        let prof = MultiplicityProfile::from_exponents(4, &[0, 1, 1]);
        assert_eq!(prof.p(0), 1);
        assert_eq!(prof.p(1), 2);
        assert_eq!(prof.total, Some(2));
        let s = prof.shifted(1, -1).with_n(3);
        assert_eq!((s.n, s.p(1)), (3, 1));
    }
}
