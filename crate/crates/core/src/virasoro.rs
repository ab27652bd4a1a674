//! Correlators from the Virasoro constraints `L_m Z = 0`.
//!
//! Multiplying `L_m` by `2^{m+1}` and reading off the coefficient of
//! `ε^{2g-2} t_{d_1} ⋯ t_{d_n}` in `Z^{-1} L_m Z` gives, for `m >= 0` and
//! `X = (d_1, …, d_n)`,
//!
//! ```text
//! (2m+3)!! ⟨τ_{m+1} X⟩_g
//!     = Σ_j (2d_j+2m+1)!!/(2d_j-1)!! ⟨τ_{d_j+m} X∖d_j⟩_g
//!     + ½ Σ_{r+s=m-1} (2r+1)!!(2s+1)!! ( ⟨τ_r τ_s X⟩_{g-1}
//!                                      + Σ_{I⊔J=X, h+h'=g} ⟨τ_r I⟩_h ⟨τ_s J⟩_{h'} )
//!     + ⅛ δ_{m,0} δ_{g,1} δ_{X,∅}.
//! ```
//!
//! The `m = 0` constant fixes `⟨τ_1⟩_1 = 1/24`; the `t_0²/2ε²` term of
//! `L_{-1}` fixes `⟨τ_0³⟩_0 = 1`. Unstable correlators are zero. Each step
//! pivots on the largest exponent, which keeps the recursion finite.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::arith::{double_factorial, int, ratio, Rational};
use crate::error::{Error, Result};
use crate::index::{CorrelatorKey, MultiIndex};
use crate::source::{CorrelatorSource, Producer};

fn df(n: i64) -> BigInt {
    double_factorial(n).expect("odd arguments >= -1")
}

/// `g` with `Σd = 3g − 3 + n`, if integral and nonnegative.
fn genus_of(ds: &[u32]) -> Option<i64> {
    let num = ds.iter().map(|&d| d as i64).sum::<i64>() + 3 - ds.len() as i64;
    (num >= 0 && num % 3 == 0).then_some(num / 3)
}

#[derive(Default)]
pub struct VirasoroOracle {
    memo: RwLock<HashMap<CorrelatorKey, Rational>>,
}

impl VirasoroOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().len()
    }

    /// Value at genus `g` for any exponent list (sorted internally).
    /// Returns zero for unstable or dimension-mismatched input.
    fn value(&self, g: i64, ds: &[u32]) -> Rational {
        let n = ds.len() as i64;
        let total: i64 = ds.iter().map(|&d| d as i64).sum();
        if g < 0 || 2 * g - 2 + n <= 0 || total != 3 * g - 3 + n {
            return Rational::zero();
        }
        let mut sorted = ds.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let key = CorrelatorKey { g, ds: sorted };
        if let Some(v) = self.memo.read().get(&key) {
            return v.clone();
        }
        let v = self.compute(&key);
        self.memo.write().entry(key).or_insert(v).clone()
    }

    fn compute(&self, key: &CorrelatorKey) -> Rational {
        let g = key.g;
        let ds = &key.ds;
        if ds[0] == 0 {
            // only ⟨τ_0^3⟩_0 is both stable and dimension-matching
            return Rational::one();
        }
        let n = ds.len() as i64;
        let last = ds[ds.len() - 1];
        if n >= 4 || (n >= 2 && g >= 1) {
            // L_{-1} and L_0 first: they remove a τ_0 or τ_1 insertion and
            // leave a stable correlator whenever n ≥ 2 at g ≥ 1 or n ≥ 4
            let rest = &ds[..ds.len() - 1];
            if last == 0 {
                let mut acc = Rational::zero();
                for j in 0..rest.len() {
                    if rest[j] > 0 {
                        let mut lowered = rest.to_vec();
                        lowered[j] -= 1;
                        acc += self.value(g, &lowered);
                    }
                }
                return acc;
            }
            if last == 1 {
                return self.value(g, rest) * int(2 * g - 3 + n);
            }
        }
        let m = ds[0] as i64 - 1;
        let rest = &ds[1..];
        let mut acc = Rational::zero();

        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let coeff = Rational::new(df(2 * dj + 2 * m + 1), df(2 * dj - 1));
            let mut shifted = rest.to_vec();
            shifted[j] = (dj + m) as u32;
            let v = self.value(g, &shifted);
            if !v.is_zero() {
                acc += coeff * v;
            }
        }

        if m >= 1 {
            let mut quad = Rational::zero();
            // the quadratic part is symmetric under (r, I) ↔ (s, J), so
            // only r ≤ s is visited and off-diagonal pairs count twice
            for r in 0..m {
                let s = m - 1 - r;
                if r > s {
                    break;
                }
                let mult = if r < s { 2 } else { 1 };
                let coeff = df(2 * r + 1) * df(2 * s + 1) * mult;
                let mut term = Rational::zero();

                let mut with_rs = vec![r as u32, s as u32];
                with_rs.extend_from_slice(rest);
                term += self.value(g - 1, &with_rs);

                let k = rest.len();
                for mask in 0u32..(1 << k) {
                    let (mut left, mut right) = (vec![r as u32], vec![s as u32]);
                    for (i, &d) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            left.push(d);
                        } else {
                            right.push(d);
                        }
                    }
                    // the dimension constraint fixes the genus of each side
                    let Some(h) = genus_of(&left) else { continue };
                    if h > g {
                        continue;
                    }
                    let a = self.value(h, &left);
                    if a.is_zero() {
                        continue;
                    }
                    let b = self.value(g - h, &right);
                    if !b.is_zero() {
                        term += a * b;
                    }
                }
                quad += term * coeff;
            }
            acc += quad / BigInt::from(2);
        }

        if m == 0 && g == 1 && rest.is_empty() {
            acc += ratio(1, 8);
        }
        acc / df(2 * m + 3)
    }

    fn checked_genus(d: &MultiIndex) -> Result<Option<i64>> {
        d.stable_genus()
    }

    /// String equation: `⟨τ_0 X⟩_g = Σ_j ⟨X with d_j ↦ d_j - 1⟩_g`.
    pub fn string_reduce(&self, d: &MultiIndex) -> Result<Rational> {
        let Some(pos) = d.ds().iter().position(|&x| x == 0) else {
            return Err(Error::Domain(format!("({d}) has no τ_0 insertion")));
        };
        let Some(g) = Self::checked_genus(d)? else {
            return Ok(Rational::zero());
        };
        let mut rest = d.ds().to_vec();
        rest.remove(pos);
        if g == 0 && rest.len() == 2 {
            // ⟨τ_0 τ_0 τ_0⟩_0 is the base value, not a reduction
            return Ok(Rational::one());
        }
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut lowered = rest.clone();
            lowered[j] -= 1;
            acc += self.value(g, &lowered);
        }
        Ok(acc)
    }

    /// Dilaton equation: `⟨τ_1 X⟩_g = (2g - 2 + |X|) ⟨X⟩_g`, `X` stable.
    pub fn dilaton_reduce(&self, d: &MultiIndex) -> Result<Rational> {
        let Some(pos) = d.ds().iter().position(|&x| x == 1) else {
            return Err(Error::Domain(format!("({d}) has no τ_1 insertion")));
        };
        let Some(g) = Self::checked_genus(d)? else {
            return Ok(Rational::zero());
        };
        let mut rest = d.ds().to_vec();
        rest.remove(pos);
        let k = rest.len() as i64;
        if 2 * g - 2 + k <= 0 {
            return Err(Error::Domain(format!("removing τ_1 from ({d}) leaves an unstable index")));
        }
        Ok(self.value(g, &rest) * BigInt::from(2 * g - 2 + k))
    }
}

impl CorrelatorSource for VirasoroOracle {
    fn producer(&self) -> Producer {
        Producer::Virasoro
    }

    fn correlator(&self, d: &MultiIndex) -> Result<Rational> {
        match d.stable_genus()? {
            None => Ok(Rational::zero()),
            Some(g) => Ok(self.value(g, d.ds())),
        }
    }
}
