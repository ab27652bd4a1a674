//! Normalized intersection numbers as a signed sum over permutations and
//! lattice points of cyclic trace coefficients.
//!
//! For `n >= 2` and `Σd = 3g - 3 + n`,
//!
//! ```text
//! G_d(g) = Σ_{σ(1)=1} γ_{d,σ}(g),
//! γ_{d,σ}(g) = 24^g g! (-1)^{m(σ)+1} / (6g-5+2n)!! · Σ_j a_{K_1(j), …, K_n(j)},
//! ```
//!
//! where `K_q(j) = d_{σ(q)} + J_{σ,q}(j_q) - J_{σ,q-1}(j_{q-1})`. Restricting
//! to `σ(1) = 1` absorbs the `1/n` of the full symmetric-group sum, since
//! `γ` is invariant under cyclic relabelling.

mod lattice;
mod perms;

pub use perms::{enumerate_permutations, PermutationIter, PermutationRecord};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{double_factorial, sign, twenty_four_pow_fact, Rational};
use crate::coefficients::{a_coeff_pattern, ACoeffCache, ACoeffKey};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::source::{denormalize, CorrelatorSource, Producer};
use lattice::Weights;

/// `J_{σ,q}(j)`: `-j-1` at an ascent `σ(q) < σ(q+1)`, `j` otherwise.
pub fn j_exponent(sigma: &PermutationRecord, q: usize, j: i64) -> i64 {
    if sigma.ascent(q) {
        -j - 1
    } else {
        j
    }
}

/// `K_{d,σ,q}(j)` with `q` 1-based and `j_0` read as `j_n`.
pub fn k_value(d: &MultiIndex, sigma: &PermutationRecord, q: usize, j: &[i64]) -> i64 {
    let n = d.n();
    let prev = if q == 1 { n } else { q - 1 };
    d.ds()[sigma.sigma[q - 1] - 1] as i64 + j_exponent(sigma, q, j[q - 1])
        - j_exponent(sigma, prev, j[prev - 1])
}

/// Largest lattice coordinate that can contribute: `3g + 2n - 4`.
pub fn lattice_bound(g: i64, n: usize) -> i64 {
    3 * g + 2 * n as i64 - 4
}

/// Matrix-resolvent evaluator.
pub struct MrEngine {
    cache: ACoeffCache,
    /// Added to the lattice bound; nonzero only for truncation checks.
    extra_bound: i64,
    parallel: bool,
}

impl Default for MrEngine {
    fn default() -> Self {
        MrEngine::new()
    }
}

impl MrEngine {
    pub fn new() -> Self {
        MrEngine { cache: ACoeffCache::new(), extra_bound: 0, parallel: true }
    }

    pub fn with_extra_bound(mut self, extra: i64) -> Self {
        self.extra_bound = extra;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    fn prefactor(g: i64, n: usize) -> Result<Rational> {
        Ok(Rational::new(twenty_four_pow_fact(g as u64), double_factorial(6 * g - 5 + 2 * n as i64)?))
    }

    fn weight_sum(&self, d: &MultiIndex, weights: &Weights) -> Rational {
        let n = d.n();
        let mut acc = Rational::zero();
        weights.for_each(n, d.total(), |ks, w| {
            let a = self.cache.get(ks);
            if !a.is_zero() {
                acc += a * BigInt::from(w);
            }
        });
        acc
    }

    fn weights_for(&self, d: &MultiIndex, g: i64, sigma: &PermutationRecord) -> Weights {
        let bound = lattice_bound(g, d.n()) + self.extra_bound;
        let mut w = Weights::new(d.n(), d.total());
        let s = if sigma.descents.is_multiple_of(2) { -1 } else { 1 };
        lattice::accumulate(d.ds(), sigma, bound, s, &mut w);
        w
    }

    /// `γ_{d,σ}(g)` for a single permutation (which need not fix 1 in the
    /// full sum, but records here always do). Zero on dimension mismatch.
    pub fn gamma_term(&self, d: &MultiIndex, sigma: &PermutationRecord) -> Result<Rational> {
        if d.n() < 2 || sigma.n() != d.n() {
            return Err(Error::Domain("gamma_term needs n >= 2 and a matching permutation".into()));
        }
        let Some(g) = d.stable_genus()? else {
            return Ok(Rational::zero());
        };
        let w = self.weights_for(d, g, sigma);
        Ok(self.weight_sum(d, &w) * Self::prefactor(g, d.n())?)
    }

    /// `G_d(g)`. Dimension mismatch gives 0; instability is an error.
    pub fn normalized_g(&self, d: &MultiIndex) -> Result<Rational> {
        let Some(g) = d.stable_genus()? else {
            return Ok(Rational::zero());
        };
        let n = d.n();
        if n == 1 {
            return Ok(Rational::one());
        }
        let records: Vec<PermutationRecord> = enumerate_permutations(n).collect();
        let empty = || Weights::new(n, d.total());
        let weights = if self.parallel {
            records
                .par_iter()
                .map(|r| self.weights_for(d, g, r))
                .reduce(empty, Weights::merge)
        } else {
            records.iter().map(|r| self.weights_for(d, g, r)).fold(empty(), Weights::merge)
        };
        Ok(self.weight_sum(d, &weights) * Self::prefactor(g, n)?)
    }

    pub fn cache(&self) -> &ACoeffCache {
        &self.cache
    }
}

impl CorrelatorSource for MrEngine {
    fn producer(&self) -> Producer {
        Producer::Mr
    }

    fn correlator(&self, d: &MultiIndex) -> Result<Rational> {
        let g = self.normalized_g(d)?;
        denormalize(d, g)
    }

    fn normalized(&self, d: &MultiIndex) -> Result<Rational> {
        self.normalized_g(d)
    }
}

/// `κ_{k_1..k_n}(g) = 24^{g+[n/2]-1} (g+[n/2]-1)! / (6g + 2[3n/2] - 7)!! · a_{k}`.
pub fn kappa_diagnostic(key: &ACoeffKey, g: i64) -> Result<Rational> {
    let n = key.len() as i64;
    if n < 2 {
        return Err(Error::Domain("kappa needs n >= 2".into()));
    }
    let sum: i64 = key.ks().iter().sum();
    if sum != 3 * g - 3 + n || key.ks().iter().any(|&k| k < -1) || g < 0 {
        return Err(Error::Domain(format!("kappa needs k_i >= -1 and Σk = 3g-3+n; got Σk={sum}, g={g}")));
    }
    let h = g + n / 2 - 1;
    let pref = Rational::new(twenty_four_pow_fact(h as u64), double_factorial(6 * g + 2 * (3 * n / 2) - 7)?);
    Ok(pref * a_coeff_pattern(key.ks()))
}

/// `m(σ)` parity sign `(-1)^{m(σ)+1}`.
pub fn gamma_sign(sigma: &PermutationRecord) -> Rational {
    sign(sigma.descents.is_multiple_of(2))
}
