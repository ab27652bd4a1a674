use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents `(d_1, …, d_n)` of a correlator `⟨τ_{d_1} ⋯ τ_{d_n}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(ds: Vec<u32>) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::Domain("a correlator needs at least one insertion".into()));
        }
        Ok(MultiIndex(ds))
    }

    /// Parse signed input, rejecting negative exponents.
    pub fn from_signed(ds: &[i64]) -> Result<Self> {
        let parsed = ds
            .iter()
            .map(|&d| u32::try_from(d).map_err(|_| Error::Domain(format!("exponent {d} is negative"))))
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(parsed)
    }

    pub fn ds(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().map(|&d| d as i64).sum()
    }

    /// `g` with `Σd = 3g - 3 + n`, if it is a nonnegative integer.
    pub fn genus(&self) -> Option<i64> {
        let num = self.total() + 3 - self.n() as i64;
        (num >= 0 && num % 3 == 0).then_some(num / 3)
    }

    /// The genus, or an error when the dimension constraint is met but the
    /// pair `(g, n)` is unstable. `Ok(None)` signals dimension mismatch.
    pub fn stable_genus(&self) -> Result<Option<i64>> {
        match self.genus() {
            None => Ok(None),
            Some(g) if 2 * g - 2 + self.n() as i64 > 0 => Ok(Some(g)),
            Some(g) => Err(Error::Unstable { g, n: self.n() }),
        }
    }

    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Canonical correlator key: genus plus exponents sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorrelatorKey {
    pub g: i64,
    pub ds: Vec<u32>,
}

impl CorrelatorKey {
    /// Key of a stable, dimension-matching index.
    pub fn from_index(d: &MultiIndex) -> Result<Self> {
        match d.stable_genus()? {
            Some(g) => Ok(CorrelatorKey { g, ds: d.sorted_desc() }),
            None => Err(Error::Domain(format!("({d}) violates the dimension constraint"))),
        }
    }

    pub fn index(&self) -> MultiIndex {
        MultiIndex(self.ds.clone())
    }

    pub fn is_canonical(&self) -> bool {
        self.ds.windows(2).all(|w| w[0] >= w[1])
    }
}
