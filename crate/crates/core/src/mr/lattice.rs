//! Depth-first enumeration of the lattice points `j ∈ Z_{≥0}^n` whose
//! `K`-values are all `>= -1`, aggregated into integer multiplicities per
//! `K`-tuple.
//!
//! Coordinates are visited in the order `j_n, j_1, j_2, …, j_{n-1}` so that
//! `K_q` is fixed as soon as `j_q` is chosen. Each `K_q` is affine in `j_q`
//! with slope `±1`, so the admissible range of `j_q` is an interval that is
//! computed directly from the two constraints `K_q >= -1` and "the
//! remaining entries can still be `>= -1`".

use std::collections::HashMap;

use super::perms::PermutationRecord;

/// Dense tables above this many cells fall back to a hash map.
const DENSE_LIMIT: usize = 1 << 21;

/// Signed multiplicities of `K`-tuples. Only the first `n-1` entries are
/// stored; the last is fixed by `Σ K = Σ d`.
#[derive(Clone, Debug)]
pub(crate) enum Weights {
    Dense { radix: i64, cells: Vec<i64> },
    Sparse(HashMap<Vec<i64>, i64>),
}

impl Weights {
    pub(crate) fn new(n: usize, total: i64) -> Self {
        let radix = total + n as i64 + 1;
        let cells = (radix as f64).powi(n as i32 - 1);
        if cells <= DENSE_LIMIT as f64 {
            Weights::Dense { radix, cells: vec![0; radix.pow(n as u32 - 1) as usize] }
        } else {
            Weights::Sparse(HashMap::new())
        }
    }

    fn add(&mut self, ks: &[i64], w: i64) {
        match self {
            Weights::Dense { radix, cells } => {
                let idx = ks.iter().rev().fold(0i64, |acc, &k| acc * *radix + k + 1);
                cells[idx as usize] += w;
            }
            Weights::Sparse(map) => *map.entry(ks.to_vec()).or_insert(0) += w,
        }
    }

    pub(crate) fn merge(mut self, other: Weights) -> Weights {
        match (&mut self, other) {
            (Weights::Dense { cells, .. }, Weights::Dense { cells: o, .. }) => {
                for (a, b) in cells.iter_mut().zip(o) {
                    *a += b;
                }
            }
            (Weights::Sparse(m), Weights::Sparse(o)) => {
                for (k, v) in o {
                    *m.entry(k).or_insert(0) += v;
                }
            }
            _ => unreachable!("weights for one index share a layout"),
        }
        self
    }

    /// Visit every nonzero weight with its full `K`-tuple.
    pub(crate) fn for_each(&self, n: usize, total: i64, mut f: impl FnMut(&[i64], i64)) {
        let mut ks = vec![0i64; n];
        let mut finish = |ks: &mut Vec<i64>, w: i64| {
            ks[n - 1] = total - ks[..n - 1].iter().sum::<i64>();
            f(ks, w);
        };
        match self {
            Weights::Dense { radix, cells } => {
                for (idx, &w) in cells.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    let mut rest = idx as i64;
                    for k in ks.iter_mut().take(n - 1) {
                        *k = rest % radix - 1;
                        rest /= radix;
                    }
                    finish(&mut ks, w);
                }
            }
            Weights::Sparse(map) => {
                let mut entries: Vec<_> = map.iter().filter(|(_, &w)| w != 0).collect();
                entries.sort();
                for (key, &w) in entries {
                    ks[..n - 1].copy_from_slice(key);
                    finish(&mut ks, w);
                }
            }
        }
    }
}

struct Walk<'a> {
    n: usize,
    /// `d_{σ(q)}` by position.
    d: Vec<i64>,
    asc: Vec<bool>,
    bound: i64,
    total: i64,
    j: Vec<i64>,
    ks: Vec<i64>,
    weight: i64,
    out: &'a mut Weights,
}

impl Walk<'_> {
    fn big_j(&self, q: usize, j: i64) -> i64 {
        if self.asc[q] {
            -j - 1
        } else {
            j
        }
    }

    fn descend(&mut self, q: usize, partial: i64) {
        let n = self.n;
        let prev = if q == 0 { n - 1 } else { q - 1 };
        let prev_j = self.big_j(prev, self.j[prev]);
        // Entries q+1..n-1 must each stay >= -1.
        let cap = self.total + (n - 1 - q) as i64 - partial;
        let d = self.d[q];
        let (lo, hi) = if self.asc[q] {
            (d - 1 - prev_j - cap, d - prev_j)
        } else {
            (-1 - d + prev_j, cap - d + prev_j)
        };
        let lo = lo.max(0);
        let hi = hi.min(self.bound);
        for jq in lo..=hi {
            let k = d + self.big_j(q, jq) - prev_j;
            self.j[q] = jq;
            self.ks[q] = k;
            if q + 2 == n {
                let w = self.weight;
                let ks = &self.ks[..n - 1];
                self.out.add(ks, w);
            } else {
                self.descend(q + 1, partial + k);
            }
        }
    }
}

/// Add `weight` for every admissible lattice point of `(d, σ)` with
/// coordinates bounded by `bound`.
pub(crate) fn accumulate(d: &[u32], sigma: &PermutationRecord, bound: i64, weight: i64, out: &mut Weights) {
    let n = d.len();
    let total: i64 = d.iter().map(|&x| x as i64).sum();
    let mut walk = Walk {
        n,
        d: sigma.sigma.iter().map(|&s| d[s - 1] as i64).collect(),
        asc: (1..=n).map(|q| sigma.ascent(q)).collect(),
        bound,
        total,
        j: vec![0; n],
        ks: vec![0; n],
        weight,
        out,
    };
    for last in 0..=bound {
        walk.j[n - 1] = last;
        walk.descend(0, 0);
    }
}
