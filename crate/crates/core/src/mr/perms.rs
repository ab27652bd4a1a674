//! Permutations of `{1..n}` fixing `σ(1) = 1`, annotated with their cyclic
//! descent count and run structure.

use serde::{Deserialize, Serialize};

/// A permutation with `σ(1) = 1`, stored 1-based: `sigma[q-1] = σ(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationRecord {
    pub sigma: Vec<usize>,
    /// `m(σ)`: number of `q` with `σ(q+1) < σ(q)`, reading `σ(n+1) = σ(1)`.
    pub descents: usize,
    /// Run boundaries `1 = t_1 < t_2 < … < t_{2l}`: alternately valleys and
    /// peaks of the cyclic sequence.
    pub turns: Vec<usize>,
    /// `l`, so that `σ` lies in the class with `2l` monotone runs.
    pub class_l: usize,
}

impl PermutationRecord {
    /// Annotate a 1-based permutation. Panics unless `sigma[0] == 1`.
    pub fn from_sigma(sigma: Vec<usize>) -> Self {
        assert_eq!(sigma.first(), Some(&1), "records are normalized to σ(1) = 1");
        let n = sigma.len();
        let at = |q: usize| sigma[q % n];
        let descents = (0..n).filter(|&q| at(q + 1) < at(q)).count();
        let mut turns = Vec::new();
        let mut peaks = 0;
        for q in 0..n {
            let prev = at(q + n - 1);
            let cur = at(q);
            let next = at(q + 1);
            let valley = prev > cur && cur < next;
            let peak = prev < cur && cur > next;
            if valley || peak {
                turns.push(q + 1);
            }
            if peak {
                peaks += 1;
            }
        }
        if n == 1 {
            turns = vec![1];
        }
        PermutationRecord { sigma, descents, turns, class_l: peaks.max(1) }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Whether `σ(q) < σ(q+1)` (1-based, cyclic).
    pub fn ascent(&self, q: usize) -> bool {
        let n = self.n();
        self.sigma[(q - 1) % n] < self.sigma[q % n]
    }

    /// For unimodal permutations, the `r` of the `(r, n-r)` split:
    /// `σ(r+1) = n`.
    pub fn unimodal_split(&self) -> Option<usize> {
        if self.class_l != 1 {
            return None;
        }
        let n = self.n();
        self.sigma.iter().position(|&v| v == n)
    }
}

/// Lexicographic stream of all `(n-1)!` records with `σ(1) = 1`.
pub struct PermutationIter {
    next: Option<Vec<usize>>,
}

impl Iterator for PermutationIter {
    type Item = PermutationRecord;

    fn next(&mut self) -> Option<PermutationRecord> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ[1..]) {
            self.next = Some(succ);
        }
        Some(PermutationRecord::from_sigma(cur))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub fn enumerate_permutations(n: usize) -> PermutationIter {
    PermutationIter { next: (n >= 1).then(|| (1..=n).collect()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_single_identity() {
        let all: Vec<_> = enumerate_permutations(2).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].sigma, vec![1, 2]);
        assert_eq!(all[0].class_l, 1);
        assert_eq!(all[0].descents, 1);
        assert_eq!(all[0].unimodal_split(), Some(1));
    }

    #[test]
    fn small_class_counts() {
        let all: Vec<_> = enumerate_permutations(4).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().filter(|r| r.class_l == 1).count(), 4);
        let five: Vec<_> = enumerate_permutations(5).collect();
        assert_eq!(five.len(), 24);
        assert_eq!(five.iter().filter(|r| r.class_l == 1).count(), 8);
    }

    #[test]
    fn run_structure() {
        let r = PermutationRecord::from_sigma(vec![1, 3, 2, 4]);
        assert_eq!(r.turns, vec![1, 2, 3, 4]);
        assert_eq!(r.class_l, 2);
        assert_eq!(r.descents, 2);
        let u = PermutationRecord::from_sigma(vec![1, 2, 4, 3]);
        assert_eq!(u.class_l, 1);
        assert_eq!(u.unimodal_split(), Some(2));
        assert_eq!(u.descents, 2);
    }
}
