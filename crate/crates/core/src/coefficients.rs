//! Scalar coefficients `b_k`, the coefficient matrices `A_k` of the
//! resolvent matrix `M(λ) = Σ_{k≥-1} A_k λ^{-k}`, and the cyclic trace
//! coefficients `a_{k_1..k_n} = tr(A_{k_1} ⋯ A_{k_n})`.
//!
//! The trace coefficients are available through two independent routes:
//! [`a_coeff_trace`] multiplies dense 2×2 matrices, [`a_coeff_pattern`]
//! classifies the residues of the indices mod 3 and applies the closed sign
//! rule. They must agree on every key.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::arith::{double_factorial, factorial, int, twenty_four_pow_fact, Rational};
use crate::error::{Error, Result};

fn b_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

fn b_uncached(k: i64) -> Result<Rational> {
    let r = k.rem_euclid(3);
    let v = match r {
        0 => {
            let g = k / 3;
            let num = double_factorial(6 * g - 1)?;
            -Rational::new(num, twenty_four_pow_fact(g as u64))
        }
        2 => {
            let g = (k + 1) / 3;
            let num = double_factorial(6 * g - 1)? * BigInt::from(6 * g + 1);
            let den = twenty_four_pow_fact(g as u64) * BigInt::from(6 * g - 1);
            Rational::new(num, den)
        }
        _ => {
            let g = (k + 2) / 3;
            let num = double_factorial(6 * g - 5)?;
            let den = twenty_four_pow_fact((g - 1) as u64) * BigInt::from(2);
            Rational::new(num, den)
        }
    };
    Ok(v)
}

/// `b_k` for `k >= -1`, one of three branches by the residue of `k` mod 3.
pub fn b_coeff(k: i64) -> Result<Rational> {
    if k < -1 {
        return Err(Error::Domain(format!("b_k requires k >= -1, got {k}")));
    }
    let idx = (k + 1) as usize;
    if let Some(v) = b_table().read().get(idx) {
        return Ok(v.clone());
    }
    let mut w = b_table().write();
    while w.len() <= idx {
        let next = w.len() as i64 - 1;
        let v = b_uncached(next)?;
        w.push(v);
    }
    Ok(w[idx].clone())
}

/// `c_k = b_k (k + 2)^2`.
pub fn c_coeff(k: i64) -> Result<Rational> {
    Ok(b_coeff(k)? * int((k + 2) * (k + 2)))
}

/// Exact 2×2 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [Rational; 4],
}

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2 { e: [a, b, c, d] }
    }

    pub fn zero() -> Self {
        Mat2::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn identity() -> Self {
        Mat2::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::one())
    }

    fn unit(pattern: [i64; 4]) -> Self {
        Mat2 { e: pattern.map(int) }
    }

    /// Upper nilpotent `μ1`.
    pub fn mu1() -> Self {
        Mat2::unit([0, 1, 0, 0])
    }
    /// Lower nilpotent `μ2`.
    pub fn mu2() -> Self {
        Mat2::unit([0, 0, 1, 0])
    }
    /// `μ3 = diag(1, -1)`.
    pub fn mu3() -> Self {
        Mat2::unit([1, 0, 0, -1])
    }
    /// `μ4 = μ1 μ2 = diag(1, 0)`.
    pub fn mu4() -> Self {
        Mat2::unit([1, 0, 0, 0])
    }
    /// `μ5 = μ2 μ1 = diag(0, 1)`.
    pub fn mu5() -> Self {
        Mat2::unit([0, 0, 0, 1])
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Mat2 { e: self.e.clone().map(|x| x * s) }
    }

    pub fn trace(&self) -> Rational {
        &self.e[0] + &self.e[3]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &rhs.e;
        Mat2::new(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)
    }
}

/// Coefficient matrix `A_k` of `M(λ)`.
pub fn a_k(k: i64) -> Result<Mat2> {
    let b = b_coeff(k)?;
    Ok(match k.rem_euclid(3) {
        0 => Mat2::mu1().scale(&b),
        2 => Mat2::mu2().scale(&b),
        _ => Mat2::mu3().scale(&-b),
    })
}

/// Index tuple of an `a`-coefficient, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ACoeffKey(Vec<i64>);

impl ACoeffKey {
    pub fn new(ks: Vec<i64>) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::Domain("a-coefficient key needs n >= 1".into()));
        }
        Ok(ACoeffKey(ks))
    }

    pub fn ks(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographically minimal cyclic rotation.
    pub fn canonical(&self) -> ACoeffKey {
        ACoeffKey(canonical_rotation(&self.0))
    }
}

impl fmt::Display for ACoeffKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn canonical_rotation(ks: &[i64]) -> Vec<i64> {
    let n = ks.len();
    let mut best = 0;
    for start in 1..n {
        let better = (0..n)
            .map(|i| ks[(start + i) % n].cmp(&ks[(best + i) % n]))
            .find(|c| c.is_ne())
            .is_some_and(|c| c.is_lt());
        if better {
            best = start;
        }
    }
    (0..n).map(|i| ks[(best + i) % n]).collect()
}

/// `A_{k_1} ⋯ A_{k_n}` by direct multiplication.
pub fn a_matrix(key: &ACoeffKey) -> Result<Mat2> {
    let mut acc = Mat2::identity();
    for &k in key.ks() {
        acc = &acc * &a_k(k)?;
    }
    Ok(acc)
}

/// `tr(A_{k_1} ⋯ A_{k_n})`; zero whenever some `k_i <= -2`.
pub fn a_coeff_trace(ks: &[i64]) -> Rational {
    if ks.iter().any(|&k| k <= -2) {
        return Rational::zero();
    }
    let key = ACoeffKey(ks.to_vec());
    a_matrix(&key).expect("indices checked").trace()
}

/// Which of the seven residue classes a key falls into.
///
/// `positions` are the 1-based indices `i_1 < i_2 < …` whose residue is not
/// 1 mod 3. `sign` is the closed-form sign attached to the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePattern {
    pub class: PatternClass,
    pub positions: Vec<usize>,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternClass {
    /// `n` even, all residues 1; product is `Π b · I`.
    P1,
    /// Alternating 0,2,…,0,2 among the non-1 positions; product `∝ μ4`.
    P2,
    /// Alternating 2,0,…,2,0; product `∝ μ5`.
    P3,
    /// `n` odd, all residues 1; product is `-Π b · μ3`.
    P4,
    /// Alternating 0,2,…,0 (odd count); product `∝ μ1`.
    P5,
    /// Alternating 2,0,…,2 (odd count); product `∝ μ2`.
    P6,
    /// Everything else; product vanishes.
    P7,
}

impl PatternClass {
    pub const ALL: [PatternClass; 7] = [
        PatternClass::P1,
        PatternClass::P2,
        PatternClass::P3,
        PatternClass::P4,
        PatternClass::P5,
        PatternClass::P6,
        PatternClass::P7,
    ];
}

/// Sum of `(i_{2j+1} - i_{2j} - 1)` over consecutive pairs of `bounds`.
fn gap_parity(bounds: &[usize]) -> usize {
    bounds.chunks(2).map(|p| p[1] - p[0] - 1).sum::<usize>() % 2
}

/// Classify a key by the residues of its entries mod 3. Entries may be
/// any integers; only residues matter.
pub fn classify(ks: &[i64]) -> ResiduePattern {
    let n = ks.len();
    let mut positions = Vec::new();
    let mut residues = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let r = k.rem_euclid(3);
        if r != 1 {
            positions.push(i + 1);
            residues.push(r);
        }
    }
    let p7 = |positions| ResiduePattern { class: PatternClass::P7, positions, sign: 0 };
    if positions.is_empty() {
        return if n.is_multiple_of(2) {
            ResiduePattern { class: PatternClass::P1, positions, sign: 1 }
        } else {
            ResiduePattern { class: PatternClass::P4, positions, sign: -1 }
        };
    }
    let first = residues[0];
    let alternating = residues
        .iter()
        .enumerate()
        .all(|(i, &r)| if i % 2 == 0 { r == first } else { r == 2 - first });
    if !alternating {
        return p7(positions);
    }
    let m = positions.len();
    // Bracket the position list with i_0 = 0 and/or i_last = n + 1 so that
    // gap_parity sums over exactly the gaps named by each class's sign rule.
    let (class, bounds): (PatternClass, Vec<usize>) = match (first, m % 2 == 0) {
        (0, true) => {
            let mut b = vec![0];
            b.extend(&positions);
            b.push(n + 1);
            (PatternClass::P2, b)
        }
        (2, true) => (PatternClass::P3, positions.clone()),
        (0, false) => {
            let mut b = vec![0];
            b.extend(&positions);
            (PatternClass::P5, b)
        }
        _ => {
            let mut b = positions.clone();
            b.push(n + 1);
            (PatternClass::P6, b)
        }
    };
    let sign = if gap_parity(&bounds) == 1 { -1 } else { 1 };
    ResiduePattern { class, positions, sign }
}

fn b_product(ks: &[i64]) -> Rational {
    ks.iter()
        .map(|&k| b_coeff(k).expect("indices checked"))
        .fold(Rational::one(), |acc, b| acc * b)
}

/// The matrix `A_{k_1} ⋯ A_{k_n}` predicted by the residue classification.
pub fn pattern_matrix(ks: &[i64]) -> Result<Mat2> {
    if let Some(&k) = ks.iter().find(|&&k| k < -1) {
        return Err(Error::Domain(format!("index {k} < -1")));
    }
    let pat = classify(ks);
    let shape = match pat.class {
        PatternClass::P1 => Mat2::identity(),
        PatternClass::P2 => Mat2::mu4(),
        PatternClass::P3 => Mat2::mu5(),
        PatternClass::P4 => Mat2::mu3(),
        PatternClass::P5 => Mat2::mu1(),
        PatternClass::P6 => Mat2::mu2(),
        PatternClass::P7 => return Ok(Mat2::zero()),
    };
    Ok(shape.scale(&(b_product(ks) * int(pat.sign as i64))))
}

/// Integer factor `f` with `a_{k_1..k_n} = f · Π b_{k_i}` predicted by the
/// residue classification: 2 for P1, the class sign for P2/P3, else 0.
pub fn pattern_trace_factor(ks: &[i64]) -> i64 {
    if !has_nonzero_trace(ks) {
        return 0;
    }
    let pat = classify(ks);
    match pat.class {
        PatternClass::P1 => 2,
        _ => pat.sign as i64,
    }
}

/// `a_{k_1..k_n}` from the residue classification.
pub fn a_coeff_pattern(ks: &[i64]) -> Rational {
    if ks.iter().any(|&k| k <= -2) {
        return Rational::zero();
    }
    match pattern_trace_factor(ks) {
        0 => Rational::zero(),
        f => b_product(ks) * int(f),
    }
}

/// `A_k / b_k` as an integer matrix `[e11, e12, e21, e22]`, read off the
/// actual coefficient matrix.
pub fn a_unit(k: i64) -> Result<[i64; 4]> {
    let a = a_k(k)?;
    let b = b_coeff(k)?;
    let mut out = [0i64; 4];
    for (o, e) in out.iter_mut().zip(&a.e) {
        let q = e / &b;
        if !q.is_integer() {
            return Err(Error::Consistency(format!("A_{k} is not an integer multiple of b_{k}")));
        }
        *o = q.to_integer().try_into().map_err(|_| Error::Consistency(format!("A_{k}/b_{k} overflows")))?;
    }
    Ok(out)
}

pub fn mul_unit(x: &[i64; 4], y: &[i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Cheap residue-only test for `a ≠ 0` (P1, P2 or P3).
pub fn has_nonzero_trace(ks: &[i64]) -> bool {
    let mut first = None;
    let mut count = 0usize;
    for &k in ks {
        let r = k.rem_euclid(3);
        if r == 1 {
            continue;
        }
        match first {
            None => first = Some(r),
            Some(f) => {
                let expect = if count.is_multiple_of(2) { f } else { 2 - f };
                if r != expect {
                    return false;
                }
            }
        }
        count += 1;
    }
    if count == 0 {
        ks.len().is_multiple_of(2)
    } else {
        count.is_multiple_of(2)
    }
}

/// Concurrent memo of `a`-coefficients keyed on the minimal cyclic
/// rotation of the index tuple.
#[derive(Default)]
pub struct ACoeffCache {
    map: RwLock<HashMap<Vec<i64>, Rational>>,
}

impl ACoeffCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, ks: &[i64]) -> Rational {
        if ks.iter().any(|&k| k <= -2) || !has_nonzero_trace(ks) {
            return Rational::zero();
        }
        let key = canonical_rotation(ks);
        if let Some(v) = self.map.read().get(&key) {
            return v.clone();
        }
        let v = a_coeff_pattern(&key);
        self.map.write().entry(key).or_insert(v).clone()
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn zograf_closed_form(g: i64, k: i64) -> Result<Rational> {
    let fact = |x: i64| factorial(x as u64);
    let outer = Rational::new(double_factorial(6 * g - 3 - 2 * k)?, double_factorial(6 * g - 1)?);
    let branch = match k.rem_euclid(3) {
        2 => {
            let j = (k + 1) / 3;
            Rational::new(
                double_factorial(6 * j - 1)? * fact(g - 1) * BigInt::from(g - 2 * j),
                fact(j) * fact(g - j),
            )
        }
        0 => {
            let j = k / 3;
            Rational::new(
                BigInt::from(-2) * double_factorial(6 * j + 1)? * fact(g - 1),
                fact(j) * fact(g - 1 - j),
            )
        }
        _ => {
            let j = (k - 1) / 3;
            Rational::new(
                BigInt::from(2) * double_factorial(6 * j + 3)? * fact(g - 1),
                fact(j) * fact(g - 1 - j),
            )
        }
    };
    Ok(outer * branch)
}

/// Normalized partial sum `(24^g g!/(6g-1)!!) Σ_{l=0}^{k+1} a_{l-1, 3g-l}`,
/// checked against its three-branch closed form. A mismatch is reported as
/// a consistency error.
pub fn zograf_partial_sum(g: i64, k: i64) -> Result<Rational> {
    if g < 1 || k < 0 || k > 3 * g - 2 {
        return Err(Error::Domain(format!("need g >= 1 and 0 <= k <= 3g-2, got g={g}, k={k}")));
    }
    let sum = (0..=k + 1)
        .map(|l| a_coeff_pattern(&[l - 1, 3 * g - l]))
        .fold(Rational::zero(), |acc, a| acc + a);
    let lhs = sum * Rational::new(twenty_four_pow_fact(g as u64), double_factorial(6 * g - 1)?);
    let rhs = zograf_closed_form(g, k)?;
    if lhs != rhs {
        return Err(Error::Consistency(format!(
            "partial-sum identity fails at g={g}, k={k}: {lhs} != {rhs}"
        )));
    }
    Ok(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use num_traits::Signed;

    fn key(ks: &[i64]) -> ACoeffKey {
        ACoeffKey::new(ks.to_vec()).unwrap()
    }

    #[test]
    fn b_values() {
        assert_eq!(b_coeff(-1).unwrap(), int(-1));
        assert_eq!(b_coeff(0).unwrap(), int(-1));
        assert_eq!(b_coeff(1).unwrap(), ratio(1, 2));
        assert_eq!(b_coeff(2).unwrap(), ratio(7, 8));
        assert_eq!(b_coeff(3).unwrap(), ratio(-5, 8));
        assert!(b_coeff(-2).is_err());
    }

    #[test]
    fn c_values() {
        assert_eq!(c_coeff(-1).unwrap().abs(), int(1));
        assert_eq!(c_coeff(0).unwrap().abs(), int(4));
        assert_eq!(c_coeff(1).unwrap().abs(), ratio(9, 2));
        assert_eq!(c_coeff(2).unwrap(), int(14));
        assert_eq!(c_coeff(3).unwrap().abs(), ratio(125, 8));
    }

    #[test]
    fn mu_multiplication_table() {
        assert_eq!(&Mat2::mu1() * &Mat2::mu2(), Mat2::mu4());
        assert_eq!(&Mat2::mu2() * &Mat2::mu1(), Mat2::mu5());
        assert_eq!(&Mat2::mu3() * &Mat2::mu3(), Mat2::identity());
        assert_eq!(&Mat2::mu1() * &Mat2::mu1(), Mat2::zero());
        assert_eq!(&Mat2::mu1() * &Mat2::mu3(), Mat2::mu1().scale(&int(-1)));
        assert_eq!(&Mat2::mu3() * &Mat2::mu1(), Mat2::mu1());
        assert_eq!(&Mat2::mu3() * &Mat2::mu2(), Mat2::mu2().scale(&int(-1)));
        assert_eq!(&Mat2::mu2() * &Mat2::mu3(), Mat2::mu2());
    }

    #[test]
    fn a_matrix_examples() {
        assert_eq!(a_matrix(&key(&[1, 1])).unwrap(), Mat2::identity().scale(&ratio(1, 4)));
        assert_eq!(a_matrix(&key(&[0, 2])).unwrap(), Mat2::mu4().scale(&ratio(-7, 8)));
        assert_eq!(a_matrix(&key(&[-1, 3])).unwrap(), Mat2::mu5().scale(&ratio(5, 8)));
    }

    #[test]
    fn trace_and_pattern_examples() {
        assert_eq!(a_coeff_trace(&[1, 1]), ratio(1, 2));
        assert_eq!(a_coeff_trace(&[0, 2]), ratio(-7, 8));
        assert_eq!(a_coeff_trace(&[1, 2]), Rational::zero());
        assert_eq!(a_coeff_pattern(&[1, 1]), ratio(1, 2));
        assert_eq!(a_coeff_pattern(&[-1, 3]), ratio(5, 8));
        assert_eq!(a_coeff_pattern(&[1, 1, 1]), Rational::zero());
        assert_eq!(a_coeff_pattern(&[4, -2]), Rational::zero());
        assert_eq!(a_coeff_trace(&[4, -2]), Rational::zero());
    }

    #[test]
    fn classification_examples() {
        let p = classify(&[-1, 3]);
        assert_eq!(p.class, PatternClass::P3);
        assert_eq!(p.positions, vec![1, 2]);
        assert_eq!(p.sign, 1);
        assert_eq!(classify(&[1, 1, 1]).class, PatternClass::P4);
        assert_eq!(classify(&[0, 2]).class, PatternClass::P2);
        assert_eq!(classify(&[0, 0]).class, PatternClass::P7);
        assert_eq!(classify(&[0, 1, 2, 0]).class, PatternClass::P5);
        assert_eq!(classify(&[2, 1, 0, 2]).class, PatternClass::P6);
    }

    #[test]
    fn canonical_rotation_is_minimal() {
        assert_eq!(canonical_rotation(&[3, -1, 2]), vec![-1, 2, 3]);
        assert_eq!(canonical_rotation(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
        assert_eq!(key(&[2, 2, 1]).canonical(), key(&[1, 2, 2]));
    }

    #[test]
    fn cache_matches_direct_evaluation() {
        let cache = ACoeffCache::new();
        for ks in [[2, 4, -1, 3], [3, 2, 4, -1], [5, 1, 1, 0]] {
            assert_eq!(cache.get(&ks), a_coeff_trace(&ks));
        }
        // the first two are rotations of each other
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn zograf_examples() {
        assert_eq!(zograf_partial_sum(1, 0).unwrap(), ratio(-2, 5));
        assert_eq!(zograf_partial_sum(1, 1).unwrap(), ratio(2, 5));
        assert!(zograf_partial_sum(2, 2).is_ok());
        assert!(zograf_partial_sum(1, 2).is_err());
        assert!(zograf_partial_sum(0, 0).is_err());
    }

    #[test]
    fn appendix_facts_on_b_and_c() {
        for k in -1..=2 {
            assert!(b_coeff(k).unwrap().abs() <= int(1));
        }
        for k in -1..200 {
            let b = b_coeff(k).unwrap().abs();
            let b1 = b_coeff(k + 1).unwrap().abs();
            assert!(b <= b1 * int(2), "|b_{k}| > 2|b_{}|", k + 1);
        }
        for k in 0..200 {
            assert!(c_coeff(k).unwrap().abs() < c_coeff(k + 1).unwrap().abs());
        }
    }

    /// Residue-class transition when appending one more index.
    #[test]
    fn twenty_one_case_transition_table() {
        use PatternClass::*;
        // rows: residue of the appended index 0, 1, 2; columns P1..P7
        let table = [
            [P5, P5, P7, P5, P7, P3, P7],
            [P4, P2, P3, P1, P5, P6, P7],
            [P6, P7, P6, P6, P2, P7, P7],
        ];
        let mut seen = std::collections::HashSet::new();
        for n in 1..=6u32 {
            for code in 0..3i64.pow(n) {
                let ks: Vec<i64> = (0..n).map(|i| (code / 3i64.pow(i)) % 3).collect();
                let before = classify(&ks).class;
                let col = PatternClass::ALL.iter().position(|&c| c == before).unwrap();
                for r in 0..3 {
                    let mut ext = ks.clone();
                    ext.push(r);
                    assert_eq!(classify(&ext).class, table[r as usize][col], "{ks:?} + {r}");
                    seen.insert((r, col));
                }
            }
        }
        assert_eq!(seen.len(), 21);
    }
}
