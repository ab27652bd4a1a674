//! Large-genus structure of `G_{d_1..d_{n-1}, 3g-3+n-|d|}(g)` at fixed
//! `(d_1, …, d_{n-1})`: exact reconstruction as a rational function of `g`
//! and extraction of its `1/g` expansion.

pub mod library;
pub mod poly;
pub mod recursions;
pub mod scan;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{double_factorial, factorial, int, pow_i, twenty_four_pow_fact, Rational};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::source::CorrelatorSource;

pub use library::{MultiplicityProfile, LIBRARY_MAX_K};
pub use poly::Poly;

/// `G(g) = P(g) / Π_{ℓ=1}^{|d|} (6g + c_ℓ)` with `c_ℓ = 2n - 3 - 2ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionInG {
    pub n: usize,
    pub dfix: Vec<u32>,
    pub numerator: Poly,
    /// Genera used for interpolation, then the held-out checks.
    pub fit_genera: Vec<i64>,
    pub check_genera: Vec<i64>,
}

impl RationalFunctionInG {
    pub fn total(&self) -> usize {
        self.dfix.iter().map(|&d| d as usize).sum()
    }

    /// The shifts `c_ℓ`; the poles sit at `g = -c_ℓ / 6`.
    pub fn denominator_shifts(&self) -> Vec<i64> {
        denominator_shifts(self.n, self.total())
    }

    pub fn denominator_at(&self, g: &Rational) -> Rational {
        self.denominator_shifts()
            .iter()
            .fold(Rational::one(), |acc, c| acc * (int(6) * g + int(*c)))
    }

    pub fn eval(&self, g: &Rational) -> Result<Rational> {
        let den = self.denominator_at(g);
        if den.is_zero() {
            return Err(Error::Domain(format!("pole at g = {g}")));
        }
        Ok(self.numerator.eval(g) / den)
    }

    /// `α_m`, the `g^m` coefficient of the numerator.
    pub fn alpha(&self, m: i64) -> Rational {
        if m < 0 {
            Rational::zero()
        } else {
            self.numerator.coeff(m as usize)
        }
    }
}

fn denominator_shifts(n: usize, total: usize) -> Vec<i64> {
    (1..=total as i64).map(|l| 2 * n as i64 - 3 - 2 * l).collect()
}

/// Full index `(d_1, …, d_{n-1}, 3g-3+n-|d|)` if its last entry is
/// nonnegative and `(g, n)` is stable.
pub fn completed_index(n: usize, dfix: &[u32], g: i64) -> Option<MultiIndex> {
    let total: i64 = dfix.iter().map(|&d| d as i64).sum();
    let last = 3 * g - 3 + n as i64 - total;
    if last < 0 || 2 * g - 2 + n as i64 <= 0 {
        return None;
    }
    let mut ds = dfix.to_vec();
    ds.push(last as u32);
    MultiIndex::new(ds).ok()
}

/// Smallest genus at which the completed index exists.
pub fn first_genus(n: usize, dfix: &[u32]) -> i64 {
    (0..).find(|&g| completed_index(n, dfix, g).is_some()).unwrap()
}

fn check_fix(n: usize, dfix: &[u32]) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if dfix.len() + 1 != n {
        return Err(Error::Domain(format!(
            "expected {} fixed exponents for n = {n}, got {}",
            n - 1,
            dfix.len()
        )));
    }
    Ok(())
}

/// `P(g) = 24^g g! ⟨τ_{d_1} ⋯ τ_{d_{n-1}} τ_{3g-3+n-|d|}⟩_g Π_{j<n}(2d_j+1)!!`.
pub fn numerator_value(source: &dyn CorrelatorSource, n: usize, dfix: &[u32], g: i64) -> Result<Rational> {
    let d = completed_index(n, dfix, g)
        .ok_or_else(|| Error::Domain(format!("no stable completion of {dfix:?} at g = {g}")))?;
    let mut factor = twenty_four_pow_fact(g as u64);
    for &dj in dfix {
        factor *= double_factorial(2 * dj as i64 + 1)?;
    }
    Ok(source.correlator(&d)? * Rational::from_integer(factor))
}

/// Liu–Xu's `C(g) = P(g) / (6g)^{|d|}`, returned together with `P(g)`.
pub fn liu_xu_c(source: &dyn CorrelatorSource, dfix: &[u32], g: i64) -> Result<(Rational, Rational)> {
    let n = dfix.len() + 1;
    let p = numerator_value(source, n, dfix, g)?;
    let total: u32 = dfix.iter().sum();
    let scale = Rational::from_integer(pow_i(6 * g, total));
    if scale.is_zero() {
        return Err(Error::Domain("C is undefined at g = 0 for |d| > 0".into()));
    }
    Ok((&p / scale, p))
}

/// Reconstruct `G` exactly from `|d| + 2` genera, then confirm on two more.
///
/// The fit allows degree `|d| + 1`, so a nonzero top coefficient is itself
/// a detected inconsistency.
pub fn reconstruct(source: &dyn CorrelatorSource, n: usize, dfix: &[u32]) -> Result<RationalFunctionInG> {
    check_fix(n, dfix)?;
    let total: usize = dfix.iter().map(|&d| d as usize).sum();
    let g0 = first_genus(n, dfix);
    let fit_genera: Vec<i64> = (g0..g0 + total as i64 + 2).collect();
    let check_genera: Vec<i64> = (0..2).map(|i| g0 + total as i64 + 2 + i).collect();

    let points = fit_genera
        .iter()
        .map(|&g| Ok((int(g), numerator_value(source, n, dfix, g)?)))
        .collect::<Result<Vec<_>>>()?;
    let numerator = Poly::interpolate(&points);
    if numerator.degree().unwrap_or(0) > total {
        return Err(Error::Consistency(format!(
            "numerator for n = {n}, d = {dfix:?} has degree {:?} > |d| = {total}",
            numerator.degree()
        )));
    }
    let rf = RationalFunctionInG { n, dfix: dfix.to_vec(), numerator, fit_genera, check_genera };
    for &g in &rf.check_genera {
        let d = completed_index(n, dfix, g).expect("held-out genus is past the first one");
        let direct = source.normalized(&d)?;
        let fitted = rf.eval(&int(g))?;
        if direct != fitted {
            return Err(Error::Consistency(format!(
                "reconstruction of n = {n}, d = {dfix:?} disagrees at g = {g}: {direct} vs {fitted}"
            )));
        }
    }
    Ok(rf)
}

/// Structural facts about the numerator polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremBReport {
    pub n: usize,
    pub dfix: Vec<u32>,
    pub degree_ok: bool,
    pub leading_ok: bool,
    pub constant_ok: bool,
    pub integer_values_ok: bool,
    pub scaled_coefficients_ok: bool,
}

impl TheoremBReport {
    pub fn passed(&self) -> bool {
        self.degree_ok && self.leading_ok && self.constant_ok && self.integer_values_ok && self.scaled_coefficients_ok
    }
}

/// `Π_{ℓ=1}^{|d|} (n-ℓ-2) · Π_j (2d_j+1)!!/d_j!`.
pub fn expected_constant_term(n: usize, dfix: &[u32]) -> Result<Rational> {
    let total: i64 = dfix.iter().map(|&d| d as i64).sum();
    let mut out = Rational::one();
    for l in 1..=total {
        out *= int(n as i64 - l - 2);
    }
    for &d in dfix {
        out *= Rational::new(double_factorial(2 * d as i64 + 1)?, factorial(d as u64));
    }
    Ok(out)
}

pub fn theorem_b_report(rf: &RationalFunctionInG) -> Result<TheoremBReport> {
    let total = rf.total();
    let p = &rf.numerator;
    let degree_ok = match p.degree() {
        Some(deg) => deg == total,
        None => false,
    };
    let leading_ok = p.coeff(total) == Rational::from_integer(pow_i(6, total as u32));
    let constant_ok = p.coeff(0) == expected_constant_term(rf.n, &rf.dfix)?;
    let integer_values_ok = (-3..=10).all(|g| p.eval(&int(g)).is_integer());
    let scale = Rational::from_integer(BigInt::from(2).pow((total / 3) as u32));
    let scaled_coefficients_ok = p.coeffs().iter().all(|c| (c * &scale).is_integer());
    Ok(TheoremBReport {
        n: rf.n,
        dfix: rf.dfix.clone(),
        degree_ok,
        leading_ok,
        constant_ok,
        integer_values_ok,
        scaled_coefficients_ok,
    })
}

/// `1/g` expansion coefficients of `C(g)` and `G(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoefficients {
    pub c: Vec<Rational>,
    pub g: Vec<Rational>,
}

/// Complete homogeneous symmetric polynomials `h_0..h_max` of `vars`.
pub fn complete_homogeneous(vars: &[i64], max: usize) -> Vec<BigInt> {
    let mut h = vec![BigInt::zero(); max + 1];
    h[0] = BigInt::one();
    for &c in vars {
        for l in 1..=max {
            let prev = &h[l - 1] * c;
            h[l] += prev;
        }
    }
    h
}

fn g_coeffs_closed(rf: &RationalFunctionInG, k_max: usize) -> Vec<Rational> {
    let total = rf.total() as i64;
    let h = complete_homogeneous(&rf.denominator_shifts(), k_max);
    (0..=k_max as i64)
        .map(|k| {
            (0..=k).fold(Rational::zero(), |acc, l| {
                let scale = Rational::from_integer(pow_i(6, (total + l) as u32));
                let term = rf.alpha(total + l - k) * Rational::from_integer(h[l as usize].clone()) / scale;
                if l % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}

/// Power-series division in `x = 1/g`: `G = N(x) / Π(6 + c_ℓ x)` where
/// `N(x) = Σ α_{|d|-i} x^i`.
fn g_coeffs_division(rf: &RationalFunctionInG, k_max: usize) -> Vec<Rational> {
    let total = rf.total() as i64;
    let mut den = vec![Rational::one()];
    for c in rf.denominator_shifts() {
        let mut next = vec![Rational::zero(); den.len() + 1];
        for (i, a) in den.iter().enumerate() {
            next[i] += a * int(6);
            next[i + 1] += a * int(c);
        }
        den = next;
    }
    let num = |i: usize| rf.alpha(total - i as i64);
    let mut out: Vec<Rational> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = num(k);
        for i in 1..=k.min(den.len() - 1) {
            acc -= &den[i] * &out[k - i];
        }
        out.push(acc / &den[0]);
    }
    out
}

/// Extract `C_0..C_K` and `G_0..G_K`, computing `G_k` both from the closed
/// coefficient formula and by long division; the two must coincide.
pub fn series_coeffs(rf: &RationalFunctionInG, k: i64) -> Result<SeriesCoefficients> {
    if k < 0 {
        return Err(Error::Domain(format!("expansion order must be nonnegative, got {k}")));
    }
    let k = k as usize;
    let total = rf.total() as i64;
    let six_pow = Rational::from_integer(pow_i(6, total as u32));
    let c = (0..=k as i64).map(|i| rf.alpha(total - i) / &six_pow).collect();
    let closed = g_coeffs_closed(rf, k);
    let division = g_coeffs_division(rf, k);
    if closed != division {
        return Err(Error::Consistency(format!(
            "G_k extraction routes disagree for n = {}, d = {:?}",
            rf.n, rf.dfix
        )));
    }
    Ok(SeriesCoefficients { c, g: closed })
}

/// One coefficient compared with its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub name: String,
    #[serde(serialize_with = "crate::arith::as_string::serialize")]
    pub extracted: Rational,
    #[serde(serialize_with = "crate::arith::as_string::serialize")]
    pub closed_form: Rational,
    pub matches: bool,
    /// Mismatch on a proved coefficient is a hard failure; otherwise the
    /// row is conjecture evidence.
    pub proved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GkReport {
    pub n: usize,
    pub dfix: Vec<u32>,
    pub profile: MultiplicityProfile,
    pub checks: Vec<CoefficientCheck>,
}

impl GkReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.proved && !c.matches).count()
    }

    pub fn warnings(&self) -> usize {
        self.checks.iter().filter(|c| !c.proved && !c.matches).count()
    }

    pub fn check(&self, name: &str) -> Option<&CoefficientCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Compare extracted `G_1..G_3`, `C_1`, `C_2` with the closed-form library.
///
/// The `C_k` formulas count only the fixed insertions, so they are
/// evaluated at `n - 1`.
pub fn check_gk_library(source: &dyn CorrelatorSource, n: usize, dfix: &[u32]) -> Result<GkReport> {
    let rf = reconstruct(source, n, dfix)?;
    let series = series_coeffs(&rf, LIBRARY_MAX_K as i64)?;
    Ok(compare_with_library(&rf, &series))
}

pub fn compare_with_library(rf: &RationalFunctionInG, series: &SeriesCoefficients) -> GkReport {
    let profile = MultiplicityProfile::from_exponents(rf.n as i64, &rf.dfix);
    let mut checks = Vec::new();
    for k in 1..=LIBRARY_MAX_K.min(series.g.len() - 1) {
        let closed_form = library::g_k(k, &profile).expect("within library");
        checks.push(CoefficientCheck {
            name: format!("G{k}"),
            matches: closed_form == series.g[k],
            extracted: series.g[k].clone(),
            closed_form,
            proved: k <= 2,
        });
    }
    let m = rf.n as i64 - 1;
    let total = rf.total() as i64;
    let p = |i| profile.p(i);
    let c_forms = [library::c1(m, total, p(0)), library::c2(m, total, p(0), p(1), p(2))];
    for (i, closed_form) in c_forms.into_iter().enumerate() {
        let k = i + 1;
        if k >= series.c.len() {
            break;
        }
        checks.push(CoefficientCheck {
            name: format!("C{k}"),
            matches: closed_form == series.c[k],
            extracted: series.c[k].clone(),
            closed_form,
            proved: true,
        });
    }
    GkReport { n: rf.n, dfix: rf.dfix.clone(), profile, checks }
}

/// Nonincreasing tuples of length `len` with entries summing to at most
/// `max_total`, in lexicographic order.
pub fn sorted_tuples(len: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, cap: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in (0..=cap.min(budget)).rev() {
            cur.push(v);
            rec(len, v, budget - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max_total, max_total, &mut Vec::new(), &mut out);
    out.sort();
    out
}
