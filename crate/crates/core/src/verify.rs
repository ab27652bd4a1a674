//! Verification suites: each runs one family of exact checks and returns a
//! report separating hard failures (proved identities violated) from
//! conjecture-evidence warnings.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::recursions::{check_gk_recursions, sample_profiles};
use crate::asymptotics::{
    check_gk_library, reconstruct, series_coeffs, sorted_tuples, theorem_b_report, GkReport, TheoremBReport,
};
use crate::coefficients::{
    a_coeff_pattern, a_coeff_trace, a_unit, mul_unit, pattern_trace_factor, zograf_partial_sum,
};
use crate::error::Result;
use crate::index::MultiIndex;
use crate::source::CorrelatorSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Coeffs,
    Oracle,
    TheoremB,
    Gk,
    Recursions,
    Zograf,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Coeffs, Suite::Oracle, Suite::TheoremB, Suite::Gk, Suite::Recursions, Suite::Zograf];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Coeffs => "coeffs",
            Suite::Oracle => "oracle",
            Suite::TheoremB => "theoremB",
            Suite::Gk => "gk",
            Suite::Recursions => "recursions",
            Suite::Zograf => "zograf",
        })
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (expected one of coeffs, oracle, theoremB, gk, recursions, zograf)"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    /// Whether a failure is a hard failure rather than a warning.
    pub hard: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn hard_failures(&self) -> usize {
        self.lines.iter().filter(|l| l.hard && !l.passed).count()
    }

    pub fn warnings(&self) -> usize {
        self.lines.iter().filter(|l| !l.hard && !l.passed).count()
    }
}

/// Sizes of every suite. Defaults are the full acceptance grids.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub grid_max_n: usize,
    pub grid_max_k: i64,
    pub random_keys: usize,
    pub random_max_n: usize,
    pub random_max_k: i64,
    pub seed: u64,
    pub oracle: OracleSweep,
    pub structure_max_n: usize,
    pub structure_max_total: u32,
    pub recursion_max_n: i64,
    pub recursion_max_entry: u32,
    pub zograf_max_g: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            grid_max_n: 6,
            grid_max_k: 12,
            random_keys: 10_000,
            random_max_n: 8,
            random_max_k: 30,
            seed: 0x5eed,
            oracle: OracleSweep::default(),
            structure_max_n: 4,
            structure_max_total: 6,
            recursion_max_n: 6,
            recursion_max_entry: 2,
            zograf_max_g: 10,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GridStats {
    pub checked: u64,
    pub mismatches: Vec<Vec<i64>>,
}

/// Every key of length `1..=max_n` with entries in `-1..=max_k`.
///
/// Both routes share the scalar factor `Π b_{k_i}`, so the comparison is
/// made on the integer factor: the trace of the product of `A_k / b_k`
/// (read off the actual matrices) against the classification's prediction.
pub fn coefficient_grid(max_n: usize, max_k: i64) -> Result<GridStats> {
    let units = (-1..=max_k).map(a_unit).collect::<Result<Vec<_>>>()?;
    fn walk(
        units: &[[i64; 4]],
        max_n: usize,
        prefix: [i64; 4],
        key: &mut Vec<i64>,
        stats: &mut GridStats,
    ) {
        for (i, u) in units.iter().enumerate() {
            key.push(i as i64 - 1);
            let prod = mul_unit(&prefix, u);
            stats.checked += 1;
            if prod[0] + prod[3] != pattern_trace_factor(key) {
                stats.mismatches.push(key.clone());
            }
            if key.len() < max_n {
                walk(units, max_n, prod, key, stats);
            }
            key.pop();
        }
    }
    let mut stats = GridStats::default();
    if max_n > 0 {
        walk(&units, max_n, [1, 0, 0, 1], &mut Vec::new(), &mut stats);
    }
    Ok(stats)
}

/// Random keys compared on the full rational values.
pub fn coefficient_random(count: usize, max_n: usize, max_k: i64, seed: u64) -> GridStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<Vec<i64>> = (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            (0..n).map(|_| rng.gen_range(-1..=max_k)).collect()
        })
        .collect();
    let mismatches: Vec<Vec<i64>> =
        keys.par_iter().filter(|ks| a_coeff_trace(ks) != a_coeff_pattern(ks)).cloned().collect();
    GridStats { checked: count as u64, mismatches }
}

/// Which correlators the two engines are compared on.
#[derive(Clone, Debug)]
pub struct OracleSweep {
    pub max_n: usize,
    pub max_g: i64,
    /// Two-point correlators are additionally swept up to this genus.
    pub pair_max_g: i64,
}

impl Default for OracleSweep {
    fn default() -> Self {
        OracleSweep { max_n: 5, max_g: 5, pair_max_g: 12 }
    }
}

fn compositions(total: u32, parts: usize, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if cur.len() + 1 == parts {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for v in 0..=total {
        cur.push(v);
        compositions(total - v, parts, out, cur);
        cur.pop();
    }
}

/// Every stable ordered index in the sweep range.
pub fn oracle_cells(sweep: &OracleSweep) -> Vec<MultiIndex> {
    let mut cells = Vec::new();
    for n in 1..=sweep.max_n {
        let top = if n == 2 { sweep.max_g.max(sweep.pair_max_g) } else { sweep.max_g };
        for g in 0..=top {
            if 2 * g - 2 + n as i64 <= 0 {
                continue;
            }
            let mut tuples = Vec::new();
            compositions((3 * g - 3 + n as i64) as u32, n, &mut tuples, &mut Vec::new());
            cells.extend(tuples.into_iter().map(|d| MultiIndex::new(d).expect("nonempty")));
        }
    }
    cells
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepStats {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

pub fn oracle_sweep(
    primary: &dyn CorrelatorSource,
    reference: &dyn CorrelatorSource,
    cells: &[MultiIndex],
) -> Result<SweepStats> {
    let mut stats = SweepStats::default();
    for d in cells {
        let a = primary.correlator(d)?;
        let b = reference.correlator(d)?;
        stats.checked += 1;
        if a != b {
            stats.mismatches.push(format!("{d}: {} = {a}, {} = {b}", primary.producer(), reference.producer()));
        }
    }
    Ok(stats)
}

/// Sorted fixed tuples `(d_1 ≥ … ≥ d_{n-1})` with `n ≤ max_n`, `|d| ≤ max_total`.
pub fn structure_cases(max_n: usize, max_total: u32) -> Vec<(usize, Vec<u32>)> {
    (1..=max_n)
        .flat_map(|n| sorted_tuples(n - 1, max_total).into_iter().map(move |d| (n, d)))
        .collect()
}

pub fn theorem_b_sweep(source: &dyn CorrelatorSource, cases: &[(usize, Vec<u32>)]) -> Result<Vec<TheoremBReport>> {
    cases.iter().map(|(n, d)| theorem_b_report(&reconstruct(source, *n, d)?)).collect()
}

pub fn gk_sweep(source: &dyn CorrelatorSource, cases: &[(usize, Vec<u32>)]) -> Result<Vec<GkReport>> {
    cases.iter().map(|(n, d)| check_gk_library(source, *n, d)).collect()
}

/// `(g, k)` pairs where the partial-sum identity fails.
pub fn zograf_sweep(max_g: i64) -> (usize, Vec<(i64, i64)>) {
    let mut checked = 0;
    let mut failed = Vec::new();
    for g in 1..=max_g {
        for k in 0..=3 * g - 2 {
            checked += 1;
            if zograf_partial_sum(g, k).is_err() {
                failed.push((g, k));
            }
        }
    }
    (checked, failed)
}

fn line(name: impl Into<String>, passed: bool, hard: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine { name: name.into(), passed, hard, detail: detail.into() }
}

fn preview<T: fmt::Debug>(items: &[T]) -> String {
    let shown: Vec<String> = items.iter().take(5).map(|i| format!("{i:?}")).collect();
    shown.join("; ")
}

/// Run one suite. `primary` is the engine under test; `reference` is used
/// only by the oracle comparison.
pub fn run_suite(
    suite: Suite,
    cfg: &VerifyConfig,
    primary: &dyn CorrelatorSource,
    reference: &dyn CorrelatorSource,
) -> Result<SuiteReport> {
    let mut lines = Vec::new();
    match suite {
        Suite::Coeffs => {
            let grid = coefficient_grid(cfg.grid_max_n, cfg.grid_max_k)?;
            lines.push(line(
                "exhaustive grid",
                grid.mismatches.is_empty(),
                true,
                format!("{} keys, {} mismatches {}", grid.checked, grid.mismatches.len(), preview(&grid.mismatches)),
            ));
            let random = coefficient_random(cfg.random_keys, cfg.random_max_n, cfg.random_max_k, cfg.seed);
            lines.push(line(
                "random keys",
                random.mismatches.is_empty(),
                true,
                format!("{} keys, {} mismatches {}", random.checked, random.mismatches.len(), preview(&random.mismatches)),
            ));
        }
        Suite::Oracle => {
            let cells = oracle_cells(&cfg.oracle);
            let stats = oracle_sweep(primary, reference, &cells)?;
            lines.push(line(
                "engine agreement",
                stats.mismatches.is_empty(),
                true,
                format!("{} correlators, {} mismatches {}", stats.checked, stats.mismatches.len(), preview(&stats.mismatches)),
            ));
        }
        Suite::TheoremB => {
            let cases = structure_cases(cfg.structure_max_n, cfg.structure_max_total);
            for r in theorem_b_sweep(primary, &cases)? {
                let detail = format!(
                    "degree {} leading {} constant {} integer values {} scaled coefficients {}",
                    r.degree_ok, r.leading_ok, r.constant_ok, r.integer_values_ok, r.scaled_coefficients_ok
                );
                lines.push(line(format!("n={} d={:?}", r.n, r.dfix), r.passed(), true, detail));
            }
        }
        Suite::Gk => {
            let cases = structure_cases(cfg.structure_max_n, cfg.structure_max_total);
            for r in gk_sweep(primary, &cases)? {
                for c in &r.checks {
                    lines.push(line(
                        format!("n={} d={:?} {}", r.n, r.dfix, c.name),
                        c.matches,
                        c.proved,
                        format!("extracted {} closed form {}", c.extracted, c.closed_form),
                    ));
                }
            }
            let anchor = series_coeffs(&reconstruct(primary, 2, &[1])?, 2)?;
            let expected = [(1, 1), (-1, 3), (-1, 18)].map(|(p, q)| crate::arith::ratio(p, q));
            lines.push(line("anchor n=2 d=[1]", anchor.g == expected, true, format!("{:?}", anchor.g)));
        }
        Suite::Recursions => {
            let profiles = sample_profiles(cfg.recursion_max_n, cfg.recursion_max_entry);
            let report = check_gk_recursions(3, &profiles)?;
            for k in 0..=3 {
                let rows: Vec<_> = report.rows.iter().filter(|r| r.k == k).collect();
                let bad: Vec<_> = rows.iter().filter(|r| !r.is_zero()).collect();
                let worst = bad.first().map(|r| {
                    format!(
                        " first nonzero at n={} p={:?}: dilaton {} string {}",
                        r.profile.n, r.profile.p, r.dilaton_residual, r.string_residual
                    )
                });
                lines.push(line(
                    format!("k={k}"),
                    bad.is_empty(),
                    k <= 2,
                    format!("{} profiles, {} nonzero{}", rows.len(), bad.len(), worst.unwrap_or_default()),
                ));
            }
        }
        Suite::Zograf => {
            let (checked, failed) = zograf_sweep(cfg.zograf_max_g);
            lines.push(line(
                "partial sums",
                failed.is_empty(),
                true,
                format!("{checked} cases, {} failures {}", failed.len(), preview(&failed)),
            ));
        }
    }
    Ok(SuiteReport { suite, lines })
}
