//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! hard failure. Warning-level criteria print WARN instead of failing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use psi_core::arith::{approx_decimal, int, ratio, twenty_four_pow_fact};
use psi_core::asymptotics::recursions::{check_gk_recursions, sample_profiles};
use psi_core::asymptotics::scan::{dgzz_scan, strictly_decreasing, theorem3_scan, ScanCaps, ScanRow};
use psi_core::asymptotics::{check_gk_library, reconstruct, series_coeffs, theorem_b_report};
use psi_core::mr::{enumerate_permutations, MrEngine};
use psi_core::verify::{
    coefficient_grid, coefficient_random, oracle_cells, oracle_sweep, structure_cases, zograf_sweep, OracleSweep,
};
use psi_core::virasoro::VirasoroOracle;
use psi_core::{CorrelatorSource, MultiIndex, Rational};

#[derive(PartialEq)]
enum Outcome {
    Pass,
    Fail,
    Warn,
}

struct Runner {
    failed: usize,
}

impl Runner {
    fn report(&mut self, id: u32, title: &str, outcome: Outcome, elapsed: Duration, detail: String) {
        let tag = match outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => {
                self.failed += 1;
                "FAIL"
            }
            Outcome::Warn => "WARN",
        };
        println!("criterion {id:>2} {tag} {title} [{:.2}s] {detail}", elapsed.as_secs_f64());
    }

    fn check(&mut self, id: u32, title: &str, f: impl FnOnce() -> (bool, String)) {
        let t = Instant::now();
        let (ok, detail) = f();
        self.report(id, title, if ok { Outcome::Pass } else { Outcome::Fail }, t.elapsed(), detail);
    }
}

fn rows_text(rows: &[ScanRow]) -> String {
    rows.iter()
        .map(|r| {
            let dev = r.max_deviation.as_ref().map(|d| approx_decimal(d, 6)).unwrap_or_else(|| "-".into());
            format!("g={}:{dev}", r.g)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let mr = MrEngine::new().sequential();
    let oracle = VirasoroOracle::new();
    let mut run = Runner { failed: 0 };

    run.check(1, "a-coefficient trace = residue pattern", || {
        let grid = coefficient_grid(6, 12).expect("unit matrices");
        let random = coefficient_random(10_000, 8, 30, 0x5eed);
        let ok = grid.mismatches.is_empty() && random.mismatches.is_empty();
        (ok, format!("grid {} keys, random {} keys, mismatches {}", grid.checked, random.checked,
            grid.mismatches.len() + random.mismatches.len()))
    });

    run.check(2, "matrix-resolvent = Virasoro correlators", || {
        let cells = oracle_cells(&OracleSweep { max_n: 5, max_g: 5, pair_max_g: 12 });
        match oracle_sweep(&mr, &oracle, &cells) {
            Ok(s) => (s.mismatches.is_empty(), format!("{} correlators, mismatches {:?}", s.checked, s.mismatches)),
            Err(e) => (false, format!("error {e}")),
        }
    });

    run.check(3, "one-point law <tau_{3g-2}> = 1/(24^g g!)", || {
        // three routes: the one-point formula, the Virasoro recursion, and
        // the two-point engine through the dilaton equation
        let mut bad = Vec::new();
        for g in 1..=20i64 {
            let expected = Rational::new(One::one(), twenty_four_pow_fact(g as u64));
            let one = MultiIndex::new(vec![(3 * g - 2) as u32]).unwrap();
            let pair = MultiIndex::new(vec![1, (3 * g - 2) as u32]).unwrap();
            let routes = [
                ("mr", mr.correlator(&one).unwrap()),
                ("virasoro", oracle.correlator(&one).unwrap()),
                ("mr two-point", mr.correlator(&pair).unwrap() / int(2 * g - 1)),
            ];
            for (name, v) in routes {
                if v != expected {
                    bad.push(format!("g={g} {name}"));
                }
            }
        }
        (bad.is_empty(), format!("g = 1..20 by three routes, failing {bad:?}"))
    });

    run.check(4, "normalized one-point G = 1", || {
        let bad: Vec<i64> = (1..=20)
            .filter(|&g| {
                let d = MultiIndex::new(vec![(3 * g - 2) as u32]).unwrap();
                mr.normalized(&d).unwrap() != int(1) || oracle.normalized(&d).unwrap() != int(1)
            })
            .collect();
        (bad.is_empty(), format!("g = 1..20 (mr and virasoro), failing {bad:?}"))
    });

    run.check(5, "permutation class counts", || {
        let mut bad = Vec::new();
        for n in 2..=9usize {
            let records: Vec<_> = enumerate_permutations(n).collect();
            let unimodal: Vec<_> = records.iter().filter(|r| r.class_l == 1).collect();
            if unimodal.len() != 1 << (n - 2) {
                bad.push(format!("n={n} unimodal {}", unimodal.len()));
            }
            for r in 1..n {
                let count = unimodal.iter().filter(|p| p.unimodal_split() == Some(r)).count();
                if count as u64 != binomial(n as u64 - 2, r as u64 - 1) {
                    bad.push(format!("n={n} r={r} split count {count}"));
                }
            }
            for l in 1..=n / 2 {
                let count = records.iter().filter(|p| p.class_l == l).count() as u64;
                if count > (2 * l as u64).pow(n as u32 - 1) {
                    bad.push(format!("n={n} l={l} count {count}"));
                }
            }
            if records.iter().any(|p| p.class_l == 0 || p.class_l > n / 2) {
                bad.push(format!("n={n} class outside 1..=n/2"));
            }
        }
        (bad.is_empty(), format!("n = 2..9, failing {bad:?}"))
    });

    run.check(6, "numerator polynomial structure", || {
        let cases = structure_cases(4, 6);
        let mut bad = Vec::new();
        for (n, d) in &cases {
            match reconstruct(&mr, *n, d).and_then(|rf| theorem_b_report(&rf)) {
                Ok(r) if r.passed() => {}
                Ok(r) => bad.push(format!("{r:?}")),
                Err(e) => bad.push(format!("n={n} d={d:?}: {e}")),
            }
        }
        (bad.is_empty(), format!("{} cases (n ≤ 4, |d| ≤ 6), failing {bad:?}", cases.len()))
    });

    let library_clock = Instant::now();
    let cases = structure_cases(4, 6);
    let reports: Vec<_> = cases.iter().map(|(n, d)| check_gk_library(&mr, *n, d)).collect();
    let library_time = library_clock.elapsed();

    run.check(7, "closed-form G1, G2, C1, C2", || {
        let mut bad = Vec::new();
        let mut compared = 0;
        for r in &reports {
            match r {
                Ok(r) => {
                    for c in r.checks.iter().filter(|c| c.proved) {
                        compared += 1;
                        if !c.matches {
                            bad.push(format!("n={} d={:?} {}: {} vs {}", r.n, r.dfix, c.name, c.extracted, c.closed_form));
                        }
                    }
                }
                Err(e) => bad.push(e.to_string()),
            }
        }
        let anchor = reconstruct(&mr, 2, &[1]).and_then(|rf| series_coeffs(&rf, 2));
        let anchor_ok = matches!(&anchor, Ok(s) if s.g == vec![int(1), ratio(-1, 3), ratio(-1, 18)]);
        (bad.is_empty() && anchor_ok,
            format!("{compared} comparisons over {} profiles (extraction {:.2}s), anchor (1, -1/3, -1/18) {anchor_ok}, failing {bad:?}",
                reports.len(), library_time.as_secs_f64()))
    });

    {
        let t = Instant::now();
        let mut matched = 0;
        let mut mismatched = Vec::new();
        for r in reports.iter().flatten() {
            if let Some(c) = r.check("G3") {
                if c.matches {
                    matched += 1;
                } else {
                    mismatched.push(format!("n={} d={:?}", r.n, r.dfix));
                }
            }
        }
        let ok = mismatched.is_empty() && matched >= 10;
        run.report(8, "closed-form G3 evidence", if ok { Outcome::Pass } else { Outcome::Warn }, t.elapsed(),
            format!("{matched} matching profiles, mismatches {mismatched:?}"));
    }

    {
        let t = Instant::now();
        let profiles = sample_profiles(6, 2);
        let report = check_gk_recursions(3, &profiles).expect("within library");
        let hard = report.hard_failures();
        let third = report.rows.iter().filter(|r| r.k == 3).count();
        let detail = format!("{} profiles, nonzero k ≤ 2: {hard}, nonzero k = 3: {} of {third}",
            profiles.len(), report.warnings());
        let outcome = if hard > 0 || profiles.len() < 20 { Outcome::Fail } else { Outcome::Pass };
        run.report(9, "dilaton/string recursions", outcome, t.elapsed(), detail);
    }

    run.check(10, "partial-sum identity", || {
        let (checked, failed) = zograf_sweep(10);
        (failed.is_empty(), format!("{checked} cases g ≤ 10, failing {failed:?}"))
    });

    run.check(11, "max |G - 1| decreases", || {
        let caps = ScanCaps::default();
        let two = dgzz_scan(&mr, 2, &[5, 10, 20, 40], &caps).expect("scan n=2");
        let three = dgzz_scan(&mr, 3, &[4, 8, 12], &caps).expect("scan n=3");
        (strictly_decreasing(&two) && strictly_decreasing(&three),
            format!("n=2 {} | n=3 {}", rows_text(&two), rows_text(&three)))
    });

    run.check(12, "uniform residual decreases", || {
        let caps = ScanCaps::default();
        let mut ok = true;
        let mut text = Vec::new();
        for k in [1, 2] {
            let rows = theorem3_scan(&mr, 2, k, &[10, 20, 40], &caps).expect("scan");
            ok &= strictly_decreasing(&rows);
            text.push(format!("K={k} {}", rows_text(&rows)));
        }
        (ok, text.join(" | "))
    });

    run.check(13, "n = 2 partition row at g = 50", || {
        let caps = ScanCaps { max_total: 200, ..ScanCaps::default() };
        let t = Instant::now();
        let rows = dgzz_scan(&mr, 2, &[50], &caps).expect("scan");
        let done = rows.len() == 1 && rows[0].partitions == 75 && !rows[0].max_deviation.as_ref().unwrap().is_zero();
        (done, format!("{} partitions, wall-clock {:.3}s", rows[0].partitions, t.elapsed().as_secs_f64()))
    });

    println!("acceptance: {} hard failures", run.failed);
    if run.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
