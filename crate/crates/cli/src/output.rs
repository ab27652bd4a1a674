//! JSON and CSV emitters. Every CSV table starts with a versioned
//! `# psi <table> v1` comment; exact values are `num/den` strings and any
//! decimal column is suffixed `_approx`.

use std::io::{self, Write};

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use psi_core::arith::{approx_decimal, format_rational};
use psi_core::asymptotics::scan::ScanRow;
use psi_core::asymptotics::{GkReport, RationalFunctionInG, SeriesCoefficients, TheoremBReport};
use psi_core::verify::SuiteReport;
use psi_core::{MultiIndex, Rational};

const APPROX_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Out {
    format: Format,
}

fn exact(r: &Rational) -> String {
    format_rational(r)
}

fn approx(r: &Rational) -> String {
    approx_decimal(r, APPROX_DIGITS)
}

fn join(ds: &[u32]) -> String {
    ds.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn exacts(values: &[Rational]) -> Vec<String> {
    values.iter().map(exact).collect()
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out { format }
    }

    fn json(&self, value: &impl Serialize) -> Result<()> {
        let mut stdout = io::stdout().lock();
        serde_json::to_writer_pretty(&mut stdout, value)?;
        writeln!(stdout)?;
        Ok(())
    }

    fn csv(&self, table: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let mut stdout = io::stdout().lock();
        writeln!(stdout, "# psi {table} v1")?;
        let mut w = csv::Writer::from_writer(stdout);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn compute(
        &self,
        index: &MultiIndex,
        producer: String,
        genus: Option<i64>,
        correlator: &Rational,
        normalized: &Rational,
        note: Option<&str>,
    ) -> Result<()> {
        match self.format {
            Format::Json => self.json(&json!({
                "index": index.ds(),
                "genus": genus,
                "producer": producer,
                "correlator": exact(correlator),
                "normalized": exact(normalized),
                "normalized_approx": approx(normalized),
                "note": note,
            })),
            Format::Csv => self.csv(
                "compute",
                &["index", "genus", "producer", "correlator", "normalized", "normalized_approx", "note"],
                vec![vec![
                    join(index.ds()),
                    genus.map(|g| g.to_string()).unwrap_or_default(),
                    producer,
                    exact(correlator),
                    exact(normalized),
                    approx(normalized),
                    note.unwrap_or_default().to_string(),
                ]],
            ),
        }
    }

    pub fn verify(&self, report: &SuiteReport) -> Result<()> {
        match self.format {
            Format::Json => self.json(&json!({
                "suite": report.suite.to_string(),
                "hard_failures": report.hard_failures(),
                "warnings": report.warnings(),
                "warning": report.warnings() > 0,
                "checks": report.lines,
            })),
            Format::Csv => self.csv(
                "verify",
                &["suite", "check", "passed", "hard", "detail"],
                report
                    .lines
                    .iter()
                    .map(|l| {
                        vec![
                            report.suite.to_string(),
                            l.name.clone(),
                            l.passed.to_string(),
                            l.hard.to_string(),
                            l.detail.clone(),
                        ]
                    })
                    .collect(),
            ),
        }
    }

    pub fn scan(&self, kind: &str, n: usize, k: i64, rows: &[ScanRow]) -> Result<()> {
        match self.format {
            Format::Json => {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "g": r.g,
                            "max_deviation": r.max_deviation.as_ref().map(exact),
                            "max_deviation_approx": r.max_deviation.as_ref().map(approx),
                            "argmax_partition": r.argmax,
                            "partitions": r.partitions,
                            "note": r.note,
                        })
                    })
                    .collect();
                self.json(&json!({ "kind": kind, "n": n, "K": k, "rows": rows }))
            }
            Format::Csv => self.csv(
                &format!("scan-{kind}"),
                &["g", "n", "K", "max_deviation", "max_deviation_approx", "argmax_partition", "partitions", "note"],
                rows.iter()
                    .map(|r| {
                        vec![
                            r.g.to_string(),
                            n.to_string(),
                            k.to_string(),
                            r.max_deviation.as_ref().map(exact).unwrap_or_default(),
                            r.max_deviation.as_ref().map(approx).unwrap_or_default(),
                            r.argmax.as_deref().map(join).unwrap_or_default(),
                            r.partitions.to_string(),
                            r.note.clone().unwrap_or_default(),
                        ]
                    })
                    .collect(),
            ),
        }
    }

    pub fn reconstruct(
        &self,
        rf: &RationalFunctionInG,
        series: &SeriesCoefficients,
        theorem_b: &TheoremBReport,
        library: &GkReport,
    ) -> Result<()> {
        let factors: Vec<String> = rf
            .denominator_shifts()
            .iter()
            .map(|c| if *c < 0 { format!("6g-{}", -c) } else { format!("6g+{c}") })
            .collect();
        match self.format {
            Format::Json => self.json(&json!({
                "n": rf.n,
                "dfix": rf.dfix,
                "numerator": exacts(rf.numerator.coeffs()),
                "numerator_text": rf.numerator.to_string(),
                "denominator_factors": factors,
                "fit_genera": rf.fit_genera,
                "check_genera": rf.check_genera,
                "G": exacts(&series.g),
                "C": exacts(&series.c),
                "theorem_b": theorem_b,
                "library": library.checks,
            })),
            Format::Csv => {
                let mut rows = Vec::new();
                for (i, c) in rf.numerator.coeffs().iter().enumerate() {
                    rows.push(vec!["numerator".into(), i.to_string(), exact(c), approx(c)]);
                }
                for (i, f) in factors.iter().enumerate() {
                    rows.push(vec!["denominator".into(), (i + 1).to_string(), f.clone(), String::new()]);
                }
                for (i, c) in series.g.iter().enumerate() {
                    rows.push(vec!["G".into(), i.to_string(), exact(c), approx(c)]);
                }
                for (i, c) in series.c.iter().enumerate() {
                    rows.push(vec!["C".into(), i.to_string(), exact(c), approx(c)]);
                }
                self.csv("reconstruct", &["series", "index", "value", "value_approx"], rows)
            }
        }
    }
}
