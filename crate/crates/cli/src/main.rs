//! `psi`: batch front-end for exact psi-class intersection numbers.
//!
//! Exit codes: 0 success (conjecture-evidence mismatches included, flagged
//! as warnings), 1 a proved identity failed, 2 invalid input, refusal or
//! any other error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use psi_core::asymptotics::scan::{dgzz_scan, theorem3_scan, ScanCaps};
use psi_core::asymptotics::{compare_with_library, reconstruct, series_coeffs, theorem_b_report};
use psi_core::mr::MrEngine;
use psi_core::store::{Persisted, Store, STORE_ENV};
use psi_core::verify::{run_suite, OracleSweep, Suite, VerifyConfig};
use psi_core::virasoro::VirasoroOracle;
use psi_core::{CorrelatorSource, MultiIndex};

use output::{Format, Out};

#[derive(Parser, Debug)]
#[command(name = "psi", version, about = "Exact psi-class intersection numbers and their large-genus structure")]
struct Cli {
    /// Persistent value cache; created if missing.
    #[arg(long, global = true, env = STORE_ENV)]
    store: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Refuse scans that would enumerate more partitions than this per genus.
    #[arg(long, global = true)]
    max_partitions: Option<usize>,

    /// Expansion order for `reconstruct` and `scan theorem3`.
    #[arg(long = "K", global = true)]
    k: Option<i64>,

    /// Engine used for values (the other one serves as reference in
    /// `verify oracle`).
    #[arg(long, global = true, value_enum, default_value_t = Engine::Mr)]
    producer: Engine,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Mr,
    Virasoro,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Correlator ⟨τ_{d_1} ⋯ τ_{d_n}⟩ and its normalized value.
    Compute {
        #[arg(required = true, num_args = 1..)]
        d: Vec<u32>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Use reduced sweep sizes.
        #[arg(long)]
        quick: bool,
    },
    /// Finite-genus evidence tables.
    Scan(ScanArgs),
    /// Exact rational function of g for fixed (d_1, …, d_{n-1}).
    Reconstruct {
        #[arg(long)]
        n: usize,
        /// Fixed exponents, comma separated (omit for n = 1).
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(value_enum)]
    kind: ScanKind,
    #[arg(long)]
    n: usize,
    /// Genera, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    g: Vec<i64>,
    /// Override the cap on n.
    #[arg(long)]
    max_n: Option<usize>,
    /// Override the cap on 3g-3+n.
    #[arg(long)]
    max_total: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanKind {
    Dgzz,
    Theorem3,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("configuring worker pool")?;
    }
    let store = match &cli.store {
        Some(path) => Some(Store::open(path).with_context(|| format!("opening store {}", path.display()))?),
        None => None,
    };
    let mr = MrEngine::new();
    let oracle = VirasoroOracle::new();
    let mr_p = store.as_ref().map(|s| Persisted::new(&mr, s));
    let oracle_p = store.as_ref().map(|s| Persisted::new(&oracle, s));
    let mr_src: &dyn CorrelatorSource = match &mr_p {
        Some(p) => p,
        None => &mr,
    };
    let oracle_src: &dyn CorrelatorSource = match &oracle_p {
        Some(p) => p,
        None => &oracle,
    };
    let (primary, reference) = match cli.producer {
        Engine::Mr => (mr_src, oracle_src),
        Engine::Virasoro => (oracle_src, mr_src),
    };

    let mut out = Out::new(cli.format);
    let code = dispatch(cli, primary, reference, &mut out)?;
    if let Some(s) = &store {
        s.flush().context("flushing store")?;
    }
    Ok(code)
}

fn dispatch(
    cli: &Cli,
    primary: &dyn CorrelatorSource,
    reference: &dyn CorrelatorSource,
    out: &mut Out,
) -> Result<ExitCode> {
    match &cli.command {
        Command::Compute { d } => {
            let index = MultiIndex::new(d.clone())?;
            let genus = index.stable_genus()?;
            let correlator = primary.correlator(&index)?;
            let normalized = primary.normalized(&index)?;
            let note = genus.is_none().then(|| {
                format!("dimension mismatch: sum {} is not 3g-3+{} for any genus g", index.total(), index.n())
            });
            out.compute(&index, primary.producer().to_string(), genus, &correlator, &normalized, note.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, quick } => {
            let cfg = if *quick { quick_config() } else { VerifyConfig::default() };
            let report = run_suite(*suite, &cfg, primary, reference)?;
            out.verify(&report)?;
            if report.hard_failures() > 0 {
                eprintln!("{} hard failure(s) in suite {}", report.hard_failures(), report.suite);
                return Ok(ExitCode::from(1));
            }
            if report.warnings() > 0 {
                eprintln!("warning: {} conjecture-evidence mismatch(es)", report.warnings());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => {
            let defaults = ScanCaps::default();
            let caps = ScanCaps {
                max_n: args.max_n.unwrap_or(defaults.max_n),
                max_total: args.max_total.unwrap_or(defaults.max_total),
                max_partitions: cli.max_partitions,
            };
            let (rows, k) = match args.kind {
                ScanKind::Dgzz => (dgzz_scan(primary, args.n, &args.g, &caps)?, 0),
                ScanKind::Theorem3 => {
                    let k = cli.k.unwrap_or(1);
                    if k < 0 {
                        bail!("--K must be nonnegative");
                    }
                    (theorem3_scan(primary, args.n, k as usize, &args.g, &caps)?, k)
                }
            };
            let kind = match args.kind {
                ScanKind::Dgzz => "dgzz",
                ScanKind::Theorem3 => "theorem3",
            };
            out.scan(kind, args.n, k, &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reconstruct { n, d } => {
            let rf = reconstruct(primary, *n, d)?;
            let k = cli.k.unwrap_or(3);
            let series = series_coeffs(&rf, k)?;
            let theorem_b = theorem_b_report(&rf)?;
            let library = compare_with_library(&rf, &series);
            out.reconstruct(&rf, &series, &theorem_b, &library)?;
            if !theorem_b.passed() || library.hard_failures() > 0 {
                eprintln!("structural check failed for n = {n}, d = {d:?}");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn quick_config() -> VerifyConfig {
    VerifyConfig {
        grid_max_n: 4,
        random_keys: 500,
        oracle: OracleSweep { max_n: 4, max_g: 3, pair_max_g: 6 },
        structure_max_n: 3,
        structure_max_total: 4,
        recursion_max_n: 4,
        zograf_max_g: 6,
        ..VerifyConfig::default()
    }
}
