//! The `scell` command line tool.

pub mod args;
pub mod cache;
pub mod record;
pub mod table;
pub mod verify;

use std::fmt;
use std::fs;
use std::io::{self, Write};

use anyhow::{Context, Result};
use serde::Serialize;

use scell_core::affine_weyl::{parse_window, AffinePermutation, Mode, Partition};
use scell_core::finite_cells::{finite_scell, rs_shape, FinitePermutation};
use scell_core::gkm::{minimal_gkm, GkmClass};
use scell_core::pi_map::{minimal_oracle, Diagnostics, SampleConfig};

use args::{CellsArgs, Cli, Command, FiniteArgs, Format, MinimalArgs, PiArgs, Sampling, VerifyArgs};
use cache::Cache;
use record::{compute_one, Vote};
use table::{build_table, CellTable};

/// Tags cache entries; bump to invalidate old results.
pub const VERSION: &str = concat!("scell-", env!("CARGO_PKG_VERSION"));

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// A bad flag value that clap could not catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<E: fmt::Display>(e: E) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

/// Runs a parsed command, writing its document to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Pi(a) => cmd_pi(a, out),
        Command::Cells(a) => cmd_cells(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::FiniteCells(a) => cmd_finite_cells(a, out),
        Command::Minimal(a) => cmd_minimal(a, out),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn checked_config(s: &Sampling, n: usize) -> Result<SampleConfig> {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let cfg = s.config();
    cfg.validate(n).map_err(usage)?;
    Ok(cfg)
}

fn open_cache(s: &Sampling) -> Result<Option<Cache>> {
    if s.no_cache {
        Ok(None)
    } else {
        Cache::open_default().map(Some)
    }
}

#[derive(Serialize)]
struct PiOutput {
    x: String,
    mode: Mode,
    length: usize,
    pi: GkmClass,
    pibar: Vec<usize>,
    delta: Option<u64>,
    is_minimal: bool,
    certified: bool,
    votes: Vec<Vote>,
    diagnostics: Diagnostics,
}

fn cmd_pi(a: PiArgs, out: &mut dyn Write) -> Result<i32> {
    let mode: Mode = a.mode.into();
    let cfg = checked_config(&a.sampling, a.n)?;
    let window = parse_window(&a.window).map_err(usage)?;
    if window.len() != a.n {
        return Err(usage(format!("window has {} entries, expected {}", window.len(), a.n)));
    }
    let x = AffinePermutation::new(window, mode).map_err(usage)?.normalized();
    let mut cache = open_cache(&a.sampling)?;
    let rec = compute_one(&x, &cfg, cache.as_mut())?;
    let output = PiOutput {
        x: x.encode(),
        mode,
        length: x.length(),
        pibar: rec.pi.cycle_type().parts().to_vec(),
        delta: rec.pi.delta().ok(),
        is_minimal: rec.is_minimal,
        certified: rec.certified,
        pi: rec.pi,
        votes: rec.votes,
        diagnostics: rec.diagnostics,
    };
    emit(out, &output)?;
    if !output.is_minimal {
        eprintln!("error: {} is not minimal for {}", output.pi, output.x);
        return Ok(EXIT_FAILURE);
    }
    Ok(if output.certified { EXIT_OK } else { EXIT_UNCERTIFIED })
}

fn table_for(n: usize, mode: Mode, max_length: usize, s: &Sampling) -> Result<CellTable> {
    let cfg = checked_config(s, n)?;
    let mut cache = open_cache(s)?;
    build_table(n, mode, max_length, &cfg, cache.as_mut())
}

fn cmd_cells(a: CellsArgs, out: &mut dyn Write) -> Result<i32> {
    let t = table_for(a.n, a.mode.into(), a.max_length, &a.sampling)?;
    let mut buf = Vec::new();
    match a.format {
        Format::Json => t.write_json(&mut buf)?,
        Format::Csv => t.write_csv(&mut buf)?,
    }
    match &a.out {
        Some(path) => fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(&buf)?,
    }
    for f in &t.failures {
        eprintln!("failed: {f}");
    }
    Ok(if t.failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let t = match (&a.table, a.n, a.max_length) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<CellTable>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(n), Some(l)) => table_for(n, a.mode.into(), l, &a.sampling)?,
        _ => return Err(usage("either --table or both --n and --max-length are required")),
    };
    let report = verify::verify_table(&t, &a.growth_at);
    emit(out, &report)?;
    match report.first_counterexample() {
        None => Ok(EXIT_OK),
        Some(c) => {
            eprintln!("counterexample: {c}");
            Ok(EXIT_FAILURE)
        }
    }
}

#[derive(Serialize)]
struct FiniteRow {
    w: String,
    jordan: Option<Partition>,
    rs: Partition,
    agree: bool,
}

#[derive(Serialize)]
struct FiniteOutput {
    n: usize,
    rows: Vec<FiniteRow>,
    agree: usize,
    total: usize,
}

fn cmd_finite_cells(a: FiniteArgs, out: &mut dyn Write) -> Result<i32> {
    if a.n == 0 || a.n > 6 {
        return Err(usage("--n must be between 1 and 6"));
    }
    if scell_core::field::Field::new(a.prime, 1).is_err() || a.prime < 3 || a.trials == 0 {
        return Err(usage("--prime must be an odd prime and --trials positive"));
    }
    let rows: Vec<FiniteRow> = FinitePermutation::all(a.n)
        .into_iter()
        .map(|w| {
            let jordan = finite_scell(&w, a.prime, a.trials, a.seed).ok();
            let rs = rs_shape(&w);
            FiniteRow { w: w.to_string(), agree: jordan.as_ref() == Some(&rs), jordan, rs }
        })
        .collect();
    let agree = rows.iter().filter(|r| r.agree).count();
    let total = rows.len();
    emit(out, &FiniteOutput { n: a.n, rows, agree, total })?;
    eprintln!("{agree}/{total} agree");
    Ok(if agree == total { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct MinimalRow {
    partition: Partition,
    class: GkmClass,
    delta: u64,
    oracle: String,
}

fn cmd_minimal(a: MinimalArgs, out: &mut dyn Write) -> Result<i32> {
    if a.n == 0 || a.n > 6 {
        return Err(usage("--n must be between 1 and 6"));
    }
    let mut rows = Vec::new();
    let mut mismatch = None;
    for lambda in Partition::all(a.n) {
        let class = minimal_gkm(&lambda);
        let delta = class.delta()?;
        let oracle = if a.oracle_samples == 0 {
            "skipped".to_string()
        } else {
            match minimal_oracle(&lambda, a.prime, a.oracle_samples, a.seed) {
                Ok(c) if c == class => "agrees".to_string(),
                Ok(c) => {
                    mismatch.get_or_insert(format!("{lambda}: oracle gives {c}, expected {class}"));
                    format!("mismatch: {c}")
                }
                Err(e) => {
                    mismatch.get_or_insert(format!("{lambda}: {e}"));
                    format!("error: {e}")
                }
            }
        };
        rows.push(MinimalRow { partition: lambda, class, delta, oracle });
    }
    emit(out, &rows)?;
    if let Some(m) = mismatch {
        eprintln!("oracle mismatch: {m}");
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

/// Writes a diagnostic for a failed command and maps it to an exit code.
pub fn report_error(e: &anyhow::Error) -> i32 {
    let _ = writeln!(io::stderr(), "error: {e:#}");
    if e.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else {
        EXIT_FAILURE
    }
}
