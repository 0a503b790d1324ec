//! Cell tables: `pi` over a length ball, grouped by cycle type.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use scell_core::affine_weyl::{enumerate_ball, AffinePermutation, Mode};
use scell_core::gkm::GkmClass;
use scell_core::pi_map::SampleConfig;
use scell_core::rational::format_q;

use crate::cache::Cache;
use crate::record::compute_all;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub x: String,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<GkmClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pibar: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    pub certified: bool,
    pub is_minimal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTable {
    pub n: usize,
    pub mode: Mode,
    pub max_length: usize,
    pub config: SampleConfig,
    pub version: String,
    pub status: String,
    #[serde(default)]
    pub failures: Vec<String>,
    pub entries: Vec<Entry>,
    /// Cycle type (as `"(2,1)"`) to the elements in that cell.
    pub cells: BTreeMap<String, Vec<String>>,
}

impl CellTable {
    pub fn elements(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter()
    }

    /// Size of every cell restricted to elements of length at most `len`.
    pub fn cell_sizes_at(&self, len: usize) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> = self.cells.keys().map(|k| (k.clone(), 0)).collect();
        let lengths: BTreeMap<&str, usize> = self.entries.iter().map(|e| (e.x.as_str(), e.length)).collect();
        for (label, xs) in &self.cells {
            let c = xs.iter().filter(|x| lengths.get(x.as_str()).is_some_and(|&l| l <= len)).count();
            out.insert(label.clone(), c);
        }
        out
    }

    pub fn write_json<W: Write>(&self, w: &mut W) -> Result<()> {
        serde_json::to_writer_pretty(&mut *w, self)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "length", "pibar", "rvals", "delta", "certified", "is_minimal", "error"])?;
        for e in &self.entries {
            let pibar = e.pibar.as_ref().map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_default();
            let rvals = e.pi.as_ref().map(|c| c.distinct_values().iter().map(format_q).collect::<Vec<_>>().join(" ")).unwrap_or_default();
            out.write_record([
                e.x.clone(),
                e.length.to_string(),
                pibar,
                rvals,
                e.delta.map(|d| d.to_string()).unwrap_or_default(),
                e.certified.to_string(),
                e.is_minimal.to_string(),
                e.error.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Computes the table for all elements of length at most `max_length`.
pub fn build_table(n: usize, mode: Mode, max_length: usize, cfg: &SampleConfig, cache: Option<&mut Cache>) -> Result<CellTable> {
    let xs: Vec<AffinePermutation> = enumerate_ball(n, mode, max_length);
    let results = compute_all(&xs, cfg, cache)?;
    let mut entries = Vec::with_capacity(xs.len());
    let mut cells: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut failures = Vec::new();
    for (x, r) in xs.iter().zip(results) {
        let code = x.encode();
        let entry = match r {
            Ok(rec) => {
                let delta = rec.pi.delta().ok();
                if !rec.is_minimal {
                    failures.push(format!("{code}: class {} is not minimal", rec.pi));
                }
                if delta.is_none() {
                    failures.push(format!("{code}: delta of {} is not integral", rec.pi));
                }
                cells.entry(rec.pi.cycle_type().to_string()).or_default().push(code.clone());
                Entry {
                    x: code,
                    length: x.length(),
                    pibar: Some(rec.pi.cycle_type().parts().to_vec()),
                    delta,
                    certified: rec.certified,
                    is_minimal: rec.is_minimal,
                    pi: Some(rec.pi),
                    error: None,
                }
            }
            Err(e) => {
                failures.push(format!("{code}: {e}"));
                Entry { x: code, length: x.length(), pi: None, pibar: None, delta: None, certified: false, is_minimal: false, error: Some(e) }
            }
        };
        entries.push(entry);
    }
    let status = if failures.is_empty() { "OK" } else { "FAILED" }.to_string();
    Ok(CellTable {
        n,
        mode,
        max_length,
        config: cfg.clone(),
        version: crate::VERSION.to_string(),
        status,
        failures,
        entries,
        cells,
    })
}
