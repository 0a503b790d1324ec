//! Property checks over a cell table.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use scell_core::affine_weyl::{enumerate_ball, Partition};
use scell_core::gkm::is_elliptic;

use crate::table::CellTable;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellGrowth {
    pub elliptic: bool,
    pub sizes: Vec<usize>,
    /// `stable` for elliptic cells that do not change across the window,
    /// `growing` when sizes strictly increase.
    pub trend: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub n: usize,
    pub max_length: usize,
    pub entries: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub growth_lengths: Vec<usize>,
    /// Finiteness of elliptic cells is judged by stability over `growth_lengths`.
    pub growth: BTreeMap<String, CellGrowth>,
}

impl Report {
    pub fn first_counterexample(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.counterexample.as_deref().unwrap_or("failed")))
    }
}

fn check(name: &str, counterexample: Option<String>) -> Check {
    Check { name: name.to_string(), pass: counterexample.is_none(), counterexample }
}

fn structure(t: &CellTable) -> Option<String> {
    let expected: BTreeMap<String, usize> = enumerate_ball(t.n, t.mode, t.max_length).into_iter().map(|x| (x.encode(), x.length())).collect();
    let mut seen = BTreeSet::new();
    for e in &t.entries {
        if !seen.insert(e.x.as_str()) {
            return Some(format!("{} listed twice", e.x));
        }
        match expected.get(&e.x) {
            None => return Some(format!("{} is not in the ball of radius {}", e.x, t.max_length)),
            Some(&l) if l != e.length => return Some(format!("{} has length {}, recorded {}", e.x, l, e.length)),
            _ => {}
        }
        if let Some(c) = &e.pi {
            if e.pibar.as_deref() != Some(c.cycle_type().parts()) {
                return Some(format!("{}: pibar does not match {}", e.x, c));
            }
            if e.delta != c.delta().ok() {
                return Some(format!("{}: recorded delta {:?} for {}", e.x, e.delta, c));
            }
            if e.is_minimal != c.is_minimal() {
                return Some(format!("{}: minimality flag disagrees with {}", e.x, c));
            }
        }
    }
    if let Some(missing) = expected.keys().find(|x| !seen.contains(x.as_str())) {
        return Some(format!("{missing} is missing"));
    }
    let labels: BTreeMap<&str, String> = t.entries.iter().filter_map(|e| e.pi.as_ref().map(|c| (e.x.as_str(), c.cycle_type().to_string()))).collect();
    let mut placed = BTreeSet::new();
    for (label, xs) in &t.cells {
        for x in xs {
            if labels.get(x.as_str()) != Some(label) {
                return Some(format!("{x} filed under {label}"));
            }
            if !placed.insert(x.as_str()) {
                return Some(format!("{x} appears in two cells"));
            }
        }
    }
    if let Some(x) = labels.keys().find(|x| !placed.contains(*x)) {
        return Some(format!("{x} is in no cell"));
    }
    None
}

fn minimality(t: &CellTable) -> Option<String> {
    for e in &t.entries {
        match &e.pi {
            None => return Some(format!("{}: {}", e.x, e.error.as_deref().unwrap_or("no result"))),
            Some(c) if !c.is_minimal() => return Some(format!("{}: {} is not minimal", e.x, c)),
            Some(c) if c.delta().is_err() => return Some(format!("{}: delta of {} is not integral", e.x, c)),
            Some(_) if !e.certified => return Some(format!("{}: uncertified", e.x)),
            _ => {}
        }
    }
    None
}

fn surjectivity(t: &CellTable) -> Option<String> {
    Partition::all(t.n)
        .into_iter()
        .find(|p| t.cells.get(&p.to_string()).is_none_or(|xs| xs.is_empty()))
        .map(|p| format!("no element with cycle type {p}"))
}

fn default_window(l: usize) -> Vec<usize> {
    let mut v: Vec<usize> = [l.saturating_sub(4), l.saturating_sub(2), l].into_iter().collect();
    v.dedup();
    v
}

fn growth(t: &CellTable, lengths: &[usize]) -> (BTreeMap<String, CellGrowth>, Option<String>) {
    let snapshots: Vec<BTreeMap<String, usize>> = lengths.iter().map(|&l| t.cell_sizes_at(l)).collect();
    let mut out = BTreeMap::new();
    let mut failure = None;
    let mut any_growing = false;
    for p in Partition::all(t.n) {
        let label = p.to_string();
        let sizes: Vec<usize> = snapshots.iter().map(|s| s.get(&label).copied().unwrap_or(0)).collect();
        let elliptic = is_elliptic(&p);
        let stable = sizes.windows(2).all(|w| w[0] == w[1]);
        let growing = sizes.len() > 1 && sizes.windows(2).all(|w| w[0] < w[1]);
        if elliptic && !stable && failure.is_none() {
            failure = Some(format!("elliptic cell {label} changes size: {sizes:?} at lengths {lengths:?}"));
        }
        any_growing |= !elliptic && growing;
        let trend = if growing { "growing" } else if stable { "stable" } else { "irregular" };
        out.insert(label, CellGrowth { elliptic, sizes, trend: trend.to_string() });
    }
    if failure.is_none() && t.n > 1 && !any_growing {
        failure = Some(format!("no non-elliptic cell grows strictly across lengths {lengths:?}"));
    }
    (out, failure)
}

/// Runs every check; `growth_at` empty means `L-4, L-2, L`.
pub fn verify_table(t: &CellTable, growth_at: &[usize]) -> Report {
    let lengths = if growth_at.is_empty() { default_window(t.max_length) } else { growth_at.to_vec() };
    let mut checks = vec![check("structure", structure(t)), check("minimality", minimality(t)), check("surjectivity", surjectivity(t))];
    let (growth_map, growth_failure) = if let Some(&bad) = lengths.iter().find(|&&l| l > t.max_length) {
        (BTreeMap::new(), Some(format!("growth length {bad} exceeds the table radius {}", t.max_length)))
    } else {
        growth(t, &lengths)
    };
    checks.push(check("growth", growth_failure));
    Report {
        n: t.n,
        max_length: t.max_length,
        entries: t.entries.len(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        growth_lengths: lengths,
        growth: growth_map,
    }
}
