//! Serializable forms of `pi` results, shared by the cache and the outputs.

use anyhow::{anyhow, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use scell_core::affine_weyl::AffinePermutation;
use scell_core::gkm::GkmClass;
use scell_core::pi_map::{pi, Diagnostics, PiResult, SampleConfig};

use crate::cache::{Cache, CacheKey};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vote {
    pub class: GkmClass,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiRecord {
    pub pi: GkmClass,
    pub votes: Vec<Vote>,
    pub certified: bool,
    pub is_minimal: bool,
    pub diagnostics: Diagnostics,
}

impl From<PiResult> for PiRecord {
    fn from(r: PiResult) -> Self {
        PiRecord {
            votes: r.votes.into_iter().map(|(class, count)| Vote { class, count }).collect(),
            pi: r.gkm,
            certified: r.certified,
            is_minimal: r.is_minimal,
            diagnostics: r.diagnostics,
        }
    }
}

pub fn cache_key(x: &AffinePermutation, cfg: &SampleConfig) -> CacheKey {
    CacheKey {
        n: x.n(),
        mode: x.mode().to_string(),
        x: x.encode(),
        primes: cfg.primes(),
        precision: cfg.start_precision(x.n()),
        trials: cfg.trials,
        seed: cfg.seed,
        resample_limit: cfg.resample_limit,
        version: crate::VERSION.to_string(),
    }
}

/// `pi` for every element, in input order, reusing and extending the cache.
///
/// Failures are returned per element as their error text; they are not cached.
pub fn compute_all(xs: &[AffinePermutation], cfg: &SampleConfig, cache: Option<&mut Cache>) -> Result<Vec<Result<PiRecord, String>>> {
    let keys: Vec<CacheKey> = xs.iter().map(|x| cache_key(x, cfg)).collect();
    let cached: Vec<Option<PiRecord>> = match &cache {
        Some(c) => keys.iter().map(|k| c.get(k).cloned()).collect(),
        None => vec![None; xs.len()],
    };
    let results: Vec<Result<PiRecord, String>> = xs
        .par_iter()
        .zip(cached.into_par_iter())
        .map(|(x, hit)| match hit {
            Some(r) => Ok(r),
            None => pi(x, cfg).map(PiRecord::from).map_err(|e| e.to_string()),
        })
        .collect();
    if let Some(cache) = cache {
        let fresh = keys.into_iter().zip(results.iter()).filter_map(|(k, r)| r.as_ref().ok().map(|r| (k, r.clone()))).collect();
        cache.append(fresh)?;
    }
    Ok(results)
}

pub fn compute_one(x: &AffinePermutation, cfg: &SampleConfig, cache: Option<&mut Cache>) -> Result<PiRecord> {
    compute_all(std::slice::from_ref(x), cfg, cache)?.pop().expect("one result").map_err(|e| anyhow!(e))
}
