//! Monte-Carlo evaluation of `pi(x)`: sample generic elements of the
//! intersection `I(x)+`, read off the GKM class of each sample, and vote.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::affine_weyl::{threshold_matrix, AffinePermutation, Partition, ThresholdMatrix};
use crate::field::{Field, FieldError};
use crate::gkm::{canonicalize, minimal_gkm, GkmClass, GkmError};
use crate::puiseux::{char_poly, pairwise_valuations, puiseux_expand, PuiseuxError, TruncatedSeries};
use crate::rational::Q;

/// Precision is never raised beyond this many powers of `t`.
pub const MAX_PRECISION: i64 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PiError {
    #[error("sample is not regular semisimple")]
    NotRegularSemisimple,
    #[error("sample is not topologically nilpotent")]
    NotTopologicallyNilpotent,
    #[error("precision {0} is not enough to certify the valuations")]
    InsufficientPrecision(i64),
    #[error("no strict majority among {total} votes")]
    NoConsensus { total: usize },
    #[error("every trial failed to produce a class")]
    SamplingExhausted,
    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error("field extension budget exceeded (needed degree {0})")]
    ExtensionBudget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub prime: u64,
    pub extra_primes: Vec<u64>,
    /// Starting precision in powers of `t`; `0` means `16 n`.
    pub precision: i64,
    pub trials: usize,
    pub seed: u64,
    pub resample_limit: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { prime: 10007, extra_primes: Vec::new(), precision: 0, trials: 5, seed: 0, resample_limit: 8 }
    }
}

impl SampleConfig {
    pub fn primes(&self) -> Vec<u64> {
        std::iter::once(self.prime).chain(self.extra_primes.iter().copied()).collect()
    }

    pub fn start_precision(&self, n: usize) -> i64 {
        if self.precision == 0 {
            16 * n as i64
        } else {
            self.precision
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), PiError> {
        if self.trials == 0 {
            return Err(PiError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.precision != 0 && self.precision < 4 * n as i64 {
            return Err(PiError::InvalidConfig(format!("precision must be at least {}", 4 * n)));
        }
        for p in self.primes() {
            if p > u32::MAX as u64 || !crate::field::is_odd_prime(p) {
                return Err(PiError::InvalidConfig(format!("{p} is not an odd prime below 2^32")));
            }
            if p <= n as u64 {
                return Err(PiError::InvalidConfig(format!("{p} divides {n}!")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub resamples: usize,
    /// Largest precision any trial needed.
    pub final_precision: i64,
    /// One line per trial that produced no vote.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiResult {
    pub gkm: GkmClass,
    pub votes: BTreeMap<GkmClass, usize>,
    /// Every trial at every prime voted, and all votes agree.
    pub certified: bool,
    pub is_minimal: bool,
    pub diagnostics: Diagnostics,
}

impl PiResult {
    pub fn pibar(&self) -> &Partition {
        self.gkm.cycle_type()
    }
}

/// Stable 64-bit seed for one trial.
pub fn trial_seed(master: u64, x: &AffinePermutation, p: u64, trial: usize, resample: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(x.mode().to_string().as_bytes());
    h.update(x.encode().as_bytes());
    h.update(p.to_le_bytes());
    h.update((trial as u64).to_le_bytes());
    h.update((resample as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

fn entry_seed(seed: u64, i: usize, j: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((i as u64).to_le_bytes());
    h.update((j as u64).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// A uniform random element of `{g : val g_ij >= K_ij}` known modulo `t^precision`.
///
/// Entry `(i, j)` draws its coefficients of `t^K_ij, t^{K_ij+1}, ...` in order
/// from its own stream, so raising `precision` extends the same sample.
pub fn sample_element(k: &ThresholdMatrix, p: u64, precision: i64, seed: u64) -> Vec<Vec<TruncatedSeries>> {
    let field = Field::new(p, 1).expect("validated prime");
    let n = k.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let lo = k.get(i, j);
                    let mut rng = ChaCha8Rng::seed_from_u64(entry_seed(seed, i, j));
                    let coeffs = (lo..precision).map(|_| field.from_u64(rng.gen_range(0..p))).collect();
                    TruncatedSeries::from_coeffs(1, lo, coeffs, precision)
                })
                .collect()
        })
        .collect()
}

/// The GKM class of a single series matrix over `F_p`.
pub fn gkm_of_element(gamma: &[Vec<TruncatedSeries>], field: &Field, precision: i64, seed: u64) -> Result<GkmClass, PiError> {
    let cp = char_poly(gamma, field).map_err(map_puiseux)?;
    let exp = puiseux_expand(&cp, field, &Q::from_integer(precision), seed).map_err(map_puiseux)?;
    if exp.branches.iter().any(|b| b.multiplicity > 1) {
        return Err(PiError::NotRegularSemisimple);
    }
    let pv = pairwise_valuations(&exp);
    if !pv.certified {
        let n = pv.eigenvalues.len();
        let collision = (0..n).any(|i| (i + 1..n).any(|j| pv.eigenvalues[i].sub(&pv.eigenvalues[j], &exp.field).is_zero_to_precision()));
        return Err(if collision { PiError::NotRegularSemisimple } else { PiError::InsufficientPrecision(precision) });
    }
    Ok(canonicalize(&pv.cycles, &pv.q)?)
}

fn map_puiseux(e: PuiseuxError) -> PiError {
    match e {
        PuiseuxError::NotSquarefreeToPrecision => PiError::NotRegularSemisimple,
        PuiseuxError::NotTopologicallyNilpotent => PiError::NotTopologicallyNilpotent,
        PuiseuxError::IndeterminateValuation | PuiseuxError::PrecisionZero => PiError::InsufficientPrecision(0),
        PuiseuxError::ExtensionBudgetExceeded { needed } => PiError::ExtensionBudget(needed),
        PuiseuxError::Field(f) => PiError::Field(f),
        PuiseuxError::NotMonic | PuiseuxError::NotSquare => unreachable!("characteristic polynomials are monic and square"),
    }
}

/// Outcome of one trial: a class, or the reason none was produced.
struct Trial {
    class: Result<GkmClass, PiError>,
    resamples: usize,
    precision: i64,
}

fn run_trial(x: &AffinePermutation, k: &ThresholdMatrix, cfg: &SampleConfig, p: u64, trial: usize) -> Trial {
    let field = Field::new(p, 1).expect("validated prime");
    let start = cfg.start_precision(x.n());
    let mut max_precision = start;
    let mut last_err = PiError::SamplingExhausted;
    for resample in 0..=cfg.resample_limit {
        let seed = trial_seed(cfg.seed, x, p, trial, resample);
        let mut precision = start;
        loop {
            max_precision = max_precision.max(precision);
            let gamma = sample_element(k, p, precision, seed);
            match gkm_of_element(&gamma, &field, precision, seed) {
                Ok(c) => return Trial { class: Ok(c), resamples: resample, precision: max_precision },
                Err(PiError::InsufficientPrecision(_)) if precision * 2 <= MAX_PRECISION => precision *= 2,
                Err(PiError::InsufficientPrecision(_)) => {
                    last_err = PiError::InsufficientPrecision(precision);
                    break;
                }
                Err(PiError::NotRegularSemisimple) => {
                    last_err = PiError::NotRegularSemisimple;
                    break;
                }
                Err(e) => return Trial { class: Err(e), resamples: resample, precision: max_precision },
            }
        }
    }
    Trial { class: Err(last_err), resamples: cfg.resample_limit, precision: max_precision }
}

/// `pi(x)`: the majority class over all primes and trials.
pub fn pi(x: &AffinePermutation, cfg: &SampleConfig) -> Result<PiResult, PiError> {
    cfg.validate(x.n())?;
    let k = threshold_matrix(x);
    let mut votes: BTreeMap<GkmClass, usize> = BTreeMap::new();
    let mut diagnostics = Diagnostics::default();
    for p in cfg.primes() {
        for trial in 0..cfg.trials {
            let t = run_trial(x, &k, cfg, p, trial);
            diagnostics.resamples += t.resamples;
            diagnostics.final_precision = diagnostics.final_precision.max(t.precision);
            match t.class {
                Ok(c) => *votes.entry(c).or_default() += 1,
                Err(e) => diagnostics.failures.push(format!("p={p} trial={trial}: {e}")),
            }
        }
    }
    let total: usize = votes.values().sum();
    if total == 0 {
        return Err(PiError::SamplingExhausted);
    }
    let (gkm, count) = votes.iter().max_by_key(|(_, c)| **c).map(|(g, c)| (g.clone(), *c)).expect("non-empty");
    if 2 * count <= total {
        return Err(PiError::NoConsensus { total });
    }
    let certified = votes.len() == 1 && diagnostics.failures.is_empty();
    let is_minimal = gkm.is_minimal();
    Ok(PiResult { gkm, votes, certified, is_minimal, diagnostics })
}

/// Cycle type of `pi(x)`.
pub fn pibar(x: &AffinePermutation, cfg: &SampleConfig) -> Result<Partition, PiError> {
    Ok(pi(x, cfg)?.gkm.cycle_type().clone())
}

/// A random element of the topologically nilpotent twisted torus of type `lambda`:
/// block diagonal, the block of size `d` being `sum_{k >= 1} a_k S^k` with `S`
/// the companion matrix of `lambda^d - t`.
pub fn twisted_torus_sample(lambda: &Partition, p: u64, precision: i64, seed: u64) -> Vec<Vec<TruncatedSeries>> {
    let field = Field::new(p, 1).expect("prime");
    let n = lambda.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![TruncatedSeries::zero(1, precision); n]; n];
    let mut start = 0;
    for &d in lambda.parts() {
        // b_j(t) = sum_m a_{j + m d} t^m, the coefficient of S^j
        let b: Vec<Vec<u64>> = (0..d).map(|_| (0..precision).map(|_| rng.gen_range(0..p)).collect()).collect();
        for r in 0..d {
            for c in 0..d {
                let j = (r + d - c) % d;
                // S^j has 1 at (c + j, c) and t at (c + j - d, c)
                let shift = i64::from(r < c);
                let lo = if j == 0 { 1 } else { 0 };
                let coeffs: Vec<_> = (0..precision)
                    .map(|s| {
                        let m = s - shift;
                        if m < lo {
                            field.zero()
                        } else {
                            field.from_u64(b[j][m as usize])
                        }
                    })
                    .collect();
                m[start + r][start + c] = TruncatedSeries::from_coeffs(1, 0, coeffs, precision);
            }
        }
        start += d;
    }
    m
}

/// Majority class of `samples` twisted-torus samples; used to validate [`minimal_gkm`].
pub fn minimal_oracle(lambda: &Partition, p: u64, samples: usize, seed: u64) -> Result<GkmClass, PiError> {
    let field = Field::new(p, 1)?;
    let n = lambda.size();
    let mut votes: BTreeMap<GkmClass, usize> = BTreeMap::new();
    for s in 0..samples {
        let mut precision = 16 * n as i64;
        let sample_seed = seed.wrapping_add(s as u64);
        loop {
            let gamma = twisted_torus_sample(lambda, p, precision, sample_seed);
            match gkm_of_element(&gamma, &field, precision, sample_seed) {
                Ok(c) => {
                    *votes.entry(c).or_default() += 1;
                    break;
                }
                Err(PiError::InsufficientPrecision(_)) if precision * 2 <= MAX_PRECISION => precision *= 2,
                Err(_) => break,
            }
        }
    }
    let total: usize = votes.values().sum();
    let (class, count) = votes.into_iter().max_by_key(|(_, c)| *c).ok_or(PiError::SamplingExhausted)?;
    if 2 * count <= total {
        return Err(PiError::NoConsensus { total });
    }
    Ok(class)
}

/// Whether [`minimal_gkm`] agrees with the sampling oracle for `lambda`.
pub fn validate_minimal(lambda: &Partition, p: u64, seed: u64) -> Result<bool, PiError> {
    Ok(minimal_oracle(lambda, p, 10, seed)? == minimal_gkm(lambda))
}
