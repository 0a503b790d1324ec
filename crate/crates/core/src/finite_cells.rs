//! Finite S-cells of `S_n`: the generic Jordan type on `n_b ∩ n_b'`,
//! checked against the Robinson-Schensted shape.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine_weyl::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteError {
    #[error("not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("no strict majority among {0} trials")]
    NoConsensus(usize),
}

/// A permutation of `{1..n}` by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinitePermutation(Vec<usize>);

impl FinitePermutation {
    pub fn new(images: Vec<usize>) -> Result<Self, FiniteError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(FiniteError::NotPermutation(n));
            }
        }
        Ok(FinitePermutation(images))
    }

    pub fn identity(n: usize) -> Self {
        FinitePermutation((1..=n).collect())
    }

    pub fn longest(n: usize) -> Self {
        FinitePermutation((1..=n).rev().collect())
    }

    /// The transposition `(i, i+1)`, 1-based.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(i - 1, i);
        FinitePermutation(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        FinitePermutation(inv)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// All of `S_n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(FinitePermutation(cur.clone()));
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

/// Positions `(i, j)`, 1-based with `i < j`, such that `w^{-1}(i) < w^{-1}(j)`.
pub fn intersection_support(w: &FinitePermutation) -> Vec<(usize, usize)> {
    let inv = w.inverse();
    let n = w.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if inv.0[i - 1] < inv.0[j - 1] {
                out.push((i, j));
            }
        }
    }
    out
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let n = m.len();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for r in 0..n {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col] * inv % p;
                for c in col..n {
                    m[r][c] = (m[r][c] + p - factor * m[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(0, |acc, k| (acc + a[i][k] * b[k][j]) % p)).collect()).collect()
}

/// Jordan type of a nilpotent matrix over `F_p` from the ranks of its powers.
pub fn jordan_type(m: &[Vec<u64>], p: u64) -> Partition {
    let n = m.len();
    let mut ranks = vec![n];
    let mut power = m.to_vec();
    while *ranks.last().unwrap() > 0 && ranks.len() <= n {
        ranks.push(rank_mod_p(power.clone(), p));
        power = mat_mul(&power, m, p);
    }
    // number of blocks of size >= k is rank(m^{k-1}) - rank(m^k)
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&c| c > 0).collect();
    Partition::new(conj).expect("rank drops are decreasing").conjugate()
}

/// Generic Jordan type on the support of `w`: majority over `trials` random samples.
pub fn finite_scell(w: &FinitePermutation, p: u64, trials: usize, seed: u64) -> Result<Partition, FiniteError> {
    let n = w.n();
    let support = intersection_support(w);
    let mut votes: BTreeMap<Partition, usize> = BTreeMap::new();
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let mut m = vec![vec![0u64; n]; n];
        for &(i, j) in &support {
            m[i - 1][j - 1] = rng.gen_range(0..p);
        }
        *votes.entry(jordan_type(&m, p)).or_default() += 1;
    }
    let (best, count) = votes.into_iter().max_by_key(|(_, c)| *c).ok_or(FiniteError::NoConsensus(0))?;
    if 2 * count <= trials {
        return Err(FiniteError::NoConsensus(trials));
    }
    Ok(best)
}

/// Shape of the Robinson-Schensted tableaux of `w` (row insertion of `w(1), ..., w(n)`).
pub fn rs_shape(w: &FinitePermutation) -> Partition {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &v in &w.0 {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            match rows[r].iter().position(|&y| y > x) {
                Some(pos) => {
                    x = std::mem::replace(&mut rows[r][pos], x);
                    r += 1;
                }
                None => {
                    rows[r].push(x);
                    break;
                }
            }
        }
    }
    Partition::new(rows.iter().map(|r| r.len()).collect()).expect("tableau rows shrink")
}
