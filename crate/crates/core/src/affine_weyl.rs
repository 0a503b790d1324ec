//! Affine permutations (the affine Weyl group of type A), Coxeter length,
//! length-ball enumeration and the valuation-threshold realization of the
//! intersected Iwahori radical.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("window length {0} is below 2")]
    TooShort(usize),
    #[error("window residues are not a complete residue system (NonBijective)")]
    NonBijective,
    #[error("window weight {weight} is not allowed in {mode} mode (WrongWeight)")]
    WrongWeight { weight: i64, mode: Mode },
    #[error("rank or mode mismatch: {0} vs {1}")]
    RankMismatch(String, String),
    #[error("cannot parse affine permutation {0:?}")]
    Parse(String),
    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),
}

/// Which group is in force: `SL_n` (weight zero) or the `GL_n`-extended group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    #[serde(rename = "SL")]
    Sl,
    #[serde(rename = "GL")]
    Gl,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sl => "SL",
            Mode::Gl => "GL",
        })
    }
}

impl FromStr for Mode {
    type Err = AffineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Mode::Sl),
            "gl" => Ok(Mode::Gl),
            _ => Err(AffineError::Parse(s.to_string())),
        }
    }
}

/// A bijection `u: Z -> Z` with `u(i + n) = u(i) + n`, stored as its window
/// `u(1), ..., u(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    window: Vec<i64>,
    mode: Mode,
}

impl AffinePermutation {
    pub fn new(window: Vec<i64>, mode: Mode) -> Result<Self, AffineError> {
        let n = window.len();
        if n < 2 {
            return Err(AffineError::TooShort(n));
        }
        let mut seen = vec![false; n];
        for &u in &window {
            let r = u.rem_euclid(n as i64) as usize;
            if seen[r] {
                return Err(AffineError::NonBijective);
            }
            seen[r] = true;
        }
        let weight = weight_of(&window);
        let ok = match mode {
            Mode::Sl => weight == 0,
            Mode::Gl => weight % n as i64 == 0,
        };
        if !ok {
            return Err(AffineError::WrongWeight { weight, mode });
        }
        Ok(AffinePermutation { window, mode })
    }

    pub fn identity(n: usize, mode: Mode) -> Self {
        AffinePermutation { window: (1..=n as i64).collect(), mode }
    }

    /// The simple reflection `s_i`, `0 <= i < n`; `s_0` is the affine one.
    pub fn simple_reflection(n: usize, i: usize, mode: Mode) -> Self {
        assert!(i < n);
        let mut w = Self::identity(n, mode);
        w.swap_positions(i);
        w
    }

    /// The length-zero rotation `i -> i + 1` (GL mode only).
    pub fn rotation(n: usize) -> Self {
        AffinePermutation { window: (2..=n as i64 + 1).collect(), mode: Mode::Gl }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn weight(&self) -> i64 {
        weight_of(&self.window)
    }

    /// `u(i)` for any integer `i`.
    pub fn apply(&self, i: i64) -> i64 {
        let n = self.n() as i64;
        let r = (i - 1).rem_euclid(n);
        let shift = (i - 1).div_euclid(n);
        self.window[r as usize] + shift * n
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AffineError> {
        if self.n() != other.n() || self.mode != other.mode {
            return Err(AffineError::RankMismatch(self.encode(), other.encode()));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, AffineError> {
        self.check_compatible(other)?;
        let window = other.window.iter().map(|&v| self.apply(v)).collect();
        Ok(AffinePermutation { window, mode: self.mode })
    }

    pub fn inverse(&self) -> Self {
        let n = self.n() as i64;
        let mut window = vec![0i64; self.n()];
        for (idx, &v) in self.window.iter().enumerate() {
            // u(idx+1) = v  =>  u^{-1}(v) = idx+1, shift back into 1..=n
            let r = (v - 1).rem_euclid(n);
            let shift = (v - 1).div_euclid(n);
            window[r as usize] = idx as i64 + 1 - shift * n;
        }
        AffinePermutation { window, mode: self.mode }
    }

    /// Right multiplication by `s_i`: swaps `u(i)` and `u(i+1)` (periodically).
    fn swap_positions(&mut self, i: usize) {
        let n = self.n();
        if i == 0 {
            let n_i = n as i64;
            let first = self.window[0];
            let last = self.window[n - 1];
            self.window[0] = last - n_i;
            self.window[n - 1] = first + n_i;
        } else {
            self.window.swap(i - 1, i);
        }
    }

    pub fn mul_simple(&self, i: usize) -> Self {
        let mut w = self.clone();
        w.swap_positions(i);
        w
    }

    /// Right multiplication by the rotation or its inverse, followed by
    /// reduction modulo central translations.
    fn mul_rotation(&self, forward: bool) -> Self {
        let n = self.n();
        let window: Vec<i64> = if forward {
            (0..n).map(|k| self.apply(k as i64 + 2)).collect()
        } else {
            (0..n).map(|k| self.apply(k as i64)).collect()
        };
        AffinePermutation { window, mode: self.mode }.normalized()
    }

    /// Representative modulo the central translations `i -> i + n`: the
    /// weight is brought into `[0, n^2)`. Identity on SL elements.
    pub fn normalized(&self) -> Self {
        if self.mode == Mode::Sl {
            return self.clone();
        }
        let n = self.n() as i64;
        let k = self.weight() / n;
        let q = k.div_euclid(n);
        let window = self.window.iter().map(|&v| v - q * n).collect();
        AffinePermutation { window, mode: self.mode }
    }

    /// Coxeter length by inversion counting:
    /// `sum_{1<=i<j<=n} |floor((u(j) - u(i)) / n)|`.
    pub fn length(&self) -> usize {
        let n = self.n() as i64;
        let mut total = 0i64;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                total += (self.window[j] - self.window[i]).div_euclid(n).abs();
            }
        }
        total as usize
    }

    /// The finite permutation `i -> u(i) mod n` of `{1..n}` (1-based images).
    pub fn finite_part(&self) -> Vec<usize> {
        let n = self.n() as i64;
        self.window.iter().map(|&v| ((v - 1).rem_euclid(n) + 1) as usize).collect()
    }

    /// Canonical text form `n:u(1),...,u(n)`.
    pub fn encode(&self) -> String {
        let body: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        format!("{}:{}", self.n(), body.join(","))
    }

    /// Parses `n:u(1),...,u(n)`.
    pub fn parse(s: &str, mode: Mode) -> Result<Self, AffineError> {
        let (n, body) = s.split_once(':').ok_or_else(|| AffineError::Parse(s.to_string()))?;
        let n: usize = n.trim().parse().map_err(|_| AffineError::Parse(s.to_string()))?;
        let window = parse_window(body)?;
        if window.len() != n {
            return Err(AffineError::Parse(s.to_string()));
        }
        Self::new(window, mode)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Parses a comma-separated integer list.
pub fn parse_window(body: &str) -> Result<Vec<i64>, AffineError> {
    body.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| AffineError::Parse(body.to_string())))
        .collect()
}

fn weight_of(window: &[i64]) -> i64 {
    window.iter().enumerate().map(|(i, &u)| u - (i as i64 + 1)).sum()
}

/// Sort key realizing the canonical order: length first, then window.
pub fn canonical_key(x: &AffinePermutation) -> (usize, Vec<i64>) {
    (x.length(), x.window.clone())
}

/// Graph distances from the identity in the Cayley graph on `s_0, ..., s_{n-1}`
/// (plus the length-zero rotation in GL mode, modulo central translations),
/// for every element at distance `<= max_len`.
pub fn bfs_lengths(n: usize, mode: Mode, max_len: usize) -> HashMap<AffinePermutation, usize> {
    let start = AffinePermutation::identity(n, mode);
    let mut dist: HashMap<AffinePermutation, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(start.clone(), 0);
    queue.push_back(start);
    // 0-1 BFS: rotation edges cost nothing and go to the front
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if mode == Mode::Gl {
            for forward in [true, false] {
                let y = x.mul_rotation(forward);
                if dist.get(&y).is_none_or(|&old| old > d) {
                    dist.insert(y.clone(), d);
                    queue.push_front(y);
                }
            }
        }
        if d == max_len {
            continue;
        }
        for i in 0..n {
            let y = x.mul_simple(i);
            if dist.get(&y).is_none_or(|&old| old > d + 1) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// All elements of length `<= max_len`, each once, sorted by (length, window).
///
/// In GL mode the ball is taken modulo central translations (see
/// [`AffinePermutation::normalized`]); otherwise it would be infinite.
pub fn enumerate_ball(n: usize, mode: Mode, max_len: usize) -> Vec<AffinePermutation> {
    let mut out: Vec<(usize, AffinePermutation)> =
        bfs_lengths(n, mode, max_len).into_iter().map(|(x, d)| (d, x)).collect();
    out.sort_by(|a, b| (a.0, &a.1.window).cmp(&(b.0, &b.1.window)));
    out.into_iter().map(|(_, x)| x).collect()
}

/// Entrywise minimal `t`-valuations of a matrix subspace of `gl_n(k[[t]])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThresholdMatrix {
    n: usize,
    k: Vec<Vec<i64>>,
}

impl ThresholdMatrix {
    /// The Iwahori radical: valuation `>= 0` strictly above the diagonal, `>= 1` on and below.
    pub fn kappa(n: usize) -> Self {
        let k = (0..n).map(|i| (0..n).map(|j| if i < j { 0 } else { 1 }).collect()).collect();
        ThresholdMatrix { n, k }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.k[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.k
    }

    /// `sum_{i,j} (K_ij - kappa_ij)`.
    pub fn excess(&self) -> i64 {
        let kappa = Self::kappa(self.n);
        (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).map(|(i, j)| self.k[i][j] - kappa.k[i][j]).sum()
    }
}

/// Thresholds of the intersection of the Iwahori radical with its conjugate by `x`.
///
/// `x` acts as the monomial matrix sending `e_j` to `t^{-k_j} e_{r_j}` where
/// `u(j) = r_j + n k_j`, `1 <= r_j <= n`. Conjugating the radical moves the
/// condition on entry `(a, b)` to entry `(r_a, r_b)` and shifts it by
/// `k_b - k_a`; intersecting takes the entrywise maximum.
pub fn threshold_matrix(x: &AffinePermutation) -> ThresholdMatrix {
    let n = x.n();
    let ni = n as i64;
    let kappa = ThresholdMatrix::kappa(n);
    let r: Vec<usize> = x.window.iter().map(|&v| (v - 1).rem_euclid(ni) as usize).collect();
    let k: Vec<i64> = x.window.iter().map(|&v| (v - 1).div_euclid(ni)).collect();
    let mut out = kappa.clone();
    for a in 0..n {
        for b in 0..n {
            let moved = kappa.k[a][b] - k[a] + k[b];
            let cell = &mut out.k[r[a]][r[b]];
            *cell = (*cell).max(moved);
        }
    }
    out
}

/// An integer partition, parts weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, AffineError> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(AffineError::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_parts(mut parts: Vec<usize>) -> Result<Self, AffineError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(1, ..., 1)`.
    pub fn ones(n: usize) -> Self {
        Partition(vec![1; n])
    }

    /// `(n)`.
    pub fn single(n: usize) -> Self {
        Partition(vec![n])
    }

    /// The conjugate (transposed) partition.
    pub fn conjugate(&self) -> Self {
        let cols = self.0[0];
        Partition((1..=cols).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order (`(n)` first).
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for part in (1..=max.min(rest)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = AffineError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Cycle type of a permutation of `{1..n}` given by its 1-based images.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] - 1;
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_parts(lengths).expect("non-empty permutation")
}
