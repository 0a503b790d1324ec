//! GKM classes `[w, r]` for type A: a cycle type together with the valuations
//! of pairwise eigenvalue differences, up to simultaneous relabeling.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::affine_weyl::Partition;
use crate::rational::{format_q, parse_q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkmError {
    #[error("inconsistent valuation data: {0}")]
    InconsistentInput(String),
    #[error("delta is not an integer: d_r = {d_r}, c_w = {c_w}")]
    NonIntegral { d_r: String, c_w: usize },
}

/// A canonical representative of a GKM class.
///
/// Indices are grouped by cycle, cycles in the order of `cycle_type`; each
/// cycle lists its indices in the order the Galois action visits them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GkmClass {
    cycle_type: Partition,
    rvals: Vec<Vec<Q>>,
}

impl GkmClass {
    pub fn cycle_type(&self) -> &Partition {
        &self.cycle_type
    }

    /// Symmetric matrix of pair valuations; the diagonal is zero.
    pub fn rvals(&self) -> &[Vec<Q>] {
        &self.rvals
    }

    pub fn n(&self) -> usize {
        self.rvals.len()
    }

    /// The index sets of the cycles in canonical labeling.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        block_cycles(&self.cycle_type)
    }

    /// Sum of `r` over all roots, i.e. over ordered pairs `i != j`.
    pub fn d_r(&self) -> Q {
        let mut total = Q::zero();
        for (i, row) in self.rvals.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    total += v;
                }
            }
        }
        total
    }

    /// `(d_r - c_w) / 2`, the dimension of the corresponding affine Springer fibers.
    pub fn delta(&self) -> Result<u64, GkmError> {
        let c = c_w(&self.cycle_type);
        let d = (self.d_r() - Q::from_integer(c as i64)) / Q::from_integer(2);
        if !d.is_integer() || d < Q::zero() {
            return Err(GkmError::NonIntegral { d_r: format_q(&self.d_r()), c_w: c });
        }
        Ok(d.to_integer() as u64)
    }

    pub fn is_minimal(&self) -> bool {
        *self == minimal_gkm(&self.cycle_type)
    }

    /// The distinct off-diagonal values, ascending.
    pub fn distinct_values(&self) -> Vec<Q> {
        let mut v: Vec<Q> = (0..self.n()).flat_map(|i| (i + 1..self.n()).map(move |j| (i, j))).map(|(i, j)| self.rvals[i][j]).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for GkmClass {
    /// `(2,1) [1/2 1/2 1/2]`: cycle type, then the upper triangle row by row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = upper_triangle(&self.rvals).iter().map(format_q).collect();
        write!(f, "{} [{}]", self.cycle_type, vals.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct GkmJson {
    cycle_type: Vec<usize>,
    rvals: Vec<[String; 3]>,
}

impl Serialize for GkmClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.n();
        let mut rvals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                rvals.push([(i + 1).to_string(), (j + 1).to_string(), format_q(&self.rvals[i][j])]);
            }
        }
        GkmJson { cycle_type: self.cycle_type.parts().to_vec(), rvals }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GkmClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = GkmJson::deserialize(d)?;
        let cycle_type = Partition::new(raw.cycle_type).map_err(D::Error::custom)?;
        let n = cycle_type.size();
        let mut rvals = vec![vec![Q::zero(); n]; n];
        for [i, j, v] in &raw.rvals {
            let i: usize = i.parse().map_err(D::Error::custom)?;
            let j: usize = j.parse().map_err(D::Error::custom)?;
            let v = parse_q(v).ok_or_else(|| D::Error::custom(format!("bad rational {v}")))?;
            if i == 0 || j == 0 || i > n || j > n || i == j {
                return Err(D::Error::custom(format!("bad index pair ({i}, {j})")));
            }
            rvals[i - 1][j - 1] = v;
            rvals[j - 1][i - 1] = v;
        }
        let class = canonicalize(&block_cycles(&cycle_type), &rvals).map_err(D::Error::custom)?;
        if class.rvals != rvals {
            return Err(D::Error::custom("rvals are not in canonical form"));
        }
        Ok(class)
    }
}

fn upper_triangle(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| m[i][j])).collect()
}

/// Consecutive index blocks `[0..d_1), [d_1..d_1+d_2), ...`.
fn block_cycles(lambda: &Partition) -> Vec<Vec<usize>> {
    let mut start = 0;
    lambda
        .parts()
        .iter()
        .map(|&d| {
            let c = (start..start + d).collect();
            start += d;
            c
        })
        .collect()
}

/// Canonical representative of the class of `(w, q)`, where `w` is given by
/// its cycles (each in the order `w` visits its indices).
///
/// Cycles are placed by decreasing length. Among the relabelings that
/// respect this (reordering cycles of equal length and rotating each cycle),
/// the one whose upper triangle, read row by row, is lexicographically least
/// is chosen.
pub fn canonicalize(cycles: &[Vec<usize>], q: &[Vec<Q>]) -> Result<GkmClass, GkmError> {
    let n = q.len();
    let mut seen = vec![false; n];
    for &i in cycles.iter().flatten() {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(GkmError::InconsistentInput("cycles do not partition the indices".into()));
        }
    }
    if seen.iter().any(|s| !s) || q.iter().any(|row| row.len() != n) {
        return Err(GkmError::InconsistentInput("cycles do not partition the indices".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && (q[i][j] != q[j][i] || q[i][j] <= Q::zero()) {
                return Err(GkmError::InconsistentInput(format!("entry ({}, {}) is not positive and symmetric", i + 1, j + 1)));
            }
        }
    }
    let mut sigma = vec![0; n];
    for c in cycles {
        for (k, &i) in c.iter().enumerate() {
            sigma[i] = c[(k + 1) % c.len()];
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && q[sigma[i]][sigma[j]] != q[i][j] {
                return Err(GkmError::InconsistentInput("valuations are not invariant under the cycle rotation".into()));
            }
        }
    }

    let mut sorted: Vec<&Vec<usize>> = cycles.iter().collect();
    sorted.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let cycle_type = Partition::from_parts(sorted.iter().map(|c| c.len()).collect())
        .map_err(|e| GkmError::InconsistentInput(e.to_string()))?;

    let mut best: Option<(Vec<Q>, Vec<usize>)> = None;
    let mut order: Vec<usize> = (0..sorted.len()).collect();
    let mut rotations = vec![0usize; sorted.len()];
    search(&sorted, q, &mut order, 0, &mut rotations, &mut best);
    let (_, labels) = best.expect("at least one labeling");
    let rvals = (0..n).map(|a| (0..n).map(|b| if a == b { Q::zero() } else { q[labels[a]][labels[b]] }).collect()).collect();
    Ok(GkmClass { cycle_type, rvals })
}

/// Enumerates orderings within runs of equal cycle length (positions `>= pos`
/// are still free) and all rotations, keeping the least key.
fn search(
    cycles: &[&Vec<usize>],
    q: &[Vec<Q>],
    order: &mut Vec<usize>,
    pos: usize,
    rotations: &mut Vec<usize>,
    best: &mut Option<(Vec<Q>, Vec<usize>)>,
) {
    if pos == cycles.len() {
        rotate_all(cycles, q, order, 0, rotations, best);
        return;
    }
    let len = cycles[order[pos]].len();
    for k in pos..cycles.len() {
        if cycles[order[k]].len() != len {
            break;
        }
        order.swap(pos, k);
        search(cycles, q, order, pos + 1, rotations, best);
        order.swap(pos, k);
    }
}

fn rotate_all(
    cycles: &[&Vec<usize>],
    q: &[Vec<Q>],
    order: &[usize],
    pos: usize,
    rotations: &mut Vec<usize>,
    best: &mut Option<(Vec<Q>, Vec<usize>)>,
) {
    if pos == order.len() {
        let labels: Vec<usize> = order
            .iter()
            .zip(rotations.iter())
            .flat_map(|(&c, &r)| {
                let cyc = cycles[c];
                (0..cyc.len()).map(move |k| cyc[(k + r) % cyc.len()])
            })
            .collect();
        let n = labels.len();
        let key: Vec<Q> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).map(|(a, b)| q[labels[a]][labels[b]]).collect();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            *best = Some((key, labels));
        }
        return;
    }
    for r in 0..cycles[order[pos]].len() {
        rotations[pos] = r;
        rotate_all(cycles, q, order, pos + 1, rotations, best);
    }
}

/// The minimal class of cycle type `lambda`: `r_ij = min(1/d(i), 1/d(j))`,
/// with `d(i)` the length of the cycle containing `i`.
pub fn minimal_gkm(lambda: &Partition) -> GkmClass {
    let cycles = block_cycles(lambda);
    let n = lambda.size();
    let mut len = vec![0i64; n];
    for c in &cycles {
        for &i in c {
            len[i] = c.len() as i64;
        }
    }
    let q: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::zero() } else { Q::new(1, len[i].max(len[j])) }).collect())
        .collect();
    canonicalize(&cycles, &q).expect("closed form is consistent")
}

/// `dim t - dim t^w = n - (number of cycles)`.
pub fn c_w(lambda: &Partition) -> usize {
    lambda.size() - lambda.len()
}

/// Elliptic classes of `S_n` are the `n`-cycles.
pub fn is_elliptic(lambda: &Partition) -> bool {
    lambda.len() == 1
}

/// Builds a class from cycles and a matrix given in canonical block labeling,
/// e.g. for tests and table parsing.
pub fn from_blocks(lambda: &Partition, q: &[Vec<Q>]) -> Result<GkmClass, GkmError> {
    canonicalize(&block_cycles(lambda), q)
}

/// The class with every off-diagonal value equal to `v`.
pub fn constant_class(lambda: &Partition, v: Q) -> GkmClass {
    let n = lambda.size();
    let q: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::zero() } else { v }).collect()).collect();
    from_blocks(lambda, &q).expect("constant matrices are consistent")
}
