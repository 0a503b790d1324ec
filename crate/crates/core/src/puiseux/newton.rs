use num_traits::Zero;

use super::{PuiseuxError, SeriesPolynomial, TruncatedSeries};
use crate::field::Fq;
use crate::rational::Q;

/// One edge of a Newton polygon: `length` roots of valuation `slope`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    /// Valuation (in `t` units) of the roots the edge accounts for.
    pub slope: Q,
    pub length: usize,
    /// Degree range `[left, right]` of the edge.
    pub left: usize,
    pub right: usize,
    /// Leading coefficients of the points on the edge, as `(degree, coefficient)`.
    pub points: Vec<(usize, Fq)>,
}

impl NewtonSegment {
    /// Edge polynomial `sum_k lc_k c^{k - left}` (low degree first), whose
    /// nonzero roots are the leading coefficients of the roots on this edge.
    pub fn edge_polynomial(&self) -> Vec<Fq> {
        let mut out = vec![Fq::ZERO; self.length + 1];
        for &(k, c) in &self.points {
            out[k - self.left] = c;
        }
        out
    }

    /// `min_k (val c_k + k * slope)`, the valuation of the dominant terms.
    pub fn height(&self, left_valuation: &Q) -> Q {
        left_valuation + self.slope * Q::from_integer(self.left as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Sorted by strictly increasing slope.
    pub segments: Vec<NewtonSegment>,
    /// Valuation of the coefficient at each hull vertex.
    pub(crate) vertex_valuations: Vec<(usize, Q)>,
}

impl NewtonPolygon {
    /// Slopes with multiplicity.
    pub fn slope_multiset(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self.segments.iter().flat_map(|s| std::iter::repeat_n(s.slope, s.length)).collect();
        out.sort();
        out
    }

    pub(crate) fn left_valuation(&self, seg: &NewtonSegment) -> Q {
        self.vertex_valuations.iter().find(|(k, _)| *k == seg.left).expect("segment vertex").1
    }
}

/// Newton polygon of a characteristic-type polynomial: every root must have
/// positive valuation.
pub fn newton_polygon(f: &SeriesPolynomial) -> Result<NewtonPolygon, PuiseuxError> {
    let poly = lower_hull(f.coeffs())?;
    if poly.segments.iter().any(|s| s.slope <= Q::zero()) {
        return Err(PuiseuxError::NotTopologicallyNilpotent);
    }
    Ok(poly)
}

/// Lower convex hull of `(k, val c_k)` over all coefficients.
///
/// Coefficients that vanish to their precision only bound the valuation from
/// below; if such a bound does not lie strictly above the hull the polygon is
/// not determined and `IndeterminateValuation` is returned.
pub(crate) fn lower_hull(coeffs: &[TruncatedSeries]) -> Result<NewtonPolygon, PuiseuxError> {
    let mut known: Vec<(usize, Q)> = Vec::new();
    let mut unknown: Vec<(usize, Q)> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        match (c.valuation_q(), c.precision_q()) {
            (Some(v), _) => known.push((k, v)),
            (None, Some(p)) => unknown.push((k, p)),
            (None, None) => {}
        }
    }
    if known.is_empty() {
        return Err(PuiseuxError::IndeterminateValuation);
    }
    let mut hull: Vec<(usize, Q)> = Vec::new();
    for &pt in &known {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = Q::from_integer((b.0 - a.0) as i64) * (pt.1 - a.1) - (b.1 - a.1) * Q::from_integer((pt.0 - a.0) as i64);
            if cross <= Q::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let first = known[0].0;
    let last = known[known.len() - 1].0;
    for &(k, bound) in &unknown {
        if k < first || k > last {
            return Err(PuiseuxError::IndeterminateValuation);
        }
        let w = hull.windows(2).find(|w| w[0].0 <= k && k <= w[1].0).expect("k inside hull range");
        let (a, b) = (w[0], w[1]);
        let h = a.1 + (b.1 - a.1) * Q::new((k - a.0) as i64, (b.0 - a.0) as i64);
        if bound <= h {
            return Err(PuiseuxError::IndeterminateValuation);
        }
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (a.1 - b.1) / Q::from_integer((b.0 - a.0) as i64);
        let height = a.1 + slope * Q::from_integer(a.0 as i64);
        let points = known
            .iter()
            .filter(|(k, v)| *k >= a.0 && *k <= b.0 && *v + slope * Q::from_integer(*k as i64) == height)
            .map(|&(k, _)| (k, coeffs[k].leading_coefficient().expect("known coefficient")))
            .collect();
        segments.push(NewtonSegment { slope, length: b.0 - a.0, left: a.0, right: b.0, points });
    }
    segments.reverse();
    Ok(NewtonPolygon { segments, vertex_valuations: hull })
}
