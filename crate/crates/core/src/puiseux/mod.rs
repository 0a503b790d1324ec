//! Truncated Puiseux series, characteristic polynomials of series matrices,
//! Newton polygons and the Newton-Puiseux expansion of their roots.

mod charpoly;
mod expand;
mod newton;
mod series;
mod valuations;

use thiserror::Error;

use crate::field::{Field, FieldError, Fq};
use crate::rational::Q;

pub use charpoly::char_poly;
pub use expand::{puiseux_expand, PuiseuxBranch, PuiseuxExpansion};
pub use newton::{newton_polygon, NewtonPolygon, NewtonSegment};
pub use series::{TruncatedSeries, INF};
pub use valuations::{pairwise_valuations, unfold, PairwiseValuations};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuiseuxError {
    #[error("matrix entries carry no precision")]
    PrecisionZero,
    #[error("a coefficient vanishes to working precision where the Newton polygon needs it")]
    IndeterminateValuation,
    #[error("some root has non-positive valuation")]
    NotTopologicallyNilpotent,
    #[error("roots cannot be separated at working precision")]
    NotSquarefreeToPrecision,
    #[error("field extension budget exceeded (needed degree {needed})")]
    ExtensionBudgetExceeded { needed: usize },
    #[error("polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("matrix is not square")]
    NotSquare,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A monic polynomial `lambda^n + c_{n-1} lambda^{n-1} + ... + c_0` with series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPolynomial {
    coeffs: Vec<TruncatedSeries>,
}

impl SeriesPolynomial {
    /// `coeffs[k]` is the coefficient of `lambda^k`; the last one must be exactly 1.
    pub fn new(mut coeffs: Vec<TruncatedSeries>, field: &Field) -> Result<Self, PuiseuxError> {
        let Some(lead) = coeffs.last() else { return Err(PuiseuxError::NotMonic) };
        let one = TruncatedSeries::constant(field.one());
        if coeffs.len() < 2 || !lead.agrees_with(&one, field) || lead.valuation() != Some(0) {
            return Err(PuiseuxError::NotMonic);
        }
        *coeffs.last_mut().unwrap() = one;
        Ok(SeriesPolynomial { coeffs })
    }

    /// Monic polynomial from the lower coefficients `c_0..c_{n-1}`.
    pub fn monic(mut lower: Vec<TruncatedSeries>, field: &Field) -> Self {
        lower.push(TruncatedSeries::constant(field.one()));
        SeriesPolynomial { coeffs: lower }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &TruncatedSeries {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    /// Minimum coefficient precision in `t` units (`None` when all are exact).
    pub fn precision_q(&self) -> Option<Q> {
        self.coeffs.iter().filter_map(|c| c.precision_q()).min()
    }

    pub fn map_coeffs(&self, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> Self {
        SeriesPolynomial { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn derivative(&self, field: &Field) -> Vec<TruncatedSeries> {
        self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(field.from_u64(k as u64), field)).collect()
    }

    /// Horner evaluation with every intermediate truncated at `cap`.
    pub fn eval(&self, y: &TruncatedSeries, field: &Field, cap: &Q) -> TruncatedSeries {
        eval_coeffs(&self.coeffs, y, field, cap)
    }
}

pub(crate) fn eval_coeffs(coeffs: &[TruncatedSeries], y: &TruncatedSeries, field: &Field, cap: &Q) -> TruncatedSeries {
    let mut acc = coeffs.last().expect("non-empty polynomial").truncate(cap);
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul_capped(y, field, Some(cap)).add(&c.truncate(cap), field);
    }
    acc
}

/// Product `prod_i (lambda - roots_i)` as a coefficient list (low degree first).
pub fn product_of_linear_factors(roots: &[TruncatedSeries], field: &Field) -> Vec<TruncatedSeries> {
    let mut acc = vec![TruncatedSeries::constant(field.one())];
    for r in roots {
        let neg = r.neg(field);
        let mut next = vec![TruncatedSeries::exact_zero(); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c, field);
            next[k] = next[k].add(&c.mul(&neg, field), field);
        }
        acc = next;
    }
    acc
}

pub(crate) fn binomial(k: usize, j: usize) -> u64 {
    (0..j).fold(1u64, |acc, i| acc * (k - i) as u64 / (i as u64 + 1))
}

pub(crate) fn fq_pow(field: &Field, c: Fq, k: usize) -> Fq {
    field.pow_u64(c, k as u64)
}
