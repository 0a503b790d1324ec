//! Truncated Laurent series in a fractional power `t^{1/e}` over a finite field.

use num_integer::Integer;

use crate::field::{Field, Fq};
use crate::rational::{ceil_on_grid, Q};

/// Precision marker for exactly known series (finite sums).
pub const INF: i64 = i64::MAX / 4;

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

/// `sum_s c_s t^{s/e}` with every coefficient known for `s < prec`.
///
/// Stored densely from the valuation upward; leading and trailing zeros are
/// stripped, so an empty coefficient vector means "zero to precision".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    e: u32,
    lo: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

impl TruncatedSeries {
    /// Zero, known up to (grid) exponent `prec`.
    pub fn zero(e: u32, prec: i64) -> Self {
        TruncatedSeries { e, lo: 0, coeffs: Vec::new(), prec }
    }

    pub fn exact_zero() -> Self {
        Self::zero(1, INF)
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_coeffs(1, 0, vec![c], INF)
    }

    /// The exact monomial `c t^{s/e}`.
    pub fn monomial(c: Fq, s: i64, e: u32) -> Self {
        Self::from_coeffs(e, s, vec![c], INF)
    }

    /// The exact monomial `c t^q`.
    pub fn monomial_q(c: Fq, q: Q) -> Self {
        let e = *q.denom() as u32;
        Self::monomial(c, *q.numer(), e)
    }

    /// Series with `coeffs[i]` the coefficient of `t^{(lo+i)/e}`, known below `prec`.
    pub fn from_coeffs(e: u32, lo: i64, coeffs: Vec<Fq>, prec: i64) -> Self {
        assert!(e >= 1);
        let mut s = TruncatedSeries { e, lo, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.prec < INF {
            let keep = (self.prec - self.lo).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
    }

    pub fn ramification(&self) -> u32 {
        self.e
    }

    /// Precision in grid units; [`INF`] when exact.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn precision_q(&self) -> Option<Q> {
        (self.prec < INF).then(|| Q::new(self.prec, self.e as i64))
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= INF
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation in grid units, `None` if zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lo)
    }

    pub fn valuation_q(&self) -> Option<Q> {
        self.valuation().map(|v| Q::new(v, self.e as i64))
    }

    /// Valuation if known, otherwise the precision (a lower bound).
    fn val_lower(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Lower bound for the valuation in `t` units (`None` only for an exact zero).
    pub fn valuation_lower_q(&self) -> Option<Q> {
        let v = self.val_lower();
        (v < INF).then(|| Q::new(v, self.e as i64))
    }

    pub fn leading_coefficient(&self) -> Option<Fq> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `t^{s/e}` (zero outside the stored range).
    pub fn coeff(&self, s: i64) -> Fq {
        if s < self.lo {
            return Fq::ZERO;
        }
        self.coeffs.get((s - self.lo) as usize).copied().unwrap_or(Fq::ZERO)
    }

    /// Nonzero terms `(s, c)` meaning `c t^{s/e}`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, &c)| (self.lo + i as i64, c))
    }

    /// Same series on the finer grid `t^{1/e2}`; `e2` must be a multiple of `e`.
    pub fn regrid(&self, e2: u32) -> Self {
        assert!(e2 % self.e == 0, "grid {e2} is not a refinement of {}", self.e);
        let f = (e2 / self.e) as i64;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![Fq::ZERO; (self.coeffs.len() - 1) * f as usize + 1];
            for (i, &c) in self.coeffs.iter().enumerate() {
                coeffs[i * f as usize] = c;
            }
        }
        let prec = if self.prec >= INF { INF } else { self.prec * f };
        TruncatedSeries { e: e2, lo: self.lo * f, coeffs, prec }
    }

    /// The coarsest grid carrying every known nonzero term.
    pub fn minimal_ramification(&self) -> u32 {
        let g = self.terms().fold(self.e as i64, |g, (s, _)| g.gcd(&s));
        self.e / g as u32
    }

    /// Rewrites on the coarser grid `t^{1/e2}` (`e2 | e`). Terms must lie on it.
    pub fn coarsen(&self, e2: u32) -> Self {
        assert!(self.e % e2 == 0);
        let f = (self.e / e2) as i64;
        assert!(self.terms().all(|(s, _)| s % f == 0), "series has terms off the coarse grid");
        let prec = if self.prec >= INF { INF } else { self.prec.div_euclid(f) };
        let terms: Vec<(i64, Fq)> = self.terms().map(|(s, c)| (s / f, c)).collect();
        let Some(&(lo, _)) = terms.first() else { return Self::zero(e2, prec) };
        let hi = terms.last().unwrap().0;
        let mut coeffs = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for (s, c) in terms {
            coeffs[(s - lo) as usize] = c;
        }
        Self::from_coeffs(e2, lo, coeffs, prec)
    }

    fn common_grid(&self, other: &Self) -> u32 {
        (self.e as u64).lcm(&(other.e as u64)) as u32
    }

    /// Lowers the precision to `cap` (in `t` units) and drops the terms above it.
    pub fn truncate(&self, cap: &Q) -> Self {
        let c = ceil_on_grid(cap, self.e);
        let mut s = self.clone();
        s.prec = s.prec.min(c);
        s.normalize();
        s
    }

    /// The finite sum of the terms below `cap`, declared exact. Used for approximants.
    pub fn truncate_exact(&self, cap: &Q) -> Self {
        let mut s = self.truncate(cap);
        s.prec = INF;
        s
    }

    /// Overrides the precision (only ever lowered by callers that know better).
    pub fn with_precision(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.normalize();
        s
    }

    pub fn add(&self, other: &Self, field: &Field) -> Self {
        let e = self.common_grid(other);
        let a = self.regrid(e);
        let b = other.regrid(e);
        let prec = a.prec.min(b.prec);
        if a.coeffs.is_empty() {
            return b.with_precision(prec);
        }
        if b.coeffs.is_empty() {
            return a.with_precision(prec);
        }
        let lo = a.lo.min(b.lo);
        let hi = (a.lo + a.coeffs.len() as i64).max(b.lo + b.coeffs.len() as i64).min(prec);
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for s in lo..hi {
            coeffs.push(field.add(a.coeff(s), b.coeff(s)));
        }
        Self::from_coeffs(e, lo, coeffs, prec)
    }

    pub fn neg(&self, field: &Field) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = field.neg(*c);
        }
        s
    }

    pub fn sub(&self, other: &Self, field: &Field) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: Fq, field: &Field) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| field.mul(x, c)).collect();
        Self::from_coeffs(self.e, self.lo, coeffs, self.prec)
    }

    /// Multiplication by `c t^q`.
    pub fn mul_monomial(&self, c: Fq, q: &Q, field: &Field) -> Self {
        let e = (self.e as u64).lcm(&(*q.denom() as u64)) as u32;
        let s = self.regrid(e);
        let shift = (q * Q::from_integer(e as i64)).to_integer();
        let coeffs = s.coeffs.iter().map(|&x| field.mul(x, c)).collect();
        let prec = if s.prec >= INF { INF } else { s.prec + shift };
        Self::from_coeffs(e, s.lo + shift, coeffs, prec)
    }

    pub fn mul(&self, other: &Self, field: &Field) -> Self {
        self.mul_capped(other, field, None)
    }

    /// Product, with everything at or above `cap` (in `t` units) discarded.
    pub fn mul_capped(&self, other: &Self, field: &Field, cap: Option<&Q>) -> Self {
        let e = self.common_grid(other);
        let a = self.regrid(e);
        let b = other.regrid(e);
        let mut prec = sat_add(a.val_lower(), b.prec).min(sat_add(b.val_lower(), a.prec));
        if let Some(cap) = cap {
            prec = prec.min(ceil_on_grid(cap, e));
        }
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Self::zero(e, prec);
        }
        let lo = a.lo + b.lo;
        let full = (a.coeffs.len() + b.coeffs.len() - 1) as i64;
        let len = full.min(prec.saturating_sub(lo)).max(0) as usize;
        let coeffs = convolve(&a.coeffs, &b.coeffs, len, field);
        Self::from_coeffs(e, lo, coeffs, prec)
    }

    /// `1 / self`, truncated at `cap`. `None` if the series is zero to precision.
    pub fn inv_capped(&self, field: &Field, cap: &Q) -> Option<Self> {
        let a0 = *self.coeffs.first()?;
        let v = self.lo;
        let a0_inv = field.inv(a0).ok()?;
        let rel = if self.prec >= INF { INF } else { self.prec - v };
        let prec = sat_add(-v, rel).min(ceil_on_grid(cap, self.e));
        let len = (prec + v).max(0) as usize;
        let mut out: Vec<Fq> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                out.push(a0_inv);
                continue;
            }
            let mut acc = Fq::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = field.add(acc, field.mul(self.coeffs[j], out[k - j]));
            }
            out.push(field.neg(field.mul(a0_inv, acc)));
        }
        Some(Self::from_coeffs(self.e, -v, out, prec))
    }

    /// `self / other`, truncated at `cap`. `None` if `other` is zero to precision.
    pub fn div_capped(&self, other: &Self, field: &Field, cap: &Q) -> Option<Self> {
        let va = self.valuation_lower_q().unwrap_or(*cap);
        let inv = other.inv_capped(field, &(cap - va))?;
        Some(self.mul_capped(&inv, field, Some(cap)))
    }

    pub fn map_coeffs(&self, f: impl Fn(i64, Fq) -> Fq) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| f(self.lo + i as i64, c)).collect();
        Self::from_coeffs(self.e, self.lo, coeffs, self.prec)
    }

    /// Applies the Frobenius `c -> c^{p^k}` to every coefficient.
    pub fn frobenius(&self, k: usize, field: &Field) -> Self {
        self.map_coeffs(|_, c| field.frobenius(c, k))
    }

    /// Applies `t^{1/e} -> zeta t^{1/e}`: the coefficient of `t^{s/e}` is multiplied by `zeta^s`.
    pub fn sigma(&self, zeta: Fq, field: &Field) -> Self {
        let e = self.e as i64;
        self.map_coeffs(|s, c| field.mul(c, field.pow_u64(zeta, s.rem_euclid(e) as u64)))
    }

    /// True when `self - other` vanishes to the available precision.
    pub fn agrees_with(&self, other: &Self, field: &Field) -> bool {
        self.sub(other, field).is_zero_to_precision()
    }
}

fn convolve(a: &[Fq], b: &[Fq], len: usize, field: &Field) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; len];
    if field.degree() == 1 {
        let p = field.p() as u128;
        for (k, slot) in out.iter_mut().enumerate() {
            let i_min = k.saturating_sub(b.len() - 1);
            let i_max = k.min(a.len() - 1);
            let mut acc: u128 = 0;
            for i in i_min..=i_max {
                acc += a[i].coeffs()[0] as u128 * b[k - i].coeffs()[0] as u128;
            }
            *slot = field.from_u64((acc % p) as u64);
        }
        return out;
    }
    // extension field: accumulate unreduced polynomial products, reduce once per term
    let m = field.degree();
    let mut acc = vec![0u128; 2 * m - 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let i_min = k.saturating_sub(b.len() - 1);
        let i_max = k.min(a.len() - 1);
        acc.iter_mut().for_each(|x| *x = 0);
        for i in i_min..=i_max {
            let (x, y) = (a[i].coeffs(), b[k - i].coeffs());
            for r in 0..m {
                if x[r] == 0 {
                    continue;
                }
                let xr = x[r] as u64;
                for s in 0..m {
                    acc[r + s] += (xr * y[s] as u64) as u128;
                }
            }
        }
        *slot = field.reduce_wide(&acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> Field {
        Field::new(10007, 1).unwrap()
    }

    fn series(f: &Field, e: u32, lo: i64, cs: &[i64], prec: i64) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(e, lo, cs.iter().map(|&c| f.from_i64(c)).collect(), prec)
    }

    #[test]
    fn normalization_tracks_valuation() {
        let f = fp();
        let s = series(&f, 1, 0, &[0, 0, 3, 0], 10);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.coeff(2), f.from_u64(3));
        let z = series(&f, 2, 0, &[0, 0], 5);
        assert!(z.is_zero_to_precision());
        assert_eq!(z.valuation_lower_q(), Some(Q::new(5, 2)));
    }

    #[test]
    fn product_precision_rule() {
        let f = fp();
        // (t + O(t^5)) * (t^2 + O(t^4)) = t^3 + O(t^5)
        let a = series(&f, 1, 1, &[1], 5);
        let b = series(&f, 1, 2, &[1], 4);
        let c = a.mul(&b, &f);
        assert_eq!(c.precision(), 5);
        assert_eq!(c.valuation(), Some(3));
    }

    #[test]
    fn mixed_grids_add() {
        let f = fp();
        let a = TruncatedSeries::monomial(f.one(), 1, 2); // t^{1/2}
        let b = TruncatedSeries::monomial(f.one(), 1, 3); // t^{1/3}
        let c = a.add(&b, &f);
        assert_eq!(c.ramification(), 6);
        assert_eq!(c.valuation_q(), Some(Q::new(1, 3)));
        assert_eq!(c.minimal_ramification(), 6);
    }

    #[test]
    fn inverse_times_self_is_one() {
        let f = fp();
        let a = series(&f, 1, 1, &[2, 5, 7, 1], INF);
        let cap = Q::from_integer(10);
        let inv = a.inv_capped(&f, &cap).unwrap();
        let prod = a.mul_capped(&inv, &f, Some(&cap));
        assert!(prod.sub(&TruncatedSeries::constant(f.one()), &f).is_zero_to_precision());
        assert_eq!(inv.valuation(), Some(-1));
    }

    #[test]
    fn sigma_and_coarsen() {
        let f = fp();
        let y = series(&f, 4, 2, &[1, 0, 3], INF); // t^{1/2} + 3 t
        assert_eq!(y.minimal_ramification(), 2);
        let c = y.coarsen(2);
        assert_eq!(c.ramification(), 2);
        assert_eq!(c.regrid(4), y);
        let minus_one = f.from_i64(-1);
        let s = c.sigma(minus_one, &f);
        assert_eq!(s.coeff(1), minus_one);
        assert_eq!(s.coeff(2), f.from_u64(3));
    }
}
