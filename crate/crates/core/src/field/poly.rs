//! Dense univariate polynomials over a [`Field`], little-endian, trimmed.

use num_bigint::BigUint;

use super::{Field, Fq};

/// Coefficients `a_0, a_1, ...`; the zero polynomial is empty.
pub type Poly = Vec<Fq>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree(a: &[Fq]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

impl Field {
    pub fn poly_add(&self, a: &[Fq], b: &[Fq]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(Fq::ZERO);
            let y = b.get(i).copied().unwrap_or(Fq::ZERO);
            out.push(self.add(x, y));
        }
        trim(out)
    }

    pub fn poly_sub(&self, a: &[Fq], b: &[Fq]) -> Poly {
        let neg: Poly = b.iter().map(|&c| self.neg(c)).collect();
        self.poly_add(a, &neg)
    }

    pub fn poly_mul(&self, a: &[Fq], b: &[Fq]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn poly_scale(&self, a: &[Fq], c: Fq) -> Poly {
        trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn poly_divrem(&self, a: &[Fq], b: &[Fq]) -> (Poly, Poly) {
        let db = degree(b).expect("division by zero polynomial");
        let lead_inv = self.inv(b[db]).expect("nonzero leading coefficient");
        let mut rem = trim(a.to_vec());
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Fq::ZERO; rem.len() - db];
        while rem.len() > db {
            let k = rem.len() - 1 - db;
            let c = self.mul(*rem.last().unwrap(), lead_inv);
            quot[k] = c;
            for (j, &y) in b[..=db].iter().enumerate() {
                rem[k + j] = self.sub(rem[k + j], self.mul(c, y));
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    pub fn poly_rem(&self, a: &[Fq], b: &[Fq]) -> Poly {
        self.poly_divrem(a, b).1
    }

    pub fn poly_monic(&self, a: &[Fq]) -> Poly {
        match degree(a) {
            None => Vec::new(),
            Some(d) => {
                let inv = self.inv(a[d]).expect("nonzero leading coefficient");
                self.poly_scale(&a[..=d], inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn poly_gcd(&self, a: &[Fq], b: &[Fq]) -> Poly {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    pub fn poly_derivative(&self, a: &[Fq]) -> Poly {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| self.mul_u64(c, i as u64)).collect())
    }

    pub fn poly_eval(&self, a: &[Fq], x: Fq) -> Fq {
        a.iter().rev().fold(Fq::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `base^e mod modulus`.
    pub fn poly_powmod(&self, base: &[Fq], e: &BigUint, modulus: &[Fq]) -> Poly {
        let base = self.poly_rem(base, modulus);
        let mut result = self.poly_rem(&[self.one()], modulus);
        for i in (0..e.bits()).rev() {
            result = self.poly_rem(&self.poly_mul(&result, &result), modulus);
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &base), modulus);
            }
        }
        result
    }

    /// Ben-Or irreducibility test for a polynomial over this field.
    pub fn poly_is_irreducible(&self, f: &[Fq]) -> bool {
        let Some(d) = degree(f) else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = vec![Fq::ZERO, self.one()];
        let mut h = x.clone();
        for _ in 0..d / 2 {
            h = self.poly_powmod(&h, self.order(), f);
            let g = self.poly_gcd(f, &self.poly_sub(&h, &x));
            if degree(&g) != Some(0) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let f = Field::new(10007, 1).unwrap();
        let a: Poly = [5, 0, 3, 1, 9].iter().map(|&v| f.from_u64(v)).collect();
        let b: Poly = [2, 7, 1].iter().map(|&v| f.from_u64(v)).collect();
        let (q, r) = f.poly_divrem(&a, &b);
        assert!(r.len() < b.len());
        assert_eq!(f.poly_add(&f.poly_mul(&q, &b), &r), a);
    }

    #[test]
    fn irreducibility_of_small_quadratics() {
        let f = Field::new(7, 1).unwrap();
        let x2_plus_1: Poly = [1, 0, 1].iter().map(|&v| f.from_u64(v)).collect();
        let x2_minus_2: Poly = [5, 0, 1].iter().map(|&v| f.from_u64(v)).collect();
        assert!(f.poly_is_irreducible(&x2_plus_1));
        assert!(!f.poly_is_irreducible(&x2_minus_2));
    }
}
