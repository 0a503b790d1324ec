//! Exact arithmetic in prime fields `F_p` and their extensions `F_{p^m}`.
//!
//! A [`Field`] is `F_p[z]/(modulus)` where the modulus is the least monic
//! irreducible polynomial of degree `m` in a fixed enumeration order (see
//! [`Field::new`]). Elements are plain [`Fq`] values and all arithmetic goes
//! through the field they belong to, so the hot paths never touch a
//! reference count or a heap allocation.

mod poly;
mod roots;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use thiserror::Error;

pub use poly::Poly;
pub use roots::{roots_with_extension, RootSet};

/// Largest supported extension degree over the prime field.
pub const MAX_DEGREE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),
    #[error("extension degree {0} is outside 1..={MAX_DEGREE}")]
    InvalidDegree(usize),
    #[error("no irreducible polynomial of degree {m} found over F_{p}")]
    NoModulusFound { p: u32, m: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to F_{p}^{m}")]
    ContextMismatch { p: u32, m: usize },
    #[error("the zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("splitting needs degree {needed} over F_p but the budget allows {budget}")]
    ExtensionBudgetExceeded { needed: usize, budget: usize },
}

/// An element of some `F_{p^m}`: coefficients of `1, z, ..., z^{m-1}`.
///
/// Unused trailing coefficients are always zero, so an element of `F_p`
/// is also a valid element of every `F_{p^m}` over the same prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq([u32; MAX_DEGREE]);

impl Fq {
    pub const ZERO: Fq = Fq([0; MAX_DEGREE]);

    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        if last == 0 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.0[..=last].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The finite field `F_p[z]/(modulus)` of order `p^m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Field {
    p: u32,
    m: usize,
    /// Low coefficients of the monic modulus `z^m + modulus[m-1] z^{m-1} + ... + modulus[0]`.
    modulus: [u32; MAX_DEGREE],
    order: BigUint,
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Builds `F_{p^m}` using the least irreducible monic modulus of degree `m`.
    ///
    /// Candidates `z^m + c_{m-1} z^{m-1} + ... + c_0` are enumerated by the
    /// integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`, so the order compares the
    /// highest non-leading coefficient first.
    pub fn new(p: u64, m: usize) -> Result<Field, FieldError> {
        if !is_odd_prime(p) || p >= 1 << 31 {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::InvalidDegree(m));
        }
        let p = p as u32;
        let base = Field::prime_unchecked(p);
        if m == 1 {
            return Ok(base);
        }
        static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache").get(&(p, m)) {
            return Ok(f.clone());
        }
        let f = Self::search_modulus(&base, m)?;
        cache.lock().expect("field cache").insert((p, m), f.clone());
        Ok(f)
    }

    fn search_modulus(base: &Field, m: usize) -> Result<Field, FieldError> {
        let p = base.p;
        let mut digits = vec![0u32; m];
        loop {
            let mut candidate: Poly = digits.iter().map(|&c| base.from_u64(c as u64)).collect();
            candidate.push(base.one());
            if base.poly_is_irreducible(&candidate) {
                let mut modulus = [0u32; MAX_DEGREE];
                modulus[..m].copy_from_slice(&digits);
                let order = BigUint::from(p).pow(m as u32);
                return Ok(Field { p, m, modulus, order });
            }
            // next candidate in base-p counting order
            let mut i = 0;
            loop {
                if i == m {
                    return Err(FieldError::NoModulusFound { p, m });
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub(crate) fn prime_unchecked(p: u32) -> Field {
        Field { p, m: 1, modulus: [0; MAX_DEGREE], order: BigUint::from(p) }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// `q = p^m`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The prime subfield.
    pub fn prime_field(&self) -> Field {
        Field::prime_unchecked(self.p)
    }

    /// Full monic modulus `c_0, ..., c_{m-1}, 1` as prime-field values.
    pub fn modulus(&self) -> Vec<u32> {
        let mut v = self.modulus[..self.m].to_vec();
        v.push(1);
        v
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        c[0] = (v % self.p as u64) as u32;
        Fq(c)
    }

    pub fn from_i64(&self, v: i64) -> Fq {
        let p = self.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// Builds an element from its coefficient vector (reduced mod `p`).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq, FieldError> {
        if coeffs.len() > self.m && coeffs[self.m..].iter().any(|&c| c % self.p as u64 != 0) {
            return Err(FieldError::ContextMismatch { p: self.p, m: self.m });
        }
        let mut c = [0u32; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs.iter().take(self.m)) {
            *slot = (v % self.p as u64) as u32;
        }
        Ok(Fq(c))
    }

    /// The class of `z`, a generator of the field over `F_p` (equals 0 when `m = 1`).
    pub fn generator(&self) -> Fq {
        if self.m == 1 {
            return Fq::ZERO;
        }
        let mut c = [0u32; MAX_DEGREE];
        c[1] = 1;
        Fq(c)
    }

    /// Checks that `a` is a well-formed element of this field.
    pub fn contains(&self, a: &Fq) -> bool {
        a.0.iter().enumerate().all(|(i, &c)| c < self.p && (i < self.m || c == 0))
    }

    fn check(&self, a: &Fq) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch { p: self.p, m: self.m })
        }
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            let s = a.0[i] + b.0[i];
            c[i] = if s >= p { s - p } else { s };
        }
        Fq(c)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = if a.0[i] == 0 { 0 } else { self.p - a.0[i] };
        }
        Fq(c)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p as u64;
        if self.m == 1 {
            let mut c = [0u32; MAX_DEGREE];
            c[0] = ((a.0[0] as u64 * b.0[0] as u64) % p) as u32;
            return Fq(c);
        }
        let m = self.m;
        let mut acc = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..m {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                acc[i + j] += ai * b.0[j] as u64 % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..m {
                acc[i - m + j] += c * (p - self.modulus[j] as u64) % p;
            }
        }
        let mut c = [0u32; MAX_DEGREE];
        for k in 0..m {
            c[k] = (acc[k] % p) as u32;
        }
        Fq(c)
    }

    /// Reduces an unreduced product sum (coefficients of `1, z, ..., z^{2m-2}`).
    pub(crate) fn reduce_wide(&self, acc: &[u128]) -> Fq {
        let p = self.p as u64;
        let m = self.m;
        let mut r = [0u64; 2 * MAX_DEGREE - 1];
        for (slot, &a) in r.iter_mut().zip(acc.iter()).take(2 * m - 1) {
            *slot = (a % p as u128) as u64;
        }
        for i in (m..2 * m - 1).rev() {
            let c = r[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..m {
                r[i - m + j] = (r[i - m + j] + c * (p - self.modulus[j] as u64)) % p;
            }
        }
        let mut c = [0u32; MAX_DEGREE];
        for k in 0..m {
            c[k] = (r[k] % p) as u32;
        }
        Fq(c)
    }

    /// Multiplication by a prime-field scalar.
    pub fn mul_u64(&self, a: Fq, k: u64) -> Fq {
        self.mul(a, self.from_u64(k))
    }

    pub fn pow(&self, a: Fq, e: &BigUint) -> Fq {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(result, result);
            if e.bit(i) {
                result = self.mul(result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: Fq, e: u64) -> Fq {
        let mut result = self.one();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(self.pow_u64(a, self.p as u64 - 2));
        }
        let e = &self.order - 2u32;
        Ok(self.pow(a, &e))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The `p^e`-power Frobenius map.
    pub fn frobenius(&self, a: Fq, e: usize) -> Fq {
        let mut x = a;
        for _ in 0..e % self.m {
            x = self.pow_u64(x, self.p as u64);
        }
        x
    }

    pub fn checked_add(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_sub(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.sub(a, b))
    }

    pub fn checked_mul(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.mul(a, b))
    }

    pub fn checked_inv(&self, a: Fq) -> Result<Fq, FieldError> {
        self.check(&a)?;
        self.inv(a)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        for slot in c.iter_mut().take(self.m) {
            *slot = rng.gen_range(0..self.p);
        }
        Fq(c)
    }

    /// `p^m mod k`, used to test whether `k | q - 1`.
    fn order_mod(&self, k: u64) -> u64 {
        (&self.order % k).to_u64().unwrap_or(0)
    }

    /// Smallest `d >= 1` such that `F_{q^d}` contains a primitive `k`-th root of unity.
    /// `k` must be coprime to `p`.
    pub fn roots_of_unity_degree(&self, k: u64) -> usize {
        let q = self.order_mod(k);
        let mut acc = q % k;
        let mut d = 1;
        while acc != 1 % k {
            acc = acc * q % k;
            d += 1;
        }
        d
    }

    /// A primitive `k`-th root of unity, if the field has one.
    ///
    /// The choice is deterministic: candidates are scanned in a fixed order.
    pub fn root_of_unity(&self, k: u64) -> Option<Fq> {
        if k == 0 || k % self.p as u64 == 0 {
            return None;
        }
        if k == 1 {
            return Some(self.one());
        }
        if self.order_mod(k) != 1 {
            return None;
        }
        let cofactor = (&self.order - 1u32) / k;
        let primes = prime_factors(k);
        let mut idx: u64 = 1;
        loop {
            let cand = self.enumerate_element(idx);
            idx += 1;
            if cand.is_zero() {
                continue;
            }
            let x = self.pow(cand, &cofactor);
            if primes.iter().all(|&l| self.pow_u64(x, k / l) != self.one()) {
                return Some(x);
            }
        }
    }

    /// The element whose coefficient vector is the base-`p` expansion of `idx`.
    fn enumerate_element(&self, mut idx: u64) -> Fq {
        let mut c = [0u32; MAX_DEGREE];
        for slot in c.iter_mut().take(self.m) {
            *slot = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        Fq(c)
    }

    /// Embeds this field into `larger` (same prime, degree divisible by ours).
    ///
    /// The generator is sent to the least root of our modulus inside `larger`.
    pub fn embedding_into(&self, larger: &Field) -> Result<Embedding, FieldError> {
        if larger.p != self.p || larger.m % self.m != 0 {
            return Err(FieldError::ContextMismatch { p: larger.p, m: larger.m });
        }
        if self.m == 1 {
            return Ok(Embedding { images: vec![larger.one()] });
        }
        let modulus: Poly = self.modulus().iter().map(|&c| larger.from_u64(c as u64)).collect();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed);
        let mut roots = larger.split_linear(&modulus, &mut rng);
        roots.sort();
        let gen = roots[0];
        let mut images = Vec::with_capacity(self.m);
        let mut power = larger.one();
        for _ in 0..self.m {
            images.push(power);
            power = larger.mul(power, gen);
        }
        Ok(Embedding { images })
    }
}

/// A field embedding `F_{p^m} -> F_{p^{m'}}`, stored as images of `1, z, ..., z^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    images: Vec<Fq>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        let mut images = Vec::with_capacity(field.m);
        let mut power = field.one();
        for _ in 0..field.m {
            images.push(power);
            power = field.mul(power, field.generator());
        }
        if field.m == 1 {
            images = vec![field.one()];
        }
        Embedding { images }
    }

    pub fn apply(&self, target: &Field, a: Fq) -> Fq {
        let mut acc = Fq::ZERO;
        for (i, img) in self.images.iter().enumerate() {
            let c = a.0[i];
            if c != 0 {
                acc = target.add(acc, target.mul_u64(*img, c as u64));
            }
        }
        acc
    }
}

pub(crate) fn prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            out.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.inv(f.from_u64(3)).unwrap(), f.from_u64(5));
        assert_eq!(f.inv(f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(Field::new(8, 1), Err(FieldError::NotPrime(8)));
        assert_eq!(Field::new(2, 1), Err(FieldError::NotPrime(2)));
        assert_eq!(Field::new(7, 0), Err(FieldError::InvalidDegree(0)));
    }

    #[test]
    fn quadratic_modulus_is_least_by_exhaustive_root_test() {
        // oracle: scan monic quadratics in base-p order, irreducible iff rootless
        let p = 7u64;
        let mut expected = None;
        'outer: for c1 in 0..p {
            for c0 in 0..p {
                if (0..p).all(|x| (x * x + c1 * x + c0) % p != 0) {
                    expected = Some(vec![c0 as u32, c1 as u32, 1]);
                    break 'outer;
                }
            }
        }
        let f = Field::new(7, 2).unwrap();
        assert_eq!(Some(f.modulus()), expected);
        assert_eq!(f.modulus(), vec![1, 0, 1]);
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = Field::new(7, 3).unwrap();
        for v in 0..7 {
            let a = f.from_u64(v);
            assert_eq!(f.frobenius(a, 1), a);
        }
        let z = f.generator();
        assert_ne!(f.frobenius(z, 1), z);
        assert_eq!(f.frobenius(z, 3), z);
    }

    #[test]
    fn multiplicative_group_order() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for (p, m) in [(7u64, 2usize), (11, 3), (10007, 2)] {
            let f = Field::new(p, m).unwrap();
            let e = f.order() - 1u32;
            for _ in 0..10 {
                let g = f.random(&mut rng);
                if g.is_zero() {
                    continue;
                }
                assert_eq!(f.pow(g, &e), f.one());
                assert_eq!(f.mul(g, f.inv(g).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn checked_ops_reject_foreign_elements() {
        let f2 = Field::new(7, 2).unwrap();
        let f1 = Field::new(7, 1).unwrap();
        let z = f2.generator();
        assert_eq!(f1.checked_add(z, f1.one()), Err(FieldError::ContextMismatch { p: 7, m: 1 }));
        // prime-field elements coerce into extensions
        assert_eq!(f2.checked_mul(f1.from_u64(3), z).unwrap(), f2.mul_u64(z, 3));
    }

    #[test]
    fn roots_of_unity() {
        let f = Field::new(10007, 1).unwrap();
        assert_eq!(f.roots_of_unity_degree(3), 2);
        assert_eq!(f.roots_of_unity_degree(5), 4);
        assert_eq!(f.roots_of_unity_degree(2), 1);
        assert!(f.root_of_unity(3).is_none());
        let f2 = Field::new(10007, 2).unwrap();
        let z3 = f2.root_of_unity(3).unwrap();
        assert_ne!(z3, f2.one());
        assert_eq!(f2.pow_u64(z3, 3), f2.one());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Field::new(7, 2).unwrap();
        let big = Field::new(7, 4).unwrap();
        let emb = small.embedding_into(&big).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..20 {
            let a = small.random(&mut rng);
            let b = small.random(&mut rng);
            assert_eq!(emb.apply(&big, small.mul(a, b)), big.mul(emb.apply(&big, a), emb.apply(&big, b)));
            assert_eq!(emb.apply(&big, small.add(a, b)), big.add(emb.apply(&big, a), emb.apply(&big, b)));
        }
    }
}
