//! Root finding with on-demand field extension.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::poly::{degree, Poly};
use super::{Embedding, Field, FieldError, Fq, MAX_DEGREE};

/// All roots of a polynomial, each listed once with its multiplicity, living in
/// `field` (possibly larger than the field of the input).
#[derive(Clone, Debug)]
pub struct RootSet {
    pub field: Field,
    /// Embedding of the input's field into `field`.
    pub embedding: Embedding,
    /// Distinct roots, sorted, with multiplicities.
    pub roots: Vec<(Fq, usize)>,
}

/// Finds every root of `f` in the algebraic closure of `field`.
///
/// If `f` does not split over `field = F_{p^m}`, the roots are returned in the
/// splitting field `F_{p^{mL}}` where `L` is the lcm of the degrees of the
/// irreducible factors of `f`. `L` may not exceed `max_degree_growth`.
/// Results do not depend on `seed`; it only drives the randomized splitting.
pub fn roots_with_extension(
    field: &Field,
    f: &[Fq],
    max_degree_growth: usize,
    seed: u64,
) -> Result<RootSet, FieldError> {
    let f = super::poly::trim(f.to_vec());
    let Some(d) = degree(&f) else {
        return Err(FieldError::ZeroPolynomial);
    };
    assert!((d as u64) < field.p() as u64, "degree must stay below the characteristic");
    if d == 0 {
        return Ok(RootSet { field: field.clone(), embedding: Embedding::identity(field), roots: Vec::new() });
    }
    let sqf = field.squarefree_part(&f);
    let growth = field.factor_degrees(&sqf).into_iter().fold(1usize, |acc, k| acc.lcm(&k));

    let budget = (field.degree() * max_degree_growth).min(MAX_DEGREE);
    let needed = field.degree() * growth;
    if growth > max_degree_growth || needed > MAX_DEGREE {
        return Err(FieldError::ExtensionBudgetExceeded { needed, budget });
    }
    let (target, embedding) = if growth > 1 {
        let big = Field::new(field.p() as u64, needed)?;
        let emb = field.embedding_into(&big)?;
        (big, emb)
    } else {
        (field.clone(), Embedding::identity(field))
    };
    let f_big: Poly = f.iter().map(|&c| embedding.apply(&target, c)).collect();
    let sqf_big: Poly = sqf.iter().map(|&c| embedding.apply(&target, c)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut distinct = target.split_linear(&target.poly_monic(&sqf_big), &mut rng);
    distinct.sort();
    let roots = distinct
        .into_iter()
        .map(|r| {
            let mut mult = 0;
            let mut rest = f_big.clone();
            let linear = vec![target.neg(r), target.one()];
            loop {
                let (q, rem) = target.poly_divrem(&rest, &linear);
                if !rem.is_empty() {
                    break;
                }
                mult += 1;
                rest = q;
            }
            (r, mult)
        })
        .collect();
    Ok(RootSet { field: target, embedding, roots })
}

impl Field {
    /// `f / gcd(f, f')`, monic. Valid while `deg f < p`.
    pub(crate) fn squarefree_part(&self, f: &[Fq]) -> Poly {
        let g = self.poly_gcd(f, &self.poly_derivative(f));
        self.poly_monic(&self.poly_divrem(f, &g).0)
    }

    /// Degrees of the irreducible factors of a squarefree polynomial
    /// (distinct-degree factorization; each degree reported once).
    pub(crate) fn factor_degrees(&self, sqf: &[Fq]) -> Vec<usize> {
        let x: Poly = vec![Fq::ZERO, self.one()];
        let mut rest = self.poly_monic(sqf);
        let mut h = x.clone();
        let mut degs = Vec::new();
        let mut i = 0;
        while let Some(dr) = degree(&rest) {
            if dr == 0 {
                break;
            }
            i += 1;
            if 2 * i > dr {
                degs.push(dr);
                break;
            }
            h = self.poly_powmod(&h, self.order(), &rest);
            let g = self.poly_gcd(&rest, &self.poly_sub(&h, &x));
            if degree(&g).unwrap_or(0) > 0 {
                degs.push(i);
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
            }
        }
        degs
    }

    /// Roots of a monic squarefree polynomial that splits into linear factors
    /// (Cantor-Zassenhaus equal-degree splitting).
    pub(crate) fn split_linear<R: rand::Rng + ?Sized>(&self, f: &[Fq], rng: &mut R) -> Vec<Fq> {
        let f = self.poly_monic(f);
        match degree(&f) {
            None | Some(0) => return Vec::new(),
            Some(1) => return vec![self.neg(f[0])],
            _ => {}
        }
        let half = (self.order() - 1u32) / BigUint::from(2u32);
        loop {
            let a = self.random(rng);
            let base = vec![a, self.one()];
            let h = self.poly_powmod(&base, &half, &f);
            let h = self.poly_sub(&h, &[self.one()]);
            let g = self.poly_gcd(&f, &h);
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 && dg < f.len() - 1 {
                let other = self.poly_divrem(&f, &g).0;
                let mut out = self.split_linear(&g, rng);
                out.extend(self.split_linear(&other, rng));
                return out;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, coeffs: &[i64]) -> Poly {
        coeffs.iter().map(|&c| f.from_i64(c)).collect()
    }

    #[test]
    fn x2_minus_2_over_f7() {
        let f = Field::new(7, 1).unwrap();
        let rs = roots_with_extension(&f, &poly(&f, &[-2, 0, 1]), 4, 0).unwrap();
        assert_eq!(rs.field.degree(), 1);
        assert_eq!(rs.roots, vec![(f.from_u64(3), 1), (f.from_u64(4), 1)]);
    }

    #[test]
    fn x2_minus_3_needs_f49() {
        // 3^3 = 27 = -1 mod 7, so 3 is a non-residue
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.pow_u64(f.from_u64(3), 3), f.from_i64(-1));
        let rs = roots_with_extension(&f, &poly(&f, &[-3, 0, 1]), 4, 0).unwrap();
        assert_eq!(rs.field.degree(), 2);
        assert_eq!(rs.roots.len(), 2);
        let big = &rs.field;
        let (a, b) = (rs.roots[0].0, rs.roots[1].0);
        assert_eq!(big.add(a, b), big.zero());
        assert_eq!(big.mul(a, a), big.from_u64(3));
        // conjugate under Frobenius
        assert_eq!(big.frobenius(a, 1), b);
    }

    #[test]
    fn double_root_at_zero() {
        let f = Field::new(7, 1).unwrap();
        let rs = roots_with_extension(&f, &poly(&f, &[0, 0, 1]), 1, 0).unwrap();
        assert_eq!(rs.roots, vec![(f.zero(), 2)]);
    }

    #[test]
    fn budget_is_enforced() {
        let f = Field::new(7, 1).unwrap();
        let err = roots_with_extension(&f, &poly(&f, &[-3, 0, 1]), 1, 0).unwrap_err();
        assert_eq!(err, FieldError::ExtensionBudgetExceeded { needed: 2, budget: 1 });
        assert_eq!(roots_with_extension(&f, &[], 1, 0).unwrap_err(), FieldError::ZeroPolynomial);
    }

    #[test]
    fn seed_does_not_change_result() {
        let f = Field::new(10007, 1).unwrap();
        let g = poly(&f, &[6, -5, -2, 1, 1]);
        let a = roots_with_extension(&f, &g, 12, 1).unwrap();
        let b = roots_with_extension(&f, &g, 12, 99).unwrap();
        assert_eq!(a.roots, b.roots);
        assert_eq!(a.field, b.field);
    }
}
