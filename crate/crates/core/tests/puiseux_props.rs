use proptest::prelude::*;
use scell_core::field::Field;
use scell_core::puiseux::{
    newton_polygon, pairwise_valuations, product_of_linear_factors, puiseux_expand, PuiseuxExpansion, SeriesPolynomial,
    TruncatedSeries,
};
use scell_core::rational::Q;

const P: u64 = 10007;
const N: i64 = 32;

/// Monic polynomial of degree `coeffs.len()` whose lower coefficients have the
/// given `t^1 .. t^{N-1}` coefficients, known to precision `N`.
fn build(f: &Field, coeffs: &[Vec<u64>]) -> SeriesPolynomial {
    let lower = coeffs
        .iter()
        .map(|c| TruncatedSeries::from_coeffs(1, 1, c.iter().map(|&a| f.from_u64(a)).collect(), N))
        .collect();
    SeriesPolynomial::monic(lower, f)
}

fn poly_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(
            // sparse leading terms make ramified and clustered cases common
            (0usize..4, proptest::collection::vec(0u64..P, (N - 1) as usize)).prop_map(|(skip, mut c)| {
                for a in c.iter_mut().take(skip) {
                    *a = 0;
                }
                c
            }),
            n,
        )
    })
}

fn permutation_of(exp: &PuiseuxExpansion, roots: &[TruncatedSeries], map: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> Vec<usize> {
    roots
        .iter()
        .map(|a| {
            let img = map(a);
            roots.iter().position(|b| b.agrees_with(&img, &exp.field)).expect("image is a root")
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_invariants(coeffs in poly_strategy(), seed in any::<u64>()) {
        let f = Field::new(P, 1).unwrap();
        let poly = build(&f, &coeffs);
        let target = Q::from_integer(N);
        let exp = match puiseux_expand(&poly, &f, &target, seed) {
            Ok(e) => e,
            // a vanishing constant term or a near-double root is legitimate, just rare
            Err(e) => return Err(TestCaseError::reject(format!("{e}"))),
        };
        let pv = pairwise_valuations(&exp);
        let n = poly.degree();
        prop_assert_eq!(pv.eigenvalues.len(), n);

        // roundtrip modulo t^{N/2}
        let half = Q::new(N, 2);
        let emb = f.embedding_into(&exp.field).unwrap();
        let prod = product_of_linear_factors(&pv.eigenvalues, &exp.field);
        for k in 0..=n {
            let orig = poly.coeff(k).map_coeffs(|_, a| emb.apply(&exp.field, a));
            let d = prod[k].sub(&orig, &exp.field).truncate(&half);
            prop_assert!(d.is_zero_to_precision(), "coefficient {} differs", k);
            prop_assert!(d.precision_q().map_or(true, |p| p >= half), "coefficient {} has precision {:?}", k, d.precision_q());
        }

        // Newton consistency
        let np = newton_polygon(&poly).unwrap();
        let mut vals: Vec<Q> = pv.eigenvalues.iter().map(|a| a.valuation_q().unwrap()).collect();
        vals.sort();
        prop_assert_eq!(&vals, &np.slope_multiset());
        prop_assert_eq!(vals.iter().sum::<Q>(), poly.coeff(0).valuation_q().unwrap());

        // Galois invariance
        for perm in [
            permutation_of(&exp, &pv.eigenvalues, |a| exp.sigma(a)),
            permutation_of(&exp, &pv.eigenvalues, |a| exp.frobenius(a)),
        ] {
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(pv.q[perm[i]][perm[j]], pv.q[i][j]);
                }
            }
        }

        // ultrametric
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let (a, b, c) = (pv.q[i][j], pv.q[j][k], pv.q[i][k]);
                    prop_assert!(c >= a.min(b));
                    if a != b {
                        prop_assert_eq!(c, a.min(b));
                    }
                }
            }
        }

        // branch bookkeeping
        let counted: usize = exp.branches.iter().map(|b| b.ramification as usize * b.residual_degree * b.multiplicity).sum();
        prop_assert_eq!(counted, n);
    }
}

#[test]
fn seed_does_not_change_the_expansion() {
    let f = Field::new(P, 1).unwrap();
    let poly = build(&f, &[vec![0, 0, 5, 1, 2], vec![0, 3, 0, 0, 9], vec![7, 1]]);
    let a = puiseux_expand(&poly, &f, &Q::from_integer(N), 1).unwrap();
    let b = puiseux_expand(&poly, &f, &Q::from_integer(N), 99).unwrap();
    assert_eq!(a.branches, b.branches);
}
