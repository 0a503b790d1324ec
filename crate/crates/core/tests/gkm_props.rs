use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scell_core::affine_weyl::Partition;
use scell_core::gkm::{canonicalize, minimal_gkm, GkmClass};
use scell_core::pi_map::minimal_oracle;
use scell_core::rational::Q;

/// Ultrametric, rotation-invariant data: eigenvalues `c_i t^{1/d} + ...` built
/// from a random tree of "agreement depths".
fn class_strategy() -> impl Strategy<Value = GkmClass> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), proptest::sample::select(Partition::all(n)), 1i64..4))
        .prop_map(|(_, lambda, bump)| {
            // minimal values, then raise all pairs between two equal-length cycles
            let m = minimal_gkm(&lambda);
            let mut q = m.rvals().to_vec();
            let cycles = m.cycles();
            if let Some((a, b)) = (0..cycles.len()).flat_map(|a| (a + 1..cycles.len()).map(move |b| (a, b))).find(|&(a, b)| cycles[a].len() == cycles[b].len()) {
                let d = cycles[a].len() as i64;
                for &i in &cycles[a] {
                    for &j in &cycles[b] {
                        q[i][j] = Q::new(bump + 1, d);
                        q[j][i] = q[i][j];
                    }
                }
                // keep the pair rotation invariant only along the diagonal shift
                if d > 1 {
                    for (k, &i) in cycles[a].iter().enumerate() {
                        for (l, &j) in cycles[b].iter().enumerate() {
                            if k != l {
                                q[i][j] = Q::new(1, d);
                                q[j][i] = q[i][j];
                            }
                        }
                    }
                }
            }
            canonicalize(&cycles, &q).unwrap()
        })
}

fn relabel(c: &GkmClass, rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, Vec<Vec<Q>>) {
    let n = c.n();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let cycles = c.cycles().iter().map(|cy| cy.iter().map(|&i| perm[i]).collect()).collect();
    let mut q = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            q[perm[i]][perm[j]] = c.rvals()[i][j];
        }
    }
    (cycles, q)
}

proptest! {
    #[test]
    fn canonical_form_is_a_class_invariant(c in class_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(canonicalize(&c.cycles(), c.rvals()).unwrap(), c.clone());
        for _ in 0..20 {
            let (cycles, q) = relabel(&c, &mut rng);
            prop_assert_eq!(canonicalize(&cycles, &q).unwrap(), c.clone());
        }
    }

    #[test]
    fn json_roundtrip(c in class_strategy()) {
        let s = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<GkmClass>(&s).unwrap(), c);
    }

    #[test]
    fn ultrametric_and_denominators(c in class_strategy()) {
        let n = c.n();
        let len: Vec<i64> = {
            let mut l = vec![0; n];
            for cy in c.cycles() { for &i in &cy { l[i] = cy.len() as i64; } }
            l
        };
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                let lcm = num_integer::lcm(len[i], len[j]);
                prop_assert_eq!(lcm % c.rvals()[i][j].denom(), 0);
                for k in 0..n {
                    if k == i || k == j { continue; }
                    let (a, b, z) = (c.rvals()[i][j], c.rvals()[j][k], c.rvals()[i][k]);
                    prop_assert!(z >= a.min(b));
                }
            }
        }
    }
}

#[test]
fn minimal_closed_form_matches_oracle() {
    for n in 1..=5 {
        for lambda in Partition::all(n) {
            let oracle = minimal_oracle(&lambda, 10007, 10, 2024).unwrap();
            assert_eq!(oracle, minimal_gkm(&lambda), "{lambda}");
        }
    }
}

#[test]
fn minimal_delta_values() {
    for n in 1..=6 {
        assert_eq!(minimal_gkm(&Partition::single(n)).delta().unwrap(), 0);
        assert_eq!(minimal_gkm(&Partition::ones(n)).delta().unwrap(), (n * (n - 1) / 2) as u64);
    }
}
