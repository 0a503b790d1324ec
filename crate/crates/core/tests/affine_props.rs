use proptest::prelude::*;
use scell_core::affine_weyl::{bfs_lengths, enumerate_ball, threshold_matrix, AffinePermutation, Mode, ThresholdMatrix};

/// A random element as a word in the simple reflections.
fn element(n: usize, mode: Mode) -> impl Strategy<Value = AffinePermutation> {
    proptest::collection::vec(0..n, 0..12).prop_map(move |word| {
        word.into_iter().fold(AffinePermutation::identity(n, mode), |x, i| x.mul_simple(i))
    })
}

fn any_element() -> impl Strategy<Value = AffinePermutation> {
    (2usize..=5).prop_flat_map(|n| element(n, Mode::Sl))
}

#[test]
fn length_formula_matches_bfs() {
    for n in 2..=4 {
        for mode in [Mode::Sl, Mode::Gl] {
            let max = if n == 4 { 5 } else { 7 };
            for (x, l) in bfs_lengths(n, mode, max) {
                assert_eq!(x.length(), l, "{x}");
            }
        }
    }
}

#[test]
fn codimension_equals_length() {
    for n in 2..=3 {
        let bfs = bfs_lengths(n, Mode::Sl, 8);
        for x in enumerate_ball(n, Mode::Sl, 8) {
            assert_eq!(threshold_matrix(&x).excess(), bfs[&x] as i64, "{x}");
        }
    }
}

#[test]
fn affine_a2_ball_sizes() {
    // 1, 3, 6, 9, 12, ... elements of each length
    let sizes: Vec<usize> = (0..=6).map(|l| enumerate_ball(3, Mode::Sl, l).len()).collect();
    assert_eq!(sizes, vec![1, 4, 10, 19, 31, 46, 64]);
}

proptest! {
    #[test]
    fn group_laws(x in any_element(), seed in 0usize..1000) {
        let n = x.n();
        let y = (0..seed % 7).fold(AffinePermutation::identity(n, Mode::Sl), |y, k| y.mul_simple((seed + k) % n));
        let e = AffinePermutation::identity(n, Mode::Sl);
        prop_assert_eq!(x.inverse().compose(&x).unwrap(), e.clone());
        prop_assert_eq!(x.compose(&e).unwrap(), x.clone());
        let xy = x.compose(&y).unwrap();
        prop_assert_eq!(xy.inverse(), y.inverse().compose(&x.inverse()).unwrap());
        prop_assert_eq!(x.inverse().length(), x.length());
    }

    #[test]
    fn thresholds_dominate_kappa(x in any_element()) {
        let k = threshold_matrix(&x);
        let kappa = ThresholdMatrix::kappa(x.n());
        for i in 0..x.n() {
            for j in 0..x.n() {
                prop_assert!(k.get(i, j) >= kappa.get(i, j));
            }
        }
        prop_assert_eq!(k.excess(), x.length() as i64);
    }

    #[test]
    fn encoding_roundtrip(x in any_element()) {
        prop_assert_eq!(AffinePermutation::parse(&x.encode(), Mode::Sl).unwrap(), x);
    }
}
