use proptest::prelude::*;
use scell_core::finite_cells::{finite_scell, intersection_support, rs_shape, FinitePermutation};

fn perm_strategy() -> impl Strategy<Value = FinitePermutation> {
    (1usize..=6).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| FinitePermutation::new(v).unwrap())
}

#[test]
fn steinberg_agreement_up_to_five() {
    for n in 1..=5 {
        for w in FinitePermutation::all(n) {
            assert_eq!(finite_scell(&w, 10007, 5, 1).unwrap(), rs_shape(&w), "{w}");
        }
    }
}

proptest! {
    #[test]
    fn support_size_is_complement_of_length(w in perm_strategy()) {
        let n = w.n();
        prop_assert_eq!(intersection_support(&w).len(), n * (n - 1) / 2 - w.length());
    }

    #[test]
    fn inverse_has_same_cell(w in perm_strategy(), seed in any::<u64>()) {
        prop_assert_eq!(finite_scell(&w, 10007, 5, seed).unwrap(), finite_scell(&w.inverse(), 10007, 5, seed).unwrap());
    }

    #[test]
    fn rs_shape_is_a_partition_of_n(w in perm_strategy()) {
        prop_assert_eq!(rs_shape(&w).size(), w.n());
    }
}
