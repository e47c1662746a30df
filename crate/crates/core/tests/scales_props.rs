//! Partial-order laws and Pareto filtering.

use proptest::prelude::*;
use restruct_core::oracle::oracle_pareto;
use restruct_core::{dominates_counts, dominates_min, pareto_front_min, CountVector, Dominance};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() }
}

/// Count vectors with k = 3 and a shared total, as produced by one composite size.
fn counts(total: u32) -> impl Strategy<Value = CountVector> {
    (0..=total, 0..=total).prop_map(move |(a, b)| {
        let a = a.min(total);
        let b = b.min(total - a);
        CountVector::new(vec![a, b, total - a - b]).unwrap()
    })
}

fn vectors() -> impl Strategy<Value = Vec<Vec<i32>>> {
    (1usize..4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(0i32..5, d), 1..40))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn count_dominance_is_a_partial_order(a in counts(4), b in counts(4), c in counts(4)) {
        prop_assert_eq!(dominates_counts(&a, &a).unwrap(), Dominance::Equal);
        let ab = dominates_counts(&a, &b).unwrap();
        prop_assert_eq!(dominates_counts(&b, &a).unwrap(), ab.flip());
        if ab == Dominance::Equal {
            prop_assert_eq!(&a, &b);
        }
        let bc = dominates_counts(&b, &c).unwrap();
        if ab == Dominance::Dominates && bc == Dominance::Dominates {
            prop_assert_eq!(dominates_counts(&a, &c).unwrap(), Dominance::Dominates);
        }
    }

    #[test]
    fn count_dominance_tracks_deficiency(a in counts(5), b in counts(5)) {
        if dominates_counts(&a, &b).unwrap() == Dominance::Dominates {
            prop_assert!(a.deficiency() < b.deficiency());
        }
    }

    #[test]
    fn min_dominance_is_a_partial_order(a in prop::collection::vec(0i32..4, 3), b in prop::collection::vec(0i32..4, 3)) {
        prop_assert_eq!(dominates_min(&a, &a).unwrap(), Dominance::Equal);
        prop_assert_eq!(dominates_min(&b, &a).unwrap(), dominates_min(&a, &b).unwrap().flip());
    }

    #[test]
    fn pareto_front_is_sound_and_complete(vs in vectors()) {
        let got = pareto_front_min(&vs).unwrap();
        prop_assert_eq!(&got, &oracle_pareto(&vs).unwrap().canonical);
        for i in 0..vs.len() {
            let dominated = vs.iter().any(|w| dominates_min(w, &vs[i]).unwrap() == Dominance::Dominates);
            prop_assert_eq!(got.contains(&i), !dominated);
        }
    }
}
