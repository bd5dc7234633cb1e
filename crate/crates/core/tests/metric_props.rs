use proptest::prelude::*;

use ulam_core::metric::{lcs_oracle, pairwise_matrix, ulam_distance, DistanceMode};
use ulam_core::Perm;

fn perm(len: usize) -> impl Strategy<Value = Perm> {
    Just((1..=len as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

fn triple() -> impl Strategy<Value = (Perm, Perm, Perm)> {
    (0usize..40).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
}

proptest! {
    #[test]
    fn matches_lcs_reference((a, b, _) in triple()) {
        prop_assert_eq!(ulam_distance(&a, &b).unwrap(), a.len() - lcs_oracle(a.as_slice(), b.as_slice()));
    }

    #[test]
    fn is_a_metric((a, b, c) in triple()) {
        let d = |x: &Perm, y: &Perm| ulam_distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
    }

    #[test]
    fn shift_invariant((a, b, _) in triple(), k in 0u32..1000) {
        prop_assert_eq!(ulam_distance(&a.shift(k), &b.shift(k)), ulam_distance(&a, &b));
    }

    #[test]
    fn restriction_never_increases((a, b, _) in triple(), lo in 1u32..20, width in 0u32..20) {
        let hi = lo + width;
        let d = ulam_distance(&a.restrict_range(lo, hi), &b.restrict_range(lo, hi)).unwrap();
        prop_assert!(d <= ulam_distance(&a, &b).unwrap());
    }

    #[test]
    fn one_relocation_moves_at_most_one(a in (1usize..30).prop_flat_map(perm), from in any::<prop::sample::Index>(), to in any::<prop::sample::Index>()) {
        let mut v = a.clone().into_vec();
        let s = v.remove(from.index(v.len()));
        v.insert(to.index(v.len() + 1), s);
        prop_assert!(ulam_distance(&a, &Perm::new(v).unwrap()).unwrap() <= 1);
    }

    #[test]
    fn matrix_modes_agree(ps in (1usize..12).prop_flat_map(|n| prop::collection::vec(perm(n), 1..6))) {
        let fast = pairwise_matrix(&ps, DistanceMode::Fast).unwrap();
        let slow = pairwise_matrix(&ps, DistanceMode::Oracle).unwrap();
        for i in 0..ps.len() {
            prop_assert_eq!(fast.row(i), slow.row(i));
        }
    }
}
