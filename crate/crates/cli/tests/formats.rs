use proptest::prelude::*;

use ulam_cli::formats::{
    parse_graph, parse_instance, parse_vectors, serialize_graph, serialize_instance, serialize_vectors, VectorFile,
};
use ulam_core::oracles::QuantifierPattern;
use ulam_core::reductions::maxcut::Graph;
use ulam_core::reductions::ReducedInstance;
use ulam_core::{BichromaticInstance, BinaryVector, Perm, UlamInstance, VectorSet};

fn perms(count: usize, len: usize) -> impl Strategy<Value = Vec<Perm>> {
    prop::collection::vec(Just((1..=len as u32).collect::<Vec<_>>()).prop_shuffle(), count)
        .prop_map(|vs| vs.into_iter().map(|v| Perm::new(v).unwrap()).collect())
}

fn instance() -> impl Strategy<Value = ReducedInstance> {
    (1usize..6, 0usize..9, 0u64..100, any::<bool>()).prop_flat_map(|(count, len, tau, bi)| {
        perms(count + 1, len).prop_map(move |mut ps| {
            if bi {
                let y = ps.split_off(1);
                ReducedInstance::Bi(BichromaticInstance::new(ps, y, tau).unwrap())
            } else {
                ReducedInstance::Mono(UlamInstance::new(ps, tau).unwrap())
            }
        })
    })
}

fn vector_set(d: usize) -> impl Strategy<Value = VectorSet> {
    prop::collection::vec(prop::collection::vec(0u8..2, d), 0..4)
        .prop_map(move |vs| VectorSet::with_dim(d, vs.into_iter().map(|v| BinaryVector::new(v).unwrap()).collect()).unwrap())
}

fn vector_file() -> impl Strategy<Value = VectorFile> {
    (1usize..5, any::<bool>()).prop_flat_map(|(d, eaee)| {
        let pattern =
            if eaee { QuantifierPattern::ExistsForallExistsExists } else { QuantifierPattern::ExistsExistsExistsExists };
        [vector_set(d), vector_set(d), vector_set(d), vector_set(d)].prop_map(move |sets| VectorFile { pattern, sets })
    })
}

proptest! {
    #[test]
    fn instances_round_trip(inst in instance()) {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn vectors_round_trip(file in vector_file()) {
        let text = serialize_vectors(&file);
        prop_assert_eq!(parse_vectors(&text).unwrap(), file);
    }

    #[test]
    fn graphs_round_trip(n in 2usize..7, picks in prop::collection::vec(any::<bool>(), 21)) {
        let edges: Vec<(u32, u32)> = (1..=n as u32)
            .flat_map(|u| (u + 1..=n as u32).map(move |v| (u, v)))
            .zip(picks)
            .filter_map(|(e, keep)| keep.then_some(e))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        let text = serialize_graph(&g);
        prop_assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }
}
