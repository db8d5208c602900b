use idealpoly_core::triang::{SphereTriangulation, TriangulationError};
use idealpoly_oracle::corpus::{all_triangulations, corpus};
use proptest::prelude::*;

#[test]
fn validation_rejects_malformed_input() {
    let err = |n, faces: Vec<[usize; 3]>| SphereTriangulation::from_faces(n, faces).unwrap_err();
    assert!(matches!(err(3, vec![[0, 1, 2], [0, 2, 1]]), TriangulationError::TooFewVertices { .. }));
    assert!(matches!(err(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]]), TriangulationError::EulerViolation { .. }));
    assert!(matches!(err(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 2, 3]]), TriangulationError::NonManifoldEdge { .. }));
    assert!(matches!(err(4, vec![[0, 1, 1], [0, 2, 3], [0, 3, 1], [1, 3, 2]]), TriangulationError::DegenerateFace { .. }));
    assert!(matches!(err(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 9]]), TriangulationError::VertexOutOfRange { .. }));
}

#[test]
fn json_round_trip_validates() {
    for (_, t) in corpus() {
        let s = serde_json::to_string(&t).unwrap();
        let back: SphereTriangulation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
    let bad = r#"{"n": 4, "faces": [[0,1,2],[0,2,3],[0,3,1]]}"#;
    assert!(serde_json::from_str::<SphereTriangulation>(bad).is_err());
}

#[test]
fn automorphism_counts_divide_dart_count() {
    // A nontrivial orientation-preserving automorphism fixes no dart, so the
    // group acts freely on darts.
    for n in 4..=8 {
        for t in all_triangulations(n) {
            let c = t.automorphism_count();
            assert_eq!(c.total % c.orientation_preserving, 0);
            assert!(c.total == c.orientation_preserving || c.total == 2 * c.orientation_preserving);
            assert_eq!((2 * t.edge_count()) % c.orientation_preserving, 0);
        }
    }
}

#[test]
fn distinct_types_are_not_isomorphic() {
    let types = all_triangulations(8);
    for i in 0..types.len() {
        for j in 0..types.len() {
            assert_eq!(types[i].is_isomorphic(&types[j]), i == j);
        }
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn invariants_survive_relabeling(idx in 0usize..14, perm in permutation(8)) {
        let t = &all_triangulations(8)[idx];
        let r = t.relabeled(&perm).unwrap();
        prop_assert_eq!(t.automorphism_count(), r.automorphism_count());
        prop_assert_eq!(t.canonical_code(), r.canonical_code());
        prop_assert_eq!(t.type_hash(), r.type_hash());
        prop_assert!(t.is_isomorphic(&r.mirrored()));
    }
}
