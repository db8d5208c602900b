use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};

use idealpoly_core::geom::{close_with_infinity, delaunay, random_configuration};
use idealpoly_core::rng::trial_rng;
use idealpoly_core::triang::{CanonicalCode, SphereTriangulation, VertexId};

/// Result of flipping the edge shared by faces `[u, v, w]` and `[v, u, x]`,
/// if it yields a valid triangulation.
fn flip(t: &SphereTriangulation, u: VertexId, v: VertexId) -> Option<SphereTriangulation> {
    let faces = t.faces();
    let find = |a: VertexId, b: VertexId| {
        faces.iter().enumerate().find_map(|(i, f)| (0..3).find(|&s| f[s] == a && f[(s + 1) % 3] == b).map(|s| (i, f[(s + 2) % 3])))
    };
    let (f1, w) = find(u, v)?;
    let (f2, x) = find(v, u)?;
    if w == x || t.has_edge(w, x) || t.degree(u) < 4 || t.degree(v) < 4 {
        return None;
    }
    let mut out: Vec<[VertexId; 3]> = faces.iter().enumerate().filter(|&(i, _)| i != f1 && i != f2).map(|(_, f)| *f).collect();
    out.push([w, u, x]);
    out.push([x, v, w]);
    SphereTriangulation::from_faces(t.n(), out).ok()
}

/// One representative of every combinatorial type of triangulated sphere
/// with `n` vertices, up to reflection, found by breadth-first search of
/// the (connected) flip graph. Ordered by canonical code.
pub fn all_triangulations(n: usize) -> Vec<SphereTriangulation> {
    let start = if n == 4 { SphereTriangulation::tetrahedron() } else { SphereTriangulation::bipyramid(n - 2) };
    let mut seen: BTreeMap<CanonicalCode, SphereTriangulation> = BTreeMap::new();
    seen.insert(start.canonical_code(), start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for e in t.edges() {
            if let Some(s) = flip(&t, e.u, e.v) {
                let code = s.canonical_code();
                if let Entry::Vacant(slot) = seen.entry(code) {
                    slot.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// The triakis tetrahedron: a tetrahedron with a degree-3 vertex on each
/// face. It is a triangulation with no ideal realization.
pub fn triakis_tetrahedron() -> SphereTriangulation {
    let tet = SphereTriangulation::tetrahedron();
    let mut faces = Vec::new();
    for (i, f) in tet.faces().iter().enumerate() {
        let c = 4 + i;
        faces.push([f[0], f[1], c]);
        faces.push([f[1], f[2], c]);
        faces.push([f[2], f[0], c]);
    }
    SphereTriangulation::from_faces(8, faces).expect("valid triangulation")
}

/// Named triangulations used across the test suites: every type with at
/// most 8 vertices, bipyramids up to 10 vertices, and the Delaunay types
/// of a few seeded random configurations with 9 and 10 vertices.
pub fn corpus() -> Vec<(String, SphereTriangulation)> {
    let mut out: Vec<(String, SphereTriangulation)> = Vec::new();
    let mut codes = Vec::new();
    let mut push = |name: String, t: SphereTriangulation, out: &mut Vec<(String, SphereTriangulation)>| {
        let code = t.canonical_code();
        if !codes.contains(&code) {
            codes.push(code);
            out.push((name, t));
        }
    };
    push("tetrahedron".into(), SphereTriangulation::tetrahedron(), &mut out);
    push("octahedron".into(), SphereTriangulation::octahedron(), &mut out);
    push("triakis-tetrahedron".into(), triakis_tetrahedron(), &mut out);
    for k in 3..=8 {
        push(format!("bipyramid-{k}"), SphereTriangulation::bipyramid(k), &mut out);
    }
    for n in 5..=8 {
        for (i, t) in all_triangulations(n).into_iter().enumerate() {
            push(format!("n{n}-type{i}"), t, &mut out);
        }
    }
    for n in [9, 10] {
        for i in 0..4 {
            let config = random_configuration(n, &mut trial_rng(1000 + n as u64, i)).expect("random configuration");
            let (t, _) = close_with_infinity(&delaunay(&config).expect("delaunay")).expect("closed triangulation");
            push(format!("random-n{n}-{i}"), t, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_counts_match_known_enumeration() {
        let counts: Vec<usize> = (4..=8).map(|n| all_triangulations(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14]);
    }

    #[test]
    fn triakis_is_in_the_n8_enumeration() {
        let code = triakis_tetrahedron().canonical_code();
        assert!(all_triangulations(8).iter().any(|t| t.canonical_code() == code));
    }
}
