//! Combinatorial sphere triangulations.
//!
//! A [`SphereTriangulation`] is the combinatorial type of an ideal polyhedron:
//! `n` vertices and `2n - 4` oriented triangles, each listed counterclockwise
//! as seen from outside the sphere. Orientation consistency is checked on
//! construction, never repaired.
//!
//! All angle computations happen on an [`ApexLink`], the planar triangulation
//! left after sending one vertex to infinity and deleting its open star.

mod link;
mod maps;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use link::{ApexLink, Corner, HullEdge, InteriorEdge};
pub use maps::{AutomorphismCount, CanonicalCode};

/// Vertex identifier, 0-based.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("a sphere triangulation needs at least 4 vertices, got {n}")]
    TooFewVertices { n: usize },
    #[error("face count {faces} violates Euler's formula: expected 2n - 4 = {expected}")]
    EulerViolation { faces: usize, expected: usize },
    #[error("edge ({u}, {v}) is not shared by exactly two oppositely oriented faces")]
    NonManifoldEdge { u: VertexId, v: VertexId },
    #[error("face adjacency graph is disconnected")]
    Disconnected,
    #[error("face {face} repeats a vertex")]
    DegenerateFace { face: usize },
    #[error("face {face} references vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { face: usize, vertex: VertexId, n: usize },
    #[error("vertex {vertex} is not used by any face")]
    UnusedVertex { vertex: VertexId },
    #[error("vertex {vertex} is outside 0..{n}")]
    InvalidVertex { vertex: VertexId, n: usize },
}

/// Undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Self { u: a, v: b }
        } else {
            Self { u: b, v: a }
        }
    }

    pub fn contains(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// Unvalidated vertex count and face list, the JSON interchange shape
/// `{"n": <int>, "faces": [[i,j,k], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTriangulation {
    pub n: usize,
    pub faces: Vec<[VertexId; 3]>,
}

/// Validated oriented triangulation of the 2-sphere.
///
/// Immutable after construction. Besides the face list it keeps the
/// directed-edge index `(u, v) -> (face, slot)` so neighbourhood queries are
/// constant time.
#[derive(Debug, Clone)]
pub struct SphereTriangulation {
    n: usize,
    faces: Vec<[VertexId; 3]>,
    darts: HashMap<(VertexId, VertexId), (usize, usize)>,
    degree: Vec<usize>,
}

impl PartialEq for SphereTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.faces == other.faces
    }
}

impl Eq for SphereTriangulation {}

impl Serialize for SphereTriangulation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SphereTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawTriangulation::deserialize(deserializer)?;
        Self::validate(raw).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<RawTriangulation> for SphereTriangulation {
    type Error = TriangulationError;

    fn try_from(raw: RawTriangulation) -> Result<Self, Self::Error> {
        Self::validate(raw)
    }
}

impl SphereTriangulation {
    /// Checks every structural invariant and builds the edge index.
    pub fn validate(raw: RawTriangulation) -> Result<Self, TriangulationError> {
        let RawTriangulation { n, faces } = raw;
        if n < 4 {
            return Err(TriangulationError::TooFewVertices { n });
        }
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(TriangulationError::VertexOutOfRange { face: fi, vertex: v, n });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(TriangulationError::DegenerateFace { face: fi });
            }
        }
        let expected = 2 * n - 4;
        if faces.len() != expected {
            return Err(TriangulationError::EulerViolation { faces: faces.len(), expected });
        }

        let mut darts = HashMap::with_capacity(3 * faces.len());
        for (fi, f) in faces.iter().enumerate() {
            for slot in 0..3 {
                let (a, b) = (f[slot], f[(slot + 1) % 3]);
                if darts.insert((a, b), (fi, slot)).is_some() {
                    let e = EdgeKey::new(a, b);
                    return Err(TriangulationError::NonManifoldEdge { u: e.u, v: e.v });
                }
            }
        }
        for &(a, b) in darts.keys() {
            if !darts.contains_key(&(b, a)) {
                let e = EdgeKey::new(a, b);
                return Err(TriangulationError::NonManifoldEdge { u: e.u, v: e.v });
            }
        }

        let mut degree = vec![0usize; n];
        for &(a, _) in darts.keys() {
            degree[a] += 1;
        }
        if let Some(vertex) = degree.iter().position(|&d| d == 0) {
            return Err(TriangulationError::UnusedVertex { vertex });
        }

        // Face adjacency connectivity; together with the counts above this
        // rules out pinched vertices as well.
        let mut seen = vec![false; faces.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(fi) = queue.pop_front() {
            let f = faces[fi];
            for slot in 0..3 {
                let (a, b) = (f[slot], f[(slot + 1) % 3]);
                let (g, _) = darts[&(b, a)];
                if !seen[g] {
                    seen[g] = true;
                    reached += 1;
                    queue.push_back(g);
                }
            }
        }
        if reached != faces.len() {
            return Err(TriangulationError::Disconnected);
        }

        Ok(Self { n, faces, darts, degree })
    }

    pub fn from_faces(n: usize, faces: Vec<[VertexId; 3]>) -> Result<Self, TriangulationError> {
        Self::validate(RawTriangulation { n, faces })
    }

    pub fn to_raw(&self) -> RawTriangulation {
        RawTriangulation { n: self.n, faces: self.faces.clone() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[[VertexId; 3]] {
        &self.faces
    }

    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    /// All undirected edges in increasing order.
    pub fn edges(&self) -> Vec<EdgeKey> {
        let set: BTreeSet<EdgeKey> = self.darts.keys().filter(|(a, b)| a < b).map(|&(a, b)| EdgeKey::new(a, b)).collect();
        set.into_iter().collect()
    }

    /// Face and slot holding the directed edge `a -> b`, if present.
    pub fn dart(&self, a: VertexId, b: VertexId) -> Option<(usize, usize)> {
        self.darts.get(&(a, b)).copied()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.darts.contains_key(&(a, b))
    }

    /// Neighbours of `v` in rotation order. Starting from the smallest
    /// neighbour, each next one is the third vertex of the face containing
    /// the directed edge `v -> current`.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let start = self.darts.keys().filter(|(a, _)| *a == v).map(|&(_, b)| b).min().expect("validated vertices have positive degree");
        let mut out = Vec::with_capacity(self.degree[v]);
        let mut cur = start;
        loop {
            out.push(cur);
            let (fi, slot) = self.darts[&(v, cur)];
            cur = self.faces[fi][(slot + 2) % 3];
            if cur == start {
                break;
            }
        }
        out
    }

    /// The vertex of maximum degree, smallest id on ties.
    pub fn choose_apex(&self) -> VertexId {
        let mut best = 0;
        for v in 1..self.n {
            if self.degree[v] > self.degree[best] {
                best = v;
            }
        }
        best
    }

    pub fn build_link(&self, apex: VertexId) -> Result<ApexLink, TriangulationError> {
        if apex >= self.n {
            return Err(TriangulationError::InvalidVertex { vertex: apex, n: self.n });
        }
        Ok(ApexLink::new(self, apex))
    }

    /// Same triangulation with every face reversed.
    pub fn mirrored(&self) -> Self {
        let faces = self.faces.iter().map(|f| [f[0], f[2], f[1]]).collect();
        Self::from_faces(self.n, faces).expect("mirror of a valid triangulation is valid")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[VertexId]) -> Result<Self, TriangulationError> {
        let faces = self.faces.iter().map(|f| [perm[f[0]], perm[f[1]], perm[f[2]]]).collect();
        Self::from_faces(self.n, faces)
    }

    /// Cheap isomorphism invariant: sorted degree sequence plus sorted
    /// multiset of per-face sorted degree triples, hashed with FNV-1a.
    /// Distinct types may collide.
    pub fn type_hash(&self) -> u64 {
        let mut degs = self.degree.clone();
        degs.sort_unstable();
        let mut triples: Vec<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| {
                let mut t = [self.degree[f[0]], self.degree[f[1]], self.degree[f[2]]];
                t.sort_unstable();
                t
            })
            .collect();
        triples.sort_unstable();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: usize| {
            for b in (x as u64).to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.n);
        degs.iter().for_each(|&d| feed(d));
        triples.iter().flatten().for_each(|&d| feed(d));
        h
    }

    /// Tetrahedron on vertices `0..4`.
    pub fn tetrahedron() -> Self {
        Self::from_faces(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    /// Octahedron with antipodal pairs `(0, 5)`, `(1, 3)`, `(2, 4)`.
    pub fn octahedron() -> Self {
        Self::from_faces(6, vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1], [5, 2, 1], [5, 3, 2], [5, 4, 3], [5, 1, 4]]).unwrap()
    }

    /// Bipyramid over a `k`-gon: equator `0..k`, poles `k` and `k + 1`.
    pub fn bipyramid(k: usize) -> Self {
        assert!(k >= 3, "bipyramid needs at least a triangle equator");
        let (top, bottom) = (k, k + 1);
        let mut faces = Vec::with_capacity(2 * k);
        for i in 0..k {
            let j = (i + 1) % k;
            faces.push([top, i, j]);
            faces.push([bottom, j, i]);
        }
        Self::from_faces(k + 2, faces).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_is_valid() {
        let t = SphereTriangulation::tetrahedron();
        assert_eq!(t.n(), 4);
        assert_eq!(t.edge_count(), 6);
        assert!(t.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn missing_face_is_euler_violation() {
        let err = SphereTriangulation::from_faces(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]]).unwrap_err();
        assert_eq!(err, TriangulationError::EulerViolation { faces: 3, expected: 4 });
    }

    #[test]
    fn octahedron_counts() {
        let t = SphereTriangulation::octahedron();
        assert_eq!(t.faces().len(), 8);
        assert_eq!(t.edge_count(), 12);
        assert!(t.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn inconsistent_orientation_is_rejected() {
        let err = SphereTriangulation::from_faces(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 2, 3]]).unwrap_err();
        assert!(matches!(err, TriangulationError::NonManifoldEdge { .. }));
    }

    #[test]
    fn repeated_vertex_is_degenerate() {
        let err = SphereTriangulation::from_faces(4, vec![[0, 1, 1], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap_err();
        assert_eq!(err, TriangulationError::DegenerateFace { face: 0 });
    }

    #[test]
    fn two_disjoint_pieces_are_rejected() {
        // Two octahedra glued at two non-adjacent vertices pass every count
        // but share no edge.
        let a = SphereTriangulation::octahedron();
        let map_b = [0, 6, 7, 8, 9, 5];
        let mut faces = a.faces().to_vec();
        faces.extend(a.faces().iter().map(|f| [map_b[f[0]], map_b[f[1]], map_b[f[2]]]));
        let err = SphereTriangulation::from_faces(10, faces).unwrap_err();
        assert!(matches!(err, TriangulationError::Disconnected | TriangulationError::EulerViolation { .. }));
    }

    #[test]
    fn out_of_range_vertex() {
        let err = SphereTriangulation::from_faces(4, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 7]]).unwrap_err();
        assert!(matches!(err, TriangulationError::VertexOutOfRange { vertex: 7, .. }));
    }

    #[test]
    fn choose_apex_ties_and_maxima() {
        assert_eq!(SphereTriangulation::tetrahedron().choose_apex(), 0);
        assert_eq!(SphereTriangulation::octahedron().choose_apex(), 0);
        // Equator 0,1,2 has degree 4, poles degree 3.
        assert_eq!(SphereTriangulation::bipyramid(3).choose_apex(), 0);
        // Poles of the pentagonal bipyramid have degree 5.
        assert_eq!(SphereTriangulation::bipyramid(5).choose_apex(), 5);
    }

    #[test]
    fn neighbors_follow_rotation() {
        let t = SphereTriangulation::octahedron();
        let nb = t.neighbors(0);
        assert_eq!(nb.len(), 4);
        for i in 0..4 {
            let (a, b) = (nb[i], nb[(i + 1) % 4]);
            assert!(t.faces().contains(&[0, a, b]) || t.faces().contains(&[a, b, 0]) || t.faces().contains(&[b, 0, a]));
        }
    }

    #[test]
    fn serde_round_trip_validates() {
        let json = r#"{"n":4,"faces":[[0,1,2],[0,2,3],[0,3,1],[1,3,2]]}"#;
        let t: SphereTriangulation = serde_json::from_str(json).unwrap();
        assert_eq!(t, SphereTriangulation::tetrahedron());
        let bad = r#"{"n":4,"faces":[[0,1,2],[0,2,3],[0,3,1]]}"#;
        assert!(serde_json::from_str::<SphereTriangulation>(bad).is_err());
    }
}
