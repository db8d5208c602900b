use std::collections::BTreeMap;

use serde::Serialize;

use super::{EdgeKey, SphereTriangulation, VertexId};

/// One corner of a bounded face. Corner `3 * face + slot` sits at
/// `faces[face][slot]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub face: usize,
    pub slot: usize,
    pub vertex: VertexId,
}

/// Link edge shared by two bounded faces, with the corner opposite it in each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InteriorEdge {
    pub key: EdgeKey,
    pub opposite: [usize; 2],
}

/// Link edge shared by a bounded face and an apex face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HullEdge {
    pub key: EdgeKey,
    pub opposite: usize,
}

/// The planar triangulation obtained by sending `apex` to infinity.
///
/// Bounded faces keep the parent's input order and vertex order, so corner
/// indexing is deterministic. Since the parent faces are counterclockwise
/// from outside, a bounded face `[a, b, c]` appears clockwise in the
/// stereographic plane; its planar counterclockwise order is `[a, c, b]`.
#[derive(Debug, Clone, Serialize)]
pub struct ApexLink {
    n: usize,
    apex: VertexId,
    parent_faces: Vec<usize>,
    faces: Vec<[VertexId; 3]>,
    hull_cycle: Vec<VertexId>,
    interior_vertices: Vec<VertexId>,
    interior_edges: Vec<InteriorEdge>,
    hull_edges: Vec<HullEdge>,
    corners_at: Vec<Vec<usize>>,
}

impl ApexLink {
    pub(super) fn new(t: &SphereTriangulation, apex: VertexId) -> Self {
        let mut parent_faces = Vec::new();
        let mut faces = Vec::new();
        for (fi, f) in t.faces().iter().enumerate() {
            if !f.contains(&apex) {
                parent_faces.push(fi);
                faces.push(*f);
            }
        }
        let hull_cycle = t.neighbors(apex);
        let mut on_hull = vec![false; t.n()];
        for &w in &hull_cycle {
            on_hull[w] = true;
        }
        let interior_vertices = (0..t.n()).filter(|&v| v != apex && !on_hull[v]).collect();

        let mut corners_at = vec![Vec::new(); t.n()];
        // Opposite corners per undirected edge, in corner order.
        let mut opposite: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for (li, f) in faces.iter().enumerate() {
            for slot in 0..3 {
                let c = 3 * li + slot;
                corners_at[f[slot]].push(c);
                let key = EdgeKey::new(f[(slot + 1) % 3], f[(slot + 2) % 3]);
                opposite.entry(key).or_default().push(c);
            }
        }
        let mut interior_edges = Vec::new();
        let mut hull_edges = Vec::new();
        for (key, cs) in opposite {
            match cs.as_slice() {
                [a, b] => interior_edges.push(InteriorEdge { key, opposite: [*a, *b] }),
                [a] => hull_edges.push(HullEdge { key, opposite: *a }),
                _ => unreachable!("validated triangulation has two faces per edge"),
            }
        }

        Self { n: t.n(), apex, parent_faces, faces, hull_cycle, interior_vertices, interior_edges, hull_edges, corners_at }
    }

    /// Vertex count of the parent triangulation, apex included.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apex(&self) -> VertexId {
        self.apex
    }

    /// Bounded faces in parent order and parent vertex order.
    pub fn faces(&self) -> &[[VertexId; 3]] {
        &self.faces
    }

    /// Index of each bounded face in the parent face list.
    pub fn parent_faces(&self) -> &[usize] {
        &self.parent_faces
    }

    pub fn hull_cycle(&self) -> &[VertexId] {
        &self.hull_cycle
    }

    pub fn interior_vertices(&self) -> &[VertexId] {
        &self.interior_vertices
    }

    pub fn interior_edges(&self) -> &[InteriorEdge] {
        &self.interior_edges
    }

    pub fn hull_edges(&self) -> &[HullEdge] {
        &self.hull_edges
    }

    pub fn corner_count(&self) -> usize {
        3 * self.faces.len()
    }

    pub fn corner(&self, c: usize) -> Corner {
        let (face, slot) = (c / 3, c % 3);
        Corner { face, slot, vertex: self.faces[face][slot] }
    }

    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        (0..self.corner_count()).map(|c| self.corner(c))
    }

    /// Corner indices at vertex `v`, in corner order. Empty for the apex.
    pub fn corners_at(&self, v: VertexId) -> &[usize] {
        &self.corners_at[v]
    }

    /// Vertical edges: the parent edges joining the apex to each hull vertex.
    pub fn vertical_edges(&self) -> impl Iterator<Item = (EdgeKey, VertexId)> + '_ {
        self.hull_cycle.iter().map(|&w| (EdgeKey::new(self.apex, w), w))
    }
}
