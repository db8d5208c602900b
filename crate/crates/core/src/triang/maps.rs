//! Rotation-system view of a triangulation: map automorphisms and a
//! canonical form for isomorphism testing.
//!
//! A dart is a directed edge, indexed as `(face, slot)` for the edge
//! `faces[face][slot] -> faces[face][slot + 1]`. An orientation-preserving
//! map isomorphism is a bijection on darts commuting with the face successor
//! and the edge reversal, so it is fixed by the image of a single dart.

use std::collections::VecDeque;

use serde::Serialize;

use super::SphereTriangulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AutomorphismCount {
    pub orientation_preserving: usize,
    /// Orientation-preserving plus orientation-reversing.
    pub total: usize,
}

/// Isomorphism-invariant encoding of a triangulation up to relabeling and
/// reflection. Equal codes mean combinatorially equivalent polyhedra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<[u16; 3]>);

impl CanonicalCode {
    pub fn faces(&self) -> &[[u16; 3]] {
        &self.0
    }
}

struct DartMap<'a> {
    t: &'a SphereTriangulation,
}

impl<'a> DartMap<'a> {
    fn count(&self) -> usize {
        3 * self.t.faces().len()
    }

    fn next(&self, d: usize) -> usize {
        let (f, s) = (d / 3, d % 3);
        3 * f + (s + 1) % 3
    }

    fn rev(&self, d: usize) -> usize {
        let (f, s) = (d / 3, d % 3);
        let face = self.t.faces()[f];
        let (g, slot) = self.t.dart(face[(s + 1) % 3], face[s]).expect("closed surface");
        3 * g + slot
    }

    fn tail(&self, d: usize) -> usize {
        self.t.faces()[d / 3][d % 3]
    }
}

/// Tries to extend `from -> to` to an orientation-preserving isomorphism.
fn extends(a: &DartMap<'_>, b: &DartMap<'_>, from: usize, to: usize) -> bool {
    if a.count() != b.count() {
        return false;
    }
    let mut image = vec![usize::MAX; a.count()];
    let mut used = vec![false; b.count()];
    image[from] = to;
    used[to] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(d) = queue.pop_front() {
        let e = image[d];
        for (da, db) in [(a.next(d), b.next(e)), (a.rev(d), b.rev(e))] {
            if image[da] == usize::MAX {
                if used[db] {
                    return false;
                }
                image[da] = db;
                used[db] = true;
                queue.push_back(da);
            } else if image[da] != db {
                return false;
            }
        }
    }
    true
}

/// Vertex labels by first appearance in a breadth-first dart traversal from
/// `start`, then the relabeled face list, each face rotated to put its
/// smallest label first, sorted.
fn code_from(m: &DartMap<'_>, start: usize) -> Vec<[u16; 3]> {
    let n = m.t.n();
    let mut label = vec![u16::MAX; n];
    let mut next_label = 0u16;
    let mut seen = vec![false; m.count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(d) = queue.pop_front() {
        let v = m.tail(d);
        if label[v] == u16::MAX {
            label[v] = next_label;
            next_label += 1;
        }
        for e in [m.next(d), m.rev(d)] {
            if !seen[e] {
                seen[e] = true;
                queue.push_back(e);
            }
        }
    }
    let mut faces: Vec<[u16; 3]> =
        m.t.faces()
            .iter()
            .map(|f| {
                let l = [label[f[0]], label[f[1]], label[f[2]]];
                let k = (0..3).min_by_key(|&i| l[i]).unwrap();
                [l[k], l[(k + 1) % 3], l[(k + 2) % 3]]
            })
            .collect();
    faces.sort_unstable();
    faces
}

impl SphereTriangulation {
    /// Counts map automorphisms by trying every dart as the image of dart 0.
    pub fn automorphism_count(&self) -> AutomorphismCount {
        let mirror = self.mirrored();
        let a = DartMap { t: self };
        let b = DartMap { t: &mirror };
        let preserving = (0..a.count()).filter(|&d| extends(&a, &a, 0, d)).count();
        let reversing = (0..b.count()).filter(|&d| extends(&a, &b, 0, d)).count();
        AutomorphismCount { orientation_preserving: preserving, total: preserving + reversing }
    }

    /// Whether `other` is the same combinatorial type, reflections allowed.
    pub fn is_isomorphic(&self, other: &SphereTriangulation) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let a = DartMap { t: self };
        let mirror = other.mirrored();
        // Bound to a local so the temporary array is dropped before `mirror`.
        #[allow(clippy::let_and_return)]
        let found = [other, &mirror].into_iter().any(|t| {
            let b = DartMap { t };
            (0..b.count()).any(|d| extends(&a, &b, 0, d))
        });
        found
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        let mirror = self.mirrored();
        let best = [self, &mirror]
            .into_iter()
            .flat_map(|t| {
                let m = DartMap { t };
                (0..m.count()).map(move |d| code_from(&m, d))
            })
            .min()
            .expect("nonempty triangulation");
        CanonicalCode(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_automorphisms() {
        let c = SphereTriangulation::tetrahedron().automorphism_count();
        assert_eq!(c, AutomorphismCount { orientation_preserving: 12, total: 24 });
    }

    #[test]
    fn octahedron_automorphisms() {
        let c = SphereTriangulation::octahedron().automorphism_count();
        assert_eq!(c, AutomorphismCount { orientation_preserving: 24, total: 48 });
    }

    #[test]
    fn bipyramid_automorphisms() {
        // D_k x Z_2 has order 4k; half of it preserves orientation.
        // k = 4 is the octahedron, which has more symmetry.
        for k in [3, 5, 6, 7] {
            let c = SphereTriangulation::bipyramid(k).automorphism_count();
            assert_eq!(c.orientation_preserving, 2 * k, "k = {k}");
            assert_eq!(c.total, 4 * k, "k = {k}");
        }
    }

    #[test]
    fn canonical_code_ignores_labels_and_mirroring() {
        let t = SphereTriangulation::octahedron();
        let r = t.relabeled(&[3, 0, 5, 1, 2, 4]).unwrap();
        assert_eq!(t.canonical_code(), r.canonical_code());
        assert_eq!(t.canonical_code(), t.mirrored().canonical_code());
        assert!(t.is_isomorphic(&r.mirrored()));
        assert_eq!(t.canonical_code(), SphereTriangulation::bipyramid(4).canonical_code());
        assert_ne!(t.canonical_code(), SphereTriangulation::bipyramid(5).canonical_code());
    }

    #[test]
    fn octahedron_is_square_bipyramid() {
        let t = SphereTriangulation::octahedron();
        assert!(t.is_isomorphic(&SphereTriangulation::bipyramid(4)));
        assert!(!SphereTriangulation::bipyramid(5).is_isomorphic(&SphereTriangulation::bipyramid(3)));
    }
}
