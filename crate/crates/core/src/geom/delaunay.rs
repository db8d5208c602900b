//! Planar Delaunay triangulation by sorted incremental insertion and
//! Lawson edge flips.
//!
//! Points are inserted in lexicographic `(x, y)` order, so each new point
//! lies outside the current hull and is joined to the hull edges it sees.
//! Every new edge is then legalized by flipping until the empty-circumcircle
//! condition holds. Cocircular ties (within a relative `1e-12`) are broken by
//! keeping the diagonal whose sorted endpoint pair is lexicographically
//! smallest.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{GeomError, PointConfiguration};
use crate::triang::VertexId;

const INCIRCLE_TOL: f64 = 1e-12;
const ORIENT_TOL: f64 = 1e-14;

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
pub fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

/// Incircle determinant for counterclockwise `(a, b, c)`, positive when `d`
/// lies strictly inside their circumcircle, together with a magnitude used
/// to scale tolerances.
pub fn incircle(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (f64, f64) {
    let (ax, ay) = (a.re - d.re, a.im - d.im);
    let (bx, by) = (b.re - d.re, b.im - d.im);
    let (cx, cy) = (c.re - d.re, c.im - d.im);
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let t1 = a2 * (bx * cy - by * cx);
    let t2 = b2 * (cx * ay - cy * ax);
    let t3 = c2 * (ax * by - ay * bx);
    let mag =
        a2 * (bx * cy).abs().max((by * cx).abs()) + b2 * (cx * ay).abs().max((cy * ax).abs()) + c2 * (ax * by).abs().max((ay * bx).abs());
    (t1 + t2 + t3, mag)
}

/// Delaunay triangulation of the finite points of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarTriangulation {
    positions: Vec<Option<Complex64>>,
    triangles: Vec<[VertexId; 3]>,
    hull: Vec<VertexId>,
    infinity: VertexId,
}

impl PlanarTriangulation {
    /// Position of every vertex; `None` at the infinite vertex.
    pub fn positions(&self) -> &[Option<Complex64>] {
        &self.positions
    }

    pub fn position(&self, v: VertexId) -> Option<Complex64> {
        self.positions[v]
    }

    /// Counterclockwise bounded triangles.
    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    /// Convex hull, counterclockwise.
    pub fn hull(&self) -> &[VertexId] {
        &self.hull
    }

    pub fn infinity(&self) -> VertexId {
        self.infinity
    }

    /// Vertex count including the infinite vertex.
    pub fn n(&self) -> usize {
        self.positions.len()
    }
}

struct Builder {
    pos: Vec<Option<Complex64>>,
    tris: Vec<[VertexId; 3]>,
    /// Directed edge -> triangle containing it.
    edges: HashMap<(VertexId, VertexId), usize>,
    flips: usize,
    max_flips: usize,
}

impl Builder {
    fn p(&self, v: VertexId) -> Complex64 {
        self.pos[v].expect("finite vertex")
    }

    fn add(&mut self, t: [VertexId; 3]) -> usize {
        let id = self.tris.len();
        self.tris.push(t);
        for s in 0..3 {
            self.edges.insert((t[s], t[(s + 1) % 3]), id);
        }
        id
    }

    fn replace(&mut self, id: usize, t: [VertexId; 3]) {
        let old = self.tris[id];
        for s in 0..3 {
            let e = (old[s], old[(s + 1) % 3]);
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
        self.tris[id] = t;
        for s in 0..3 {
            self.edges.insert((t[s], t[(s + 1) % 3]), id);
        }
    }

    /// Flips until every edge on the stack is locally Delaunay.
    fn legalize(&mut self, mut stack: Vec<(VertexId, VertexId)>) -> Result<(), GeomError> {
        while let Some((u, v)) = stack.pop() {
            let (Some(&t1), Some(&t2)) = (self.edges.get(&(u, v)), self.edges.get(&(v, u))) else {
                continue;
            };
            let w = third(self.tris[t1], u, v);
            let x = third(self.tris[t2], v, u);
            let (det, mag) = incircle(self.p(u), self.p(v), self.p(w), self.p(x));
            let flip = if det > INCIRCLE_TOL * mag {
                true
            } else if det >= -INCIRCLE_TOL * mag {
                sorted(w, x) < sorted(u, v)
            } else {
                false
            };
            if !flip {
                continue;
            }
            // Quadrilateral u, x, v, w is counterclockwise.
            if orient(self.p(x), self.p(w), self.p(u)) <= 0.0 || orient(self.p(w), self.p(x), self.p(v)) <= 0.0 {
                // Not strictly convex; only reachable on near-ties.
                continue;
            }
            self.flips += 1;
            if self.flips > self.max_flips {
                return Err(GeomError::DegenerateSample("edge flipping did not terminate".into()));
            }
            self.replace(t1, [u, x, w]);
            self.replace(t2, [x, v, w]);
            stack.extend([(u, x), (x, v), (v, w), (w, u)]);
        }
        Ok(())
    }
}

fn third(t: [VertexId; 3], a: VertexId, b: VertexId) -> VertexId {
    for s in 0..3 {
        if t[s] == a && t[(s + 1) % 3] == b {
            return t[(s + 2) % 3];
        }
    }
    unreachable!("edge ({a}, {b}) not in triangle {t:?}")
}

fn sorted(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn delaunay(config: &PointConfiguration) -> Result<PlanarTriangulation, GeomError> {
    let positions: Vec<Option<Complex64>> = config.points().iter().map(|p| p.finite()).collect();
    let infinity = config.infinity_index();
    let mut order: Vec<VertexId> = (0..positions.len()).filter(|&v| v != infinity).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (positions[a].unwrap(), positions[b].unwrap());
        pa.re.total_cmp(&pb.re).then(pa.im.total_cmp(&pb.im)).then(a.cmp(&b))
    });
    let scale = order.iter().map(|&v| positions[v].unwrap()).fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs())).max(1.0);
    let orient_tol = ORIENT_TOL * scale * scale;

    let m = order.len();
    let mut b = Builder { pos: positions, tris: Vec::new(), edges: HashMap::new(), flips: 0, max_flips: 100 * m * m + 1000 };

    // First point not collinear with the sorted prefix.
    let p0 = b.p(order[0]);
    let p1 = b.p(order[1]);
    let Some(k) = (2..m).find(|&k| orient(p0, p1, b.p(order[k])).abs() > orient_tol) else {
        return Err(GeomError::DegenerateSample("all finite points are collinear".into()));
    };
    let apex = order[k];
    let chain = &order[..k];
    let left = orient(p0, b.p(chain[k - 1]), b.p(apex)) > 0.0;
    let mut hull: Vec<VertexId> = Vec::new();
    let mut pending = Vec::new();
    for i in 0..k - 1 {
        let (u, v) = (chain[i], chain[i + 1]);
        let t = if left { [u, v, apex] } else { [v, u, apex] };
        b.add(t);
        pending.push((t[0], t[1]));
    }
    if left {
        hull.extend_from_slice(chain);
    } else {
        hull.extend(chain.iter().rev());
    }
    hull.push(apex);
    b.legalize(pending)?;

    // Points between the chain and `apex` in sorted order are the chain
    // itself, so insertion resumes after `apex`.
    for &p in &order[k + 1..] {
        let pp = b.p(p);
        let h = hull.len();
        let visible: Vec<bool> = (0..h).map(|i| orient(b.p(hull[i]), b.p(hull[(i + 1) % h]), pp) < -orient_tol).collect();
        let Some(start) = (0..h).find(|&i| visible[i] && !visible[(i + h - 1) % h]) else {
            return Err(GeomError::DegenerateSample(format!("point {p} sees no hull edge")));
        };
        let mut stack = Vec::new();
        let mut i = start;
        let mut count = 0;
        while visible[i] {
            let (u, v) = (hull[i], hull[(i + 1) % h]);
            b.add([v, u, p]);
            stack.push((v, u));
            i = (i + 1) % h;
            count += 1;
            if count == h {
                break;
            }
        }
        // Hull: ..., hull[start], p, hull[start + count], ...
        let mut next = Vec::with_capacity(h + 1);
        let end = (start + count) % h;
        let mut j = end;
        loop {
            next.push(hull[j]);
            if j == start {
                break;
            }
            j = (j + 1) % h;
        }
        next.push(p);
        hull = next;
        b.legalize(stack)?;
    }

    let Builder { pos, tris, .. } = b;
    Ok(PlanarTriangulation { positions: pos, triangles: tris, hull, infinity })
}
