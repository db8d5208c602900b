use std::collections::VecDeque;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{ExtPoint, GeomError, PointConfiguration};
use crate::optvol::AngleAssignment;
use crate::triang::{ApexLink, VertexId};

/// Largest allowed disagreement between positions reached along different
/// paths.
pub const LAYOUT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Layout {
    pub config: PointConfiguration,
    /// Max distance between a vertex's first position and any later
    /// recomputation of it.
    pub closure_residual: f64,
}

/// Planar counterclockwise order of a bounded face, starting at `first`.
fn planar_ccw(face: [VertexId; 3], first: VertexId) -> [VertexId; 3] {
    let ccw = [face[0], face[2], face[1]];
    let k = ccw.iter().position(|&v| v == first).expect("vertex of face");
    [ccw[k], ccw[(k + 1) % 3], ccw[(k + 2) % 3]]
}

/// Reconstructs finite vertex positions from corner angles.
///
/// The lexicographically smallest bounded face is placed first with its
/// smallest vertex at 0 and the next vertex (planar counterclockwise) at 1.
/// Faces are then reached breadth-first across interior edges, each new
/// vertex found by the law of sines; when a vertex is reached again its
/// recomputed position is compared with the first one.
pub fn layout(link: &Arc<ApexLink>, angles: &AngleAssignment) -> Result<Layout, GeomError> {
    let residual = angles.equality_residual();
    if residual > 1e-8 {
        return Err(GeomError::InfeasibleAngles { residual });
    }
    let th = angles.values();
    let faces = link.faces();
    let angle_at = |face: usize, v: VertexId| {
        let slot = faces[face].iter().position(|&w| w == v).expect("vertex of face");
        th[3 * face + slot]
    };

    let mut pos: Vec<Option<Complex64>> = vec![None; link.n()];
    let root = (0..faces.len())
        .min_by_key(|&f| {
            let mut s = faces[f];
            s.sort_unstable();
            s
        })
        .expect("link has a bounded face");
    let first = *faces[root].iter().min().unwrap();
    let [a, b, _] = planar_ccw(faces[root], first);
    pos[a] = Some(Complex64::new(0.0, 0.0));
    pos[b] = Some(Complex64::new(1.0, 0.0));

    // Third vertex of the counterclockwise triangle (u, v, w).
    let apex_of = |face: usize, u: VertexId, v: VertexId, pu: Complex64, pv: Complex64| {
        let w = planar_ccw(faces[face], u)[2];
        let (tu, tv, tw) = (angle_at(face, u), angle_at(face, v), angle_at(face, w));
        let ratio = tv.sin() / tw.sin();
        (w, pu + (pv - pu) * ratio * Complex64::from_polar(1.0, tu))
    };

    // Faces adjacent across each interior edge.
    let mut across: Vec<Vec<(usize, VertexId, VertexId)>> = vec![Vec::new(); faces.len()];
    for e in link.interior_edges() {
        let (f1, f2) = (e.opposite[0] / 3, e.opposite[1] / 3);
        across[f1].push((f2, e.key.u, e.key.v));
        across[f2].push((f1, e.key.u, e.key.v));
    }

    let mut closure: f64 = 0.0;
    let mut placed = vec![false; faces.len()];
    let (w, pw) = apex_of(root, a, b, pos[a].unwrap(), pos[b].unwrap());
    pos[w] = Some(pw);
    placed[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &(g, x, y) in &across[f] {
            if placed[g] {
                continue;
            }
            // Orient the shared edge counterclockwise in g.
            let [u, v, _] = if planar_ccw(faces[g], x)[1] == y { planar_ccw(faces[g], x) } else { planar_ccw(faces[g], y) };
            let (w, pw) = apex_of(g, u, v, pos[u].unwrap(), pos[v].unwrap());
            match pos[w] {
                Some(old) => closure = closure.max((old - pw).norm()),
                None => pos[w] = Some(pw),
            }
            placed[g] = true;
            queue.push_back(g);
        }
    }
    if closure > LAYOUT_TOL {
        return Err(GeomError::LayoutInconsistent { residual: closure });
    }

    let mut points = Vec::with_capacity(link.n());
    for (v, p) in pos.iter().enumerate() {
        if v == link.apex() {
            points.push(ExtPoint::Infinity);
        } else {
            let z = p.ok_or_else(|| GeomError::InvalidConfiguration(format!("vertex {v} not reached by layout")))?;
            points.push(ExtPoint::Finite(z));
        }
    }
    Ok(Layout { config: PointConfiguration::new(points)?, closure_residual: closure })
}
