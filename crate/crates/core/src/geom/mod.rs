//! Ideal vertex configurations in the extended complex plane.
//!
//! Random configurations are drawn on the unit sphere and sent to the plane
//! by stereographic projection from the north pole. With one vertex at
//! infinity, the ideal polyhedron is the convex hull of the configuration and
//! its finite faces form the planar Delaunay triangulation of the finite
//! points; each Delaunay triangle cones off to an ideal tetrahedron whose
//! dihedral angles are the triangle's Euclidean angles.

mod delaunay;
mod layout;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optvol::{AngleAssignment, OptError};
use crate::specfun::lobachevsky;
use crate::triang::{ApexLink, SphereTriangulation, TriangulationError, VertexId};

pub use delaunay::{delaunay, incircle, orient, PlanarTriangulation};
pub use layout::{layout, Layout, LAYOUT_TOL};

/// Minimum separation between finite points of a valid configuration.
pub const MIN_SEPARATION: f64 = 1e-9;
/// Random samples closer than this to an existing point are redrawn.
pub const RESAMPLE_SEPARATION: f64 = 1e-6;
const MAX_RESAMPLE: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("degenerate triangle at face {face}")]
    DegenerateTriangle { face: usize },
    #[error("layout closure residual {residual:e} exceeds tolerance")]
    LayoutInconsistent { residual: f64 },
    #[error("angles violate the equality constraints by {residual:e}")]
    InfeasibleAngles { residual: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Angles(#[from] OptError),
}

/// Point of the extended complex plane. Serialized as `[re, im]` or `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Self::Finite(z) => Some(z),
            Self::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl Serialize for ExtPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(z) => [z.re, z.im].serialize(serializer),
            Self::Infinity => serializer.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for ExtPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v: Option<[f64; 2]> = Option::deserialize(deserializer)?;
        Ok(match v {
            Some([re, im]) => Self::Finite(Complex64::new(re, im)),
            None => Self::Infinity,
        })
    }
}

/// Ideal vertices, exactly one of them at infinity. Vertex `i` of any
/// triangulation built from the configuration is `points[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConfiguration {
    points: Vec<ExtPoint>,
}

impl<'de> Deserialize<'de> for PointConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<ExtPoint>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Self::new(raw.points).map_err(serde::de::Error::custom)
    }
}

impl PointConfiguration {
    pub fn new(points: Vec<ExtPoint>) -> Result<Self, GeomError> {
        let infinite = points.iter().filter(|p| p.is_infinite()).count();
        if infinite != 1 {
            return Err(GeomError::InvalidConfiguration(format!("{infinite} points at infinity, expected exactly one")));
        }
        if points.len() < 4 {
            return Err(GeomError::InvalidConfiguration(format!("{} points, need at least 4", points.len())));
        }
        let finite: Vec<(usize, Complex64)> = points.iter().enumerate().filter_map(|(i, p)| p.finite().map(|z| (i, z))).collect();
        if finite.iter().any(|(_, z)| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeomError::InvalidConfiguration("non-finite coordinate".into()));
        }
        // Separation is judged after normalizing the first two finite points
        // to 0 and 1, so it is similarity invariant.
        let scale = (finite[1].1 - finite[0].1).norm();
        if !(scale > 0.0) {
            return Err(GeomError::DegenerateSample(format!("points {} and {} coincide", finite[0].0, finite[1].0)));
        }
        for (a, &(i, zi)) in finite.iter().enumerate() {
            for &(j, zj) in &finite[a + 1..] {
                if (zi - zj).norm() / scale <= MIN_SEPARATION {
                    return Err(GeomError::DegenerateSample(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[ExtPoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn infinity_index(&self) -> VertexId {
        self.points.iter().position(|p| p.is_infinite()).expect("checked on construction")
    }

    /// Applies `z -> a z + b` to every finite point.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Result<Self, GeomError> {
        Self::new(
            self.points
                .iter()
                .map(|p| match p {
                    ExtPoint::Finite(z) => ExtPoint::Finite(a * z + b),
                    ExtPoint::Infinity => ExtPoint::Infinity,
                })
                .collect(),
        )
    }

    /// The similarity sending the first two finite points to 0 and 1.
    pub fn normalized(&self) -> Self {
        let finite: Vec<Complex64> = self.points.iter().filter_map(|p| p.finite()).collect();
        let a = 1.0 / (finite[1] - finite[0]);
        self.transformed(a, -finite[0] * a).expect("similarities preserve validity")
    }
}

/// Independent uniform points on the unit sphere: `z` uniform on `[-1, 1]`,
/// azimuth uniform on `[0, 2π)`.
pub fn sample_sphere<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<[f64; 3]> {
    (0..count)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).max(0.0).sqrt();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Projection from the north pole: `(x + iy) / (1 - z)`.
pub fn stereographic(p: [f64; 3]) -> ExtPoint {
    let d = 1.0 - p[2];
    if d <= 0.0 {
        ExtPoint::Infinity
    } else {
        ExtPoint::Finite(Complex64::new(p[0] / d, p[1] / d))
    }
}

/// Inverse of [`stereographic`].
pub fn inverse_stereographic(p: ExtPoint) -> [f64; 3] {
    match p {
        ExtPoint::Infinity => [0.0, 0.0, 1.0],
        ExtPoint::Finite(z) => {
            let r2 = z.norm_sqr();
            let d = r2 + 1.0;
            [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
        }
    }
}

/// Vertices 0, 1, 2 are fixed at the south pole, `(1, 0, 0)` and the north
/// pole (so at 0, 1 and infinity); the remaining `n - 3` are uniform on the
/// sphere. A sample landing within `1e-6` of an earlier point is redrawn.
pub fn random_configuration<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PointConfiguration, GeomError> {
    if n < 4 {
        return Err(GeomError::InvalidConfiguration(format!("n = {n}, need at least 4")));
    }
    let mut points = vec![stereographic([0.0, 0.0, -1.0]), stereographic([1.0, 0.0, 0.0]), ExtPoint::Infinity];
    let mut finite = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for _ in 3..n {
        let mut placed = false;
        for _ in 0..MAX_RESAMPLE {
            let p = sample_sphere(1, rng)[0];
            if let ExtPoint::Finite(z) = stereographic(p) {
                if finite.iter().all(|w| (z - w).norm() >= RESAMPLE_SEPARATION) {
                    finite.push(z);
                    points.push(ExtPoint::Finite(z));
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            return Err(GeomError::DegenerateSample(format!("no admissible point after {MAX_RESAMPLE} draws")));
        }
    }
    PointConfiguration::new(points)
}

/// Sphere triangulation and link obtained by joining the infinite vertex to
/// every hull vertex. Planar counterclockwise triangles `(a, b, c)` become
/// sphere faces `[a, c, b]` (counterclockwise from outside).
pub fn close_with_infinity(pt: &PlanarTriangulation) -> Result<(SphereTriangulation, Arc<ApexLink>), GeomError> {
    let inf = pt.infinity();
    let mut faces: Vec<[VertexId; 3]> = pt.triangles().iter().map(|&[a, b, c]| [a, c, b]).collect();
    let hull = pt.hull();
    for i in 0..hull.len() {
        faces.push([inf, hull[i], hull[(i + 1) % hull.len()]]);
    }
    let t = SphereTriangulation::from_faces(pt.n(), faces)?;
    let link = Arc::new(t.build_link(inf)?);
    Ok((t, link))
}

/// Euclidean angle at each corner of `link`, with vertex `v` placed at
/// `positions[v]`. Bounded faces must be clockwise in the plane (the sphere
/// orientation), i.e. `[a, c, b]` counterclockwise.
pub fn angles_at_positions(link: &Arc<ApexLink>, positions: &[Option<Complex64>]) -> Result<AngleAssignment, GeomError> {
    let mut values = Vec::with_capacity(link.corner_count());
    for (fi, f) in link.faces().iter().enumerate() {
        let pos = |v: VertexId| {
            positions.get(v).copied().flatten().ok_or_else(|| GeomError::InvalidConfiguration(format!("vertex {v} has no finite position")))
        };
        let (a, b, c) = (pos(f[0])?, pos(f[1])?, pos(f[2])?);
        let longest = (b - a).norm_sqr().max((c - b).norm_sqr()).max((a - c).norm_sqr());
        let ccw_area = orient(a, c, b);
        if !(ccw_area > 1e-14 * longest) {
            return Err(GeomError::DegenerateTriangle { face: fi });
        }
        let p = [a, b, c];
        for s in 0..3 {
            let u = p[(s + 1) % 3] - p[s];
            let w = p[(s + 2) % 3] - p[s];
            let cross = (u.re * w.im - u.im * w.re).abs();
            let dot = u.re * w.re + u.im * w.im;
            values.push(cross.atan2(dot));
        }
    }
    Ok(AngleAssignment::new(Arc::clone(link), values)?)
}

/// Triangle angles of a Delaunay triangulation, in the corner order of the
/// link produced by [`close_with_infinity`].
pub fn euclidean_angles(pt: &PlanarTriangulation) -> Result<AngleAssignment, GeomError> {
    let (_, link) = close_with_infinity(pt)?;
    angles_at_positions(&link, pt.positions())
}

/// Volume of the ideal polyhedron with vertices `config`.
pub fn config_volume(config: &PointConfiguration) -> Result<f64, GeomError> {
    let pt = delaunay(config)?;
    let angles = euclidean_angles(&pt)?;
    Ok(angles.values().iter().map(|&t| lobachevsky(t)).sum())
}

/// Vertex coordinates on the boundary sphere. Ideal points sit on the unit
/// sphere in both the Klein and the Poincaré ball model, so the two lists
/// coincide; they are kept separate in the export format.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallCoordinates {
    pub klein: Vec<[f64; 3]>,
    pub poincare: Vec<[f64; 3]>,
}

pub fn to_ball_models(config: &PointConfiguration) -> BallCoordinates {
    let pts: Vec<[f64; 3]> = config.points().iter().map(|&p| inverse_stereographic(p)).collect();
    BallCoordinates { klein: pts.clone(), poincare: pts }
}

/// Wavefront OBJ of the Klein-model polyhedron: flat faces are exactly the
/// geodesic faces there. Faces are taken from `t`, counterclockwise from
/// outside.
pub fn klein_obj(config: &PointConfiguration, t: &SphereTriangulation) -> String {
    let coords = to_ball_models(config).klein;
    let mut out = String::new();
    let _ = writeln!(out, "# ideal polyhedron, Klein model, {} vertices", coords.len());
    for p in &coords {
        let _ = writeln!(out, "v {:.17} {:.17} {:.17}", p[0], p[1], p[2]);
    }
    for f in t.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}
