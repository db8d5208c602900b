//! Maximal-volume angle structures.
//!
//! The volume of an angle assignment on an apex link is `Σ Λ(θ_c)` over all
//! corners: each bounded triangle cones off to an ideal tetrahedron whose
//! dihedral angles are the triangle's angles. [`maximize_volume`] finds the
//! unique maximizer over the angle polytope; [`dihedral_angles`] turns
//! corner angles into one dihedral per polyhedron edge.

mod barrier;
mod rational;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rivin::{self, ConstraintSystem, RivinError, RowKind};
use crate::specfun::lobachevsky;
use crate::triang::{ApexLink, EdgeKey, SphereTriangulation, VertexId};

pub use barrier::{MU_FACTOR, MU_FINAL, MU_START};
pub use rational::{common_denominator, detect_rational, RationalAngle, DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIONAL_TOL};

/// Angles within this distance of a bound are reported as boundary-active.
pub const BOUNDARY_FLAG_TOL: f64 = 1e-7;
/// Smallest margin used when extrapolating a boundary optimum to `ε = 0`.
pub const LIMIT_EPSILON: f64 = 1e-13;
/// Largest active set tried when finishing the barrier solution.
const MAX_ACTIVE_GUESS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error("start point is not strictly inside the angle polytope")]
    InfeasibleStart,
    #[error("line search stalled at mu = {mu:e} with reduced gradient norm {gradient_norm:e}")]
    LineSearchStall { mu: f64, gradient_norm: f64 },
    #[error("angle {value} at corner {corner} is outside (0, π)")]
    AngleOutOfRange { corner: usize, value: f64 },
    #[error("angle count {got} does not match the link's {expected} corners")]
    WrongLength { got: usize, expected: usize },
    #[error("triangulation is not realizable")]
    NotRealizable,
    #[error(transparent)]
    Rivin(#[from] RivinError),
}

/// Radians per corner of an apex link, indexed `3 * face + slot`.
#[derive(Debug, Clone)]
pub struct AngleAssignment {
    link: Arc<ApexLink>,
    values: Vec<f64>,
}

impl Serialize for AngleAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl AngleAssignment {
    pub fn new(link: Arc<ApexLink>, values: Vec<f64>) -> Result<Self, OptError> {
        if values.len() != link.corner_count() {
            return Err(OptError::WrongLength { got: values.len(), expected: link.corner_count() });
        }
        Ok(Self { link, values })
    }

    pub fn link(&self) -> &Arc<ApexLink> {
        &self.link
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Hyperbolic volume `Σ Λ(θ_c)`.
    pub fn volume(&self) -> Result<f64, OptError> {
        for (corner, &value) in self.values.iter().enumerate() {
            if !(value > 0.0 && value < PI) {
                return Err(OptError::AngleOutOfRange { corner, value });
            }
        }
        Ok(self.values.iter().map(|&t| lobachevsky(t)).sum())
    }

    /// Analytic gradient of the volume, `Λ'(θ_c)` per corner.
    pub fn volume_gradient(&self) -> Result<Vec<f64>, OptError> {
        self.values
            .iter()
            .enumerate()
            .map(|(corner, &t)| crate::specfun::lobachevsky_deriv(t).map_err(|_| OptError::AngleOutOfRange { corner, value: t }))
            .collect()
    }

    /// Largest deviation from the triangle and interior-vertex sums.
    pub fn equality_residual(&self) -> f64 {
        let system = ConstraintSystem::assemble(&self.link, 0.0);
        system.equalities.iter().map(|r| (r.eval(&self.values) - r.rhs).abs()).fold(0.0, f64::max)
    }
}

/// Dihedral angle per edge of the parent triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DihedralAngles {
    pub per_edge: BTreeMap<EdgeKey, f64>,
}

impl Serialize for DihedralAngles {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            edge: [VertexId; 2],
            radians: f64,
        }
        let entries: Vec<Entry> = self.per_edge.iter().map(|(k, &r)| Entry { edge: [k.u, k.v], radians: r }).collect();
        entries.serialize(serializer)
    }
}

/// Interior link edge `e` gets `α_e + β_e`, a hull edge its single opposite
/// corner, and the vertical edge over hull vertex `w` the sum of the corners
/// at `w`.
pub fn dihedral_angles(angles: &AngleAssignment) -> DihedralAngles {
    let link = angles.link();
    let th = angles.values();
    let mut per_edge = BTreeMap::new();
    for e in link.interior_edges() {
        per_edge.insert(e.key, th[e.opposite[0]] + th[e.opposite[1]]);
    }
    for e in link.hull_edges() {
        per_edge.insert(e.key, th[e.opposite]);
    }
    for (key, w) in link.vertical_edges() {
        per_edge.insert(key, link.corners_at(w).iter().map(|&c| th[c]).sum());
    }
    DihedralAngles { per_edge }
}

/// `z_e = exp(i(α_e + β_e))` per interior link edge.
pub fn shape_parameters(angles: &AngleAssignment) -> Vec<(EdgeKey, Complex64)> {
    let th = angles.values();
    angles.link().interior_edges().iter().map(|e| (e.key, Complex64::from_polar(1.0, th[e.opposite[0]] + th[e.opposite[1]]))).collect()
}

/// An inequality that is (numerically) tight at the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActiveBound {
    LowerBound { corner: usize },
    Row(RowKind),
}

#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub angles: AngleAssignment,
    pub volume: f64,
    /// Volume on the same face of the polytope as `ε → 0`: the supremum over
    /// the closed polytope, approached by degenerating polyhedra when some
    /// constraint is active. Equals `volume` for interior optima; NaN if the
    /// face could not be followed.
    pub limit_volume: f64,
    pub kkt_residual: f64,
    pub dihedrals: DihedralAngles,
    pub corner_rationals: Vec<Option<RationalAngle>>,
    pub dihedral_rationals: BTreeMap<EdgeKey, Option<RationalAngle>>,
    pub boundary_active: Vec<ActiveBound>,
    /// Volume at the end of each barrier stage; nondecreasing.
    pub stage_volumes: Vec<f64>,
    pub newton_steps: usize,
}

impl OptResult {
    pub fn corner_denominator(&self) -> Option<u64> {
        common_denominator(&self.corner_rationals)
    }

    pub fn dihedral_denominator(&self) -> Option<u64> {
        common_denominator(self.dihedral_rationals.values())
    }

    /// Re-runs rational detection with other parameters.
    pub fn with_rational_params(mut self, max_denominator: u64, tol: f64) -> Self {
        self.corner_rationals = self.angles.values().iter().map(|&t| detect_rational(t, max_denominator, tol)).collect();
        self.dihedral_rationals = self.dihedrals.per_edge.iter().map(|(&k, &t)| (k, detect_rational(t, max_denominator, tol))).collect();
        self
    }
}

/// Maximizes the volume over the `ε`-relaxed angle polytope of `link`,
/// starting from a strictly interior `start`.
pub fn maximize_volume(link: &Arc<ApexLink>, epsilon: f64, start: &AngleAssignment) -> Result<OptResult, OptError> {
    let system = ConstraintSystem::assemble(link, epsilon);
    if start.values().len() != system.num_vars {
        return Err(OptError::WrongLength { got: start.values().len(), expected: system.num_vars });
    }
    if start.equality_residual() > 1e-8 {
        return Err(OptError::InfeasibleStart);
    }
    let ineqs = barrier::inequalities(&system);
    let basis = barrier::null_space(&system);
    let problem = barrier::BarrierProblem { ineqs: &ineqs, basis: &basis };
    let outcome = problem.run(start.values())?;
    let barrier_volume = barrier::volume_of(&outcome.theta);

    // The barrier iterate is within about MU_FINAL of the optimum; finish on
    // the face of the constraints it (nearly) touches.
    let mut theta = outcome.theta;
    for active in barrier::active_candidates(&ineqs, &theta, MAX_ACTIVE_GUESS) {
        if let Some(p) = barrier::polish(&system, &ineqs, &theta, &active) {
            // Stationary on the face is not enough: multipliers must have
            // the right sign.
            if barrier::volume_of(&p) >= barrier_volume - 1e-12 && barrier::kkt_residual(&p, &ineqs, &basis) < 1e-10 {
                theta = p;
                break;
            }
        }
    }
    let kkt = barrier::kkt_residual(&theta, &ineqs, &basis);
    let limit_volume = limit_on_face(link, &ineqs, &theta);

    let mut boundary_active = Vec::new();
    for (c, &t) in theta.iter().enumerate() {
        if t - epsilon < BOUNDARY_FLAG_TOL {
            boundary_active.push(ActiveBound::LowerBound { corner: c });
        }
    }
    for row in &system.upper {
        if row.rhs - row.eval(&theta) < BOUNDARY_FLAG_TOL {
            boundary_active.push(ActiveBound::Row(row.kind));
        }
    }

    let angles = AngleAssignment::new(Arc::clone(link), theta)?;
    let volume = angles.volume()?;
    let dihedrals = dihedral_angles(&angles);
    let result = OptResult {
        volume,
        limit_volume,
        kkt_residual: kkt,
        dihedrals,
        corner_rationals: Vec::new(),
        dihedral_rationals: BTreeMap::new(),
        boundary_active,
        stage_volumes: outcome.stage_volumes,
        newton_steps: outcome.newton_steps,
        angles,
    };
    Ok(result.with_rational_params(DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIONAL_TOL))
}

/// Follows the optimum on its face of the polytope as `ε` shrinks to
/// [`LIMIT_EPSILON`]; the volume error there is of order `ε ln(1/ε)`.
fn limit_on_face(link: &ApexLink, ineqs: &[barrier::Inequality], theta: &[f64]) -> f64 {
    let active = barrier::active_set(ineqs, theta, 1e-12);
    let mut current = theta.to_vec();
    if active.is_empty() {
        return barrier::volume_of(&current);
    }
    let mut eps = 1e-7;
    while eps >= LIMIT_EPSILON {
        let system = ConstraintSystem::assemble(link, eps);
        let shrunk = barrier::inequalities(&system);
        match barrier::polish(&system, &shrunk, &current, &active) {
            Some(p) => current = p,
            None => return f64::NAN,
        }
        eps *= 0.1;
    }
    barrier::volume_of(&current)
}

/// Feasibility check followed by volume maximization for `t` with the given
/// apex.
pub fn optimize_triangulation(t: &SphereTriangulation, apex: VertexId, epsilon: f64) -> Result<OptResult, OptError> {
    let link = Arc::new(t.build_link(apex).map_err(RivinError::from)?);
    optimize_link(&link, epsilon)
}

pub fn optimize_link(link: &Arc<ApexLink>, epsilon: f64) -> Result<OptResult, OptError> {
    let system = ConstraintSystem::assemble(link, epsilon);
    let feas = rivin::check_feasible(&system)?;
    let Some(witness) = feas.witness else {
        return Err(OptError::NotRealizable);
    };
    let start = AngleAssignment::new(Arc::clone(link), witness)?;
    maximize_volume(link, epsilon, &start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link_of(t: &SphereTriangulation, apex: VertexId) -> Arc<ApexLink> {
        Arc::new(t.build_link(apex).unwrap())
    }

    #[test]
    fn volume_of_closed_forms() {
        let tet = link_of(&SphereTriangulation::tetrahedron(), 3);
        let a = AngleAssignment::new(tet, vec![PI / 3.0; 3]).unwrap();
        assert!((a.volume().unwrap() - 1.014_941_606_409_653_6).abs() < 1e-12);

        let oct = link_of(&SphereTriangulation::octahedron(), 0);
        let vals: Vec<f64> = oct.corners().map(|c| if oct.interior_vertices().contains(&c.vertex) { PI / 2.0 } else { PI / 4.0 }).collect();
        let a = AngleAssignment::new(oct, vals).unwrap();
        assert!((a.volume().unwrap() - 3.663_862_376_708_877).abs() < 1e-12);
    }

    #[test]
    fn volume_rejects_bad_angles() {
        let tet = link_of(&SphereTriangulation::tetrahedron(), 3);
        let a = AngleAssignment::new(tet.clone(), vec![PI, 0.0, 0.0]).unwrap();
        assert!(matches!(a.volume(), Err(OptError::AngleOutOfRange { .. })));
        assert!(AngleAssignment::new(tet, vec![1.0; 2]).is_err());
    }

    #[test]
    fn right_isoceles_triangle_contribution() {
        let v = lobachevsky(PI / 2.0) + 2.0 * lobachevsky(PI / 4.0);
        assert!((v - 2.0 * lobachevsky(PI / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn tetrahedron_optimum() {
        let r = optimize_triangulation(&SphereTriangulation::tetrahedron(), 3, 1e-6).unwrap();
        for &t in r.angles.values() {
            assert!((t - PI / 3.0).abs() < 1e-9);
        }
        assert!((r.volume - 1.014_942).abs() < 1e-6);
        assert!(r.kkt_residual < 1e-8);
        assert_eq!(r.corner_denominator(), Some(3));
        assert_eq!(r.dihedrals.per_edge.len(), 6);
        assert!(r.dihedrals.per_edge.values().all(|&d| (d - PI / 3.0).abs() < 1e-9));
    }

    #[test]
    fn bipyramid_optimum() {
        let t = SphereTriangulation::bipyramid(3);
        let r = optimize_triangulation(&t, 3, 1e-6).unwrap();
        assert!((r.volume - 2.029_883).abs() < 1e-6);
        for c in r.angles.link().corners() {
            let expect = if c.vertex == 4 { 2.0 * PI / 3.0 } else { PI / 6.0 };
            assert!((r.angles.values()[3 * c.face + c.slot] - expect).abs() < 1e-8);
        }
        for (k, &d) in &r.dihedrals.per_edge {
            let equator = k.u < 3 && k.v < 3;
            let expect = if equator { 2.0 * PI / 3.0 } else { PI / 3.0 };
            assert!((d - expect).abs() < 1e-8, "{k:?} {d}");
        }
        for (_, z) in shape_parameters(&r.angles) {
            assert!((z - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn octahedron_optimum() {
        let r = optimize_triangulation(&SphereTriangulation::octahedron(), 0, 1e-6).unwrap();
        assert!((r.volume - 3.663_862).abs() < 1e-6);
        assert_eq!(r.dihedrals.per_edge.len(), 12);
        assert_eq!(r.dihedral_denominator(), Some(2));
        for (_, z) in shape_parameters(&r.angles) {
            assert!((z - Complex64::i()).norm() < 1e-8);
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        assert!(r.boundary_active.is_empty());
    }

    #[test]
    fn stage_volumes_are_monotone() {
        let r = optimize_triangulation(&SphereTriangulation::bipyramid(5), 5, 1e-6).unwrap();
        for w in r.stage_volumes.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{:?}", r.stage_volumes);
        }
    }

    #[test]
    fn start_must_be_interior() {
        let link = link_of(&SphereTriangulation::tetrahedron(), 3);
        let bad = AngleAssignment::new(link.clone(), vec![PI - 2e-7, 1e-7, 1e-7]).unwrap();
        assert_eq!(maximize_volume(&link, 1e-6, &bad).unwrap_err(), OptError::InfeasibleStart);
        let off = AngleAssignment::new(link.clone(), vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(maximize_volume(&link, 1e-6, &off).unwrap_err(), OptError::InfeasibleStart);
    }

    #[test]
    fn near_flat_edge_shape_parameter() {
        let eps = 1e-6;
        let z = Complex64::from_polar(1.0, PI - eps);
        assert!((z - Complex64::new(-1.0, 0.0) * Complex64::from_polar(1.0, -eps)).norm() < 1e-15);
        assert!((z + 1.0).norm() < 2.0 * eps);
    }
}
