//! Linear realizability conditions for ideal polyhedra.
//!
//! With one vertex (the apex) sent to infinity, an ideal polyhedron is the
//! region above the hemispheres over a planar Delaunay triangulation, and the
//! corner angles of that triangulation are the dihedral angles of the ideal
//! tetrahedra coned from infinity. The angle system is:
//!
//! * each bounded triangle sums to π;
//! * angles around each interior vertex sum to 2π;
//! * the two angles opposite an interior edge sum to less than π;
//! * angles at a hull vertex sum to less than π (strict convexity of the
//!   vertical edge over it);
//! * every angle is positive.
//!
//! Strict inequalities are relaxed by `ε`. Feasibility is decided with a
//! phase-one simplex; a feasible witness is then re-centered by maximizing
//! its smallest slack so it can seed an interior-point method.

pub mod simplex;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::triang::{ApexLink, EdgeKey, SphereTriangulation, TriangulationError, VertexId};
use simplex::{LinearProgram, LpOutcome, SimplexError};

/// Strictness margin used for realizability checks.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RivinError {
    #[error("numerical failure in simplex: {0}")]
    NumericalFailure(#[from] SimplexError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("epsilon {0} must be positive and below 1e-3")]
    BadEpsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowKind {
    Triangle { face: usize },
    InteriorVertex { vertex: VertexId },
    InteriorEdge { edge: EdgeKey },
    HullVertex { vertex: VertexId },
}

/// `Σ θ[vars]` compared against `rhs` (`=` for equalities, `<=` for upper rows).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRow {
    pub kind: RowKind,
    pub vars: Vec<usize>,
    pub rhs: f64,
}

impl LinearRow {
    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.vars.iter().map(|&c| theta[c]).sum()
    }
}

/// Angle system for one apex link. All coefficients are 0 or 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSystem {
    pub num_vars: usize,
    pub epsilon: f64,
    pub equalities: Vec<LinearRow>,
    /// Rows `Σ θ <= π - ε`.
    pub upper: Vec<LinearRow>,
}

impl ConstraintSystem {
    /// Builds the system; `epsilon` is not range-checked here so callers
    /// can probe deliberately infeasible margins.
    pub fn assemble(link: &ApexLink, epsilon: f64) -> Self {
        let mut equalities = Vec::new();
        for face in 0..link.faces().len() {
            equalities.push(LinearRow { kind: RowKind::Triangle { face }, vars: vec![3 * face, 3 * face + 1, 3 * face + 2], rhs: PI });
        }
        for &v in link.interior_vertices() {
            equalities.push(LinearRow { kind: RowKind::InteriorVertex { vertex: v }, vars: link.corners_at(v).to_vec(), rhs: 2.0 * PI });
        }
        let mut upper = Vec::new();
        for e in link.interior_edges() {
            upper.push(LinearRow { kind: RowKind::InteriorEdge { edge: e.key }, vars: e.opposite.to_vec(), rhs: PI - epsilon });
        }
        for &w in link.hull_cycle() {
            upper.push(LinearRow { kind: RowKind::HullVertex { vertex: w }, vars: link.corners_at(w).to_vec(), rhs: PI - epsilon });
        }
        Self { num_vars: link.corner_count(), epsilon, equalities, upper }
    }

    /// Largest violation of any constraint at `theta` (0 when satisfied).
    pub fn max_violation(&self, theta: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.equalities {
            worst = worst.max((row.eval(theta) - row.rhs).abs());
        }
        for row in &self.upper {
            worst = worst.max(row.eval(theta) - row.rhs);
        }
        for &x in theta {
            worst = worst.max(self.epsilon - x);
        }
        worst
    }

    /// Smallest inequality slack at `theta`, lower bounds included.
    pub fn min_slack(&self, theta: &[f64]) -> f64 {
        let lower = theta.iter().map(|&x| x - self.epsilon).fold(f64::INFINITY, f64::min);
        self.upper.iter().map(|r| r.rhs - r.eval(theta)).fold(lower, f64::min)
    }

    /// Dimension of the affine hull of the equality constraints' solution set.
    pub fn reduced_dimension(&self) -> usize {
        self.num_vars - equality_rank(self)
    }

    /// Shifted variables `x = θ - ε >= 0`, one slack per upper row, plus any
    /// `extra` trailing columns (left zero).
    fn standard_form(&self, extra: usize) -> LinearProgram {
        let k = self.num_vars;
        let r = self.upper.len();
        let cols = k + r + extra;
        let eps = self.epsilon;
        let mut lp = LinearProgram { a: Vec::new(), b: Vec::new(), c: vec![0.0; cols] };
        for row in &self.equalities {
            let mut a = vec![0.0; cols];
            row.vars.iter().for_each(|&c| a[c] = 1.0);
            lp.a.push(a);
            lp.b.push(row.rhs - eps * row.vars.len() as f64);
        }
        for (i, row) in self.upper.iter().enumerate() {
            let mut a = vec![0.0; cols];
            row.vars.iter().for_each(|&c| a[c] = 1.0);
            a[k + i] = 1.0;
            lp.a.push(a);
            lp.b.push(row.rhs - eps * row.vars.len() as f64);
        }
        lp
    }

    /// Minimizes `cost · θ` over the polytope, returning an optimal vertex.
    /// `None` when infeasible.
    pub fn minimize(&self, cost: &[f64]) -> Result<Option<Vec<f64>>, RivinError> {
        let mut lp = self.standard_form(0);
        lp.c[..self.num_vars].copy_from_slice(cost);
        match simplex::solve(&lp)? {
            LpOutcome::Optimal { x, .. } => Ok(Some(x[..self.num_vars].iter().map(|v| v + self.epsilon).collect())),
            LpOutcome::Infeasible { .. } => Ok(None),
            LpOutcome::Unbounded => unreachable!("angle polytope is bounded"),
        }
    }
}

fn equality_rank(system: &ConstraintSystem) -> usize {
    let k = system.num_vars;
    let mut m: Vec<Vec<f64>> = system
        .equalities
        .iter()
        .map(|row| {
            let mut a = vec![0.0; k];
            row.vars.iter().for_each(|&c| a[c] = 1.0);
            a
        })
        .collect();
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            break;
        };
        if m[p][col].abs() < 1e-12 {
            continue;
        }
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0.0 {
                let f = row[col] / pivot[col];
                row.iter_mut().zip(&pivot).for_each(|(x, p)| *x -= f * p);
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Strictly interior angle assignment when feasible.
    pub witness: Option<Vec<f64>>,
    /// Smallest slack of the witness over all inequalities (beyond `ε`).
    pub margin: Option<f64>,
    /// Phase-one optimum when infeasible.
    pub certificate: Option<f64>,
}

/// Phase-one feasibility, followed by a centering LP on success.
pub fn check_feasible(system: &ConstraintSystem) -> Result<FeasibilityResult, RivinError> {
    let lp = system.standard_form(0);
    match simplex::solve(&lp)? {
        LpOutcome::Infeasible { phase_one } => {
            return Ok(FeasibilityResult { feasible: false, witness: None, margin: None, certificate: Some(phase_one) })
        }
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
        LpOutcome::Optimal { .. } => {}
    }
    let (witness, margin) = center(system)?;
    Ok(FeasibilityResult { feasible: true, witness: Some(witness), margin: Some(margin), certificate: None })
}

/// Maximizes the minimum inequality slack `t`. No slack can exceed π, so
/// the cap `t ≤ π` only keeps the LP bounded.
///
/// Columns: shifted angles `x`, upper-row slacks `s`, then `t`, the
/// lower-bound surpluses `u` and the cap slack `w`:
/// `Σx + t + s = rhs` per upper row, `x_c - t - u_c = 0`, `t + w = π`.
fn center(system: &ConstraintSystem) -> Result<(Vec<f64>, f64), RivinError> {
    let k = system.num_vars;
    let r = system.upper.len();
    let t_col = k + r;
    let extra = 1 + k + 1;
    let mut lp = system.standard_form(extra);
    let cols = k + r + extra;
    for i in 0..r {
        lp.a[system.equalities.len() + i][t_col] = 1.0;
    }
    for c in 0..k {
        let mut a = vec![0.0; cols];
        a[c] = 1.0;
        a[t_col] = -1.0;
        a[t_col + 1 + c] = -1.0;
        lp.a.push(a);
        lp.b.push(0.0);
    }
    let mut cap = vec![0.0; cols];
    cap[t_col] = 1.0;
    cap[cols - 1] = 1.0;
    lp.a.push(cap);
    lp.b.push(PI);
    lp.c[t_col] = -1.0;
    match simplex::solve(&lp)? {
        LpOutcome::Optimal { x, .. } => {
            let theta = x[..k].iter().map(|v| v + system.epsilon).collect();
            Ok((theta, x[t_col]))
        }
        other => {
            Err(RivinError::NumericalFailure(SimplexError::Malformed(format!("centering LP of a feasible system returned {other:?}"))))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realizability {
    pub apex: VertexId,
    pub result: FeasibilityResult,
}

impl Realizability {
    pub fn realizable(&self) -> bool {
        self.result.feasible
    }
}

/// Realizability at the default apex and `ε = 1e-6`.
pub fn is_realizable(t: &SphereTriangulation) -> Result<Realizability, RivinError> {
    is_realizable_at(t, t.choose_apex(), DEFAULT_EPSILON)
}

pub fn is_realizable_at(t: &SphereTriangulation, apex: VertexId, epsilon: f64) -> Result<Realizability, RivinError> {
    if !(epsilon > 0.0 && epsilon < 1e-3) {
        return Err(RivinError::BadEpsilon(epsilon));
    }
    let link = t.build_link(apex)?;
    let system = ConstraintSystem::assemble(&link, epsilon);
    Ok(Realizability { apex, result: check_feasible(&system)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(system: &ConstraintSystem) -> (usize, usize, usize, usize, usize) {
        let tri = system.equalities.iter().filter(|r| matches!(r.kind, RowKind::Triangle { .. })).count();
        let vert = system.equalities.len() - tri;
        let edge = system.upper.iter().filter(|r| matches!(r.kind, RowKind::InteriorEdge { .. })).count();
        let hull = system.upper.len() - edge;
        (system.num_vars, tri, vert, edge, hull)
    }

    #[test]
    fn assembled_dimensions() {
        let tet = SphereTriangulation::tetrahedron();
        let s = ConstraintSystem::assemble(&tet.build_link(3).unwrap(), 1e-6);
        assert_eq!(counts(&s), (3, 1, 0, 0, 3));
        assert_eq!(s.reduced_dimension(), 2);

        let oct = SphereTriangulation::octahedron();
        let s = ConstraintSystem::assemble(&oct.build_link(0).unwrap(), 1e-6);
        assert_eq!(counts(&s), (12, 4, 1, 4, 4));
        assert_eq!(s.reduced_dimension(), 7);

        let bip = SphereTriangulation::bipyramid(3);
        let s = ConstraintSystem::assemble(&bip.build_link(3).unwrap(), 1e-6);
        assert_eq!(counts(&s), (9, 3, 1, 3, 3));
        assert_eq!(s.reduced_dimension(), 5);
    }

    #[test]
    fn rows_are_zero_one_with_valid_indices() {
        let oct = SphereTriangulation::octahedron();
        let link = oct.build_link(2).unwrap();
        let s = ConstraintSystem::assemble(&link, 1e-6);
        for row in s.equalities.iter().chain(&s.upper) {
            assert!(row.vars.iter().all(|&c| c < s.num_vars));
            let mut v = row.vars.clone();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), row.vars.len());
        }
        for row in &s.upper {
            if let RowKind::InteriorEdge { edge } = row.kind {
                assert_eq!(row.vars.len(), 2);
                for &c in &row.vars {
                    let f = link.faces()[c / 3];
                    assert!(!edge.contains(f[c % 3]));
                    assert!(f.contains(&edge.u) && f.contains(&edge.v));
                }
            }
        }
    }

    #[test]
    fn tetrahedron_witness_is_centered() {
        let tet = SphereTriangulation::tetrahedron();
        let s = ConstraintSystem::assemble(&tet.build_link(3).unwrap(), 1e-6);
        let r = check_feasible(&s).unwrap();
        assert!(r.feasible);
        let w = r.witness.unwrap();
        assert!(s.max_violation(&w) < 1e-12);
        for x in &w {
            assert!((x - PI / 3.0).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn large_epsilon_is_infeasible() {
        let tet = SphereTriangulation::tetrahedron();
        let s = ConstraintSystem::assemble(&tet.build_link(3).unwrap(), 1.1);
        let r = check_feasible(&s).unwrap();
        assert!(!r.feasible);
        assert!(r.certificate.unwrap() > 0.0);
        // 0.9 still leaves room: 3 * 0.9 < π.
        let s = ConstraintSystem::assemble(&tet.build_link(3).unwrap(), 0.9);
        assert!(check_feasible(&s).unwrap().feasible);
    }

    #[test]
    fn octahedron_realizable() {
        let r = is_realizable(&SphereTriangulation::octahedron()).unwrap();
        assert!(r.realizable());
        assert_eq!(r.apex, 0);
    }

    #[test]
    fn bad_epsilon_rejected() {
        assert!(is_realizable_at(&SphereTriangulation::tetrahedron(), 0, 0.0).is_err());
        assert!(is_realizable_at(&SphereTriangulation::tetrahedron(), 0, 0.01).is_err());
    }

    #[test]
    fn triakis_tetrahedron_not_realizable() {
        // Stacking a vertex on every face of a tetrahedron gives a
        // triangulation with no inscribed realization.
        let faces = vec![
            [0, 1, 4],
            [1, 2, 4],
            [2, 0, 4],
            [0, 2, 5],
            [2, 3, 5],
            [3, 0, 5],
            [0, 3, 6],
            [3, 1, 6],
            [1, 0, 6],
            [1, 3, 7],
            [3, 2, 7],
            [2, 1, 7],
        ];
        let t = SphereTriangulation::from_faces(8, faces).unwrap();
        for apex in 0..8 {
            let r = is_realizable_at(&t, apex, DEFAULT_EPSILON).unwrap();
            assert!(!r.realizable(), "apex {apex}");
        }
    }
}
