use idealpoly_core::optvol::{shape_parameters, ActiveBound, OptResult, RationalAngle};
use idealpoly_core::specfun::regular_tetrahedron_volume;
use idealpoly_core::VertexId;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RationalJson {
    pub p: u64,
    pub q: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CornerJson {
    pub face: usize,
    pub parent_face: usize,
    pub slot: usize,
    pub vertex: VertexId,
    pub radians: f64,
    pub rational: Option<RationalJson>,
    pub pi_fraction: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DihedralJson {
    pub edge: [VertexId; 2],
    pub radians: f64,
    pub rational: Option<RationalJson>,
    pub pi_fraction: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeJson {
    pub edge: [VertexId; 2],
    pub re: f64,
    pub im: f64,
}

/// Optimizer output in the interchange layout shared by `optimize` and
/// `search`.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport {
    pub n: usize,
    pub apex: VertexId,
    pub epsilon: f64,
    pub volume: f64,
    pub limit_volume: f64,
    pub v_over_v4: f64,
    pub kkt_residual: f64,
    pub corner_denominator: Option<u64>,
    pub dihedral_denominator: Option<u64>,
    pub boundary_active: Vec<ActiveBound>,
    pub newton_steps: usize,
    pub corners: Vec<CornerJson>,
    pub dihedrals: Vec<DihedralJson>,
    pub shape_parameters: Vec<ShapeJson>,
}

fn rational(r: &Option<RationalAngle>) -> (Option<RationalJson>, Option<String>) {
    match r {
        Some(r) => (Some(RationalJson { p: r.p, q: r.q }), Some(r.to_string())),
        None => (None, None),
    }
}

impl OptimizeReport {
    pub fn new(r: &OptResult, epsilon: f64) -> Self {
        let link = r.angles.link();
        let corners = link
            .corners()
            .enumerate()
            .map(|(i, c)| {
                let (rational, pi_fraction) = rational(&r.corner_rationals[i]);
                CornerJson {
                    face: c.face,
                    parent_face: link.parent_faces()[c.face],
                    slot: c.slot,
                    vertex: c.vertex,
                    radians: r.angles.values()[i],
                    rational,
                    pi_fraction,
                }
            })
            .collect();
        let dihedrals = r
            .dihedrals
            .per_edge
            .iter()
            .map(|(e, &radians)| {
                let (rational, pi_fraction) = rational(&r.dihedral_rationals[e]);
                DihedralJson { edge: [e.u, e.v], radians, rational, pi_fraction }
            })
            .collect();
        let shape_parameters =
            shape_parameters(&r.angles).into_iter().map(|(e, z)| ShapeJson { edge: [e.u, e.v], re: z.re, im: z.im }).collect();
        Self {
            n: link.n(),
            apex: link.apex(),
            epsilon,
            volume: r.volume,
            limit_volume: r.limit_volume,
            v_over_v4: r.volume / regular_tetrahedron_volume(),
            kkt_residual: r.kkt_residual,
            corner_denominator: r.corner_denominator(),
            dihedral_denominator: r.dihedral_denominator(),
            boundary_active: r.boundary_active.clone(),
            newton_steps: r.newton_steps,
            corners,
            dihedrals,
            shape_parameters,
        }
    }
}
