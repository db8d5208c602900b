//! Ideal convex polyhedra in hyperbolic 3-space.
//!
//! The crate covers the whole pipeline from a combinatorial type to its
//! maximal-volume realization, and from random ideal vertex configurations
//! to the statistics of their volumes:
//!
//! * [`triang`]: validated sphere triangulations, apex links, automorphisms;
//! * [`specfun`]: the Lobachevsky function and distribution helpers;
//! * [`rivin`]: the linear angle system and its feasibility;
//! * [`optvol`]: volume maximization, dihedral angles, rational detection;
//! * [`geom`]: random configurations, Delaunay triangulation, layout, export;
//! * [`stats`]: volume sampling, Beta fits, scaling fits, maximal-volume search.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geom;
pub mod optvol;
pub mod rivin;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod triang;

pub use geom::{ExtPoint, PlanarTriangulation, PointConfiguration};
pub use optvol::{AngleAssignment, DihedralAngles, OptResult, RationalAngle};
pub use rivin::{ConstraintSystem, FeasibilityResult};
pub use stats::{BetaFit, SearchResult, VolumeSample};
pub use triang::{ApexLink, EdgeKey, SphereTriangulation, VertexId};
