//! Slow, independent reference computations used to cross-check
//! `idealpoly-core`: quadrature for the Lobachevsky function, integer grid
//! search for angle feasibility, brute-force Delaunay verification, and a
//! corpus of triangulations obtained by exhaustive flip enumeration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod delaunay;
pub mod grid;
pub mod interior;
pub mod quad;
