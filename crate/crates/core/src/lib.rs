//! Kobayashi distance, geodesics, visibility probes and holomorphic dynamics
//! on bounded convex domains of C^N: balls, polydiscs, their products and
//! polyhedral hulls of supporting functionals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod disc;
pub mod domains;
pub mod dynamics;
pub mod error;
pub mod geodesics;
pub mod metric;
pub mod point;
pub mod tol;
pub mod visibility;
