//! Documented numerical defaults. Every experiment echoes the values it used.

use serde::{Deserialize, Serialize};

/// Relative boundary tolerance; multiplied by the domain diameter.
pub const TOL_BD: f64 = 1e-9;
/// A distance bracket narrower than this is reported as exact.
pub const TOL_EXACT: f64 = 1e-6;
/// Default objective-evaluation budget of the disc optimizer.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Default polynomial degree of candidate analytic discs.
pub const DISC_DEGREE: usize = 4;
/// Boundary grid for disc feasibility.
pub const DISC_GRID: usize = 256;
/// Minimum membership margin required on the unit circle of a candidate disc.
pub const DISC_SAFETY: f64 = 1e-7;
/// Random boundary contacts sampled for the lower bound.
pub const LOWER_BOUND_CONTACTS: usize = 64;
/// Degree of the polynomial maps from planar images into the disc.
pub const LEFT_INVERSE_DEGREE: usize = 40;
pub const TOL_HORO: f64 = 1e-6;
pub const TOL_JULIA: f64 = 1e-8;
/// Orbits whose distance to the start never exceeds this are treated as
/// possibly having a fixed point.
pub const ESCAPE_THRESHOLD: f64 = 5.0;
/// Escaping verdicts also require the approach distance to exceed this.
pub const ESCAPE_RADIUS: f64 = 2.0;
/// Escaping verdicts require monotone growth over this many doublings.
pub const ESCAPE_DOUBLINGS: usize = 6;

/// Tolerance overrides carried by experiment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol_bd: f64,
    pub tol_exact: f64,
    pub tol_horo: f64,
    pub tol_julia: f64,
    pub escape_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_bd: TOL_BD,
            tol_exact: TOL_EXACT,
            tol_horo: TOL_HORO,
            tol_julia: TOL_JULIA,
            escape_threshold: ESCAPE_THRESHOLD,
        }
    }
}
