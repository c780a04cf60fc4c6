//! Iteration of holomorphic self-maps: orbits, record sequences, target
//! sets and the Denjoy-Wolff verdict. Boundary checks (horospheres, Julia
//! quotients, slice containment) live in [`boundary`].

pub mod boundary;
mod map;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use boundary::{
    horosphere_limsup, horosphere_orbit_invariance_check, julia_polydisc_check, julia_q, radial_limsup_estimate,
    slice_containment_check, HorosphereEstimate, HorosphereSpec, InvarianceReport, JuliaReport, RadialLimsup,
    SliceReport,
};
pub use map::{evaluate, HoloMap, MapExpr, SELF_MAP_SAMPLES};

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::metric::{distance_estimate, model_distance, BracketOptions};
use crate::point::Point;
use crate::tol::Tolerances;

/// Orbit samples within this relative distance of the boundary form clusters.
pub const CLUSTER_EPS: f64 = 1e-3;
/// Merge radius of orbit clusters, relative to the diameter.
pub const CLUSTER_H: f64 = 1e-2;
/// Final orbit points compared by the Denjoy-Wolff verdict.
pub const DW_TAIL: usize = 8;
/// Cluster separation of the Denjoy-Wolff verdict, in units of its `eps`.
pub const DW_SEPARATION: f64 = 10.0;

/// Kobayashi distance and its uncertainty: exact on models, bracket
/// midpoint and gap otherwise.
pub(crate) fn distance_with_gap(dom: &DomainSpec, z: &Point, w: &Point) -> (f64, f64) {
    if dom.is_model() {
        (model_distance(dom, z, w), 0.0)
    } else {
        distance_estimate(dom, z, w, &BracketOptions::default())
    }
}

/// Step at which an orbit left the open domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Escape {
    pub step: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub z0: Point,
    /// `F^n(z0)` for `n = 0, 1, ...` until `n_max` or the first escape.
    pub points: Vec<Point>,
    pub dist_to_start: Vec<f64>,
    pub record_indices: Vec<usize>,
    /// Boundary points near which the orbit tail accumulates.
    pub cluster_estimate: Vec<Point>,
    pub escape: Option<Escape>,
}

impl OrbitRecord {
    /// Whether the orbit went farther than `threshold` from its start.
    pub fn escaped(&self, threshold: f64) -> bool {
        self.escape.is_some() || self.dist_to_start.iter().any(|d| *d > threshold)
    }
}

/// Record indices of a distance profile indexed from `n = 0`: `n = 1`, then
/// every `n` strictly exceeding all earlier distances.
pub fn record_indices(dist: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    if dist.len() < 2 {
        return out;
    }
    out.push(1);
    let mut best = dist[0].max(dist[1]);
    for (n, d) in dist.iter().enumerate().skip(2) {
        if *d > best {
            best = *d;
            out.push(n);
        }
    }
    out
}

/// Last quarter of a sequence, at least 8 entries.
pub(crate) fn tail_len(len: usize) -> usize {
    (len / 4).max(8).min(len)
}

/// Greedy clustering: candidates sorted by margin, each joins the first
/// representative within `merge` or starts a new one. Representatives are
/// projected onto the boundary.
pub(crate) fn cluster(dom: &DomainSpec, mut pts: Vec<Point>, merge: f64) -> Vec<(Point, usize)> {
    pts.sort_by(|a, b| dom.margin(a).total_cmp(&dom.margin(b)));
    let mut reps: Vec<(Point, usize)> = Vec::new();
    for z in pts {
        match reps.iter_mut().find(|(r, _)| r.dist(&z) <= merge) {
            Some(rep) => rep.1 += 1,
            None => reps.push((z, 1)),
        }
    }
    reps.into_iter().map(|(z, n)| (dom.nearest_boundary_point(&z), n)).collect()
}

fn require_self_map(f: &HoloMap) -> Result<()> {
    if !f.is_self_map() {
        return Err(Error::InvalidArgument("iteration needs a self-map".into()));
    }
    Ok(())
}

/// Iterates `F` from `z0`, stopping early when an iterate leaves the open
/// domain.
pub fn iterate_orbit(f: &HoloMap, z0: &Point, n_max: usize) -> Result<OrbitRecord> {
    require_self_map(f)?;
    let dom = f.source();
    dom.require_inside(z0)?;
    let mut points = vec![z0.clone()];
    let mut escape = None;
    for step in 1..=n_max {
        let z = f.apply(&points[step - 1]);
        let m = dom.margin(&z);
        if !(m > 0.0) {
            escape = Some(Escape { step, margin: m });
            break;
        }
        points.push(z);
    }
    let dist_to_start: Vec<f64> = points.par_iter().map(|z| distance_with_gap(dom, z0, z).0).collect();
    let record_indices = record_indices(&dist_to_start);
    let tail = &points[points.len() - tail_len(points.len())..];
    let eps = CLUSTER_EPS * dom.diameter();
    let near: Vec<Point> = tail.iter().filter(|z| dom.margin(z) <= eps).cloned().collect();
    let cluster_estimate = cluster(dom, near, CLUSTER_H * dom.diameter()).into_iter().map(|(z, _)| z).collect();
    Ok(OrbitRecord { z0: z0.clone(), points, dist_to_start, record_indices, cluster_estimate, escape })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCluster {
    pub point: Point,
    /// Orbit points merged into the cluster.
    pub count: usize,
}

/// Boundary clusters of all orbit points within `eps` of the boundary,
/// merged across starts at resolution `CLUSTER_H * diam`.
pub fn target_set_estimate(f: &HoloMap, starts: &[Point], n_max: usize, eps: f64) -> Result<Vec<TargetCluster>> {
    require_self_map(f)?;
    let dom = f.source();
    let orbits: Vec<OrbitRecord> = starts.par_iter().map(|z0| iterate_orbit(f, z0, n_max)).collect::<Result<_>>()?;
    let near: Vec<Point> = orbits.into_iter().flat_map(|o| o.points).filter(|z| dom.margin(z) <= eps).collect();
    Ok(cluster(dom, near, CLUSTER_H * dom.diameter())
        .into_iter()
        .map(|(point, count)| TargetCluster { point, count })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "points")]
pub enum DwVerdict {
    ConvergesTo(Point),
    MultiplePoints(Vec<Point>),
    Inconclusive,
}

/// Compares the last `DW_TAIL` points of every orbit: a common boundary
/// point within `eps` gives `ConvergesTo`; boundary clusters separated by
/// `DW_SEPARATION * eps` give `MultiplePoints`. Orbits that never get
/// farther than the escape threshold make the verdict Inconclusive.
pub fn denjoy_wolff_verdict(
    f: &HoloMap,
    starts: &[Point],
    n_max: usize,
    eps: f64,
    tol: &Tolerances,
) -> Result<DwVerdict> {
    require_self_map(f)?;
    if starts.is_empty() {
        return Err(Error::InvalidArgument("no starting points".into()));
    }
    let dom = f.source();
    let orbits: Vec<OrbitRecord> = starts.par_iter().map(|z0| iterate_orbit(f, z0, n_max)).collect::<Result<_>>()?;
    if orbits.iter().any(|o| !o.escaped(tol.escape_threshold)) {
        return Ok(DwVerdict::Inconclusive);
    }
    let tails: Vec<Point> =
        orbits.iter().flat_map(|o| o.points[o.points.len().saturating_sub(DW_TAIL)..].iter().cloned()).collect();
    let last = &orbits[0].points[orbits[0].points.len() - 1];
    let p = dom.nearest_boundary_point(last);
    if tails.iter().all(|z| z.dist(&p) <= eps) {
        return Ok(DwVerdict::ConvergesTo(p));
    }
    let near: Vec<Point> = tails.into_iter().filter(|z| dom.margin(z) <= eps).collect();
    let reps = cluster(dom, near, DW_SEPARATION * eps);
    if reps.len() >= 2 {
        Ok(DwVerdict::MultiplePoints(reps.into_iter().map(|(z, _)| z).collect()))
    } else {
        Ok(DwVerdict::Inconclusive)
    }
}
