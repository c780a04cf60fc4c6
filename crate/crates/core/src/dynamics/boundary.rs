//! Boundary behavior of iterates: sequential horospheres, the polydisc
//! Julia quotient, radial limits of Julia quotients and slice containment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_with_gap, iterate_orbit, HoloMap, OrbitRecord};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::point::{c, Point, C64};
use crate::tol::Tolerances;

/// Sequential horosphere `E_{z0}(sequence, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorosphereSpec {
    pub z0: Point,
    pub sequence: Vec<Point>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorosphereEstimate {
    /// Largest `k(z, z_n) - k(z0, z_n)` over the tail.
    pub estimate: f64,
    pub differences: Vec<f64>,
    /// Whether the tail differences are monotone.
    pub monotone: bool,
    /// Largest bracket gap among the distances used.
    pub gap: f64,
    /// `estimate < log(radius) / 2 - tol_horo - gap`.
    pub member: bool,
}

/// Max-of-tail estimate of `limsup [k(z, z_n) - k(z0, z_n)]` over the last
/// `tail` entries of the sequence.
pub fn horosphere_limsup(
    dom: &DomainSpec,
    spec: &HorosphereSpec,
    z: &Point,
    tail: usize,
    tol: &Tolerances,
) -> Result<HorosphereEstimate> {
    dom.require_inside(z)?;
    dom.require_inside(&spec.z0)?;
    if tail == 0 || spec.sequence.len() < tail {
        return Err(Error::InvalidArgument(format!(
            "sequence has {} entries, fewer than the tail {tail}",
            spec.sequence.len()
        )));
    }
    if !(spec.radius > 0.0) {
        return Err(Error::InvalidArgument("horosphere radius must be positive".into()));
    }
    let entries = &spec.sequence[spec.sequence.len() - tail..];
    for w in entries {
        dom.require_inside(w)?;
    }
    let parts: Vec<(f64, f64)> = entries
        .par_iter()
        .map(|w| {
            let (a, ga) = distance_with_gap(dom, z, w);
            let (b, gb) = distance_with_gap(dom, &spec.z0, w);
            (a - b, ga + gb)
        })
        .collect();
    let differences: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let gap = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    let estimate = differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let noise = 1e-12 * (1.0 + estimate.abs());
    let monotone =
        differences.windows(2).all(|w| w[1] <= w[0] + noise) || differences.windows(2).all(|w| w[1] >= w[0] - noise);
    let member = estimate < 0.5 * spec.radius.ln() - tol.tol_horo - gap;
    Ok(HorosphereEstimate { estimate, differences, monotone, gap, member })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Estimate for `F^n(z0)`, `n = 0, 1, ...`.
    pub estimates: Vec<f64>,
    pub max_estimate: f64,
    pub records: usize,
    pub tail: usize,
    pub threshold: f64,
    pub pass: bool,
}

fn escaped_orbit(f: &HoloMap, z0: &Point, n_max: usize, tol: &Tolerances) -> Result<OrbitRecord> {
    let orbit = iterate_orbit(f, z0, n_max)?;
    if !orbit.escaped(tol.escape_threshold) {
        return Err(Error::Inconclusive(format!(
            "orbit stayed within distance {} of its start; the map may have fixed points",
            tol.escape_threshold
        )));
    }
    Ok(orbit)
}

/// Every iterate `F^n(z0)` against the horosphere of radius 0 built on the
/// last `tail` records of the orbit: passes when every estimate is at most
/// `tol_horo` plus the bracket gap.
pub fn horosphere_orbit_invariance_check(
    f: &HoloMap,
    z0: &Point,
    n_max: usize,
    tail: usize,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let orbit = escaped_orbit(f, z0, n_max, tol)?;
    let dom = f.source();
    let records: Vec<Point> = orbit.record_indices.iter().map(|n| orbit.points[*n].clone()).collect();
    if records.len() < tail || tail == 0 {
        return Err(Error::InvalidArgument(format!("{} records, fewer than the tail {tail}", records.len())));
    }
    let spec = HorosphereSpec { z0: z0.clone(), sequence: records, radius: 1.0 };
    let parts: Vec<HorosphereEstimate> =
        orbit.points.par_iter().map(|z| horosphere_limsup(dom, &spec, z, tail, tol)).collect::<Result<_>>()?;
    let estimates: Vec<f64> = parts.iter().map(|p| p.estimate).collect();
    let gap = parts.iter().map(|p| p.gap).fold(0.0, f64::max);
    let max_estimate = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = tol.tol_horo + gap;
    Ok(InvarianceReport {
        estimates,
        max_estimate,
        records: spec.sequence.len(),
        tail,
        threshold,
        pass: max_estimate <= threshold,
    })
}

/// Surrogate for the boundary point `q_m`: the boundary projection of
/// `F^(n_k - m)(z0)` for the last record `n_k`, with the distance to the
/// previous record's point as a convergence residual.
pub fn julia_q(f: &HoloMap, z0: &Point, n_max: usize, m: usize, tol: &Tolerances) -> Result<(Point, f64)> {
    let orbit = escaped_orbit(f, z0, n_max, tol)?;
    let w: Vec<&Point> = orbit.record_indices.iter().filter(|n| **n >= m).map(|n| &orbit.points[n - m]).collect();
    let [.., prev, last] = w.as_slice() else {
        return Err(Error::Inconclusive(format!("fewer than two records beyond m = {m}")));
    };
    Ok((f.source().nearest_boundary_point(last), last.dist(prev)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaReport {
    pub m: usize,
    pub q: Point,
    pub sigma: C64,
    pub j0: usize,
    /// Largest `LHS - RHS` over the grid.
    pub max_excess: f64,
    pub pass: bool,
    /// Largest `|g(zeta) - zeta|` of the sampled `g = pi_j0 F^m(zeta q)`.
    pub identity_defect: f64,
    /// Largest `|g(zeta) - sigma|`.
    pub sigma_defect: f64,
}

/// Both sides of the polydisc Julia inequality on a polar grid of
/// `samples x samples` points `zeta` with `|zeta| <= (samples - 1) / samples`.
/// When `q_j0` is unimodular the coordinate is rotated so that `q_j0 = 1`.
pub fn julia_polydisc_check(
    f: &HoloMap,
    m: usize,
    q: &Point,
    sigma: C64,
    j0: usize,
    samples: usize,
    tol: &Tolerances,
) -> Result<JuliaReport> {
    let dom = f.source();
    if !f.is_self_map() || !matches!(dom, DomainSpec::Polydisc(_)) {
        return Err(Error::InvalidArgument("the Julia check needs a self-map of a polydisc".into()));
    }
    q.check_dim(dom.dim())?;
    if j0 >= dom.dim() || samples == 0 || q.coords().iter().any(|x| x.norm() > 1.0 + 1e-12) {
        return Err(Error::InvalidArgument("j0, samples or q out of range".into()));
    }
    let rot = if (q[j0].norm() - 1.0).abs() <= 1e-9 { q[j0].conj() / q[j0].norm() } else { c(1.0, 0.0) };
    let grid: Vec<C64> = (0..samples)
        .flat_map(|i| {
            (0..samples).map(move |j| {
                C64::from_polar(i as f64 / samples as f64, std::f64::consts::TAU * j as f64 / samples as f64)
            })
        })
        .collect();
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|zeta| {
            let mut z = q.scale(*zeta);
            for step in 1..=m {
                z = f.apply(&z);
                let margin = dom.margin(&z);
                if !(margin > 0.0) {
                    return Err(Error::NumericEscape { step, margin });
                }
            }
            let g = rot * z[j0];
            let lhs = (sigma - g).norm_sqr() / (1.0 - g.norm_sqr());
            let rhs = (sigma - zeta).norm_sqr() / (1.0 - zeta.norm_sqr());
            Ok((lhs - rhs, (g - zeta).norm(), (g - sigma).norm()))
        })
        .collect::<Result<_>>()?;
    let max = |k: fn(&(f64, f64, f64)) -> f64| rows.iter().map(k).fold(f64::NEG_INFINITY, f64::max);
    let max_excess = max(|r| r.0);
    Ok(JuliaReport {
        m,
        q: q.clone(),
        sigma,
        j0,
        max_excess,
        pass: max_excess <= tol.tol_julia,
        identity_defect: max(|r| r.1),
        sigma_defect: max(|r| r.2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialLimsup {
    pub r_grid: Vec<f64>,
    /// `|1 - f(r sigma)| / (1 - r)`.
    pub values: Vec<f64>,
    /// Largest of the last three values.
    pub estimate: f64,
    /// Set when the last values grow by a factor of at least 5 per step.
    pub infinite: bool,
}

/// Radial Julia quotient of `f: D^N -> D` along `r sigma`, on
/// `r = 1 - 10^-j`, `j = 1..8`.
pub fn radial_limsup_estimate(f: &HoloMap, sigma: &Point) -> Result<RadialLimsup> {
    let dom = f.source();
    if !matches!(dom, DomainSpec::Polydisc(_)) || f.target() != &DomainSpec::Polydisc(1) {
        return Err(Error::InvalidArgument("radial estimates need a map from a polydisc to the disc".into()));
    }
    sigma.check_dim(dom.dim())?;
    let top = sigma.coords().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if (top - 1.0).abs() > 1e-12 {
        return Err(Error::NotOnBoundary { distance: (top - 1.0).abs(), tol: 1e-12 });
    }
    let r_grid: Vec<f64> = (1..=8).map(|j| 1.0 - 10f64.powi(-j)).collect();
    let values = r_grid
        .iter()
        .map(|r| {
            let w = f.apply(&sigma.scale_re(*r))[0];
            if w.norm() >= 1.0 {
                return Err(Error::NumericEscape { step: 1, margin: 1.0 - w.norm() });
            }
            Ok((c(1.0, 0.0) - w).norm() / (1.0 - r))
        })
        .collect::<Result<Vec<f64>>>()?;
    let last = &values[values.len() - 3..];
    let estimate = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let infinite = last.windows(2).all(|w| w[1] >= 5.0 * w[0]);
    Ok(RadialLimsup { r_grid, values, estimate, infinite })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub pass: bool,
    /// Coordinate of the slice containing each point, if any.
    pub witnesses: Vec<Option<usize>>,
}

/// Checks that every point lies in a slice `D x ... x C_j(xi) x ... x D`,
/// with `C_j(xi) = {xi_j}` when `|xi_j| = 1` and the unit circle otherwise.
pub fn slice_containment_check(points: &[Point], xi: &Point, tol: f64) -> Result<SliceReport> {
    let top = xi.coords().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if (top - 1.0).abs() > 1e-12 {
        return Err(Error::NotOnBoundary { distance: (top - 1.0).abs(), tol: 1e-12 });
    }
    let witnesses = points
        .iter()
        .map(|z| {
            z.check_dim(xi.dim())?;
            Ok((0..xi.dim()).find(|j| {
                if (xi[*j].norm() - 1.0).abs() <= 1e-12 {
                    (z[*j] - xi[*j]).norm() <= tol
                } else {
                    (z[*j].norm() - 1.0).abs() <= tol
                }
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SliceReport { pass: witnesses.iter().all(Option::is_some), witnesses })
}
