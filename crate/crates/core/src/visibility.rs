//! Visibility probes for pairs of boundary points, limit sets of geodesic
//! families and the two-case classification of limit-set pairs.
//!
//! Compact sets are closed Kobayashi balls around the domain center; every
//! probe reports the smallest radius that its tested geodesics all meet.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{golden_max, random_unit, DomainSpec, SegmentLocation};
use crate::error::{Error, Result};
use crate::geodesics::{geodesic_segment, tent_segment, ComplexGeodesic, GeodesicPath};
use crate::metric::{distance_estimate, model_distance, BracketOptions};
use crate::point::{c, Point};
use crate::tol::{ESCAPE_DOUBLINGS, ESCAPE_RADIUS};

/// Largest `k` of the endpoint sequences `r_k = 1 - 2^-k`.
pub const PROBE_DOUBLINGS: usize = 20;
/// Sample grid of [`closest_approach`] before refinement.
pub const APPROACH_GRID: usize = 1024;
/// Refinement tolerance in `t` on the model domains.
pub const APPROACH_TOL: f64 = 1e-12;
/// Refinement tolerance in `t` on functional hulls.
pub const APPROACH_TOL_HULL: f64 = 1e-4;
/// Limit-set clustering radius, relative to the diameter.
pub const CLUSTER_EPS: f64 = 1e-3;
/// Limit-set representative resolution, relative to the diameter.
pub const CLUSTER_H: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VisibilityMode {
    Essential,
    Strong,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "radius")]
pub enum Approach {
    Finite(f64),
    Escaping,
    Inconclusive,
}

impl Approach {
    pub fn radius(&self) -> Option<f64> {
        match self {
            Approach::Finite(r) => Some(*r),
            _ => None,
        }
    }
}

/// Closest approach of one tested geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub family: usize,
    pub k: usize,
    pub r_k: f64,
    pub closest_approach: f64,
    pub argmin_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityVerdict {
    pub p: Point,
    pub q: Point,
    pub mode: VisibilityMode,
    pub approach: Approach,
    pub evidence: Vec<Evidence>,
}

/// Minimum of `k(gamma(t), base)` over the path and its argmin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosestApproach {
    pub distance: f64,
    pub t: f64,
}

fn distance_to(dom: &DomainSpec, z: &Point, base: &Point) -> f64 {
    if dom.is_model() {
        model_distance(dom, z, base)
    } else {
        distance_estimate(dom, z, base, &BracketOptions::default()).0
    }
}

/// Grid minimum of `f` on `[0, span]`, refined by golden section around the
/// best node.
fn grid_min(f: impl Fn(f64) -> f64, span: f64, grid: usize, tol: f64) -> ClosestApproach {
    let h = span / grid as f64;
    let (mut best_t, mut best) = (0.0, f(0.0));
    for i in 1..=grid {
        let t = i as f64 * h;
        let v = f(t);
        if v < best {
            (best_t, best) = (t, v);
        }
    }
    let t = golden_max(|t| -f(t), (best_t - h).max(0.0), (best_t + h).min(span), tol);
    let v = f(t);
    if v < best {
        ClosestApproach { distance: v, t }
    } else {
        ClosestApproach { distance: best, t: best_t }
    }
}

/// Closest approach of a path to `base`: exact distances on models, bracket
/// midpoints on hulls.
pub fn closest_approach(path: &GeodesicPath, base: &Point) -> Result<ClosestApproach> {
    let dom = path.domain();
    dom.require_inside(base)?;
    let (grid, tol) = if dom.is_model() { (APPROACH_GRID, APPROACH_TOL) } else { (32, APPROACH_TOL_HULL) };
    Ok(grid_min(|t| distance_to(dom, &path.sample(t), base), path.span(), grid, tol))
}

/// `z_k = c + r_k (p - c)` with `r_k = 1 - 2^-k`.
pub fn radial_sequence(dom: &DomainSpec, p: &Point, k: usize) -> Point {
    let center = dom.center();
    let r = 1.0 - 0.5f64.powi(k as i32);
    &center + &(p - &center).scale_re(r)
}

fn check_pair(dom: &DomainSpec, p: &Point, q: &Point) -> Result<()> {
    p.check_dim(dom.dim())?;
    q.check_dim(dom.dim())?;
    if p == q {
        return Err(Error::InvalidArgument("boundary points must differ".into()));
    }
    let tol = dom.tol_bd();
    for x in [p, q] {
        let m = dom.margin(x).abs();
        if m > tol {
            return Err(Error::NotOnBoundary { distance: m, tol });
        }
    }
    if !dom.is_model() {
        return Err(Error::NotImplemented("visibility probes on functional hulls".into()));
    }
    Ok(())
}

/// Leaves (offset, dim) of a model domain.
fn model_leaves(dom: &DomainSpec) -> Vec<(usize, usize)> {
    match dom {
        DomainSpec::Ball(n) => vec![(0, *n)],
        DomainSpec::Polydisc(n) => (0..*n).map(|j| (j, 1)).collect(),
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .flat_map(|(off, f)| model_leaves(f).into_iter().map(move |(o, d)| (off + o, d)))
            .collect(),
        DomainSpec::Hull(_) => Vec::new(),
    }
}

/// Segment of family `family` joining `z` and `w`: family 0 is the canonical
/// segment; the others make excursions in a leaf where `z` and `w` agree,
/// cycling over such leaves with seeded directions (the first one along the
/// first axis). `None` when the family has no admissible leaf.
fn family_segment(dom: &DomainSpec, z: &Point, w: &Point, family: usize, seed: u64) -> Result<Option<GeodesicPath>> {
    if family == 0 {
        return geodesic_segment(dom, z, w, &BracketOptions::default()).map(Some);
    }
    let flat: Vec<(usize, usize)> =
        model_leaves(dom).into_iter().filter(|(o, d)| z.slice(*o, *d) == w.slice(*o, *d)).collect();
    if flat.is_empty() {
        return Ok(None);
    }
    let (offset, dim) = flat[(family - 1) % flat.len()];
    let round = (family - 1) / flat.len();
    let dir = if round == 0 {
        let mut e = Point::zeros(dim);
        e[0] = c(1.0, 0.0);
        e
    } else {
        random_unit(dim, &mut ChaCha8Rng::seed_from_u64(seed ^ family as u64))
    };
    tent_segment(dom, z, w, offset, &dir).map(Some)
}

/// Closest approaches of family `family` for `k = 1..=doublings`.
fn family_evidence(
    dom: &DomainSpec,
    p: &Point,
    q: &Point,
    family: usize,
    doublings: usize,
    seed: u64,
) -> Result<Option<Vec<Evidence>>> {
    let base = dom.center();
    let rows: Vec<Result<Option<Evidence>>> = (1..=doublings)
        .into_par_iter()
        .map(|k| {
            let (z, w) = (radial_sequence(dom, p, k), radial_sequence(dom, q, k));
            let Some(path) = family_segment(dom, &z, &w, family, seed)? else {
                return Ok(None);
            };
            let a = closest_approach(&path, &base)?;
            let r_k = 1.0 - 0.5f64.powi(k as i32);
            Ok(Some(Evidence { family, k, r_k, closest_approach: a.distance, argmin_t: a.t }))
        })
        .collect();
    let rows: Vec<Option<Evidence>> = rows.into_iter().collect::<Result<_>>()?;
    Ok(rows.into_iter().collect())
}

/// Escaping when the last `ESCAPE_DOUBLINGS` steps grow strictly and end
/// beyond `threshold`; Inconclusive when they grow but stay below it;
/// otherwise the largest approach.
pub fn classify_sequence(distances: &[f64], threshold: f64) -> Approach {
    let n = distances.len();
    let growing = n > ESCAPE_DOUBLINGS && distances[n - ESCAPE_DOUBLINGS - 1..].windows(2).all(|w| w[1] > w[0]);
    match distances.last() {
        None => Approach::Inconclusive,
        Some(last) if growing && *last > threshold => Approach::Escaping,
        Some(_) if growing => Approach::Inconclusive,
        Some(_) => Approach::Finite(distances.iter().copied().fold(0.0, f64::max)),
    }
}

fn evidence_of(
    dom: &DomainSpec,
    p: &Point,
    q: &Point,
    families: usize,
    doublings: usize,
    seed: u64,
) -> Result<Vec<Vec<Evidence>>> {
    let mut out = Vec::new();
    for family in 0..families.max(1) {
        if let Some(rows) = family_evidence(dom, p, q, family, doublings, seed)? {
            out.push(rows);
        }
    }
    Ok(out)
}

fn distances(rows: &[Evidence]) -> Vec<f64> {
    rows.iter().map(|e| e.closest_approach).collect()
}

/// Tests `families` sequences of segments joining `r_k p` and `r_k q`.
/// Finite radius only when every family stays bounded; Escaping as soon as
/// one family escapes beyond `max(k_radius, ESCAPE_RADIUS)`.
pub fn strong_visibility_probe(
    dom: &DomainSpec,
    p: &Point,
    q: &Point,
    k_radius: f64,
    families: usize,
    budget: usize,
) -> Result<VisibilityVerdict> {
    check_pair(dom, p, q)?;
    let doublings = budget.clamp(1, PROBE_DOUBLINGS);
    let threshold = k_radius.max(ESCAPE_RADIUS);
    let all = evidence_of(dom, p, q, families, doublings, 0)?;
    let verdicts: Vec<Approach> = all.iter().map(|rows| classify_sequence(&distances(rows), threshold)).collect();
    let approach = if verdicts.contains(&Approach::Escaping) {
        Approach::Escaping
    } else if verdicts.contains(&Approach::Inconclusive) {
        Approach::Inconclusive
    } else {
        Approach::Finite(verdicts.iter().filter_map(Approach::radius).fold(0.0, f64::max))
    };
    let evidence = all.into_iter().flatten().collect();
    Ok(VisibilityVerdict { p: p.clone(), q: q.clone(), mode: VisibilityMode::Strong, approach, evidence })
}

/// Searches the same families as the strong probe for one that stays in a
/// fixed ball; the verdict is the smallest such radius. Without one, the
/// per-`k` best approaches decide between Escaping and Inconclusive.
pub fn essential_visibility_probe(dom: &DomainSpec, p: &Point, q: &Point, budget: usize) -> Result<VisibilityVerdict> {
    essential_with_families(dom, p, q, ESSENTIAL_FAMILIES, budget)
}

/// Families searched by [`essential_visibility_probe`].
pub const ESSENTIAL_FAMILIES: usize = 4;

pub(crate) fn essential_with_families(
    dom: &DomainSpec,
    p: &Point,
    q: &Point,
    families: usize,
    budget: usize,
) -> Result<VisibilityVerdict> {
    check_pair(dom, p, q)?;
    let doublings = budget.clamp(1, PROBE_DOUBLINGS);
    let all = evidence_of(dom, p, q, families, doublings, 0)?;
    let mut best: Option<f64> = None;
    for rows in &all {
        if let Approach::Finite(r) = classify_sequence(&distances(rows), ESCAPE_RADIUS) {
            best = Some(best.map_or(r, |b: f64| b.min(r)));
        }
    }
    let mut per_k: Vec<Evidence> = Vec::new();
    for rows in &all {
        for e in rows {
            match per_k.iter_mut().find(|b| b.k == e.k) {
                Some(b) if e.closest_approach < b.closest_approach => *b = e.clone(),
                Some(_) => {}
                None => per_k.push(e.clone()),
            }
        }
    }
    per_k.sort_by_key(|e| e.k);
    let approach = match best {
        Some(r) => Approach::Finite(r),
        None => match classify_sequence(&distances(&per_k), ESCAPE_RADIUS) {
            Approach::Escaping => Approach::Escaping,
            _ => Approach::Inconclusive,
        },
    };
    Ok(VisibilityVerdict { p: p.clone(), q: q.clone(), mode: VisibilityMode::Essential, approach, evidence: per_k })
}

/// Polar grid of the disc used by the complex probe.
const COMPLEX_RADII: usize = 48;
const COMPLEX_ANGLES: usize = 64;

/// Closest approach of the whole disc `phi(D)` to `base`: the polar grid and
/// the refined real segment `[0, span]`.
fn disc_approach(phi: &ComplexGeodesic, base: &Point) -> ClosestApproach {
    let dom = phi.domain();
    let span = phi.span();
    let segment = grid_min(
        |t| model_distance(dom, &phi.phi(c((t * span.atanh()).tanh(), 0.0)), base),
        1.0,
        APPROACH_GRID,
        APPROACH_TOL,
    );
    let mut best = segment;
    for i in 1..=COMPLEX_RADII {
        let rho = (3.0 * i as f64 / COMPLEX_RADII as f64).tanh();
        for j in 0..COMPLEX_ANGLES {
            let zeta = num_complex::Complex::from_polar(rho, std::f64::consts::TAU * j as f64 / COMPLEX_ANGLES as f64);
            let d = model_distance(dom, &phi.phi(zeta), base);
            if d < best.distance {
                best = ClosestApproach { distance: d, t: f64::NAN };
            }
        }
    }
    best
}

/// Complex geodesics through `r_k p` and `r_k q`; the verdict is on the
/// closest approach of the whole disc.
pub fn complex_visibility_probe(dom: &DomainSpec, p: &Point, q: &Point, budget: usize) -> Result<VisibilityVerdict> {
    check_pair(dom, p, q)?;
    let base = dom.center();
    let doublings = budget.clamp(1, PROBE_DOUBLINGS);
    let evidence: Vec<Evidence> = (1..=doublings)
        .into_par_iter()
        .map(|k| {
            let (z, w) = (radial_sequence(dom, p, k), radial_sequence(dom, q, k));
            let phi = ComplexGeodesic::through(dom, &z, &w)?;
            let a = disc_approach(&phi, &base);
            let r_k = 1.0 - 0.5f64.powi(k as i32);
            Ok(Evidence { family: 0, k, r_k, closest_approach: a.distance, argmin_t: a.t })
        })
        .collect::<Result<_>>()?;
    let approach = classify_sequence(&distances(&evidence), ESCAPE_RADIUS);
    Ok(VisibilityVerdict { p: p.clone(), q: q.clone(), mode: VisibilityMode::Complex, approach, evidence })
}

/// Boundary cluster representatives of a path family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSetEstimate {
    /// Representatives, projected onto the boundary.
    pub points: Vec<Point>,
    /// Near-boundary samples closest to each representative.
    pub multiplicity: Vec<usize>,
    /// Index of the path that contributed each representative.
    pub source: Vec<usize>,
    pub eps_cluster: f64,
    pub h_cluster: f64,
}

/// Samples per path in [`limit_set_estimate`].
pub const LIMIT_SET_SAMPLES: usize = 2048;

/// Clusters the samples of `paths` within `CLUSTER_EPS * diam` of the
/// boundary by farthest-point sampling at resolution `CLUSTER_H * diam`.
pub fn limit_set_estimate(paths: &[GeodesicPath]) -> Result<LimitSetEstimate> {
    let Some(first) = paths.first() else {
        return Err(Error::InvalidArgument("no paths given".into()));
    };
    let dom = first.domain();
    if paths.iter().any(|p| p.domain() != dom) {
        return Err(Error::InvalidArgument("paths lie in different domains".into()));
    }
    let diam = dom.diameter();
    let (eps, h) = (CLUSTER_EPS * diam, CLUSTER_H * diam);
    let near: Vec<(usize, Point)> = paths
        .iter()
        .enumerate()
        .flat_map(|(i, path)| {
            (0..=LIMIT_SET_SAMPLES)
                .map(move |j| (i, path.sample(path.span() * j as f64 / LIMIT_SET_SAMPLES as f64)))
                .filter(|(_, z)| dom.margin(z) <= eps)
        })
        .collect();
    let mut reps: Vec<usize> = Vec::new();
    // distance of each sample to the chosen representatives
    let mut gap = vec![f64::INFINITY; near.len()];
    let mut next = if near.is_empty() { None } else { Some(0) };
    while let Some(i) = next {
        reps.push(i);
        gap.par_iter_mut().zip(near.par_iter()).for_each(|(g, (_, z))| *g = g.min(z.dist(&near[i].1)));
        next = gap.iter().enumerate().filter(|(_, g)| **g > h).max_by(|a, b| a.1.total_cmp(b.1)).map(|(j, _)| j);
    }
    let mut multiplicity = vec![0; reps.len()];
    for (_, z) in &near {
        let nearest =
            (0..reps.len()).min_by(|a, b| z.dist(&near[reps[*a]].1).total_cmp(&z.dist(&near[reps[*b]].1))).unwrap_or(0);
        multiplicity[nearest] += 1;
    }
    Ok(LimitSetEstimate {
        points: reps.iter().map(|i| dom.nearest_boundary_point(&near[*i].1)).collect(),
        source: reps.iter().map(|i| near[*i].0).collect(),
        multiplicity,
        eps_cluster: eps,
        h_cluster: h,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairCase {
    /// The open segment lies in the domain.
    Case1,
    /// The segment lies in the boundary and the complex line misses the domain.
    Case2,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairClassification {
    pub i: usize,
    pub j: usize,
    pub case: PairCase,
    pub segment: SegmentLocation,
    /// Largest membership margin found on the complex line through the pair.
    pub line_margin: f64,
    /// Line point attaining it, kept for violations.
    pub witness: Option<Point>,
}

/// Classifies every pair of limit-set points.
pub fn conjecture1_classify(dom: &DomainSpec, gamma: &LimitSetEstimate) -> Result<Vec<PairClassification>> {
    if gamma.points.is_empty() {
        return Err(Error::InvalidArgument("empty limit set".into()));
    }
    let pts = &gamma.points;
    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
        .filter(|(i, j)| pts[*i] != pts[*j])
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let segment = dom.segment_location(&pts[i], &pts[j])?;
            if segment == SegmentLocation::Interior {
                return Ok(PairClassification {
                    i,
                    j,
                    case: PairCase::Case1,
                    segment,
                    line_margin: f64::NAN,
                    witness: None,
                });
            }
            let line = dom.complex_line_disjoint(&pts[i], &pts[j])?;
            let case = if segment == SegmentLocation::Boundary && line.disjoint {
                PairCase::Case2
            } else {
                PairCase::Violation
            };
            let witness = (case == PairCase::Violation).then_some(line.witness);
            Ok(PairClassification { i, j, case, segment, line_margin: line.max_margin, witness })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::bidisc_example_segment;

    fn pt(xs: &[f64]) -> Point {
        Point::real(xs)
    }

    fn oracle(r: f64) -> f64 {
        ((1.0 - (1.0 - r * r).sqrt()) / r).atanh()
    }

    #[test]
    fn closest_approach_of_the_bidisc_example() {
        let base = pt(&[0.0, 0.0]);
        for r in [0.9, 0.9999] {
            let a = closest_approach(&bidisc_example_segment(r).unwrap(), &base).unwrap();
            assert!((a.distance - oracle(r)).abs() < 1e-9, "{r}: {} vs {}", a.distance, oracle(r));
            let t_star = (1.0 - (1.0 - r * r).sqrt()) / (2.0 * r * r);
            assert!((a.t - t_star).abs() < 1e-6);
        }
        assert!((oracle(0.9) - 0.736_11).abs() < 1e-5 && (oracle(0.9999) - 2.476).abs() < 1e-3);
    }

    #[test]
    fn radial_segment_through_the_base() {
        let dom = DomainSpec::Polydisc(1);
        let path = geodesic_segment(&dom, &pt(&[-0.5]), &pt(&[0.5]), &BracketOptions::default()).unwrap();
        let a = closest_approach(&path, &pt(&[0.0])).unwrap();
        assert!(a.distance < 1e-12 && (a.t - 0.5).abs() < 1e-9);
    }

    #[test]
    fn strong_probe_examples() {
        let v =
            strong_visibility_probe(&DomainSpec::Polydisc(2), &pt(&[-1.0, 0.0]), &pt(&[1.0, 0.0]), 1.0, 2, 20).unwrap();
        assert_eq!(v.approach, Approach::Escaping);
        let v = strong_visibility_probe(&DomainSpec::Polydisc(1), &pt(&[-1.0]), &pt(&[1.0]), 1.0, 2, 20).unwrap();
        assert!(v.approach.radius().unwrap() < 1e-9);
        let v = strong_visibility_probe(&DomainSpec::Ball(2), &pt(&[1.0, 0.0]), &pt(&[-1.0, 0.0]), 1.0, 3, 20).unwrap();
        assert!(v.approach.radius().unwrap() < 1e-9);
    }

    #[test]
    fn essential_probe_examples() {
        let bidisc = DomainSpec::Polydisc(2);
        let v = essential_visibility_probe(&bidisc, &pt(&[-1.0, 0.0]), &pt(&[1.0, 0.0]), 20).unwrap();
        assert_eq!(v.evidence.len(), 20);
        assert!(v.approach.radius().unwrap() <= 1.0);
        let v = essential_visibility_probe(&bidisc, &pt(&[1.0, 0.0]), &pt(&[1.0, 0.5]), 20).unwrap();
        assert_eq!(v.approach, Approach::Escaping);
        let v = essential_visibility_probe(&DomainSpec::Ball(2), &pt(&[1.0, 0.0]), &pt(&[-1.0, 0.0]), 20).unwrap();
        assert!(v.approach.radius().unwrap() < 1e-9);
    }

    #[test]
    fn complex_probe_examples() {
        let v = complex_visibility_probe(&DomainSpec::Polydisc(2), &pt(&[-1.0, 0.0]), &pt(&[1.0, 0.0]), 20).unwrap();
        assert!(v.approach.radius().unwrap() < 1e-9);
        let v = complex_visibility_probe(&DomainSpec::Ball(2), &pt(&[1.0, 0.0]), &pt(&[-1.0, 0.0]), 20).unwrap();
        assert!(v.approach.radius().unwrap() < 1e-9);
        assert!(complex_visibility_probe(&DomainSpec::Ball(2), &pt(&[1.0, 0.0]), &pt(&[1.0, 0.0]), 20).is_err());
    }

    #[test]
    fn hulls_and_interior_points_are_rejected() {
        let h = crate::domains::FunctionalHull::ball_approximation(2, 16, 1).unwrap();
        let dom = DomainSpec::Hull(h);
        let p = dom.nearest_boundary_point(&pt(&[0.9, 0.0]));
        let q = dom.nearest_boundary_point(&pt(&[-0.9, 0.0]));
        assert!(matches!(strong_visibility_probe(&dom, &p, &q, 1.0, 1, 5), Err(Error::NotImplemented(_))));
        let err = strong_visibility_probe(&DomainSpec::Ball(2), &pt(&[0.5, 0.0]), &pt(&[-1.0, 0.0]), 1.0, 1, 5);
        assert!(matches!(err, Err(Error::NotOnBoundary { .. })));
    }

    fn example_family() -> Vec<GeodesicPath> {
        (1..=20).map(|k| bidisc_example_segment(1.0 - 0.5f64.powi(k)).unwrap()).collect()
    }

    #[test]
    fn limit_set_of_the_example_family() {
        let dom = DomainSpec::Polydisc(2);
        let gamma = limit_set_estimate(&example_family()).unwrap();
        assert!(gamma.points.len() > 10);
        let mut edges = [false; 3];
        for p in &gamma.points {
            assert!(dom.margin(p).abs() <= dom.tol_bd());
            assert!(p[0].im.abs() < 1e-12 && p[1].im.abs() < 1e-12 && p[1].re >= -1e-9);
            edges[0] |= (p[0].re + 1.0).abs() < 1e-9;
            edges[1] |= (p[1].re - 1.0).abs() < 1e-9;
            edges[2] |= (p[0].re - 1.0).abs() < 1e-9;
        }
        assert_eq!(edges, [true; 3]);
        let classes = conjecture1_classify(&dom, &gamma).unwrap();
        assert!(classes.iter().all(|c| c.case != PairCase::Violation));
        assert!(classes.iter().any(|c| c.case == PairCase::Case1) && classes.iter().any(|c| c.case == PairCase::Case2));
    }

    #[test]
    fn compact_path_has_an_empty_limit_set() {
        let path =
            geodesic_segment(&DomainSpec::Ball(2), &pt(&[0.0, 0.0]), &pt(&[0.5, 0.0]), &BracketOptions::default())
                .unwrap();
        assert!(limit_set_estimate(&[path]).unwrap().points.is_empty());
    }

    #[test]
    fn classification_examples() {
        let dom = DomainSpec::Polydisc(2);
        let gamma = |pts: Vec<Point>| LimitSetEstimate {
            multiplicity: vec![1; pts.len()],
            source: vec![0; pts.len()],
            points: pts,
            eps_cluster: 0.0,
            h_cluster: 0.0,
        };
        let case = |a: &[f64], b: &[f64]| conjecture1_classify(&dom, &gamma(vec![pt(a), pt(b)])).unwrap()[0].case;
        assert_eq!(case(&[-1.0, 0.0], &[1.0, 1.0]), PairCase::Case1);
        assert_eq!(case(&[1.0, 0.0], &[1.0, 1.0]), PairCase::Case2);
        assert_eq!(case(&[-1.0, 1.0], &[1.0, 1.0]), PairCase::Case2);
    }

    #[test]
    fn escape_rule() {
        let grow: Vec<f64> = (0..10).map(|i| 0.5 * i as f64).collect();
        assert_eq!(classify_sequence(&grow, 2.0), Approach::Escaping);
        let slow: Vec<f64> = (0..10).map(|i| 0.1 * i as f64).collect();
        assert_eq!(classify_sequence(&slow, 2.0), Approach::Inconclusive);
        assert_eq!(classify_sequence(&[0.3, 0.2, 0.3], 2.0), Approach::Finite(0.3));
    }
}
