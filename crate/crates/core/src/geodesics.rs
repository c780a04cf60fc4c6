//! Complex geodesics, geodesic segments and rays.
//!
//! On the model domains every construction goes through the leaves of the
//! domain (balls and discs). In the leaf `B` the disc is
//! `zeta -> Phi_{z_B}(scale_B zeta dir_B)` with `Phi_a` the involutive ball
//! automorphism swapping `a` and 0. The leaf with the largest pseudo-distance
//! has scale 1 and carries the isometry; the other leaves are contracted by
//! `zeta -> scale zeta`, so the product disc is an isometry for the max rule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::metric::{
    ball_automorphism, caratheodory_lower_bound, distance_estimate, model_distance, AnalyticDisc, BracketOptions,
};
use crate::point::{c, Point, C64};

/// Parameter span on which rays are checked and sampled.
pub const RAY_CHECK_SPAN: f64 = 6.0;
/// Default number of Chebyshev-spaced triples in [`check_geodesic`].
pub const CHECK_TRIPLES: usize = 64;

/// A ball or disc factor of a model domain: `(offset, dim)`.
fn leaves(dom: &DomainSpec) -> Result<Vec<(usize, usize)>> {
    fn walk(dom: &DomainSpec, off: usize, out: &mut Vec<(usize, usize)>) -> Result<()> {
        match dom {
            DomainSpec::Ball(n) => out.push((off, *n)),
            DomainSpec::Polydisc(n) => out.extend((0..*n).map(|j| (off + j, 1))),
            DomainSpec::Product(fs) => {
                let mut o = off;
                for f in fs {
                    walk(f, o, out)?;
                    o += f.dim();
                }
            }
            DomainSpec::Hull(_) => {
                return Err(Error::NotImplemented("complex geodesics of functional hulls".into()));
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(dom, 0, &mut out)?;
    Ok(out)
}

fn first_axis(dim: usize) -> Point {
    let mut e = Point::zeros(dim);
    e[0] = c(1.0, 0.0);
    e
}

#[derive(Debug, Clone, PartialEq)]
struct Leaf {
    offset: usize,
    center: Point,
    dir: Point,
    scale: f64,
}

impl Leaf {
    fn eval(&self, zeta: C64) -> Point {
        ball_automorphism(&self.center, &self.dir.scale(zeta * self.scale))
    }
}

/// Holomorphic isometry `phi: D -> Omega` with left inverse `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGeodesic {
    dom: DomainSpec,
    leaves: Vec<Leaf>,
    extremal: usize,
    /// `phi(span) = w` for discs built through two points; 1 for rays.
    span: f64,
}

impl ComplexGeodesic {
    /// Leaves with targets `Phi_{z_B}(target_B)` and their moduli.
    fn build(dom: &DomainSpec, z: &Point, target: &Point) -> Result<(Vec<Leaf>, Vec<f64>)> {
        let mut out = Vec::new();
        let mut moduli = Vec::new();
        for (off, dim) in leaves(dom)? {
            let center = z.slice(off, dim);
            let y = ball_automorphism(&center, &target.slice(off, dim));
            let s = y.norm().min(1.0);
            let dir = if s > 0.0 { y.scale_re(1.0 / y.norm()) } else { first_axis(dim) };
            out.push(Leaf { offset: off, center, dir, scale: s });
            moduli.push(s);
        }
        Ok((out, moduli))
    }

    fn normalize(dom: &DomainSpec, mut leaves: Vec<Leaf>, moduli: &[f64], span: f64) -> Self {
        // strict comparison keeps the lowest index on ties
        let mut extremal = 0;
        for (i, s) in moduli.iter().enumerate() {
            if *s > moduli[extremal] {
                extremal = i;
            }
        }
        let top = moduli[extremal];
        for leaf in &mut leaves {
            leaf.scale = if top > 0.0 { leaf.scale / top } else { 0.0 };
        }
        leaves[extremal].scale = 1.0;
        Self { dom: dom.clone(), leaves, extremal, span }
    }

    /// Complex geodesic with `phi(0) = z` and `phi(span) = w`.
    pub fn through(dom: &DomainSpec, z: &Point, w: &Point) -> Result<Self> {
        dom.require_inside(z)?;
        dom.require_inside(w)?;
        if z == w {
            return Err(Error::InvalidArgument("points must differ".into()));
        }
        let (leaves, moduli) = Self::build(dom, z, w)?;
        let span = moduli.iter().copied().fold(0.0, f64::max);
        if span >= 1.0 {
            return Err(Error::InvalidArgument("points too close to the boundary to separate".into()));
        }
        Ok(Self::normalize(dom, leaves, &moduli, span))
    }

    /// Complex geodesic with `phi(0) = z0` whose radius `[0, 1)` lands at the
    /// boundary point `p`.
    pub fn toward(dom: &DomainSpec, z0: &Point, p: &Point) -> Result<Self> {
        dom.require_inside(z0)?;
        p.check_dim(dom.dim())?;
        let tol = dom.tol_bd();
        let m = dom.margin(p);
        if m.abs() > tol {
            return Err(Error::NotOnBoundary { distance: m.abs(), tol });
        }
        let (leaves, moduli) = Self::build(dom, z0, p)?;
        Ok(Self::normalize(dom, leaves, &moduli, 1.0))
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.dom
    }

    /// Parameter of the second point (`w`, or 1 for a disc toward a boundary point).
    pub fn span(&self) -> f64 {
        self.span
    }

    /// Offset of the leaf carrying the isometry.
    pub fn extremal_offset(&self) -> usize {
        self.leaves[self.extremal].offset
    }

    pub fn phi(&self, zeta: C64) -> Point {
        let mut out = Point::zeros(self.dom.dim());
        for leaf in &self.leaves {
            let v = leaf.eval(zeta);
            out.0[leaf.offset..leaf.offset + v.dim()].copy_from_slice(v.coords());
        }
        out
    }

    /// Left inverse: the extremal leaf, moved to the origin and projected on
    /// the disc direction.
    pub fn rho(&self, z: &Point) -> C64 {
        let leaf = &self.leaves[self.extremal];
        let x = z.slice(leaf.offset, leaf.center.dim());
        ball_automorphism(&leaf.center, &x).inner(&leaf.dir)
    }
}

/// Construction entry point named after the operation it implements.
pub fn complex_geodesic_through(dom: &DomainSpec, z: &Point, w: &Point) -> Result<ComplexGeodesic> {
    ComplexGeodesic::through(dom, z, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Segment,
    Ray,
}

#[derive(Debug, Clone)]
enum Curve {
    Constant(Point),
    /// `phi(tanh(t length))`.
    Complex {
        phi: ComplexGeodesic,
        length: f64,
    },
    /// As `Complex`, with the leaf at `offset` replaced by an excursion
    /// `Phi_center(-tanh(min(t, 1 - t) length) dir)`, which leaves along `dir`.
    Tent {
        phi: ComplexGeodesic,
        length: f64,
        offset: usize,
        center: Point,
        dir: Point,
    },
    /// The explicit bidisc curve between `(-r, 0)` and `(r, 0)`.
    Bidisc {
        r: f64,
    },
    /// `h(tanh(t length))` for a polynomial disc `h`.
    Disc {
        disc: AnalyticDisc,
        length: f64,
    },
}

/// Parametrized curve in a domain: `[0, 1]` for segments, `[0, inf)` for rays.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    dom: DomainSpec,
    kind: PathKind,
    defect: f64,
    curve: Curve,
}

impl GeodesicPath {
    fn new(dom: &DomainSpec, kind: PathKind, curve: Curve) -> Self {
        Self { dom: dom.clone(), kind, defect: 0.0, curve }
    }

    /// Builds the path and sets its defect from [`check_geodesic`].
    fn checked(dom: &DomainSpec, kind: PathKind, curve: Curve) -> Self {
        let mut path = Self::new(dom, kind, curve);
        path.defect = check_geodesic(&path, CHECK_TRIPLES);
        path
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.dom
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    /// Certified geodesic defect.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn sample(&self, t: f64) -> Point {
        match &self.curve {
            Curve::Constant(z) => z.clone(),
            Curve::Complex { phi, length } => phi.phi(c((t * length).tanh(), 0.0)),
            Curve::Tent { phi, length, offset, center, dir } => {
                let mut z = phi.phi(c((t * length).tanh(), 0.0));
                let height = (t.min(1.0 - t).max(0.0) * length).tanh();
                let v = ball_automorphism(center, &dir.scale_re(-height));
                z.0[*offset..offset + v.dim()].copy_from_slice(v.coords());
                z
            }
            Curve::Bidisc { r } => {
                let (r, t) = (*r, t.clamp(0.0, 1.0));
                // second branch mirrors the first: gamma(t) = (-x(1-t), y(1-t))
                let (s, sign) = if t <= 0.5 { (t, 1.0) } else { (1.0 - t, -1.0) };
                let x = r * (2.0 * s - 1.0) / (1.0 - 2.0 * r * r * s);
                Point(vec![c(sign * x, 0.0), c(2.0 * s * r, 0.0)])
            }
            Curve::Disc { disc, length } => disc.eval(c((t * length).tanh(), 0.0)),
        }
    }

    /// Parameter interval used for checks and sampling.
    pub fn span(&self) -> f64 {
        match self.kind {
            PathKind::Segment => 1.0,
            PathKind::Ray => RAY_CHECK_SPAN,
        }
    }
}

/// One exported sample of a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub t: f64,
    pub z: Point,
    pub boundary_distance: f64,
    /// Kobayashi distance to the start of the path (bracket midpoint on hulls).
    pub distance_to_start: f64,
}

impl GeodesicPath {
    /// `samples + 1` equispaced rows on the parameter span.
    pub fn table(&self, samples: usize) -> Vec<PathRow> {
        let samples = samples.max(1);
        let start = self.sample(0.0);
        (0..=samples)
            .map(|i| {
                let t = self.span() * i as f64 / samples as f64;
                let z = self.sample(t);
                PathRow {
                    t,
                    boundary_distance: self.dom.margin(&z),
                    distance_to_start: path_distance(&self.dom, &start, &z).0,
                    z,
                }
            })
            .collect()
    }
}

/// Geodesic segment from `z` to `w`. Models: the Poincare segment `[0, span]`
/// in a complex geodesic, at constant Kobayashi speed. Hulls: the best
/// polynomial disc of the upper bound on the same segment, with the bracket
/// gap as defect.
pub fn geodesic_segment(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions) -> Result<GeodesicPath> {
    dom.require_inside(z)?;
    dom.require_inside(w)?;
    if z == w {
        return Ok(GeodesicPath::new(dom, PathKind::Segment, Curve::Constant(z.clone())));
    }
    match dom {
        DomainSpec::Hull(h) => {
            let lo = caratheodory_lower_bound(dom, z, w, opts)?;
            let up = crate::metric::polynomial_disc_bound(h, z, w, opts, lo);
            let Some((disc, t)) = up.disc else {
                return Err(Error::Inconclusive("no polynomial disc through both points was found".into()));
            };
            let mut path = GeodesicPath::new(dom, PathKind::Segment, Curve::Disc { disc, length: t.atanh() });
            path.defect = (up.value - lo).max(0.0);
            Ok(path)
        }
        _ if dom.is_model() => {
            let phi = ComplexGeodesic::through(dom, z, w)?;
            let length = phi.span().atanh();
            Ok(GeodesicPath::checked(dom, PathKind::Segment, Curve::Complex { phi, length }))
        }
        _ => Err(Error::NotImplemented("products containing functional hulls".into())),
    }
}

/// Segment from `z` to `w` whose leaf at `offset` (where `z` and `w` agree)
/// leaves its base point in direction `dir` and returns, reaching Kobayashi
/// height half the length at the midpoint. A geodesic, since the excursion
/// never outpaces the extremal leaf.
pub fn tent_segment(dom: &DomainSpec, z: &Point, w: &Point, offset: usize, dir: &Point) -> Result<GeodesicPath> {
    let phi = ComplexGeodesic::through(dom, z, w)?;
    let leaf = phi
        .leaves
        .iter()
        .position(|l| l.offset == offset)
        .ok_or_else(|| Error::InvalidArgument(format!("no leaf starts at coordinate {offset}")))?;
    if leaf == phi.extremal || phi.leaves[leaf].scale > 0.0 {
        return Err(Error::InvalidArgument("the excursion leaf must be constant along the segment".into()));
    }
    let center = phi.leaves[leaf].center.clone();
    dir.check_dim(center.dim())?;
    let dir = dir.scale_re(1.0 / dir.norm());
    let length = phi.span().atanh();
    Ok(GeodesicPath::checked(dom, PathKind::Segment, Curve::Tent { phi, length, offset, center, dir }))
}

/// The bidisc curve between `(-r, 0)` and `(r, 0)` through `(0, r)`, with
/// `k(gamma(0), gamma(t)) = artanh(2 r t)` on the first half.
pub fn bidisc_example_segment(r: f64) -> Result<GeodesicPath> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r must lie in (0, 1), got {r}")));
    }
    Ok(GeodesicPath::checked(&DomainSpec::Polydisc(2), PathKind::Segment, Curve::Bidisc { r }))
}

/// Unit-speed geodesic ray from `z0` landing at the boundary point `p`.
pub fn geodesic_ray(dom: &DomainSpec, z0: &Point, p: &Point) -> Result<GeodesicPath> {
    if !dom.is_model() {
        return Err(Error::NotImplemented("geodesic rays of functional hulls".into()));
    }
    let phi = ComplexGeodesic::toward(dom, z0, p)?;
    Ok(GeodesicPath::checked(dom, PathKind::Ray, Curve::Complex { phi, length: 1.0 }))
}

/// Chebyshev-Lobatto nodes on `[0, span]`, endpoints included.
fn chebyshev_nodes(n: usize, span: f64) -> Vec<f64> {
    (0..n + 2).map(|k| 0.5 * span * (1.0 - (std::f64::consts::PI * k as f64 / (n + 1) as f64).cos())).collect()
}

fn path_distance(dom: &DomainSpec, z: &Point, w: &Point) -> (f64, f64) {
    if dom.is_model() {
        (model_distance(dom, z, w), 0.0)
    } else {
        distance_estimate(dom, z, w, &BracketOptions::default())
    }
}

/// Largest additivity defect `|k(s,u) + k(u,t) - k(s,t)|` over `triples`
/// Chebyshev-spaced triples: consecutive node triples and (start, node, end).
/// Exact distances on models; bracket midpoints otherwise, with the gaps added.
pub fn check_geodesic(path: &GeodesicPath, triples: usize) -> f64 {
    check_geodesic_on(path, &chebyshev_nodes(triples, path.span()))
}

/// As [`check_geodesic`], on an arbitrary increasing grid.
pub fn check_geodesic_on(path: &GeodesicPath, nodes: &[f64]) -> f64 {
    if let Curve::Constant(_) = path.curve {
        return 0.0;
    }
    let pts: Vec<Point> = nodes.iter().map(|t| path.sample(*t)).collect();
    let d = |i: usize, j: usize| path_distance(&path.dom, &pts[i], &pts[j]);
    let last = pts.len() - 1;
    let mut worst: f64 = 0.0;
    for k in 1..last {
        for (s, t) in [(k - 1, k + 1), (0, last)] {
            let (a, ga) = d(s, k);
            let (b, gb) = d(k, t);
            let (ab, gab) = d(s, t);
            let defect = (a + b - ab).abs() + 0.5 * (ga + gb + gab);
            worst = worst.max(if defect.is_nan() { f64::INFINITY } else { defect });
        }
    }
    worst
}

/// Empirical modulus of continuity of a family of rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquicontinuityTable {
    pub deltas: Vec<f64>,
    /// `omega[i]`: largest Euclidean displacement over parameter gaps `<= deltas[i]`.
    pub omega: Vec<f64>,
    /// Per-ray displacement rate at the smallest gap.
    pub ray_rates: Vec<f64>,
    /// Set when one ray's rate exceeds ten times the median rate.
    pub flagged: bool,
}

/// Samples `rays` unit-speed rays from `z0` toward seeded boundary points and
/// tabulates `omega(delta)` on a log mesh of `mesh` gaps in `[1e-3, 1]`.
pub fn equicontinuity_probe(
    dom: &DomainSpec,
    z0: &Point,
    rays: usize,
    mesh: usize,
    seed: u64,
) -> Result<EquicontinuityTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<Point> = (0..rays).map(|_| dom.sample_boundary(&mut rng)).collect();
    equicontinuity_of(dom, z0, &targets, mesh)
}

/// As [`equicontinuity_probe`], toward the given boundary points.
pub fn equicontinuity_of(dom: &DomainSpec, z0: &Point, targets: &[Point], mesh: usize) -> Result<EquicontinuityTable> {
    const GRID: usize = 2048;
    let mesh = mesh.max(1);
    let h = RAY_CHECK_SPAN / GRID as f64;
    let deltas: Vec<f64> =
        (0..mesh).map(|i| if mesh == 1 { 1.0 } else { 1e-3 * 1e3f64.powf(i as f64 / (mesh - 1) as f64) }).collect();
    let mut omega = vec![0.0; mesh];
    let mut ray_rates = Vec::with_capacity(targets.len());
    for p in targets {
        let ray = geodesic_ray(dom, z0, p)?;
        let pts: Vec<Point> = (0..=GRID).map(|i| ray.sample(i as f64 * h)).collect();
        let mut by_lag = vec![0.0f64; GRID + 1];
        let max_lag = ((deltas[mesh - 1] / h).floor() as usize).min(GRID);
        for lag in 1..=max_lag {
            by_lag[lag] = (0..=GRID - lag).map(|i| pts[i].dist(&pts[i + lag])).fold(by_lag[lag - 1], f64::max);
        }
        for (i, delta) in deltas.iter().enumerate() {
            let lag = ((delta / h).floor() as usize).min(max_lag);
            omega[i] = f64::max(omega[i], by_lag[lag]);
        }
        let lag = ((deltas[0] / h).floor() as usize).clamp(1, max_lag.max(1));
        ray_rates.push(by_lag[lag] / (lag as f64 * h));
    }
    let mut sorted = ray_rates.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0);
    let flagged = ray_rates.iter().any(|r| *r > 10.0 * median);
    Ok(EquicontinuityTable { deltas, omega, ray_rates, flagged })
}
