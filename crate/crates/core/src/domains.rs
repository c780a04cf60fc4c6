//! Bounded convex domains: the unit ball, the polydisc, products of domains,
//! and finite intersections of real half-spaces ("functional hulls").

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{c, Point, C64};
use crate::tol::TOL_BD;

/// Real half-space `Re <z, normal> <= offset`, with an optional contact
/// point on the bounding hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunctional {
    pub normal: Point,
    pub offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<Point>,
}

impl SupportFunctional {
    /// The functional touching at `contact` with the given outward normal.
    pub fn at_contact(normal: Point, contact: Point) -> Self {
        let offset = contact.inner(&normal).re;
        Self { normal, offset, contact: Some(contact) }
    }

    /// Complex-linear part `<z, normal>`.
    pub fn linear(&self, z: &Point) -> C64 {
        z.inner(&self.normal)
    }

    /// `Re <z, normal> - offset`; non-positive on the closed domain.
    pub fn value(&self, z: &Point) -> f64 {
        self.linear(z).re - self.offset
    }

    /// Signed Euclidean distance to the hyperplane, positive on the inner side.
    pub fn margin(&self, z: &Point) -> f64 {
        -self.value(z) / self.normal.norm()
    }
}

/// Intersection of finitely many half-spaces, certified bounded by a declared
/// coordinate box `|Re z_j|, |Im z_j| < bound` which is part of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalHull {
    dim: usize,
    functionals: Vec<SupportFunctional>,
    interior: Point,
    bound: f64,
    /// User functionals followed by the 4N box faces.
    constraints: Vec<SupportFunctional>,
}

impl FunctionalHull {
    pub fn new(dim: usize, functionals: Vec<SupportFunctional>, interior: Point, bound: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidDomain("bounding box must be positive and finite".into()));
        }
        interior.check_dim(dim)?;
        if !interior.is_finite() {
            return Err(Error::NonFinite);
        }
        for (i, f) in functionals.iter().enumerate() {
            f.normal.check_dim(dim)?;
            if f.normal.norm() == 0.0 || !f.normal.is_finite() || !f.offset.is_finite() {
                return Err(Error::InvalidDomain(format!("functional {i} is degenerate")));
            }
            if f.value(&interior) >= 0.0 {
                return Err(Error::InvalidDomain(format!(
                    "functional {i} is not strictly negative at the interior point"
                )));
            }
            if let Some(contact) = &f.contact {
                contact.check_dim(dim)?;
                let scale = 1.0 + f.offset.abs();
                if f.value(contact).abs() > 1e-9 * scale {
                    return Err(Error::InvalidDomain(format!("functional {i} does not vanish at its contact")));
                }
            }
        }
        let mut constraints = functionals.clone();
        for j in 0..dim {
            for unit in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
                let mut n = Point::zeros(dim);
                n[j] = unit;
                constraints.push(SupportFunctional { normal: n, offset: bound, contact: None });
            }
        }
        let hull = Self { dim, functionals, interior, bound, constraints };
        if hull.margin(&hull.interior) <= 0.0 {
            return Err(Error::InvalidDomain("interior point is outside the bounding box".into()));
        }
        Ok(hull)
    }

    /// Hull of the hyperplanes tangent to the unit sphere of C^N at the given
    /// directions (normalized). The 4N coordinate directions are always
    /// included first so the hull sits inside the unit box.
    pub fn circumscribed_ball(dim: usize, extra_directions: &[Point]) -> Result<Self> {
        let mut dirs = Vec::new();
        for j in 0..dim {
            for unit in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
                let mut n = Point::zeros(dim);
                n[j] = unit;
                dirs.push(n);
            }
        }
        for d in extra_directions {
            d.check_dim(dim)?;
            dirs.push(d.scale_re(1.0 / d.norm()));
        }
        let functionals = dirs.into_iter().map(|u| SupportFunctional::at_contact(u.clone(), u)).collect();
        Self::new(dim, functionals, Point::zeros(dim), 1.0)
    }

    /// `facets`-facet circumscribed approximation of the unit ball with
    /// seeded random extra directions.
    pub fn ball_approximation(dim: usize, facets: usize, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        if facets < 4 * dim {
            return Err(Error::InvalidArgument(format!("need at least {} facets", 4 * dim)));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let extra: Vec<Point> = (0..facets - 4 * dim).map(|_| random_unit(dim, &mut rng)).collect();
        Self::circumscribed_ball(dim, &extra)
    }

    /// Circumscribed approximation of the unit ball of C^2 with normals
    /// `(cos a e^{is}, sin a e^{iu})` on a lattice: `axis_phases` phases on
    /// each coordinate axis (a multiple of 4) and `ring_phases.0 x
    /// ring_phases.1` phase pairs on each of `levels` interior values of `a`.
    /// Even phase counts make the hull invariant under `z_j -> -z_j`.
    pub fn lattice_ball_approximation(levels: usize, axis_phases: usize, ring_phases: (usize, usize)) -> Result<Self> {
        if axis_phases == 0 || !axis_phases.is_multiple_of(4) {
            return Err(Error::InvalidArgument("axis phases must be a positive multiple of 4".into()));
        }
        let tau = std::f64::consts::TAU;
        let mut extra = Vec::new();
        for axis in 0..2 {
            // the four coordinate directions are always present
            for k in (0..axis_phases).filter(|k| k % (axis_phases / 4) != 0) {
                let mut n = Point::zeros(2);
                n[axis] = C64::from_polar(1.0, tau * k as f64 / axis_phases as f64);
                extra.push(n);
            }
        }
        for level in 1..=levels {
            let a = 0.25 * tau * level as f64 / (levels + 1) as f64;
            for p in 0..ring_phases.0 {
                for q in 0..ring_phases.1 {
                    extra.push(Point(vec![
                        C64::from_polar(a.cos(), tau * p as f64 / ring_phases.0 as f64),
                        C64::from_polar(a.sin(), tau * q as f64 / ring_phases.1 as f64),
                    ]));
                }
            }
        }
        Self::circumscribed_ball(2, &extra)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functionals(&self) -> &[SupportFunctional] {
        &self.functionals
    }

    /// All half-spaces including the box faces.
    pub fn constraints(&self) -> &[SupportFunctional] {
        &self.constraints
    }

    pub fn interior(&self) -> &Point {
        &self.interior
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn margin(&self, z: &Point) -> f64 {
        self.constraints.iter().map(|f| f.margin(z)).fold(f64::INFINITY, f64::min)
    }

    /// Support function `max Re <z, dir>` over the closed hull (a linear program).
    pub fn support(&self, dir: &Point) -> f64 {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let mut vars = Vec::with_capacity(2 * self.dim);
        for d in dir.coords() {
            // Re(z conj(d)) = x d.re + y d.im
            vars.push(lp.add_var(d.re, (-self.bound, self.bound)));
            vars.push(lp.add_var(d.im, (-self.bound, self.bound)));
        }
        for f in &self.functionals {
            let row: Vec<_> = f
                .normal
                .coords()
                .iter()
                .enumerate()
                .flat_map(|(j, n)| [(vars[2 * j], n.re), (vars[2 * j + 1], n.im)])
                .collect();
            lp.add_constraint(row.as_slice(), ComparisonOp::Le, f.offset);
        }
        match lp.solve() {
            Ok(sol) => sol.objective(),
            // the box keeps the program feasible and bounded; fall back to the box bound
            Err(_) => self.bound * dir.coords().iter().map(|d| d.re.abs() + d.im.abs()).sum::<f64>(),
        }
    }
}

/// A bounded convex domain of C^N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub enum DomainSpec {
    Ball(usize),
    Polydisc(usize),
    Product(Vec<DomainSpec>),
    Hull(FunctionalHull),
}

/// Result of the complex-line test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineTest {
    pub disjoint: bool,
    /// Largest membership margin found along the line.
    pub max_margin: f64,
    /// Line point where it was attained.
    pub witness: Point,
    /// Always false: a multi-start search is evidence, not a proof.
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentLocation {
    Interior,
    Boundary,
    Mixed,
}

impl DomainSpec {
    pub fn product(factors: Vec<DomainSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDomain("product needs at least one factor".into()));
        }
        Ok(DomainSpec::Product(factors))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Ball(0) | DomainSpec::Polydisc(0) => {
                Err(Error::InvalidDomain("dimension must be positive".into()))
            }
            DomainSpec::Product(fs) if fs.is_empty() => {
                Err(Error::InvalidDomain("product needs at least one factor".into()))
            }
            DomainSpec::Product(fs) => fs.iter().try_for_each(|f| f.validate()),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball(n) | DomainSpec::Polydisc(n) => *n,
            DomainSpec::Product(fs) => fs.iter().map(|f| f.dim()).sum(),
            DomainSpec::Hull(h) => h.dim,
        }
    }

    /// Domains with closed-form Kobayashi distance.
    pub fn is_model(&self) -> bool {
        match self {
            DomainSpec::Ball(_) | DomainSpec::Polydisc(_) => true,
            DomainSpec::Product(fs) => fs.iter().all(|f| f.is_model()),
            DomainSpec::Hull(_) => false,
        }
    }

    /// Products whose factors are all one-dimensional discs.
    pub fn is_polydisc_like(&self) -> bool {
        match self {
            DomainSpec::Polydisc(_) | DomainSpec::Ball(1) => true,
            DomainSpec::Product(fs) => fs.iter().all(|f| f.is_polydisc_like()),
            _ => false,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            DomainSpec::Ball(_) => 2.0,
            DomainSpec::Polydisc(n) => 2.0 * (*n as f64).sqrt(),
            DomainSpec::Product(fs) => fs.iter().map(|f| f.diameter().powi(2)).sum::<f64>().sqrt(),
            DomainSpec::Hull(h) => 2.0 * h.bound * ((2 * h.dim) as f64).sqrt(),
        }
    }

    /// Absolute boundary tolerance for this domain.
    pub fn tol_bd(&self) -> f64 {
        TOL_BD * self.diameter()
    }

    /// A distinguished interior point (the origin for the model domains).
    pub fn center(&self) -> Point {
        match self {
            DomainSpec::Ball(n) | DomainSpec::Polydisc(n) => Point::zeros(*n),
            DomainSpec::Product(fs) => Point::concat(&fs.iter().map(|f| f.center()).collect::<Vec<_>>()),
            DomainSpec::Hull(h) => h.interior.clone(),
        }
    }

    /// Factor blocks `(offset, factor)` of a product; a single block otherwise.
    pub fn blocks(&self) -> Vec<(usize, &DomainSpec)> {
        match self {
            DomainSpec::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let b = (off, f);
                        off += f.dim();
                        b
                    })
                    .collect()
            }
            other => vec![(0, other)],
        }
    }

    /// Signed membership margin: positive inside, zero on the boundary. On
    /// the model domains it is the Euclidean distance to the boundary for
    /// interior points. Concave in `z`.
    pub fn margin(&self, z: &Point) -> f64 {
        match self {
            DomainSpec::Ball(_) => 1.0 - z.norm(),
            DomainSpec::Polydisc(_) => z.coords().iter().map(|w| 1.0 - w.norm()).fold(f64::INFINITY, f64::min),
            DomainSpec::Product(_) => {
                self.blocks().into_iter().map(|(off, f)| f.margin(&z.slice(off, f.dim()))).fold(f64::INFINITY, f64::min)
            }
            DomainSpec::Hull(h) => h.margin(z),
        }
    }

    pub fn contains(&self, z: &Point) -> Result<bool> {
        z.check_dim(self.dim())?;
        Ok(self.margin(z) > 0.0)
    }

    pub(crate) fn require_inside(&self, z: &Point) -> Result<()> {
        z.check_dim(self.dim())?;
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let m = self.margin(z);
        if m > 0.0 {
            Ok(())
        } else {
            Err(Error::OutsideDomain { margin: m })
        }
    }

    /// Euclidean distance to the boundary. Exact on the model domains; for
    /// hulls it is the distance to the nearest bounding hyperplane, reported
    /// as a lower bound by [`DomainSpec::boundary_distance_is_exact`].
    pub fn boundary_distance(&self, z: &Point) -> Result<f64> {
        self.require_inside(z)?;
        Ok(self.margin(z))
    }

    pub fn boundary_distance_is_exact(&self) -> bool {
        !matches!(self, DomainSpec::Hull(_))
            && match self {
                DomainSpec::Product(fs) => fs.iter().all(|f| f.boundary_distance_is_exact()),
                _ => true,
            }
    }

    /// Nearest boundary point (exact on models, projection onto the closest
    /// bounding hyperplane for hulls). Intended for points of the closure.
    pub fn nearest_boundary_point(&self, z: &Point) -> Point {
        match self {
            DomainSpec::Ball(n) => {
                let r = z.norm();
                if r == 0.0 {
                    let mut e = Point::zeros(*n);
                    e[0] = c(1.0, 0.0);
                    e
                } else {
                    z.scale_re(1.0 / r)
                }
            }
            DomainSpec::Polydisc(_) => {
                let mut out = z.clone();
                let j = argmax_abs(z);
                let r = z[j].norm();
                out[j] = if r == 0.0 { c(1.0, 0.0) } else { z[j] / r };
                out
            }
            DomainSpec::Product(_) => {
                let blocks = self.blocks();
                let (k, _) = blocks
                    .iter()
                    .enumerate()
                    .map(|(k, (off, f))| (k, f.margin(&z.slice(*off, f.dim()))))
                    .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
                let (off, f) = blocks[k];
                let inner = f.nearest_boundary_point(&z.slice(off, f.dim()));
                let mut out = z.clone();
                out.0[off..off + f.dim()].copy_from_slice(inner.coords());
                out
            }
            DomainSpec::Hull(h) => {
                let f = h
                    .constraints
                    .iter()
                    .min_by(|a, b| a.margin(z).total_cmp(&b.margin(z)))
                    .expect("hull has constraints");
                let slack = -f.value(z);
                &f.normal.scale_re(slack / f.normal.norm_sqr()) + z
            }
        }
    }

    /// Supporting half-space at a boundary point `xi`. Ties on the polydisc
    /// (and between factors or facets) go to the lowest index.
    pub fn supporting_functional_at(&self, xi: &Point) -> Result<SupportFunctional> {
        xi.check_dim(self.dim())?;
        let tol = self.tol_bd();
        let m = self.margin(xi);
        if m.abs() > tol {
            return Err(Error::NotOnBoundary { distance: m.abs(), tol });
        }
        match self {
            DomainSpec::Ball(_) => {
                let normal = xi.scale_re(1.0 / xi.norm());
                Ok(SupportFunctional::at_contact(normal, xi.clone()))
            }
            DomainSpec::Polydisc(n) => {
                let j = (0..*n)
                    .find(|&j| xi[j].norm() >= 1.0 - tol)
                    .ok_or(Error::NotOnBoundary { distance: m.abs(), tol })?;
                let mut normal = Point::zeros(*n);
                normal[j] = xi[j] / xi[j].norm();
                Ok(SupportFunctional::at_contact(normal, xi.clone()))
            }
            DomainSpec::Product(_) => {
                for (off, f) in self.blocks() {
                    let part = xi.slice(off, f.dim());
                    if f.margin(&part).abs() <= tol {
                        let inner = f.supporting_functional_at(&part)?;
                        let mut normal = Point::zeros(self.dim());
                        normal.0[off..off + f.dim()].copy_from_slice(inner.normal.coords());
                        return Ok(SupportFunctional::at_contact(normal, xi.clone()));
                    }
                }
                Err(Error::NotOnBoundary { distance: m.abs(), tol })
            }
            DomainSpec::Hull(h) => {
                let f = h
                    .constraints
                    .iter()
                    .find(|f| f.margin(xi).abs() <= tol)
                    .ok_or(Error::NotOnBoundary { distance: m.abs(), tol })?;
                Ok(SupportFunctional::at_contact(f.normal.clone(), xi.clone()))
            }
        }
    }

    /// Largest `t >= 0` with `from + t * dir` in the closure (`from` inside).
    pub fn ray_exit(&self, from: &Point, dir: &Point) -> f64 {
        match self {
            DomainSpec::Ball(_) => quadratic_exit(from.coords(), dir.coords()),
            DomainSpec::Polydisc(_) => from
                .coords()
                .iter()
                .zip(dir.coords())
                .map(|(a, d)| quadratic_exit(&[*a], &[*d]))
                .fold(f64::INFINITY, f64::min),
            DomainSpec::Product(_) => self
                .blocks()
                .into_iter()
                .map(|(off, f)| f.ray_exit(&from.slice(off, f.dim()), &dir.slice(off, f.dim())))
                .fold(f64::INFINITY, f64::min),
            DomainSpec::Hull(h) => h
                .constraints
                .iter()
                .filter_map(|f| {
                    let rate = f.linear(dir).re;
                    (rate > 0.0).then(|| -f.value(from) / rate)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Uniform-ish interior sample (uniform on models, rejection in the box
    /// for hulls).
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            DomainSpec::Ball(n) => {
                let u = random_unit(*n, rng);
                let r: f64 = rng.gen::<f64>().powf(1.0 / (2.0 * *n as f64));
                u.scale_re(r * 0.999_999)
            }
            DomainSpec::Polydisc(n) => Point((0..*n).map(|_| random_in_disc(rng)).collect()),
            DomainSpec::Product(fs) => Point::concat(&fs.iter().map(|f| f.sample_interior(rng)).collect::<Vec<_>>()),
            DomainSpec::Hull(h) => {
                for _ in 0..100_000 {
                    let z = Point(
                        (0..h.dim)
                            .map(|_| c(rng.gen_range(-h.bound..h.bound), rng.gen_range(-h.bound..h.bound)))
                            .collect(),
                    );
                    if h.margin(&z) > 0.0 {
                        return z;
                    }
                }
                h.interior.clone()
            }
        }
    }

    /// Random boundary point.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            DomainSpec::Ball(n) => random_unit(*n, rng),
            DomainSpec::Polydisc(n) => {
                let mut z = Point((0..*n).map(|_| random_in_disc(rng)).collect());
                let j = rng.gen_range(0..*n);
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                z[j] = C64::from_polar(1.0, theta);
                z
            }
            DomainSpec::Product(fs) => {
                let k = rng.gen_range(0..fs.len());
                let parts: Vec<Point> = fs
                    .iter()
                    .enumerate()
                    .map(|(i, f)| if i == k { f.sample_boundary(rng) } else { f.sample_interior(rng) })
                    .collect();
                Point::concat(&parts)
            }
            DomainSpec::Hull(h) => {
                let d = random_unit(h.dim, rng);
                let t = self.ray_exit(&h.interior, &d);
                &h.interior + &d.scale_re(t)
            }
        }
    }

    /// Whether the complex affine line through `p` and `q` misses the domain,
    /// decided by maximizing the (concave) membership margin along the line:
    /// a 41x41 multi-start grid on a parameter disc of radius
    /// `2 diam / |p - q|`, refined by golden-section coordinate ascent.
    pub fn complex_line_disjoint(&self, p: &Point, q: &Point) -> Result<LineTest> {
        p.check_dim(self.dim())?;
        q.check_dim(self.dim())?;
        let dir = p - q;
        let len = dir.norm();
        if len == 0.0 {
            return Err(Error::InvalidArgument("p and q must differ".into()));
        }
        let line = |zeta: C64| q + &dir.scale(zeta);
        let f = |zeta: C64| self.margin(&line(zeta));
        let radius = 2.0 * self.diameter() / len;
        const GRID: usize = 41;
        let step = 2.0 * radius / (GRID - 1) as f64;
        let mut starts: Vec<(f64, C64)> = Vec::new();
        for i in 0..GRID {
            for j in 0..GRID {
                let zeta = c(-radius + i as f64 * step, -radius + j as f64 * step);
                if zeta.norm() <= radius {
                    starts.push((f(zeta), zeta));
                }
            }
        }
        starts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut best = starts[0];
        for &(_, zeta0) in starts.iter().take(5) {
            let (val, zeta) = ascend_2d(&f, zeta0, step);
            if val > best.0 {
                best = (val, zeta);
            }
        }
        Ok(LineTest { disjoint: best.0 <= self.tol_bd(), max_margin: best.0, witness: line(best.1), certified: false })
    }

    /// Classifies the open real segment between `p` and `q` (points of the
    /// closure) from 99 equispaced interior samples.
    pub fn segment_location(&self, p: &Point, q: &Point) -> Result<SegmentLocation> {
        p.check_dim(self.dim())?;
        q.check_dim(self.dim())?;
        let tol = self.tol_bd();
        const SAMPLES: usize = 99;
        let (mut all_in, mut all_bd) = (true, true);
        for i in 1..=SAMPLES {
            let t = i as f64 / (SAMPLES + 1) as f64;
            let m = self.margin(&p.lerp(q, t));
            all_in &= m > tol;
            all_bd &= m.abs() <= tol;
        }
        Ok(if all_in {
            SegmentLocation::Interior
        } else if all_bd {
            SegmentLocation::Boundary
        } else {
            SegmentLocation::Mixed
        })
    }
}

/// Golden-section coordinate ascent of a concave function of one complex
/// variable, starting at `z0` with initial bracket half-width `h`.
fn ascend_2d(f: &impl Fn(C64) -> f64, z0: C64, h: f64) -> (f64, C64) {
    let mut z = z0;
    let mut width = h;
    for _ in 0..60 {
        let zr = golden_max(|x| f(c(x, z.im)), z.re - width, z.re + width, width * 1e-6);
        z = c(zr, z.im);
        let zi = golden_max(|y| f(c(z.re, y)), z.im - width, z.im + width, width * 1e-6);
        z = c(z.re, zi);
        width *= 0.5;
        if width < 1e-13 {
            break;
        }
    }
    (f(z), z)
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    // the cap also ends the loop once `tol` is below float spacing
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        x1
    } else {
        x2
    }
}

/// Largest `t >= 0` with `|a + t d| <= 1`, for `|a| < 1`.
fn quadratic_exit(a: &[C64], d: &[C64]) -> f64 {
    let dd: f64 = d.iter().map(|x| x.norm_sqr()).sum();
    if dd == 0.0 {
        return f64::INFINITY;
    }
    let ad: f64 = a.iter().zip(d).map(|(x, y)| (x * y.conj()).re).sum();
    let aa: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    // dd t^2 + 2 ad t + (aa - 1) = 0, positive root written without cancellation
    let disc = (ad * ad - dd * (aa - 1.0)).max(0.0).sqrt();
    if ad >= 0.0 {
        (1.0 - aa) / (ad + disc)
    } else {
        (disc - ad) / dd
    }
}

pub(crate) fn argmax_abs(z: &Point) -> usize {
    let mut best = 0;
    for j in 1..z.dim() {
        if z[j].norm() > z[best].norm() {
            best = j;
        }
    }
    best
}

pub(crate) fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Point {
    loop {
        let v = Point((0..n).map(|_| c(gaussian(rng), gaussian(rng))).collect());
        let r = v.norm();
        if r > 1e-12 {
            return v.scale_re(1.0 / r);
        }
    }
}

fn random_in_disc<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let r = rng.gen::<f64>().sqrt() * 0.999_999;
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

// JSON schema: {"type": "ball" | "polydisc" | "product" | "hull", "dim": N, ...}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawDomain {
    Ball { dim: usize },
    Polydisc { dim: usize },
    Product { dim: usize, factors: Vec<DomainSpec> },
    Hull { dim: usize, functionals: Vec<SupportFunctional>, interior: Point, bound: f64 },
}

impl TryFrom<RawDomain> for DomainSpec {
    type Error = Error;

    fn try_from(raw: RawDomain) -> Result<Self> {
        let dom = match raw {
            RawDomain::Ball { dim } => DomainSpec::Ball(dim),
            RawDomain::Polydisc { dim } => DomainSpec::Polydisc(dim),
            RawDomain::Product { dim, factors } => {
                let d = DomainSpec::product(factors)?;
                if d.dim() != dim {
                    return Err(Error::InvalidDomain(format!(
                        "product dim {dim} differs from the sum of factor dimensions {}",
                        d.dim()
                    )));
                }
                d
            }
            RawDomain::Hull { dim, functionals, interior, bound } => {
                DomainSpec::Hull(FunctionalHull::new(dim, functionals, interior, bound)?)
            }
        };
        dom.validate()?;
        Ok(dom)
    }
}

impl From<DomainSpec> for RawDomain {
    fn from(d: DomainSpec) -> Self {
        let dim = d.dim();
        match d {
            DomainSpec::Ball(_) => RawDomain::Ball { dim },
            DomainSpec::Polydisc(_) => RawDomain::Polydisc { dim },
            DomainSpec::Product(factors) => RawDomain::Product { dim, factors },
            DomainSpec::Hull(h) => {
                RawDomain::Hull { dim, functionals: h.functionals, interior: h.interior, bound: h.bound }
            }
        }
    }
}
