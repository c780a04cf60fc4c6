//! Planar convex polygons (linear images and complex-line slices of a hull)
//! and polynomial approximations of their Riemann maps.
//!
//! A polynomial `p` with `p(a) = 0` and `|p| <= M` on the boundary of a
//! polygon `G` maps `G` into the disc of radius `M`, which gives lower
//! bounds. If moreover `|p| >= m > 0` on the boundary and `p` has a single
//! zero in `G`, every value of modulus `< m` is taken exactly once, so the
//! branch of `p^{-1}` on the disc of radius `m` is an analytic disc in `G`,
//! which gives upper bounds.

use super::lp::{maximize_with_cuts, Row};
use crate::domains::FunctionalHull;
use crate::point::{c, Point, C64};

/// Convex polygon, vertices counterclockwise.
#[derive(Debug, Clone)]
pub(crate) struct Polygon {
    pub vertices: Vec<C64>,
}

impl Polygon {
    /// Polygon containing `{<x, u> : x in hull}`, cut out by `sides`
    /// sampled support lines.
    pub fn image_of_hull(h: &FunctionalHull, u: &Point, sides: usize) -> Self {
        let normals: Vec<C64> =
            (0..sides).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / sides as f64)).collect();
        // Re(p conj(e)) <= support(u e) for every image point p
        let heights: Vec<f64> = normals.iter().map(|e| h.support(&u.scale(*e))).collect();
        let vertices = (0..sides)
            .map(|k| {
                let (a, b) = (normals[k], normals[(k + 1) % sides]);
                let (ha, hb) = (heights[k], heights[(k + 1) % sides]);
                let det = a.re * b.im - a.im * b.re;
                c((ha * b.im - hb * a.im) / det, (a.re * hb - b.re * ha) / det)
            })
            .collect();
        Self { vertices }
    }

    /// `{lambda : z + lambda d in hull}`, by clipping a large square with
    /// every half-space of the hull.
    pub fn slice_of_hull(h: &FunctionalHull, z: &Point, d: &Point) -> Self {
        let big = 4.0 * h.bound() * (2 * h.dim()) as f64 / d.norm().max(1e-300);
        let mut poly = vec![c(big, -big), c(big, big), c(-big, big), c(-big, -big)];
        for f in h.constraints() {
            // Re(lambda q) <= r with q = <d, n>, r = offset - Re <z, n>
            let q = d.inner(&f.normal);
            if q.norm() == 0.0 {
                continue;
            }
            let r = f.offset - z.inner(&f.normal).re;
            poly = clip(&poly, |x: C64| r - (x * q).re);
        }
        Self { vertices: poly }
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n).map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm()).sum()
    }

    /// `n` points spaced evenly by arclength, starting at the first vertex.
    pub fn boundary(&self, n: usize) -> Vec<C64> {
        let m = self.vertices.len();
        let step = self.perimeter() / n as f64;
        let mut out = Vec::with_capacity(n);
        let mut edge = 0;
        let mut along = 0.0;
        for i in 0..n {
            let s = i as f64 * step;
            loop {
                let (p, q) = (self.vertices[edge % m], self.vertices[(edge + 1) % m]);
                let len = (q - p).norm();
                if s <= along + len || edge + 1 >= m {
                    let t = if len > 0.0 { ((s - along) / len).clamp(0.0, 1.0) } else { 0.0 };
                    out.push(p + (q - p) * t);
                    break;
                }
                along += len;
                edge += 1;
            }
        }
        out
    }

    /// A disc containing the polygon, centered near the minimax center.
    pub fn enclosing_disc(&self) -> (C64, f64) {
        let pts = &self.vertices;
        let farthest = |x: C64| pts.iter().copied().max_by(|a, b| (a - x).norm().total_cmp(&(b - x).norm())).unwrap();
        let mut center = pts.iter().sum::<C64>() / pts.len() as f64;
        let mut step = 0.5;
        for _ in 0..200 {
            let f = farthest(center);
            center += (f - center) * step;
            step *= 0.95;
        }
        let radius = pts.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
        (center, radius * (1.0 + 1e-12))
    }
}

/// Sutherland-Hodgman step keeping the part of `poly` where the affine
/// function `inside` is nonnegative.
fn clip(poly: &[C64], inside: impl Fn(C64) -> f64) -> Vec<C64> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (fp, fq) = (inside(p), inside(q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            out.push(p + (q - p) * (fp / (fp - fq)));
        }
    }
    out
}

/// What the fitted map should make large.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Target {
    /// `|p(b)|`, for distances.
    Value(C64),
    /// `|p'(a)|`, for the infinitesimal norm.
    Derivative,
}

/// LP constraint samples along the polygon boundary.
const LP_SAMPLES: usize = 2048;
/// Samples for the certified boundary extrema of `|p|`.
const CERT_SAMPLES: usize = 1 << 18;

/// Polynomial `p(x) = sum_k coef[k] ((x - center) / radius)^k` with
/// certified boundary extrema.
#[derive(Debug, Clone)]
pub(crate) struct PlanarMap {
    center: C64,
    radius: f64,
    coef: Vec<C64>,
    /// Upper bound of `|p|` on the boundary.
    sup: f64,
    /// Lower bound of `|p|` on the boundary, possibly negative.
    inf: f64,
    /// Winding number of `p(boundary)` around 0, valid when `inf > 0`.
    winding: i64,
}

impl PlanarMap {
    fn eval(&self, x: C64) -> C64 {
        let y = (x - self.center) / self.radius;
        self.coef.iter().rev().fold(c(0.0, 0.0), |acc, ck| acc * y + ck)
    }

    fn derivative(&self, x: C64) -> C64 {
        let y = (x - self.center) / self.radius;
        let d = self.coef.len() - 1;
        (1..=d).rev().fold(c(0.0, 0.0), |acc, k| acc * y + self.coef[k] * k as f64) / self.radius
    }

    fn invertible(&self) -> bool {
        self.winding == 1 && self.inf > 0.0
    }

    /// `(lower, upper)` for the pseudo-distance between the zero `a` of `p`
    /// and `b` in the polygon.
    pub fn sigma_bounds(&self, b: C64) -> (f64, f64) {
        let pb = self.eval(b).norm();
        let lo = (pb / self.sup).min(1.0);
        let hi = if self.invertible() && pb < self.inf { pb / self.inf } else { 1.0 };
        (lo, hi)
    }

    /// `(lower, upper)` for the infinitesimal norm of the unit vector at `a`.
    pub fn norm_bounds(&self, a: C64) -> (f64, f64) {
        let d = self.derivative(a).norm();
        let hi = if self.invertible() { d / self.inf } else { f64::INFINITY };
        (d / self.sup, hi)
    }
}

/// Monomials in local coordinates on boundary samples of a polygon.
struct Fitter {
    center: C64,
    radius: f64,
    degree: usize,
    samples: Vec<Vec<C64>>,
}

impl Fitter {
    fn new(poly: &Polygon, degree: usize) -> Self {
        let (center, radius) = poly.enclosing_disc();
        let mut fit = Self { center, radius, degree, samples: Vec::new() };
        fit.samples = poly.boundary(LP_SAMPLES).into_iter().map(|x| fit.powers(x)).collect();
        fit
    }

    fn powers(&self, x: C64) -> Vec<C64> {
        let y = (x - self.center) / self.radius;
        let mut q = c(1.0, 0.0);
        (0..=self.degree)
            .map(|_| {
                let out = q;
                q *= y;
                out
            })
            .collect()
    }

    /// Coefficients of `Re(p conj(phase))` for `p = sum coef[k] qs[k]`.
    fn real_part(qs: &[C64], phase: C64) -> Vec<(usize, f64)> {
        qs.iter()
            .enumerate()
            .flat_map(|(k, q)| {
                let q = q * phase.conj();
                [(2 * k, q.re), (2 * k + 1, -q.im)]
            })
            .collect()
    }

    /// Monomial vector of the target functional: values at `b`, or
    /// derivatives at `a` scaled by the radius.
    fn target_powers(&self, a: C64, target: Target) -> Vec<C64> {
        match target {
            Target::Value(b) => self.powers(b),
            Target::Derivative => {
                let at_a = self.powers(a);
                std::iter::once(c(0.0, 0.0)).chain((1..=self.degree).map(|k| at_a[k - 1] * k as f64)).collect()
            }
        }
    }

    fn zero_at(&self, a: C64) -> Vec<Row> {
        let at_a = self.powers(a);
        vec![
            Row { coeffs: Self::real_part(&at_a, c(1.0, 0.0)), rhs: 0.0 },
            Row { coeffs: Self::real_part(&at_a, c(0.0, 1.0)), rhs: 0.0 },
        ]
    }

    fn sample_values(&self, x: &[f64]) -> Vec<C64> {
        self.samples.iter().map(|qs| qs.iter().enumerate().map(|(k, q)| c(x[2 * k], x[2 * k + 1]) * q).sum()).collect()
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(-1e4, 1e4); 2 * (self.degree + 1)]
    }

    /// Certifies the boundary extrema of `|p|` on a dense sample with a
    /// Lipschitz margin, and counts the winding number around 0.
    fn certify(&self, poly: &Polygon, x: &[f64]) -> Option<PlanarMap> {
        let coef: Vec<C64> = (0..=self.degree).map(|k| c(x[2 * k], x[2 * k + 1])).collect();
        let mut map = PlanarMap { center: self.center, radius: self.radius, coef, sup: 0.0, inf: 0.0, winding: 0 };
        let dense = poly.boundary(CERT_SAMPLES);
        let spacing = poly.perimeter() / CERT_SAMPLES as f64;
        let reach = dense.iter().map(|x| ((x - self.center) / self.radius).norm()).fold(1.0, f64::max);
        let lipschitz: f64 =
            (1..=self.degree).map(|k| k as f64 * map.coef[k].norm() * reach.powi(k as i32 - 1)).sum::<f64>()
                / self.radius;
        let slack = 0.5 * spacing * lipschitz;
        let vals: Vec<C64> = dense.iter().map(|x| map.eval(*x)).collect();
        map.sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max) + slack;
        map.inf = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min) - slack;
        if !(map.sup > 0.0) {
            return None;
        }
        if map.inf > 0.0 {
            // consecutive samples move by less than inf, so each argument
            // increment is below pi and the sum counts turns exactly
            let turn: f64 = (0..vals.len()).map(|i| (vals[(i + 1) % vals.len()] / vals[i]).arg()).sum();
            map.winding = (turn / std::f64::consts::TAU).round() as i64;
        }
        Some(map)
    }
}

/// Fits `p` with `p(a) = 0`, maximizing the target subject to `|p| <= 1`
/// on boundary samples (a linear program with tangent cuts). Its `sup`
/// gives the lower bounds.
pub(crate) fn fit_riemann_map(poly: &Polygon, a: C64, target: Target, degree: usize) -> Option<PlanarMap> {
    let fit = Fitter::new(poly, degree);
    let mut objective = vec![0.0; 2 * (degree + 1)];
    for (i, v) in Fitter::real_part(&fit.target_powers(a, target), c(1.0, 0.0)) {
        objective[i] = v;
    }
    let mut initial = Vec::new();
    for qs in fit.samples.iter().step_by(16) {
        for phase in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)] {
            initial.push(Row { coeffs: Fitter::real_part(qs, phase), rhs: 1.0 });
        }
    }
    let separate = |x: &[f64]| {
        let vals = fit.sample_values(x);
        let m = vals.len();
        let mut worst: Vec<(f64, usize)> = (0..m)
            .filter(|&i| {
                let r = vals[i].norm();
                r > 1.0 + 1e-7 && r >= vals[(i + m - 1) % m].norm() && r >= vals[(i + 1) % m].norm()
            })
            .map(|i| (vals[i].norm(), i))
            .collect();
        worst.sort_by(|x, y| y.0.total_cmp(&x.0));
        worst
            .into_iter()
            .take(64)
            .map(|(r, i)| Row { coeffs: Fitter::real_part(&fit.samples[i], vals[i] / r), rhs: 1.0 })
            .collect()
    };
    let (_, x) = maximize_with_cuts(&objective, &fit.bounds(), &fit.zero_at(a), &initial, separate, 400)?;
    fit.certify(poly, &x)
}

/// Fits `p` with `p(a) = 0` and `Re(p conj(phase)) >= 1` on the boundary,
/// with the phases of `guide` there, minimizing the modulus of the target
/// (its argument is pinned to that of `guide`). Its `inf` gives the upper
/// bounds.
pub(crate) fn fit_inverse_disc(poly: &Polygon, a: C64, target: Target, guide: &PlanarMap) -> Option<PlanarMap> {
    let degree = guide.coef.len() - 1;
    let fit = Fitter::new(poly, degree);
    let phases: Vec<C64> = poly
        .boundary(LP_SAMPLES)
        .into_iter()
        .map(|x| {
            let v = guide.eval(x);
            v / v.norm()
        })
        .collect();
    if phases.iter().any(|p| !p.re.is_finite()) {
        return None;
    }
    let t = fit.target_powers(a, target);
    let guide_target = match target {
        Target::Value(b) => guide.eval(b),
        Target::Derivative => guide.derivative(a),
    };
    if guide_target.norm() == 0.0 {
        return None;
    }
    let arg = guide_target / guide_target.norm();
    // minimize Re(T conj(arg)) with Im(T conj(arg)) = 0
    let objective: Vec<f64> = {
        let mut o = vec![0.0; 2 * (degree + 1)];
        for (i, v) in Fitter::real_part(&t, arg) {
            o[i] = -v;
        }
        o
    };
    let mut equalities = fit.zero_at(a);
    equalities.push(Row { coeffs: Fitter::real_part(&t, arg * c(0.0, 1.0)), rhs: 0.0 });
    // -Re(p conj(phase)) <= -1
    let row = |i: usize| Row {
        coeffs: Fitter::real_part(&fit.samples[i], phases[i]).into_iter().map(|(j, v)| (j, -v)).collect(),
        rhs: -1.0,
    };
    let initial: Vec<Row> = (0..LP_SAMPLES).step_by(8).map(row).collect();
    let separate = |x: &[f64]| {
        let vals = fit.sample_values(x);
        let mut worst: Vec<(f64, usize)> = vals
            .iter()
            .zip(&phases)
            .enumerate()
            .map(|(i, (v, p))| ((v * p.conj()).re, i))
            .filter(|(s, _)| *s < 1.0 - 1e-7)
            .collect();
        worst.sort_by(|x, y| x.0.total_cmp(&y.0));
        worst.into_iter().take(64).map(|(_, i)| row(i)).collect()
    };
    let (_, x) = maximize_with_cuts(&objective, &fit.bounds(), &equalities, &initial, separate, 400)?;
    fit.certify(poly, &x)
}
