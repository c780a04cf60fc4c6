//! Upper bounds from explicit analytic discs. On a convex domain the
//! Kobayashi distance equals the Lempert function, so every disc
//! `h: D -> Omega` through both points bounds the distance from above.
//!
//! On a hull, membership of a polynomial disc is linear in its
//! coefficients: each bounding half-space gives a harmonic function of
//! `zeta` which only has to be checked on the unit circle. For a fixed
//! parameter `t` the widest disc with `h(0) = z`, `h(t) = w` is therefore a
//! linear program; `t` itself is found by bisection.

use serde::{Deserialize, Serialize};

use super::lp::{maximize_with_cuts, Row};
use super::planar::{fit_inverse_disc, fit_riemann_map, PlanarMap, Polygon, Target};
use super::{model_distance, model_norm, BracketOptions};
use crate::disc::poincare_distance_unchecked;
use crate::domains::{DomainSpec, FunctionalHull};
use crate::error::{Error, Result};
use crate::point::{c, Point, C64};
use crate::tol::{DISC_GRID, DISC_SAFETY, LEFT_INVERSE_DEGREE};

/// Polynomial disc `h(zeta) = sum_k coeffs[k] zeta^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDisc {
    pub coeffs: Vec<Point>,
}

impl AnalyticDisc {
    pub fn eval(&self, zeta: C64) -> Point {
        let mut acc = self.coeffs.last().expect("disc has coefficients").clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(zeta) + a;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub value: f64,
    /// Linear programs solved.
    pub evaluations: usize,
    /// The best disc found and the parameter `t` with `h(0) = z`, `h(t) = w`.
    pub disc: Option<(AnalyticDisc, f64)>,
}

/// Upper bound for `k(z, w)`. Models use their extremal discs (so the bound
/// is the closed form); products take the max over factors; hulls search
/// polynomial discs of degree `opts.degree`, stopping once the bound is
/// within `tol_exact / 2` of `lower` (when given).
pub fn lempert_upper_bound(
    dom: &DomainSpec,
    z: &Point,
    w: &Point,
    opts: &BracketOptions,
    lower: Option<f64>,
) -> Result<UpperBound> {
    dom.require_inside(z)?;
    dom.require_inside(w)?;
    if opts.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    Ok(upper_unchecked(dom, z, w, opts, lower))
}

fn upper_unchecked(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions, lower: Option<f64>) -> UpperBound {
    if z == w {
        return UpperBound { value: 0.0, evaluations: 0, disc: None };
    }
    match dom {
        d if d.is_model() => UpperBound { value: model_distance(d, z, w), evaluations: 0, disc: None },
        DomainSpec::Product(_) => {
            let parts: Vec<UpperBound> = dom
                .blocks()
                .into_iter()
                .map(|(off, f)| upper_unchecked(f, &z.slice(off, f.dim()), &w.slice(off, f.dim()), opts, None))
                .collect();
            UpperBound {
                value: parts.iter().map(|p| p.value).fold(0.0, f64::max),
                evaluations: parts.iter().map(|p| p.evaluations).sum(),
                disc: None,
            }
        }
        DomainSpec::Hull(h) => {
            let lower = lower.unwrap_or(0.0);
            let slice = slice_distance(h, z, w);
            if slice - lower <= 0.5 * opts.tol_exact || opts.budget <= SLICE_PROGRAMS {
                return UpperBound { value: slice, evaluations: SLICE_PROGRAMS, disc: None };
            }
            let budget = BracketOptions { budget: opts.budget - SLICE_PROGRAMS, ..*opts };
            let found = HullDiscs::new(h, opts.degree).distance(z, w, &budget, lower);
            let evaluations = found.evaluations + SLICE_PROGRAMS;
            if slice < found.value {
                UpperBound { value: slice, evaluations, disc: None }
            } else {
                UpperBound { evaluations, ..found }
            }
        }
        _ => unreachable!("models are handled above"),
    }
}

/// Linear programs behind one slice bound.
const SLICE_PROGRAMS: usize = 2;

/// Bound from the slice of the hull by the complex line through `z` and
/// `z + d`: the inverse of an approximate Riemann map of that polygon is a
/// disc through both points.
fn slice_fit(h: &FunctionalHull, z: &Point, d: &Point, target: Target) -> Option<PlanarMap> {
    let poly = Polygon::slice_of_hull(h, z, d);
    let a = c(0.0, 0.0);
    let guide = fit_riemann_map(&poly, a, target, LEFT_INVERSE_DEGREE)?;
    fit_inverse_disc(&poly, a, target, &guide)
}

fn slice_distance(h: &FunctionalHull, z: &Point, w: &Point) -> f64 {
    let b = c(1.0, 0.0);
    match slice_fit(h, z, &(w - z), Target::Value(b)) {
        Some(disc) => {
            let sigma = disc.sigma_bounds(b).1;
            if sigma < 1.0 {
                sigma.atanh()
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

fn slice_norm(h: &FunctionalHull, z: &Point, v: &Point) -> f64 {
    match slice_fit(h, z, v, Target::Derivative) {
        Some(disc) => disc.norm_bounds(c(0.0, 0.0)).1,
        None => f64::INFINITY,
    }
}

/// A cut: half-space `j` checked at boundary angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Cut {
    theta: f64,
    j: usize,
}

struct HullDiscs {
    normals: Vec<Point>,
    offsets: Vec<f64>,
    degree: usize,
    dim: usize,
    bound: f64,
}

impl HullDiscs {
    fn new(h: &FunctionalHull, degree: usize) -> Self {
        let (normals, offsets) = h
            .constraints()
            .iter()
            .map(|f| {
                let n = f.normal.norm();
                (f.normal.scale_re(1.0 / n), f.offset / n)
            })
            .unzip();
        Self { normals, offsets, degree: degree.max(1), dim: h.dim(), bound: h.bound() }
    }

    fn margin_at(&self, coeffs: &[Point], theta: f64) -> (f64, usize) {
        let p = AnalyticDisc { coeffs: coeffs.to_vec() }.eval(C64::from_polar(1.0, theta));
        self.normals
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .map(|(j, (n, off))| (off - p.inner(n).re, j))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    }

    /// Certified lower bound (within `1e-10`) for the smallest distance from
    /// `h(zeta)`, `|zeta| = 1`, to the bounding hyperplanes, negative when the
    /// disc leaves the hull, with the angle of the lowest sample. Branch and
    /// bound on grid intervals: the margin is a minimum of functions of the
    /// angle with second derivative at most `sum_k k^2 |a_k|`, so on an
    /// interval of width `w` it stays above the smaller endpoint value minus
    /// that bound times `w^2 / 8`.
    fn min_margin(&self, coeffs: &[Point]) -> (f64, f64) {
        let curvature: f64 = coeffs.iter().enumerate().map(|(k, a)| (k * k) as f64 * a.norm()).sum();
        let m = DISC_GRID;
        let h = std::f64::consts::TAU / m as f64;
        let grid: Vec<f64> = (0..=m).map(|i| self.margin_at(coeffs, i as f64 * h).0).collect();
        let mut best = (f64::INFINITY, 0.0);
        for (i, g) in grid.iter().enumerate() {
            if *g < best.0 {
                best = (*g, i as f64 * h);
            }
        }
        let mut open: Vec<(f64, f64, f64, f64)> =
            (0..m).map(|i| (i as f64 * h, grid[i], (i + 1) as f64 * h, grid[i + 1])).collect();
        let mut certified = f64::INFINITY;
        while let Some((a, ga, b, gb)) = open.pop() {
            let bound = ga.min(gb) - 0.125 * curvature * (b - a) * (b - a);
            if bound >= best.0 - 1e-10 || b - a < 1e-15 {
                certified = certified.min(bound.min(best.0));
                continue;
            }
            let mid = 0.5 * (a + b);
            let gm = self.margin_at(coeffs, mid).0;
            if gm < best.0 {
                best = (gm, mid);
            }
            open.push((a, ga, mid, gm));
            open.push((mid, gm, b, gb));
        }
        (certified.min(best.0), best.1)
    }

    /// Widest affine disc `z + zeta r u`, `|u| = 1`, in the closed hull.
    fn exit_radius(&self, z: &Point, u: &Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, off)| (off - z.inner(n).re) / u.inner(n).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Variable index of `Re` (or `Im`, +1) of coordinate `i` of the
    /// coefficient of `zeta^k`, for `k >= first`.
    fn var(&self, first: usize, k: usize, i: usize) -> usize {
        2 * ((k - first) * self.dim + i)
    }

    /// Row `Re <h(e^{i theta}) - a_0 - fixed, n_j> + slack_coef * extra <= rhs`
    /// over the free coefficients `a_first..a_degree`.
    fn cut_row(&self, first: usize, cut: Cut, extra: Option<(usize, f64)>, rhs: f64) -> Row {
        let n = &self.normals[cut.j];
        let mut coeffs = Vec::new();
        for k in first..=self.degree {
            let e = C64::from_polar(1.0, k as f64 * cut.theta);
            for i in 0..self.dim {
                let q = e * n[i].conj();
                let v = self.var(first, k, i);
                coeffs.push((v, q.re));
                coeffs.push((v + 1, -q.im));
            }
        }
        if let Some(x) = extra {
            coeffs.push(x);
        }
        Row { coeffs, rhs }
    }

    fn unpack(&self, first: usize, x: &[f64], head: Vec<Point>) -> Vec<Point> {
        let mut coeffs = head;
        for k in first..=self.degree {
            coeffs.push(Point(
                (0..self.dim).map(|i| c(x[self.var(first, k, i)], x[self.var(first, k, i) + 1])).collect(),
            ));
        }
        coeffs
    }

    /// New cuts at the most violated local minima of the margin on the grid.
    fn separate(&self, coeffs: &[Point], level: f64) -> Vec<Cut> {
        let m = DISC_GRID;
        let h = std::f64::consts::TAU / m as f64;
        let grid: Vec<(f64, usize)> = (0..m).map(|i| self.margin_at(coeffs, i as f64 * h)).collect();
        let mut worst: Vec<(f64, Cut)> = (0..m)
            .filter(|&i| {
                let g = grid[i].0;
                g < level - 1e-8 && g <= grid[(i + m - 1) % m].0 && g <= grid[(i + 1) % m].0
            })
            .map(|i| (grid[i].0, Cut { theta: i as f64 * h, j: grid[i].1 }))
            .collect();
        worst.sort_by(|a, b| a.0.total_cmp(&b.0));
        worst.into_iter().take(32).map(|x| x.1).collect()
    }

    /// Widest disc with `h(0) = z`, `h(t) = w`: returns its margin and
    /// coefficients. Cuts found along the way are added to `pool`.
    fn widest(&self, z: &Point, w: &Point, t: f64, pool: &mut Vec<Cut>) -> Option<(f64, Vec<Point>)> {
        let n_coef = 2 * self.dim * self.degree;
        let s = n_coef;
        let mut objective = vec![0.0; n_coef + 1];
        objective[s] = 1.0;
        let big = 10.0 * self.bound * (self.dim as f64).sqrt();
        let mut bounds = vec![(-big, big); n_coef + 1];
        bounds[s] = (-big, big);
        let chord = w - z;
        let mut eqs = Vec::new();
        for i in 0..self.dim {
            let re: Vec<(usize, f64)> = (1..=self.degree).map(|k| (self.var(1, k, i), t.powi(k as i32))).collect();
            let im: Vec<(usize, f64)> = re.iter().map(|(v, a)| (v + 1, *a)).collect();
            eqs.push(Row { coeffs: re, rhs: chord[i].re });
            eqs.push(Row { coeffs: im, rhs: chord[i].im });
        }
        let rhs = |cut: &Cut| self.offsets[cut.j] - z.inner(&self.normals[cut.j]).re;
        let initial: Vec<Row> = pool.iter().map(|cut| self.cut_row(1, *cut, Some((s, 1.0)), rhs(cut))).collect();
        let new_cuts = std::cell::RefCell::new(Vec::new());
        let result = maximize_with_cuts(
            &objective,
            &bounds,
            &eqs,
            &initial,
            |x| {
                let coeffs = self.unpack(1, x, vec![z.clone()]);
                let mut cuts = self.separate(&coeffs, x[s]);
                if cuts.is_empty() {
                    // refined check between grid points
                    let (g, theta) = self.min_margin(&coeffs);
                    if g < x[s] - 1e-8 {
                        cuts.push(Cut { theta, j: self.margin_at(&coeffs, theta).1 });
                    }
                }
                new_cuts.borrow_mut().extend(cuts.iter().copied());
                cuts.iter().map(|cut| self.cut_row(1, *cut, Some((s, 1.0)), rhs(cut))).collect()
            },
            200,
        );
        pool.extend(new_cuts.into_inner());
        let (_, x) = result?;
        let coeffs = self.unpack(1, &x, vec![z.clone()]);
        let (g, _) = self.min_margin(&coeffs);
        Some((g, coeffs))
    }

    fn distance(&self, z: &Point, w: &Point, opts: &BracketOptions, lower: f64) -> UpperBound {
        let chain = UpperBound { value: self.chain_bound(z, w), evaluations: 0, disc: None };
        let mut pool = Vec::new();
        // seed the pool with the binding half-spaces of the affine disc
        let m0 = 64;
        let affine = vec![z.clone(), w - z];
        for i in 0..m0 {
            let theta = std::f64::consts::TAU * i as f64 / m0 as f64;
            pool.push(Cut { theta, j: self.margin_at(&affine, theta).1 });
        }
        let mut evals = 0;
        let feasible = |t: f64, pool: &mut Vec<Cut>, evals: &mut usize| {
            *evals += 1;
            self.widest(z, w, t, pool).filter(|(g, _)| *g >= DISC_SAFETY)
        };
        let mut hi = 1.0 - 1e-12;
        let Some(mut best) = feasible(hi, &mut pool, &mut evals) else {
            return UpperBound { evaluations: evals, ..chain };
        };
        let mut lo = lower.tanh();
        let distance = |t: f64| poincare_distance_unchecked(c(0.0, 0.0), c(t, 0.0));
        while evals < opts.budget && hi - lo > 1e-14 && distance(hi) - lower > 0.5 * opts.tol_exact {
            let mid = 0.5 * (lo + hi);
            match feasible(mid, &mut pool, &mut evals) {
                Some(found) => {
                    hi = mid;
                    best = found;
                }
                None => lo = mid,
            }
        }
        let out =
            UpperBound { value: distance(hi), evaluations: evals, disc: Some((AnalyticDisc { coeffs: best.1 }, hi)) };
        if chain.value < out.value {
            UpperBound { evaluations: evals, ..chain }
        } else {
            out
        }
    }

    /// Triangle inequality along `m` equal pieces of the segment, each piece
    /// covered by the widest affine disc centered at its midpoint.
    fn chain_bound(&self, z: &Point, w: &Point) -> f64 {
        let d = w - z;
        let len = d.norm();
        let u = d.scale_re(1.0 / len);
        let mut best = f64::INFINITY;
        for m in (0..=10).map(|e| 1usize << e) {
            let piece = len / m as f64;
            let total: f64 = (0..m)
                .map(|i| {
                    let mid = z.lerp(w, 1.0 - (i as f64 + 0.5) / m as f64);
                    let t = 0.5 * piece / (self.exit_radius(&mid, &u) - DISC_SAFETY);
                    if t > 0.0 && t < 1.0 {
                        poincare_distance_unchecked(c(-t, 0.0), c(t, 0.0))
                    } else {
                        f64::INFINITY
                    }
                })
                .sum();
            best = best.min(total);
        }
        best
    }

    /// Largest `mu` with a disc `z + mu u zeta + sum_{k >= 2} a_k zeta^k`
    /// inside the hull.
    fn widest_derivative(&self, z: &Point, u: &Point) -> f64 {
        let affine = (self.exit_radius(z, u) - DISC_SAFETY).max(0.0);
        if self.degree < 2 {
            return affine;
        }
        let n_coef = 2 * self.dim * (self.degree - 1);
        let mu = n_coef;
        let mut objective = vec![0.0; n_coef + 1];
        objective[mu] = 1.0;
        let big = 10.0 * self.bound * (self.dim as f64).sqrt();
        let mut bounds = vec![(-big, big); n_coef + 1];
        bounds[mu] = (0.0, big);
        // mu enters each row through Re(e^{i theta} <u, n_j>)
        let row = |cut: Cut| {
            let rate = (C64::from_polar(1.0, cut.theta) * u.inner(&self.normals[cut.j])).re;
            self.cut_row(2, cut, Some((mu, rate)), self.offsets[cut.j] - z.inner(&self.normals[cut.j]).re - DISC_SAFETY)
        };
        let head = |m: f64| vec![z.clone(), u.scale_re(m)];
        let affine_disc = head(affine);
        let initial: Vec<Row> = (0..64)
            .map(|i| {
                let theta = std::f64::consts::TAU * i as f64 / 64.0;
                row(Cut { theta, j: self.margin_at(&affine_disc, theta).1 })
            })
            .collect();
        let result = maximize_with_cuts(
            &objective,
            &bounds,
            &[],
            &initial,
            |x| {
                let coeffs = self.unpack(2, x, head(x[mu]));
                let mut cuts = self.separate(&coeffs, DISC_SAFETY);
                if cuts.is_empty() {
                    let (g, theta) = self.min_margin(&coeffs);
                    if g < DISC_SAFETY - 1e-8 {
                        cuts.push(Cut { theta, j: self.margin_at(&coeffs, theta).1 });
                    }
                }
                cuts.into_iter().map(row).collect()
            },
            200,
        );
        match result {
            Some((m, x)) if self.min_margin(&self.unpack(2, &x, head(m))).0 >= 0.0 => m.max(affine),
            _ => affine,
        }
    }
}

/// Best explicit polynomial disc through `z` and `w` in the hull.
pub(crate) fn polynomial_disc_bound(
    h: &FunctionalHull,
    z: &Point,
    w: &Point,
    opts: &BracketOptions,
    lower: f64,
) -> UpperBound {
    HullDiscs::new(h, opts.degree).distance(z, w, opts, lower)
}

/// Upper bound for `kappa(z; v)`: exact on models, otherwise `|v| / mu` for
/// the widest polynomial disc `z + mu v/|v| zeta + ...` in the hull.
pub fn norm_upper_bound(dom: &DomainSpec, z: &Point, v: &Point, opts: &BracketOptions) -> Result<f64> {
    dom.require_inside(z)?;
    v.check_dim(dom.dim())?;
    Ok(norm_upper_unchecked(dom, z, v, opts))
}

fn norm_upper_unchecked(dom: &DomainSpec, z: &Point, v: &Point, opts: &BracketOptions) -> f64 {
    match dom {
        d if d.is_model() => model_norm(d, z, v),
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .map(|(off, f)| {
                let part = v.slice(off, f.dim());
                if part.norm() == 0.0 {
                    0.0
                } else {
                    norm_upper_unchecked(f, &z.slice(off, f.dim()), &part, opts)
                }
            })
            .fold(0.0, f64::max),
        DomainSpec::Hull(h) => {
            let u = v.scale_re(1.0 / v.norm());
            let found = v.norm() / HullDiscs::new(h, opts.degree).widest_derivative(z, &u);
            found.min(slice_norm(h, z, v))
        }
        _ => unreachable!("models are handled above"),
    }
}
