//! Kobayashi distance and Kobayashi-Royden norm.
//!
//! Normalization: `k_D(0, r) = artanh r`, so that horosphere radii read
//! `1/2 log R`. Model domains (ball, polydisc, products of those) use closed
//! forms; every other domain gets a two-sided bracket whose lower side comes
//! from holomorphic maps into the disc or a half-plane and whose upper side
//! comes from explicit analytic discs.

mod lower;
mod lp;
mod planar;
mod upper;

use serde::{Deserialize, Serialize};

pub use lower::{caratheodory_lower_bound, norm_lower_bound};
pub(crate) use upper::polynomial_disc_bound;
pub use upper::{lempert_upper_bound, norm_upper_bound, AnalyticDisc, UpperBound};

use crate::disc::{self, distance_from_parts, one_minus_abs_sq};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::point::{c, Point, C64};
use crate::tol::{DEFAULT_BUDGET, DISC_DEGREE, TOL_EXACT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceBracket {
    pub lo: f64,
    pub hi: f64,
    pub exact: bool,
}

impl DistanceBracket {
    pub fn exact(value: f64) -> Self {
        Self { lo: value, hi: value, exact: true }
    }

    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lo - slack <= value && value <= self.hi + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBracket {
    pub lo: f64,
    pub hi: f64,
    pub exact: bool,
}

/// Knobs of the bracket engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BracketOptions {
    /// Linear programs available to the disc search.
    pub budget: usize,
    /// Seed of the random boundary contacts and directions of the lower bound.
    pub seed: u64,
    /// Degree of the candidate polynomial discs.
    pub degree: usize,
    pub tol_exact: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, seed: 0, degree: DISC_DEGREE, tol_exact: TOL_EXACT }
    }
}

impl BracketOptions {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, ..Self::default() }
    }
}

/// Poincare distance of the unit disc, `artanh |(z - w) / (1 - conj(w) z)|`.
pub fn poincare_distance(z: C64, w: C64) -> Result<f64> {
    for p in [z, w] {
        if !(p.norm() < 1.0) {
            return Err(Error::OutsideDomain { margin: 1.0 - p.norm() });
        }
    }
    Ok(disc::poincare_distance_unchecked(z, w))
}

/// Kobayashi distance of a product from the factor distances: their maximum.
pub fn product_distance(factors: &[f64]) -> Result<f64> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("product of zero factors".into()));
    }
    if let Some(bad) = factors.iter().find(|d| !(**d >= 0.0)) {
        return Err(Error::InvalidArgument(format!("negative factor distance {bad}")));
    }
    Ok(factors.iter().copied().fold(0.0, f64::max))
}

/// Involutive automorphism of the unit ball exchanging `a` and 0.
pub fn ball_automorphism(a: &Point, z: &Point) -> Point {
    let aa = a.norm_sqr();
    if aa == 0.0 {
        return z.scale_re(-1.0);
    }
    let za = z.inner(a);
    let s = (1.0 - aa).sqrt();
    let proj = a.scale(za / aa);
    let perp = z - &proj;
    let num = &(a - &proj) - &perp.scale_re(s);
    num.scale(c(1.0, 0.0) / (c(1.0, 0.0) - za))
}

fn one_minus_norm_sq(z: &Point) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

pub(crate) fn ball_distance_unchecked(z: &Point, w: &Point) -> f64 {
    let dz = one_minus_norm_sq(z);
    let dw = one_minus_norm_sq(w);
    if dz <= 0.0 || dw <= 0.0 {
        return f64::INFINITY;
    }
    let sigma = ball_automorphism(z, w).norm();
    let denom = (c(1.0, 0.0) - w.inner(z)).norm();
    distance_from_parts(sigma, dz.ln() + dw.ln() - 2.0 * denom.ln())
}

/// Kobayashi distance of the unit ball: `artanh sigma`,
/// `sigma^2 = 1 - (1 - |z|^2)(1 - |w|^2) / |1 - <z, w>|^2`.
pub fn ball_distance(z: &Point, w: &Point) -> Result<f64> {
    z.check_dim(w.dim())?;
    for p in [z, w] {
        if !(p.norm() < 1.0) {
            return Err(Error::OutsideDomain { margin: 1.0 - p.norm() });
        }
    }
    Ok(ball_distance_unchecked(z, w))
}

/// Closed-form distance on a model domain; infinity for points outside.
pub(crate) fn model_distance(dom: &DomainSpec, z: &Point, w: &Point) -> f64 {
    match dom {
        DomainSpec::Ball(_) => ball_distance_unchecked(z, w),
        DomainSpec::Polydisc(_) => z
            .coords()
            .iter()
            .zip(w.coords())
            .map(|(a, b)| disc::poincare_distance_unchecked(*a, *b))
            .fold(0.0, f64::max),
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .map(|(off, f)| model_distance(f, &z.slice(off, f.dim()), &w.slice(off, f.dim())))
            .fold(0.0, f64::max),
        DomainSpec::Hull(_) => unreachable!("hulls have no closed form"),
    }
}

/// Closed-form Kobayashi-Royden norm on a model domain.
pub(crate) fn model_norm(dom: &DomainSpec, z: &Point, v: &Point) -> f64 {
    match dom {
        DomainSpec::Ball(_) => {
            let d = one_minus_norm_sq(z);
            (v.norm_sqr() / d + v.inner(z).norm_sqr() / (d * d)).sqrt()
        }
        DomainSpec::Polydisc(_) => {
            z.coords().iter().zip(v.coords()).map(|(a, b)| b.norm() / one_minus_abs_sq(*a)).fold(0.0, f64::max)
        }
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .map(|(off, f)| model_norm(f, &z.slice(off, f.dim()), &v.slice(off, f.dim())))
            .fold(0.0, f64::max),
        DomainSpec::Hull(_) => unreachable!("hulls have no closed form"),
    }
}

/// Distance for points already known to lie in `dom`: exact on models,
/// bracket midpoint otherwise.
pub(crate) fn distance_estimate(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions) -> (f64, f64) {
    if dom.is_model() {
        (model_distance(dom, z, w), 0.0)
    } else {
        match kobayashi_distance(dom, z, w, opts) {
            Ok(b) => (b.midpoint(), b.gap()),
            Err(_) => (f64::INFINITY, 0.0),
        }
    }
}

/// Kobayashi distance: exact on model domains, a certified bracket
/// `[caratheodory_lower_bound, lempert_upper_bound]` otherwise.
pub fn kobayashi_distance(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions) -> Result<DistanceBracket> {
    dom.require_inside(z)?;
    dom.require_inside(w)?;
    if dom.is_model() {
        return Ok(DistanceBracket::exact(model_distance(dom, z, w)));
    }
    if z == w {
        return Ok(DistanceBracket::exact(0.0));
    }
    // evaluate in a canonical order so the bracket is symmetric
    let (a, b) = canonical_pair(z, w);
    let lo = caratheodory_lower_bound(dom, a, b, opts)?;
    let hi = lempert_upper_bound(dom, a, b, opts, Some(lo))?.value;
    let hi = hi.max(lo);
    Ok(DistanceBracket { lo, hi, exact: hi - lo <= opts.tol_exact })
}

pub(crate) fn canonical_pair<'a>(z: &'a Point, w: &'a Point) -> (&'a Point, &'a Point) {
    let key = |p: &Point| p.coords().iter().flat_map(|x| [x.re, x.im]).collect::<Vec<f64>>();
    let (kz, kw) = (key(z), key(w));
    if kz.partial_cmp(&kw) == Some(std::cmp::Ordering::Greater) {
        (w, z)
    } else {
        (z, w)
    }
}

/// Kobayashi-Royden norm `kappa(z; v)`: exact on models, bracketed otherwise.
pub fn kobayashi_royden_norm(dom: &DomainSpec, z: &Point, v: &Point, opts: &BracketOptions) -> Result<NormBracket> {
    dom.require_inside(z)?;
    v.check_dim(dom.dim())?;
    if v.norm() == 0.0 {
        return Err(Error::InvalidArgument("tangent vector must be non-zero".into()));
    }
    if dom.is_model() {
        let k = model_norm(dom, z, v);
        return Ok(NormBracket { lo: k, hi: k, exact: true });
    }
    let lo = norm_lower_bound(dom, z, v, opts)?;
    let hi = norm_upper_bound(dom, z, v, opts)?.max(lo);
    Ok(NormBracket { lo, hi, exact: hi - lo <= opts.tol_exact })
}
