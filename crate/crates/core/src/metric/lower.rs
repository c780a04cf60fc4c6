//! Lower bounds from holomorphic maps of the domain into the disc or a
//! half-plane. Holomorphic maps contract the Kobayashi distance, so each
//! map gives a valid bound and the best one is reported.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::planar::{fit_riemann_map, Polygon, Target};
use super::{model_distance, model_norm, BracketOptions};
use crate::disc::{poincare_distance_unchecked, right_half_plane_distance, right_half_plane_norm};
use crate::domains::{random_unit, DomainSpec, FunctionalHull, SupportFunctional};
use crate::error::Result;
use crate::point::{c, Point, C64};
use crate::tol::{LEFT_INVERSE_DEGREE, LOWER_BOUND_CONTACTS};

/// Support lines for the image polygon that gets a left inverse.
const POLYGON_SIDES: usize = 64;
/// Support lines for images that only get the enclosing-disc bound.
const DISC_IMAGE_SIDES: usize = 16;
/// Random complex directions tried for disc-image bounds.
const RANDOM_DIRECTIONS: usize = 16;
/// Facet normals (closest to the chord direction) tried for disc-image bounds.
const FACET_DIRECTIONS: usize = 16;

/// Best lower bound for `k(z, w)`. Exact on models (the closed-form left
/// inverses attain the distance); the max over factors on products.
pub fn caratheodory_lower_bound(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions) -> Result<f64> {
    dom.require_inside(z)?;
    dom.require_inside(w)?;
    Ok(lower_unchecked(dom, z, w, opts))
}

fn lower_unchecked(dom: &DomainSpec, z: &Point, w: &Point, opts: &BracketOptions) -> f64 {
    if z == w {
        return 0.0;
    }
    match dom {
        d if d.is_model() => model_distance(d, z, w),
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .map(|(off, f)| lower_unchecked(f, &z.slice(off, f.dim()), &w.slice(off, f.dim()), opts))
            .fold(0.0, f64::max),
        DomainSpec::Hull(h) => hull_lower(dom, h, z, w, opts),
        _ => unreachable!("models are handled above"),
    }
}

/// `s = offset - <z, normal>` maps the hull into the right half-plane.
fn half_plane_coordinate(f: &SupportFunctional, z: &Point) -> C64 {
    c(f.offset, 0.0) - f.linear(z)
}

fn hull_lower(dom: &DomainSpec, h: &FunctionalHull, z: &Point, w: &Point, opts: &BracketOptions) -> f64 {
    let half_plane =
        |f: &SupportFunctional| right_half_plane_distance(half_plane_coordinate(f, z), half_plane_coordinate(f, w));
    let mut best = h.constraints().iter().map(half_plane).fold(0.0, f64::max);
    for f in contact_functionals(dom, z, w, opts.seed) {
        best = best.max(half_plane(&f));
    }
    let mut dirs = image_directions(h, &(w - z), opts.seed).into_iter();
    // the chord direction comes first and also gets a polynomial left inverse
    if let Some(u) = dirs.next() {
        let poly = Polygon::image_of_hull(h, &u, POLYGON_SIDES);
        best = best.max(disc_image_distance(&poly, &u, z, w));
        let b = w.inner(&u);
        if let Some(map) = fit_riemann_map(&poly, z.inner(&u), Target::Value(b), LEFT_INVERSE_DEGREE) {
            best = best.max(poincare_distance_unchecked(c(0.0, 0.0), c(map.sigma_bounds(b).0, 0.0)));
        }
    }
    for u in dirs {
        best = best.max(disc_image_distance(&Polygon::image_of_hull(h, &u, DISC_IMAGE_SIDES), &u, z, w));
    }
    best
}

fn disc_image_distance(poly: &Polygon, u: &Point, z: &Point, w: &Point) -> f64 {
    let (center, radius) = poly.enclosing_disc();
    let map = |x: &Point| (x.inner(u) - center) / radius;
    poincare_distance_unchecked(map(z), map(w))
}

/// Supporting functionals where the real line through `z` and `w` leaves
/// the domain, plus seeded random boundary contacts.
fn contact_functionals(dom: &DomainSpec, z: &Point, w: &Point, seed: u64) -> Vec<SupportFunctional> {
    let mut out = Vec::new();
    let d = w - z;
    for (from, dir) in [(w, d.clone()), (z, d.scale_re(-1.0))] {
        let t = dom.ray_exit(from, &dir);
        if t.is_finite() {
            if let Ok(f) = dom.supporting_functional_at(&(from + &dir.scale_re(t))) {
                out.push(f);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x006c_6f77_6572);
    for _ in 0..LOWER_BOUND_CONTACTS {
        if let Ok(f) = dom.supporting_functional_at(&dom.sample_boundary(&mut rng)) {
            out.push(f);
        }
    }
    out
}

fn image_directions(h: &FunctionalHull, chord: &Point, seed: u64) -> Vec<Point> {
    let n = h.dim();
    let mut dirs = Vec::new();
    let len = chord.norm();
    if len > 0.0 {
        dirs.push(chord.scale_re(1.0 / len));
    }
    for j in 0..n {
        let mut e = Point::zeros(n);
        e[j] = c(1.0, 0.0);
        dirs.push(e);
    }
    let mut normals: Vec<(f64, Point)> = h
        .functionals()
        .iter()
        .map(|f| {
            let u = f.normal.scale_re(1.0 / f.normal.norm());
            let score = if len > 0.0 { chord.inner(&u).norm() / len } else { 0.0 };
            (score, u)
        })
        .collect();
    normals.sort_by(|a, b| b.0.total_cmp(&a.0));
    dirs.extend(normals.into_iter().take(FACET_DIRECTIONS).map(|(_, u)| u));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6469_7273);
    dirs.extend((0..RANDOM_DIRECTIONS).map(|_| random_unit(n, &mut rng)));
    dirs
}

/// Lower bound for the Kobayashi-Royden norm `kappa(z; v)`.
pub fn norm_lower_bound(dom: &DomainSpec, z: &Point, v: &Point, opts: &BracketOptions) -> Result<f64> {
    dom.require_inside(z)?;
    v.check_dim(dom.dim())?;
    Ok(norm_lower_unchecked(dom, z, v, opts))
}

fn norm_lower_unchecked(dom: &DomainSpec, z: &Point, v: &Point, opts: &BracketOptions) -> f64 {
    match dom {
        d if d.is_model() => model_norm(d, z, v),
        DomainSpec::Product(_) => dom
            .blocks()
            .into_iter()
            .map(|(off, f)| norm_lower_unchecked(f, &z.slice(off, f.dim()), &v.slice(off, f.dim()), opts))
            .fold(0.0, f64::max),
        DomainSpec::Hull(h) => {
            let half_plane = |f: &SupportFunctional| right_half_plane_norm(half_plane_coordinate(f, z), f.linear(v));
            let mut best = h.constraints().iter().map(half_plane).fold(0.0, f64::max);
            let nearby = z + &v.scale_re(1e-3 * dom.margin(z) / v.norm());
            for f in contact_functionals(dom, z, &nearby, opts.seed) {
                best = best.max(half_plane(&f));
            }
            for (i, u) in image_directions(h, v, opts.seed).into_iter().enumerate() {
                let poly = Polygon::image_of_hull(h, &u, if i == 0 { POLYGON_SIDES } else { DISC_IMAGE_SIDES });
                let (center, rho) = poly.enclosing_disc();
                let a = z.inner(&u);
                let p = a - center;
                best = best.max(v.inner(&u).norm() * rho / (rho * rho - p.norm_sqr()));
                if i == 0 {
                    if let Some(map) = fit_riemann_map(&poly, a, Target::Derivative, LEFT_INVERSE_DEGREE) {
                        best = best.max(map.norm_bounds(a).0 * v.inner(&u).norm());
                    }
                }
            }
            best
        }
        _ => unreachable!("models are handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ball_distance, poincare_distance};

    fn pt(xs: &[f64]) -> Point {
        Point::real(xs)
    }

    #[test]
    fn tight_on_models() {
        let opts = BracketOptions::default();
        for r in [0.1, 0.5, 0.9, 0.999] {
            let exact = poincare_distance(c(0.0, 0.0), c(r, 0.0)).unwrap();
            let lo =
                caratheodory_lower_bound(&DomainSpec::Polydisc(2), &pt(&[0.0, 0.0]), &pt(&[r, 0.0]), &opts).unwrap();
            assert!((lo - exact).abs() < 1e-12);
            let lo = caratheodory_lower_bound(&DomainSpec::Ball(2), &pt(&[0.0, 0.0]), &pt(&[r, 0.0]), &opts).unwrap();
            assert!((lo - ball_distance(&pt(&[0.0, 0.0]), &pt(&[r, 0.0])).unwrap()).abs() < 1e-12);
        }
        let z = pt(&[0.3, -0.2]);
        assert_eq!(caratheodory_lower_bound(&DomainSpec::Ball(2), &z, &z, &opts).unwrap(), 0.0);
    }

    #[test]
    fn enclosing_disc_of_circumscribed_hull_contains_unit_disc() {
        let h = FunctionalHull::ball_approximation(2, 32, 3).unwrap();
        let (center, rho) = Polygon::image_of_hull(&h, &pt(&[1.0, 0.0]), 32).enclosing_disc();
        // the image contains the unit disc and sits inside the unit square
        assert!(rho + center.norm() >= 1.0);
        // the image sits in the unit square, the sampled polygon slightly outside it
        assert!(rho <= 2f64.sqrt() / (std::f64::consts::PI / 32.0).cos(), "{rho} {center}");
    }

    #[test]
    fn hull_lower_bound_is_below_ball_distance() {
        // the hull contains the ball, so its distance is smaller
        let h = FunctionalHull::ball_approximation(2, 64, 7).unwrap();
        let dom = DomainSpec::Hull(h);
        let opts = BracketOptions::default();
        let (z, w) = (pt(&[0.0, 0.0]), pt(&[0.75, 0.0]));
        let lo = caratheodory_lower_bound(&dom, &z, &w, &opts).unwrap();
        assert!(lo > 0.5 && lo <= 0.75f64.atanh() + 1e-12, "{lo}");
        let n = norm_lower_bound(&dom, &z, &pt(&[1.0, 0.0]), &opts).unwrap();
        assert!(n > 0.5 && n <= 1.0 + 1e-12, "{n}");
    }
}
