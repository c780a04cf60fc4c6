//! Property checks of the documented invariants, on seeded random inputs.

mod common;

use common::{map_suite, model_domains, rng};
use kobalab::domains::{DomainSpec, SegmentLocation};
use kobalab::dynamics::{denjoy_wolff_verdict, iterate_orbit, record_indices, DwVerdict, HoloMap, MapExpr};
use kobalab::geodesics::{bidisc_example_segment, check_geodesic_on, complex_geodesic_through, geodesic_segment};
use kobalab::metric::{kobayashi_distance, kobayashi_royden_norm, BracketOptions};
use kobalab::point::{c, Point, C64};
use kobalab::tol::Tolerances;
use kobalab::visibility::{complex_visibility_probe, essential_visibility_probe, strong_visibility_probe, Approach};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::Rng;

fn k(dom: &DomainSpec, z: &Point, w: &Point) -> f64 {
    let b = kobayashi_distance(dom, z, w, &BracketOptions::default()).unwrap();
    assert!(b.exact);
    b.lo
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x6b6f_6261),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn domain(index: usize) -> DomainSpec {
    let all = model_domains();
    all[index % all.len()].clone()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn model_domains_are_convex(d in 0usize..6, seed in any::<u64>(), t in 0.0f64..1.0) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (z, w) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        prop_assert!(dom.contains(&z.lerp(&w, t)).unwrap());
    }

    #[test]
    fn supporting_functionals_are_non_positive_inside(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let xi = dom.sample_boundary(&mut r);
        let f = dom.supporting_functional_at(&xi).unwrap();
        for _ in 0..50 {
            prop_assert!(f.value(&dom.sample_interior(&mut r)) <= 1e-12);
        }
    }

    #[test]
    fn boundary_distance_is_one_lipschitz(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (z, w) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        let steps = 50;
        for i in 0..steps {
            let (a, b) = (z.lerp(&w, i as f64 / steps as f64), z.lerp(&w, (i + 1) as f64 / steps as f64));
            let da = dom.boundary_distance(&a).unwrap();
            let db = dom.boundary_distance(&b).unwrap();
            prop_assert!((da - db).abs() <= a.dist(&b) + 1e-12);
        }
    }

    #[test]
    fn model_segments_are_never_mixed(d in 0usize..6, seed in any::<u64>(), interior in any::<bool>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let p = dom.sample_boundary(&mut r);
        let q = if interior { dom.sample_interior(&mut r) } else { dom.sample_boundary(&mut r) };
        prop_assert_ne!(dom.segment_location(&p, &q).unwrap(), SegmentLocation::Mixed);
    }

    #[test]
    fn model_distances_are_symmetric_metrics(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (z, w, u) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        let opts = BracketOptions::default();
        let b = kobayashi_distance(&dom, &z, &w, &opts).unwrap();
        prop_assert!(b.lo <= b.hi && b.gap() <= 1e-9);
        let back = kobayashi_distance(&dom, &w, &z, &opts).unwrap();
        prop_assert!((b.lo - back.lo).abs() <= 1e-12);
        prop_assert!(k(&dom, &z, &w) <= k(&dom, &z, &u) + k(&dom, &u, &w) + 1e-12);
    }

    #[test]
    fn holomorphic_maps_contract(m in 0usize..15, seed in any::<u64>()) {
        let (dom, expr) = map_suite()[m].clone();
        let f = HoloMap::self_map(expr, &dom).unwrap();
        let mut r = rng(seed);
        let (z, w) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        prop_assert!(k(&dom, &f.apply(&z), &f.apply(&w)) <= k(&dom, &z, &w) + 1e-9);
    }

    #[test]
    fn model_segments_reproduce_the_distance(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (z, w) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        let path = geodesic_segment(&dom, &z, &w, &BracketOptions::default()).unwrap();
        prop_assert!(path.sample(0.0).dist(&z) < 1e-9 && path.sample(1.0).dist(&w) < 1e-9);
        prop_assert!((k(&dom, &path.sample(0.0), &path.sample(1.0)) - k(&dom, &z, &w)).abs() < 1e-9);
        // monotone regrids of [0, 1] see the same defect
        let warped: Vec<f64> = (0..=64).map(|i| (i as f64 / 64.0).powi(3)).collect();
        prop_assert!(path.defect() < 1e-8 && check_geodesic_on(&path, &warped) < 1e-8);
    }

    #[test]
    fn complex_geodesics_are_isometries(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (z, w) = (dom.sample_interior(&mut r), dom.sample_interior(&mut r));
        let phi = complex_geodesic_through(&dom, &z, &w).unwrap();
        for _ in 0..20 {
            let a = C64::from_polar(0.95 * r.gen::<f64>(), 6.3 * r.gen::<f64>());
            let b = C64::from_polar(0.95 * r.gen::<f64>(), 6.3 * r.gen::<f64>());
            let disc = k(&DomainSpec::Polydisc(1), &Point(vec![a]), &Point(vec![b]));
            prop_assert!((k(&dom, &phi.phi(a), &phi.phi(b)) - disc).abs() < 1e-8);
        }
    }

    #[test]
    fn bidisc_example_has_the_closed_form_distance(r in 0.01f64..0.999, t in 0.0f64..0.5) {
        let path = bidisc_example_segment(r).unwrap();
        let dom = DomainSpec::Polydisc(2);
        prop_assert!((k(&dom, &path.sample(0.0), &path.sample(t)) - (2.0 * r * t).atanh()).abs() < 1e-10);
    }

    #[test]
    fn records_have_the_prefix_max_property(profile in prop::collection::vec(0.0f64..10.0, 1..60)) {
        let mut dist = vec![0.0];
        dist.extend(profile);
        let records = record_indices(&dist);
        prop_assert_eq!(records.first(), Some(&1));
        for n in &records {
            prop_assert!(dist[..=*n].iter().all(|d| *d <= dist[*n]));
        }
        // every strict prefix maximum beyond n = 1 is a record
        let mut best = dist[0].max(dist[1]);
        for (n, d) in dist.iter().enumerate().skip(2) {
            prop_assert_eq!(*d > best, records.contains(&n));
            best = best.max(*d);
        }
    }

    #[test]
    fn orbits_shadow_and_slow_down(m in 0usize..15, seed in any::<u64>()) {
        let (dom, expr) = map_suite()[m].clone();
        let f = HoloMap::self_map(expr, &dom).unwrap();
        let mut r = rng(seed);
        let (z0, z1) = (dom.sample_interior(&mut r).scale_re(0.5), dom.sample_interior(&mut r).scale_re(0.5));
        let (a, b) = (iterate_orbit(&f, &z0, 40).unwrap(), iterate_orbit(&f, &z1, 40).unwrap());
        let start = k(&dom, &z0, &z1);
        let mut gap = f64::INFINITY;
        // rounding in a distance grows like 1 / margin near the boundary
        let slack = |z: &Point, w: &Point| 1e-9 + 1e-14 / dom.margin(z).min(dom.margin(w));
        for n in 0..a.points.len().min(b.points.len()) {
            prop_assert!(k(&dom, &a.points[n], &b.points[n]) <= start + slack(&a.points[n], &b.points[n]));
            if n + 1 < a.points.len() {
                let next = k(&dom, &a.points[n + 1], &a.points[n]);
                prop_assert!(next <= gap + slack(&a.points[n + 1], &a.points[n]));
                gap = next;
            }
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn strong_visibility_implies_the_weaker_notions(d in 0usize..6, seed in any::<u64>()) {
        let dom = domain(d);
        let mut r = rng(seed);
        let (p, q) = (dom.sample_boundary(&mut r), dom.sample_boundary(&mut r));
        let strong = strong_visibility_probe(&dom, &p, &q, 1.0, 3, 10).unwrap();
        if let Approach::Finite(radius) = strong.approach {
            let essential = essential_visibility_probe(&dom, &p, &q, 10).unwrap();
            prop_assert!(essential.approach.radius().unwrap() <= radius);
            let complex = complex_visibility_probe(&dom, &p, &q, 10).unwrap();
            prop_assert!(complex.approach.radius().unwrap() <= radius + 1e-6);
        }
    }

    #[test]
    fn ball_automorphisms_never_split(seed in any::<u64>(), a in 0.05f64..0.3, theta in 0.0f64..6.3, parabolic in any::<bool>()) {
        let ball = DomainSpec::Ball(2);
        let u = vec![vec![c(-1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), C64::from_polar(1.0, theta)]];
        let expr = if parabolic {
            // conjugate of a parabolic disc map along the first axis
            MapExpr::Conjugate { z: Point::real(&[0.0, 0.0]), w: Point::real(&[0.5, 0.0]), map: Box::new(common::parabolic(a)) }
        } else {
            MapExpr::BallAutomorphism { center: Point::real(&[a, 0.0]), unitary: Some(u) }
        };
        let f = HoloMap::self_map(expr, &ball).unwrap();
        let mut r = rng(seed);
        let starts: Vec<Point> = (0..4).map(|_| ball.sample_interior(&mut r).scale_re(0.9)).collect();
        let verdict = denjoy_wolff_verdict(&f, &starts, 300, 1e-6, &Tolerances::default()).unwrap();
        prop_assert!(!matches!(verdict, DwVerdict::MultiplePoints(_)));
    }
}

#[test]
fn norm_integrates_to_the_distance_along_geodesics() {
    let opts = BracketOptions::default();
    for (i, dom) in model_domains().into_iter().enumerate() {
        let mut r = rng(i as u64);
        let (z, w) = (dom.sample_interior(&mut r).scale_re(0.8), dom.sample_interior(&mut r).scale_re(0.8));
        let path = geodesic_segment(&dom, &z, &w, &opts).unwrap();
        let panels = 1000;
        let h = 1.0 / panels as f64;
        let speed = |t: f64| {
            let e = 1e-6;
            let (a, b) = (path.sample((t - e).max(0.0)), path.sample((t + e).min(1.0)));
            let v = (&b - &a).scale_re(1.0 / ((t + e).min(1.0) - (t - e).max(0.0)));
            let n = kobayashi_royden_norm(&dom, &path.sample(t), &v, &opts).unwrap();
            assert!(n.exact);
            n.lo
        };
        let mut integral = 0.0;
        for j in 0..panels {
            let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
            integral += h / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
        }
        assert!((integral - k(&dom, &z, &w)).abs() < 1e-6, "{dom:?}: {integral} vs {}", k(&dom, &z, &w));
    }
}

#[test]
fn complex_points_reject_the_wrong_dimension() {
    let dom = DomainSpec::Polydisc(2);
    let err =
        kobayashi_distance(&dom, &Point(vec![c(0.0, 0.0)]), &Point::real(&[0.0, 0.0]), &BracketOptions::default());
    assert!(err.is_err());
}
