use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kobalab::domains::DomainSpec;
use kobalab::dynamics::{denjoy_wolff_verdict, horosphere_orbit_invariance_check, iterate_orbit, HoloMap, MapExpr};
use kobalab::point::{c as cx, Point};
use kobalab::tol::Tolerances;

fn ball_map() -> HoloMap {
    let unitary = vec![vec![cx(-1.0, 0.0), cx(0.0, 0.0)], vec![cx(0.0, 0.0), cx(0.0, 1.0)]];
    let expr = MapExpr::BallAutomorphism { center: Point::real(&[0.2, 0.0]), unitary: Some(unitary) };
    HoloMap::self_map(expr, &DomainSpec::Ball(2)).unwrap()
}

fn orbits(c: &mut Criterion) {
    let f = ball_map();
    let z0 = Point::real(&[0.1, 0.3]);
    c.bench_function("iterate_orbit/ball/500", |b| b.iter(|| iterate_orbit(black_box(&f), &z0, 500).unwrap()));
    let starts: Vec<Point> = (0..10).map(|i| Point::real(&[0.05 * i as f64, -0.04 * i as f64])).collect();
    c.bench_function("denjoy_wolff/ball/10x500", |b| {
        b.iter(|| denjoy_wolff_verdict(black_box(&f), &starts, 500, 1e-6, &Tolerances::default()).unwrap())
    });
}

fn horospheres(c: &mut Criterion) {
    let maps = vec![
        MapExpr::DiscHyperbolic { sigma: cx(1.0, 0.0), step: 0.1 },
        MapExpr::DiscParabolic { sigma: cx(1.0, 0.0), step: 1.0 },
    ];
    let f = HoloMap::self_map(MapExpr::CoordMap { maps }, &DomainSpec::Polydisc(2)).unwrap();
    let z0 = Point::real(&[0.0, 0.0]);
    c.bench_function("horosphere_invariance/bidisc/200", |b| {
        b.iter(|| horosphere_orbit_invariance_check(black_box(&f), &z0, 200, 50, &Tolerances::default()).unwrap())
    });
}

criterion_group!(benches, orbits, horospheres);
criterion_main!(benches);
