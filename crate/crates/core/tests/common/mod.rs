//! Shared fixtures: model domains and the suite of self-maps.
#![allow(dead_code)]

use kobalab::domains::DomainSpec;
use kobalab::dynamics::MapExpr;
use kobalab::point::{c, Point, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn model_domains() -> Vec<DomainSpec> {
    vec![
        DomainSpec::Ball(1),
        DomainSpec::Ball(2),
        DomainSpec::Ball(3),
        DomainSpec::Polydisc(2),
        DomainSpec::Polydisc(3),
        DomainSpec::product(vec![DomainSpec::Ball(2), DomainSpec::Polydisc(1)]).unwrap(),
    ]
}

pub fn hyperbolic(step: f64) -> MapExpr {
    MapExpr::DiscHyperbolic { sigma: c(1.0, 0.0), step }
}

pub fn parabolic(step: f64) -> MapExpr {
    MapExpr::DiscParabolic { sigma: c(1.0, 0.0), step }
}

pub fn rotation(theta: f64) -> MapExpr {
    MapExpr::DiscMobius { a: c(0.0, 0.0), theta }
}

pub fn scale(s: f64) -> MapExpr {
    MapExpr::Linear { matrix: vec![vec![c(s, 0.0)]] }
}

fn diag(entries: &[C64]) -> Vec<Vec<C64>> {
    (0..entries.len())
        .map(|i| (0..entries.len()).map(|j| if i == j { entries[i] } else { c(0.0, 0.0) }).collect())
        .collect()
}

/// Every primitive appears at least once, on a domain it maps into itself.
pub fn map_suite() -> Vec<(DomainSpec, MapExpr)> {
    let disc = DomainSpec::Polydisc(1);
    let bidisc = DomainSpec::Polydisc(2);
    let ball = DomainSpec::Ball(2);
    let product = DomainSpec::product(vec![DomainSpec::Ball(2), DomainSpec::Polydisc(1)]).unwrap();
    vec![
        (disc.clone(), hyperbolic(0.3)),
        (disc.clone(), parabolic(1.0)),
        (disc.clone(), MapExpr::DiscMobius { a: c(0.3, 0.2), theta: 0.7 }),
        (disc.clone(), MapExpr::DiscPower { k: 3 }),
        (disc.clone(), MapExpr::Constant { value: Point(vec![c(0.1, -0.4)]) }),
        (bidisc.clone(), MapExpr::CoordMap { maps: vec![hyperbolic(0.2), rotation(2f64.sqrt())] }),
        (bidisc.clone(), MapExpr::CoordMap { maps: vec![parabolic(0.5), scale(0.5)] }),
        (
            bidisc.clone(),
            MapExpr::Linear { matrix: vec![vec![c(0.5, 0.0), c(0.0, 0.3)], vec![c(0.1, 0.0), c(0.4, 0.0)]] },
        ),
        (
            bidisc.clone(),
            MapExpr::Compose {
                maps: vec![
                    MapExpr::Projection { j: 0 },
                    MapExpr::DiscPower { k: 2 },
                    MapExpr::Linear { matrix: vec![vec![c(0.5, 0.0)], vec![c(0.0, 0.5)]] },
                ],
            },
        ),
        (
            bidisc.clone(),
            MapExpr::Conjugate {
                z: Point::real(&[0.0, 0.0]),
                w: Point::real(&[0.5, 0.0]),
                map: Box::new(parabolic(0.7)),
            },
        ),
        (ball.clone(), MapExpr::BallAutomorphism { center: Point::real(&[0.3, -0.2]), unitary: None }),
        (
            ball.clone(),
            MapExpr::BallAutomorphism {
                center: Point::real(&[0.2, 0.0]),
                unitary: Some(diag(&[c(-1.0, 0.0), C64::from_polar(1.0, 0.5)])),
            },
        ),
        (ball.clone(), MapExpr::Linear { matrix: diag(&[c(0.6, 0.0), c(0.0, 0.8)]) }),
        (product.clone(), MapExpr::Linear { matrix: diag(&[c(0.5, 0.0), c(0.5, 0.0), c(0.9, 0.0)]) }),
        (
            product,
            MapExpr::Conjugate {
                z: Point::real(&[0.1, 0.0, 0.0]),
                w: Point::real(&[0.0, 0.4, -0.3]),
                map: Box::new(hyperbolic(0.4)),
            },
        ),
    ]
}

/// Fixed-point-free ball automorphisms `z -> Phi_a(-U z)` with `U` diagonal.
pub fn ball_hyperbolics() -> Vec<MapExpr> {
    [(0.1, 0.0), (0.15, 0.3), (0.2, 1.0), (0.12, 2.0), (0.25, -0.7)]
        .iter()
        .map(|(a, theta)| MapExpr::BallAutomorphism {
            center: Point::real(&[*a, 0.0]),
            unitary: Some(diag(&[c(-1.0, 0.0), C64::from_polar(1.0, *theta)])),
        })
        .collect()
}
