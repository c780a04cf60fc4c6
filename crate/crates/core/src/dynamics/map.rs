//! Holomorphic maps between model domains, described by expression trees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disc::{hyperbolic, mobius, parabolic};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::geodesics::ComplexGeodesic;
use crate::metric::ball_automorphism;
use crate::point::{c, Point, C64};

/// Interior samples checked when a map is built.
pub const SELF_MAP_SAMPLES: usize = 200;
const SELF_MAP_SEED: u64 = 0x5e1f;

/// Expression tree over holomorphic primitives. Disc primitives act on
/// one coordinate; `Compose` applies its maps in list order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapExpr {
    /// `z -> e^{i theta} (z - a) / (1 - conj(a) z)`.
    DiscMobius {
        a: C64,
        theta: f64,
    },
    /// Hyperbolic automorphism with fixed points `+-sigma`, attracting at
    /// `sigma`, moving 0 by Kobayashi distance `step / 2`.
    DiscHyperbolic {
        sigma: C64,
        step: f64,
    },
    /// Parabolic automorphism with Denjoy-Wolff point `sigma`.
    DiscParabolic {
        sigma: C64,
        step: f64,
    },
    /// `z -> z^k`.
    DiscPower {
        k: u32,
    },
    Constant {
        value: Point,
    },
    /// One disc map per coordinate of a polydisc.
    CoordMap {
        maps: Vec<MapExpr>,
    },
    /// `z -> Phi_a(U z)` with `Phi_a` the involution exchanging `a` and 0;
    /// `U` defaults to the identity.
    BallAutomorphism {
        center: Point,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitary: Option<Vec<Vec<C64>>>,
    },
    /// `z -> M z`.
    Linear {
        matrix: Vec<Vec<C64>>,
    },
    Compose {
        maps: Vec<MapExpr>,
    },
    /// `phi o f o rho` for the complex geodesic `phi` through `z` and `w`.
    Conjugate {
        z: Point,
        w: Point,
        map: Box<MapExpr>,
    },
    /// `z -> z_j` (zero-based).
    Projection {
        j: usize,
    },
}

#[derive(Debug, Clone)]
enum Node {
    Disc(DiscPrimitive),
    Constant(Point),
    Coord(Vec<Node>),
    Ball { center: Point, unitary: Option<Vec<Vec<C64>>> },
    Linear(Vec<Vec<C64>>),
    Compose(Vec<Node>),
    Conjugate { phi: ComplexGeodesic, map: Box<Node> },
    Projection(usize),
}

#[derive(Debug, Clone, Copy)]
enum DiscPrimitive {
    Mobius { a: C64, rot: C64 },
    Hyperbolic { sigma: C64, step: f64 },
    Parabolic { sigma: C64, step: f64 },
    Power(u32),
}

impl DiscPrimitive {
    fn apply(&self, z: C64) -> C64 {
        match *self {
            DiscPrimitive::Mobius { a, rot } => rot * mobius(a, z),
            DiscPrimitive::Hyperbolic { sigma, step } => hyperbolic(sigma, step, z),
            DiscPrimitive::Parabolic { sigma, step } => parabolic(sigma, step, z),
            DiscPrimitive::Power(k) => z.powu(k),
        }
    }
}

fn matvec(m: &[Vec<C64>], z: &Point) -> Point {
    Point(m.iter().map(|row| row.iter().zip(z.coords()).map(|(a, x)| a * x).sum()).collect())
}

fn matrix_dims(m: &[Vec<C64>], what: &str) -> Result<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if m.is_empty() || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(format!("{what} must be a non-empty rectangular matrix")));
    }
    if m.iter().flatten().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok((m.len(), cols))
}

fn unit_circle(sigma: C64) -> Result<()> {
    if (sigma.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("sigma must be unimodular, got modulus {}", sigma.norm())));
    }
    Ok(())
}

fn require_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

impl Node {
    /// Compiles `expr` for inputs in `source`; returns the node and its
    /// output dimension.
    fn compile(expr: &MapExpr, source: &DomainSpec) -> Result<(Node, usize)> {
        let n = source.dim();
        let disc = |p: DiscPrimitive| -> Result<(Node, usize)> {
            require_dim(1, n)?;
            Ok((Node::Disc(p), 1))
        };
        match expr {
            MapExpr::DiscMobius { a, theta } => {
                if a.norm() >= 1.0 || !theta.is_finite() {
                    return Err(Error::InvalidArgument("disc Mobius map needs |a| < 1 and finite theta".into()));
                }
                disc(DiscPrimitive::Mobius { a: *a, rot: C64::from_polar(1.0, *theta) })
            }
            MapExpr::DiscHyperbolic { sigma, step } => {
                unit_circle(*sigma)?;
                if !(step.is_finite() && *step >= 0.0) {
                    return Err(Error::InvalidArgument("hyperbolic step must be finite and non-negative".into()));
                }
                disc(DiscPrimitive::Hyperbolic { sigma: *sigma, step: *step })
            }
            MapExpr::DiscParabolic { sigma, step } => {
                unit_circle(*sigma)?;
                if !step.is_finite() {
                    return Err(Error::NonFinite);
                }
                disc(DiscPrimitive::Parabolic { sigma: *sigma, step: *step })
            }
            MapExpr::DiscPower { k } => {
                if *k == 0 {
                    return Err(Error::InvalidArgument("power must be positive; use a constant".into()));
                }
                disc(DiscPrimitive::Power(*k))
            }
            MapExpr::Constant { value } => Ok((Node::Constant(value.clone()), value.dim())),
            MapExpr::CoordMap { maps } => {
                require_dim(maps.len(), n)?;
                if !source.is_polydisc_like() {
                    return Err(Error::InvalidArgument("coordinate maps act on polydiscs".into()));
                }
                let disc = DomainSpec::Polydisc(1);
                let nodes = maps
                    .iter()
                    .map(|m| {
                        let (node, out) = Node::compile(m, &disc)?;
                        require_dim(1, out)?;
                        Ok(node)
                    })
                    .collect::<Result<_>>()?;
                Ok((Node::Coord(nodes), n))
            }
            MapExpr::BallAutomorphism { center, unitary } => {
                require_dim(center.dim(), n)?;
                if center.norm() >= 1.0 {
                    return Err(Error::InvalidArgument("ball automorphism center must lie in the ball".into()));
                }
                if let Some(u) = unitary {
                    require_dim(n, matrix_dims(u, "unitary")?.0)?;
                    require_dim(n, u[0].len())?;
                    for i in 0..n {
                        for j in 0..n {
                            let g: C64 = (0..n).map(|k| u[k][i].conj() * u[k][j]).sum();
                            let target = if i == j { 1.0 } else { 0.0 };
                            if (g - c(target, 0.0)).norm() > 1e-10 {
                                return Err(Error::InvalidArgument("matrix is not unitary".into()));
                            }
                        }
                    }
                }
                Ok((Node::Ball { center: center.clone(), unitary: unitary.clone() }, n))
            }
            MapExpr::Linear { matrix } => {
                let (rows, cols) = matrix_dims(matrix, "linear map")?;
                require_dim(cols, n)?;
                Ok((Node::Linear(matrix.clone()), rows))
            }
            MapExpr::Compose { maps } => {
                let mut dom = source.clone();
                let mut nodes = Vec::with_capacity(maps.len());
                for m in maps {
                    let (node, out) = Node::compile(m, &dom)?;
                    nodes.push(node);
                    if out != dom.dim() {
                        // intermediate images are only dimension-checked
                        dom = DomainSpec::Polydisc(out);
                    }
                }
                Ok((Node::Compose(nodes), dom.dim()))
            }
            MapExpr::Conjugate { z, w, map } => {
                let phi = ComplexGeodesic::through(source, z, w)?;
                let (node, out) = Node::compile(map, &DomainSpec::Polydisc(1))?;
                require_dim(1, out)?;
                Ok((Node::Conjugate { phi, map: Box::new(node) }, n))
            }
            MapExpr::Projection { j } => {
                if *j >= n {
                    return Err(Error::InvalidArgument(format!("projection index {j} out of range for dimension {n}")));
                }
                Ok((Node::Projection(*j), 1))
            }
        }
    }

    fn apply(&self, z: &Point) -> Point {
        match self {
            Node::Disc(p) => Point(vec![p.apply(z[0])]),
            Node::Constant(v) => v.clone(),
            Node::Coord(maps) => {
                Point(maps.iter().zip(z.coords()).map(|(m, x)| m.apply(&Point(vec![*x]))[0]).collect())
            }
            Node::Ball { center, unitary } => match unitary {
                Some(u) => ball_automorphism(center, &matvec(u, z)),
                None => ball_automorphism(center, z),
            },
            Node::Linear(m) => matvec(m, z),
            Node::Compose(maps) => maps.iter().fold(z.clone(), |x, m| m.apply(&x)),
            Node::Conjugate { phi, map } => phi.phi(map.apply(&Point(vec![phi.rho(z)]))[0]),
            Node::Projection(j) => Point(vec![z[*j]]),
        }
    }
}

/// A holomorphic map `source -> target`, checked on seeded interior samples.
#[derive(Debug, Clone)]
pub struct HoloMap {
    expr: MapExpr,
    source: DomainSpec,
    target: DomainSpec,
    node: Node,
}

impl HoloMap {
    pub fn new(expr: MapExpr, source: &DomainSpec, target: &DomainSpec) -> Result<Self> {
        source.validate()?;
        target.validate()?;
        let (node, out) = Node::compile(&expr, source)?;
        require_dim(target.dim(), out)?;
        let map = Self { expr, source: source.clone(), target: target.clone(), node };
        let mut rng = ChaCha8Rng::seed_from_u64(SELF_MAP_SEED);
        let tol = target.tol_bd();
        for _ in 0..SELF_MAP_SAMPLES {
            let z = source.sample_interior(&mut rng);
            let fz = map.apply(&z);
            let m = target.margin(&fz);
            if !m.is_finite() || m < -tol {
                return Err(Error::InvalidArgument(format!(
                    "map does not send the domain into the target (margin {m:e} at a sample point)"
                )));
            }
        }
        Ok(map)
    }

    /// A self-map of `dom`.
    pub fn self_map(expr: MapExpr, dom: &DomainSpec) -> Result<Self> {
        Self::new(expr, dom, dom)
    }

    pub fn expr(&self) -> &MapExpr {
        &self.expr
    }

    pub fn source(&self) -> &DomainSpec {
        &self.source
    }

    pub fn target(&self) -> &DomainSpec {
        &self.target
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }

    /// Image without membership checks.
    pub fn apply(&self, z: &Point) -> Point {
        self.node.apply(z)
    }
}

/// `F(z)` for `z` in the source; images beyond the boundary tolerance are a
/// numeric escape.
pub fn evaluate(f: &HoloMap, z: &Point) -> Result<Point> {
    f.source.require_inside(z)?;
    let fz = f.apply(z);
    let m = f.target.margin(&fz);
    if !m.is_finite() || m < -f.target.tol_bd() {
        return Err(Error::NumericEscape { step: 1, margin: m });
    }
    Ok(fz)
}
