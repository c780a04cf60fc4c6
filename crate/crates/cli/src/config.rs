//! Experiment configuration, schema `v1`.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use kobalab::domains::DomainSpec;
use kobalab::dynamics::MapExpr;
use kobalab::point::{c, Point, C64};
use kobalab::tol::Tolerances;
use kobalab::visibility::VisibilityMode;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schema {
    #[serde(rename = "v1")]
    V1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Distance,
    Geodesic,
    Visibility,
    LimitSet,
    Conjecture1,
    Iterate,
    Horosphere,
    Julia,
    DwVerdict,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Distance => "distance",
            Kind::Geodesic => "geodesic",
            Kind::Visibility => "visibility",
            Kind::LimitSet => "limit-set",
            Kind::Conjecture1 => "conjecture1",
            Kind::Iterate => "iterate",
            Kind::Horosphere => "horosphere",
            Kind::Julia => "julia",
            Kind::DwVerdict => "dw-verdict",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: Schema,
    pub kind: Kind,
    pub domain: DomainSpec,
    #[serde(default)]
    pub parameters: serde_json::Value,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| anyhow!("malformed config at `{}`: {}", e.path(), e.inner()))
    }

    /// Typed view of `parameters` for the configured kind.
    pub fn parameters<T: DeserializeOwned>(&self) -> Result<T> {
        let value = match &self.parameters {
            serde_json::Value::Null => serde_json::Value::Object(Default::default()),
            v => v.clone(),
        };
        serde_path_to_error::deserialize(value)
            .map_err(|e| anyhow!("malformed config at `parameters.{}`: {}", e.path(), e.inner()))
    }
}

/// A path, or a family of paths, to build in the configured domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSpec {
    Segment {
        z: Point,
        w: Point,
    },
    Ray {
        z0: Point,
        p: Point,
    },
    /// The explicit bidisc curve between `(-r, 0)` and `(r, 0)`.
    BidiscExample {
        r: f64,
    },
    /// Bidisc curves with `r = 1 - 2^-k` for `k = 1..=k_max`.
    BidiscExampleFamily {
        k_max: usize,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceParams {
    pub z: Point,
    pub w: Point,
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicParams {
    pub path: PathSpec,
    /// Intervals of the exported table, which has `samples + 1` rows.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_triples")]
    pub triples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisibilityParams {
    pub p: Point,
    pub q: Point,
    pub mode: VisibilityMode,
    #[serde(default = "default_k_radius")]
    pub k_radius: f64,
    #[serde(default = "default_families")]
    pub families: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsParams {
    pub paths: Vec<PathSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateParams {
    pub map: MapExpr,
    /// Explicit starting points, followed by `random_starts` seeded interior samples.
    #[serde(default)]
    pub starts: Vec<Point>,
    #[serde(default)]
    pub random_starts: usize,
    #[serde(default = "default_orbit_length")]
    pub n_max: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorosphereParams {
    pub map: MapExpr,
    pub z0: Option<Point>,
    #[serde(default = "default_orbit_length")]
    pub n_max: usize,
    #[serde(default = "default_tail")]
    pub tail: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JuliaParams {
    pub map: MapExpr,
    pub m: usize,
    /// Estimated from the orbit of `z0` when absent.
    pub q: Option<Point>,
    pub z0: Option<Point>,
    #[serde(default = "default_julia_orbit")]
    pub n_max: usize,
    #[serde(default = "default_sigma")]
    pub sigma: C64,
    #[serde(default)]
    pub j0: usize,
    #[serde(default = "default_julia_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DwParams {
    pub map: MapExpr,
    /// Explicit starting points, followed by `random_starts` seeded interior samples.
    #[serde(default)]
    pub starts: Vec<Point>,
    #[serde(default)]
    pub random_starts: usize,
    #[serde(default = "default_dw_orbit")]
    pub n_max: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

fn default_samples() -> usize {
    256
}

fn default_triples() -> usize {
    64
}

fn default_k_radius() -> f64 {
    1.0
}

fn default_families() -> usize {
    3
}

fn default_orbit_length() -> usize {
    200
}

fn default_tail() -> usize {
    50
}

fn default_eps() -> f64 {
    1e-6
}

fn default_julia_orbit() -> usize {
    300
}

fn default_sigma() -> C64 {
    c(1.0, 0.0)
}

fn default_julia_samples() -> usize {
    33
}

fn default_dw_orbit() -> usize {
    500
}
