//! One runner per experiment kind.

use anyhow::{bail, Result};
use kobalab::domains::DomainSpec;
use kobalab::dynamics::{
    denjoy_wolff_verdict, horosphere_orbit_invariance_check, iterate_orbit, julia_polydisc_check, julia_q,
    target_set_estimate, HoloMap, OrbitRecord,
};
use kobalab::geodesics::{bidisc_example_segment, check_geodesic, geodesic_ray, geodesic_segment, GeodesicPath};
use kobalab::metric::{kobayashi_distance, BracketOptions};
use kobalab::point::Point;
use kobalab::tol::{DEFAULT_BUDGET, DISC_DEGREE};
use kobalab::visibility::{
    complex_visibility_probe, conjecture1_classify, essential_visibility_probe, limit_set_estimate,
    strong_visibility_probe, LimitSetEstimate, PairCase, VisibilityMode, PROBE_DOUBLINGS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    DistanceParams, DwParams, ExperimentConfig, GeodesicParams, HorosphereParams, IterateParams, JuliaParams, Kind,
    PathSpec, PathsParams, VisibilityParams,
};
use crate::output::{num, point_cells, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub kind: Kind,
    pub status: Status,
    pub result: Value,
    pub metadata: Value,
}

pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
}

struct Computed {
    status: Status,
    result: Value,
    /// Kind-specific knobs, merged into the common metadata.
    knobs: Value,
    tables: Vec<Table>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let computed = match cfg.kind {
        Kind::Distance => distance(cfg)?,
        Kind::Geodesic => geodesic(cfg)?,
        Kind::Visibility => visibility(cfg)?,
        Kind::LimitSet => limit_set(cfg)?,
        Kind::Conjecture1 => conjecture1(cfg)?,
        Kind::Iterate => iterate(cfg)?,
        Kind::Horosphere => horosphere(cfg)?,
        Kind::Julia => julia(cfg)?,
        Kind::DwVerdict => dw_verdict(cfg)?,
    };
    let mut metadata = json!({ "seed": cfg.seed, "tolerances": cfg.tolerances });
    if let (Value::Object(m), Value::Object(k)) = (&mut metadata, computed.knobs) {
        m.extend(k);
    }
    Ok(Outcome {
        report: Report { schema: "v1", kind: cfg.kind, status: computed.status, result: computed.result, metadata },
        tables: computed.tables,
    })
}

fn bracket_options(cfg: &ExperimentConfig, degree: Option<usize>) -> BracketOptions {
    BracketOptions {
        budget: cfg.budget.unwrap_or(DEFAULT_BUDGET),
        seed: cfg.seed,
        degree: degree.unwrap_or(DISC_DEGREE),
        tol_exact: cfg.tolerances.tol_exact,
    }
}

fn distance(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: DistanceParams = cfg.parameters()?;
    let opts = bracket_options(cfg, p.degree);
    let b = kobayashi_distance(&cfg.domain, &p.z, &p.w, &opts)?;
    let mut table = Table::new("bracket", &["lo", "hi", "exact", "gap"]);
    table.push(vec![num(b.lo), num(b.hi), b.exact.to_string(), num(b.gap())]);
    Ok(Computed {
        status: Status::Pass,
        result: json!({ "lo": b.lo, "hi": b.hi, "exact": b.exact, "gap": b.gap() }),
        knobs: json!({ "bracket": opts }),
        tables: vec![table],
    })
}

fn build_paths(dom: &DomainSpec, spec: &PathSpec, opts: &BracketOptions) -> Result<Vec<GeodesicPath>> {
    let bidisc = |r: f64| -> Result<GeodesicPath> {
        if *dom != DomainSpec::Polydisc(2) {
            bail!("the bidisc example needs the domain polydisc of dimension 2");
        }
        Ok(bidisc_example_segment(r)?)
    };
    Ok(match spec {
        PathSpec::Segment { z, w } => vec![geodesic_segment(dom, z, w, opts)?],
        PathSpec::Ray { z0, p } => vec![geodesic_ray(dom, z0, p)?],
        PathSpec::BidiscExample { r } => vec![bidisc(*r)?],
        PathSpec::BidiscExampleFamily { k_max } => {
            (1..=*k_max).map(|k| bidisc(1.0 - 0.5f64.powi(k as i32))).collect::<Result<_>>()?
        }
    })
}

fn geodesic(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: GeodesicParams = cfg.parameters()?;
    let opts = bracket_options(cfg, None);
    let paths = build_paths(&cfg.domain, &p.path, &opts)?;
    let [path] = paths.as_slice() else {
        bail!("a geodesic experiment takes a single path, got {}", paths.len());
    };
    let defect = check_geodesic(path, p.triples);
    let mut table = Table::new("path", &["t"])
        .point_columns("z", cfg.domain.dim())
        .columns(&["boundary_distance", "distance_to_start"]);
    for row in path.table(p.samples) {
        let mut cells = vec![num(row.t)];
        cells.extend(point_cells(&row.z));
        cells.extend([num(row.boundary_distance), num(row.distance_to_start)]);
        table.push(cells);
    }
    Ok(Computed {
        status: Status::Pass,
        result: json!({ "path_kind": path.kind(), "span": path.span(), "defect": defect, "path_defect": path.defect() }),
        knobs: json!({ "bracket": opts, "samples": p.samples, "triples": p.triples }),
        tables: vec![table],
    })
}

fn visibility(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: VisibilityParams = cfg.parameters()?;
    let budget = cfg.budget.unwrap_or(PROBE_DOUBLINGS);
    let dom = &cfg.domain;
    let verdict = match p.mode {
        VisibilityMode::Strong => strong_visibility_probe(dom, &p.p, &p.q, p.k_radius, p.families, budget)?,
        VisibilityMode::Essential => essential_visibility_probe(dom, &p.p, &p.q, budget)?,
        VisibilityMode::Complex => complex_visibility_probe(dom, &p.p, &p.q, budget)?,
    };
    let mut table = Table::new("evidence", &["family", "k", "r_k", "closest_approach", "argmin_t"]);
    for e in &verdict.evidence {
        table.push(vec![e.family.to_string(), e.k.to_string(), num(e.r_k), num(e.closest_approach), num(e.argmin_t)]);
    }
    Ok(Computed {
        status: Status::Pass,
        result: serde_json::to_value(&verdict)?,
        knobs: json!({ "budget": budget, "k_radius": p.k_radius, "families": p.families }),
        tables: vec![table],
    })
}

fn family(cfg: &ExperimentConfig) -> Result<(Vec<GeodesicPath>, BracketOptions)> {
    let p: PathsParams = cfg.parameters()?;
    let opts = bracket_options(cfg, None);
    let mut paths = Vec::new();
    for spec in &p.paths {
        paths.extend(build_paths(&cfg.domain, spec, &opts)?);
    }
    if paths.is_empty() {
        bail!("no paths given");
    }
    Ok((paths, opts))
}

fn limit_set_table(dom: &DomainSpec, gamma: &LimitSetEstimate) -> Table {
    let mut table = Table::new("limit_set", &["index", "source", "multiplicity"]).point_columns("p", dom.dim());
    for (i, z) in gamma.points.iter().enumerate() {
        let mut cells = vec![i.to_string(), gamma.source[i].to_string(), gamma.multiplicity[i].to_string()];
        cells.extend(point_cells(z));
        table.push(cells);
    }
    table
}

fn limit_set(cfg: &ExperimentConfig) -> Result<Computed> {
    let (paths, opts) = family(cfg)?;
    let gamma = limit_set_estimate(&paths)?;
    Ok(Computed {
        status: Status::Pass,
        tables: vec![limit_set_table(&cfg.domain, &gamma)],
        result: serde_json::to_value(&gamma)?,
        knobs: json!({ "bracket": opts, "paths": paths.len() }),
    })
}

fn conjecture1(cfg: &ExperimentConfig) -> Result<Computed> {
    let (paths, opts) = family(cfg)?;
    let gamma = limit_set_estimate(&paths)?;
    let classes = conjecture1_classify(&cfg.domain, &gamma)?;
    let count = |case: PairCase| classes.iter().filter(|p| p.case == case).count();
    let dim = cfg.domain.dim();
    let mut pairs = Table::new("pairs", &["i", "j", "case", "segment", "line_margin"]).point_columns("witness", dim);
    for p in &classes {
        let mut cells = vec![
            p.i.to_string(),
            p.j.to_string(),
            format!("{:?}", p.case),
            format!("{:?}", p.segment),
            num(p.line_margin),
        ];
        match &p.witness {
            Some(w) => cells.extend(point_cells(w)),
            None => cells.extend(std::iter::repeat_n(String::new(), 2 * dim)),
        }
        pairs.push(cells);
    }
    let violations: Vec<_> = classes.iter().filter(|p| p.case == PairCase::Violation).collect();
    Ok(Computed {
        status: if violations.is_empty() { Status::Pass } else { Status::Fail },
        result: json!({
            "limit_points": gamma.points.len(),
            "pairs": classes.len(),
            "case1": count(PairCase::Case1),
            "case2": count(PairCase::Case2),
            "violations": violations,
        }),
        knobs: json!({ "bracket": opts, "paths": paths.len(), "eps_cluster": gamma.eps_cluster, "h_cluster": gamma.h_cluster }),
        tables: vec![limit_set_table(&cfg.domain, &gamma), pairs],
    })
}

/// Explicit starts followed by `random` seeded interior samples.
fn starts(cfg: &ExperimentConfig, explicit: &[Point], random: usize) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut all = explicit.to_vec();
    all.extend((0..random).map(|_| cfg.domain.sample_interior(&mut rng)));
    if all.is_empty() {
        bail!("no starting points: give `starts` or `random_starts`");
    }
    Ok(all)
}

fn orbit_table(dim: usize, orbits: &[OrbitRecord]) -> Table {
    let mut table = Table::new("orbit", &["start", "n"]).point_columns("z", dim).columns(&["dist_to_start", "record"]);
    for (s, o) in orbits.iter().enumerate() {
        for (n, z) in o.points.iter().enumerate() {
            let mut cells = vec![s.to_string(), n.to_string()];
            cells.extend(point_cells(z));
            cells.extend([num(o.dist_to_start[n]), o.record_indices.contains(&n).to_string()]);
            table.push(cells);
        }
    }
    table
}

fn iterate(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: IterateParams = cfg.parameters()?;
    let f = HoloMap::self_map(p.map, &cfg.domain)?;
    let z0s = starts(cfg, &p.starts, p.random_starts)?;
    let orbits: Vec<OrbitRecord> =
        z0s.iter().map(|z0| iterate_orbit(&f, z0, p.n_max)).collect::<kobalab::error::Result<_>>()?;
    let clusters = target_set_estimate(&f, &z0s, p.n_max, p.eps)?;
    let dim = cfg.domain.dim();
    let mut target = Table::new("target_set", &["cluster", "count"]).point_columns("p", dim);
    for (i, t) in clusters.iter().enumerate() {
        let mut cells = vec![i.to_string(), t.count.to_string()];
        cells.extend(point_cells(&t.point));
        target.push(cells);
    }
    let summaries: Vec<Value> = orbits
        .iter()
        .map(|o| {
            json!({
                "z0": o.z0,
                "steps": o.points.len() - 1,
                "final_distance": o.dist_to_start.last(),
                "records": o.record_indices.len(),
                "escape": o.escape,
                "escaped": o.escaped(cfg.tolerances.escape_threshold),
                "cluster_estimate": o.cluster_estimate,
            })
        })
        .collect();
    Ok(Computed {
        status: Status::Pass,
        result: json!({ "orbits": summaries, "target_set": clusters }),
        knobs: json!({ "n_max": p.n_max, "eps": p.eps, "starts": z0s.len() }),
        tables: vec![orbit_table(dim, &orbits), target],
    })
}

fn horosphere(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: HorosphereParams = cfg.parameters()?;
    let f = HoloMap::self_map(p.map, &cfg.domain)?;
    let z0 = p.z0.unwrap_or_else(|| cfg.domain.center());
    let report = horosphere_orbit_invariance_check(&f, &z0, p.n_max, p.tail, &cfg.tolerances)?;
    let mut table = Table::new("estimates", &["index", "estimate"]);
    for (i, e) in report.estimates.iter().enumerate() {
        table.push(vec![i.to_string(), num(*e)]);
    }
    Ok(Computed {
        status: if report.pass { Status::Pass } else { Status::Fail },
        result: serde_json::to_value(&report)?,
        knobs: json!({ "z0": z0, "n_max": p.n_max, "tail": p.tail }),
        tables: vec![table],
    })
}

fn julia(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: JuliaParams = cfg.parameters()?;
    let f = HoloMap::self_map(p.map, &cfg.domain)?;
    let z0 = p.z0.unwrap_or_else(|| cfg.domain.center());
    let (q, residual) = match p.q {
        Some(q) => (q, None),
        None => {
            let (q, r) = julia_q(&f, &z0, p.n_max, p.m, &cfg.tolerances)?;
            (q, Some(r))
        }
    };
    let report = julia_polydisc_check(&f, p.m, &q, p.sigma, p.j0, p.samples, &cfg.tolerances)?;
    let mut table = Table::new("julia", &["m", "j0", "max_excess", "pass"]).point_columns("q", q.dim());
    let mut cells = vec![p.m.to_string(), p.j0.to_string(), num(report.max_excess), report.pass.to_string()];
    cells.extend(point_cells(&q));
    table.push(cells);
    Ok(Computed {
        status: if report.pass { Status::Pass } else { Status::Fail },
        result: json!({ "report": report, "q_residual": residual }),
        knobs: json!({ "z0": z0, "n_max": p.n_max, "samples": p.samples }),
        tables: vec![table],
    })
}

fn dw_verdict(cfg: &ExperimentConfig) -> Result<Computed> {
    let p: DwParams = cfg.parameters()?;
    let f = HoloMap::self_map(p.map, &cfg.domain)?;
    let z0s = starts(cfg, &p.starts, p.random_starts)?;
    let verdict = denjoy_wolff_verdict(&f, &z0s, p.n_max, p.eps, &cfg.tolerances)?;
    let dim = cfg.domain.dim();
    let mut table = Table::new("final", &["start", "steps"]).point_columns("z", dim).columns(&["dist_to_start"]);
    for (s, z0) in z0s.iter().enumerate() {
        let o = iterate_orbit(&f, z0, p.n_max)?;
        let mut cells = vec![s.to_string(), (o.points.len() - 1).to_string()];
        cells.extend(point_cells(o.points.last().unwrap_or(z0)));
        cells.push(num(*o.dist_to_start.last().unwrap_or(&0.0)));
        table.push(cells);
    }
    Ok(Computed {
        status: Status::Pass,
        result: serde_json::to_value(&verdict)?,
        knobs: json!({ "n_max": p.n_max, "eps": p.eps, "starts": z0s.len() }),
        tables: vec![table],
    })
}
