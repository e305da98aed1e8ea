//! Distance between two functions read from files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use skorokhod::metrics::{distance_with, replay, Certificate, DistanceResult, Exactness, GraphNorm, MetricOptions};
use skorokhod::{CadlagFunction, GraphPoint, Topology};

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct MetricParams {
    #[arg(long, default_value = "j1")]
    pub topology: String,
    #[arg(long)]
    pub f: Option<PathBuf>,
    #[arg(long)]
    pub g: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// `box` or `euclidean`.
    #[arg(long, default_value = "box")]
    pub norm: String,
}

impl Default for MetricParams {
    fn default() -> Self {
        defaults()
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        self.topology.parse::<Topology>()?;
        check(self.f.is_some() && self.g.is_some(), || "both --f and --g are required".into())?;
        check(self.tolerance > 0.0, || "tolerance must be positive".into())?;
        self.graph_norm().map(|_| ())
    }

    fn graph_norm(&self) -> Result<GraphNorm> {
        match self.norm.as_str() {
            "box" => Ok(GraphNorm::Box),
            "euclidean" => Ok(GraphNorm::Euclidean),
            other => anyhow::bail!("unknown norm `{other}`, expected box or euclidean"),
        }
    }
}

pub fn read_function(path: &Path) -> Result<CadlagFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CadlagFunction::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn point(p: &GraphPoint) -> Json {
    json!({ "time": p.time, "value": p.value })
}

pub fn result_json(r: &DistanceResult) -> Json {
    let certificate = match &r.certificate {
        Certificate::TimeChange(l) => json!({
            "kind": "time-change",
            "knots": l.knots().iter().map(|&(s, t)| [s, t]).collect::<Vec<_>>(),
        }),
        Certificate::Matching(pairs) => json!({
            "kind": "matching",
            "pairs": pairs.iter().map(|(a, b)| [point(a), point(b)]).collect::<Vec<_>>(),
        }),
        Certificate::Witness { from, to } => json!({
            "kind": "witness",
            "from": point(from),
            "to": point(to),
        }),
    };
    let (exact, gap) = match r.exactness {
        Exactness::Exact => (true, 0.0),
        Exactness::UpperBound { gap } => (false, gap),
    };
    json!({
        "topology": r.topology.as_str(),
        "value": r.value,
        "lower": r.lower,
        "exact": exact,
        "gap": gap,
        "certificate": certificate,
    })
}

pub fn run(p: &MetricParams) -> Result<Report> {
    p.validate()?;
    let f = read_function(p.f.as_deref().unwrap())?;
    let g = read_function(p.g.as_deref().unwrap())?;
    let topology: Topology = p.topology.parse()?;
    let norm = p.graph_norm()?;
    let options = MetricOptions {
        norm,
        tolerance: p.tolerance,
        ..MetricOptions::default()
    };
    let r = distance_with(topology, &f, &g, &options)?;
    let mut report = Report::new("metric", None, p);
    let mut t = Table::new(&["operation", "topology", "norm", "value", "lower", "exact"]);
    t.push(row!["distance", topology.as_str(), p.norm.as_str(), r.value, r.lower, r.is_exact()]);
    if norm == GraphNorm::Box {
        let again = replay(&r, &f, &g)?;
        report.assert(
            "certificate reproduces the distance",
            (again - r.value).abs() <= 1e-6_f64.max(10.0 * p.tolerance),
            format!("replayed {again}, reported {}", r.value),
        );
    }
    report.table("distance", t);
    report.document("result", result_json(&r));
    Ok(report)
}
