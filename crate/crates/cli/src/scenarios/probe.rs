//! Convergence-in-probability probe for an embedded chain.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use skorokhod::markov::{convergence_probe, MarkovKernel, ProbeSpec, Reference};
use skorokhod::{CadlagFunction, Topology};

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProbeParams {
    #[arg(long, default_value = "srw")]
    pub kernel: String,
    #[arg(long, default_value = "j2")]
    pub topology: String,
    /// `step-embedding`, `markov-embedding`, or a path to a function file.
    #[arg(long, default_value = "step-embedding")]
    pub reference: String,
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0])]
    pub start: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    pub replicas: usize,
    /// Largest exceedance probability accepted at the largest n.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        defaults()
    }
}

impl ProbeParams {
    pub fn validate(&self) -> Result<()> {
        check(!self.n.is_empty() && self.n.iter().all(|&n| n >= 2), || "n values must be at least 2".into())?;
        let k = MarkovKernel::parse(&self.kernel, self.n[0])?;
        check(k.dim() == self.start.len(), || {
            format!("start has {} coordinates, kernel has {}", self.start.len(), k.dim())
        })?;
        self.topology.parse::<Topology>()?;
        check(self.eps > 0.0, || "eps must be positive".into())?;
        check(self.replicas > 0, || "replicas must be positive".into())?;
        check((0.0..=1.0).contains(&self.threshold), || "threshold must lie in [0, 1]".into())
    }

    fn reference(&self) -> Result<Reference> {
        Ok(match self.reference.as_str() {
            "step-embedding" => Reference::StepEmbedding,
            "markov-embedding" => Reference::MarkovEmbedding,
            path => {
                let text = fs::read_to_string(Path::new(path)).with_context(|| format!("reading reference {path}"))?;
                Reference::Function(CadlagFunction::from_json(&text).with_context(|| format!("parsing {path}"))?)
            }
        })
    }
}

pub fn run(p: &ProbeParams, seed: u64) -> Result<Report> {
    p.validate()?;
    let spec = ProbeSpec {
        kernel: p.kernel.clone(),
        reference: p.reference()?,
        topology: p.topology.parse()?,
        n_list: p.n.clone(),
        epsilon: p.eps,
        start: p.start.clone(),
        replicas: p.replicas,
        seed,
        threshold: p.threshold,
    };
    let r = convergence_probe(&spec)?;
    let mut t = Table::new(&[
        "kernel", "reference", "operation", "topology", "n", "epsilon", "replicas", "mean", "q50", "q90", "q99", "max",
        "exceedance", "lower", "upper",
    ]);
    for row in &r.rows {
        let e = row.exceedance;
        t.push(row![
            r.kernel.as_str(),
            r.reference.as_str(),
            "distance",
            r.topology.as_str(),
            row.n,
            r.epsilon,
            r.replicas,
            row.mean,
            row.q50,
            row.q90,
            row.q99,
            row.max,
            e.estimate,
            e.lower,
            e.upper,
        ]);
    }
    let last = r.rows.last().expect("n list is nonempty");
    let mut report = Report::new("probe", Some(seed), p);
    report.assert(
        format!("{} exceedance of {} vanishes", r.kernel, r.epsilon),
        r.pass,
        format!(
            "exceedance {} at n={} against threshold {}",
            last.exceedance.estimate, last.n, p.threshold
        ),
    );
    report.table("probe", t);
    Ok(report)
}
