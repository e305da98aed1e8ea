//! Tightness conditions for the built-in kernels: local continuity from the
//! right, the global supremum bound, the extra clock steps and the
//! frequency of jumps at fixed times.
//!
//! Verdicts:
//!
//! * local continuity passes when the estimate never rises significantly as
//!   `h` shrinks and, at the largest `n` and smallest `h`, is at most the
//!   threshold or significantly below its value at the largest `h`; windows
//!   with `⌊hn⌋ = 0` are left out since they contain no step;
//! * the global bound passes when the estimate at the largest radius is at
//!   most the threshold for every `n`;
//! * extra steps and fixed discontinuities pass when the estimate never
//!   rises significantly with `n` and ends at most at the threshold or
//!   significantly below where it started.
//!
//! "Significantly" means the 99% bands do not overlap.

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use skorokhod::markov::{
    estimate_extra_steps, estimate_global_bound, estimate_local_continuity, fixed_discontinuity_frequency,
    state_grid, ConditionEstimate, ConditionId, MarkovKernel,
};
use skorokhod::stats::Proportion;

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct TightnessParams {
    #[arg(long = "kernel", value_delimiter = ',', default_values_t = ["srw".to_string(), "lazy".into(), "drift(1)".into(), "fixed-jump".into(), "identity".into()])]
    pub kernels: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Radius of the starting-state grid.
    #[arg(long = "R", default_value_t = 1.0)]
    #[serde(rename = "R")]
    pub radius: f64,
    #[arg(long, default_value_t = 9)]
    pub grid_points: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.01])]
    pub h: Vec<f64>,
    /// Horizon multiple for the global bound.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0])]
    pub radii: Vec<f64>,
    /// Starting state for path conditions; defaults to -1/2 for fixed-jump
    /// and 0 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
}

impl Default for TightnessParams {
    fn default() -> Self {
        defaults()
    }
}

impl TightnessParams {
    pub fn validate(&self) -> Result<()> {
        check(!self.kernels.is_empty(), || "no kernels given".into())?;
        check(!self.n.is_empty() && self.n.iter().all(|&n| n >= 2), || "n values must be at least 2".into())?;
        for k in &self.kernels {
            MarkovKernel::parse(k, self.n[0])?;
        }
        check(self.eps > 0.0 && self.radius > 0.0, || "eps and R must be positive".into())?;
        check(!self.h.is_empty() && self.h.iter().all(|&h| h > 0.0), || "h values must be positive".into())?;
        check(!self.radii.is_empty(), || "no radii given".into())?;
        check(self.m >= 1, || "m must be at least 1".into())?;
        check(self.replicas > 0, || "replicas must be positive".into())?;
        check(self.grid_points > 0, || "grid points must be positive".into())?;
        check((0.0..=1.0).contains(&self.threshold), || "threshold must lie in [0, 1]".into())
    }

    fn start_for(&self, kernel: &str) -> f64 {
        self.start.unwrap_or(if kernel.starts_with("fixed-jump") { -0.5 } else { 0.0 })
    }

    fn h_sorted(&self) -> Vec<f64> {
        let mut h = self.h.clone();
        h.sort_by(|a, b| b.total_cmp(a));
        h.dedup();
        h
    }
}

/// Expected verdict of a built-in kernel, where one is known.
pub fn expected(kernel: &str, condition: ConditionId) -> Option<bool> {
    let base = kernel.split('(').next().unwrap_or(kernel);
    match (base, condition) {
        ("srw" | "lazy" | "drift" | "identity", _) => Some(true),
        ("fixed-jump", ConditionId::LocalContinuity | ConditionId::FixedDiscontinuity) => Some(false),
        ("fixed-jump", ConditionId::GlobalBound) => Some(true),
        _ => None,
    }
}

fn significantly_above(a: &Proportion, b: &Proportion) -> bool {
    a.lower > b.upper
}

/// Trend verdict for a sequence of estimates ordered from the coarsest to
/// the finest setting.
pub fn trend_passes(seq: &[Proportion], threshold: f64) -> bool {
    let no_rise = seq
        .iter()
        .enumerate()
        .all(|(i, p)| seq[..i].iter().all(|earlier| !significantly_above(p, earlier)));
    let (first, last) = (seq[0], seq[seq.len() - 1]);
    no_rise && (last.estimate <= threshold || significantly_above(&first, &last))
}

/// Window lengths covering at least one step; shorter windows see only the
/// starting state. Keeps the largest window when all are shorter.
fn moving_h(hs: &[f64], n: usize) -> Vec<f64> {
    let moving: Vec<f64> = hs.iter().copied().filter(|&h| (h * n as f64).floor() >= 1.0).collect();
    if moving.is_empty() {
        hs[..1].to_vec()
    } else {
        moving
    }
}

/// Sup over the state grid and all step counts up to `⌊hn⌋`.
fn local_sup(e: &ConditionEstimate, h: f64) -> Proportion {
    let steps = (h * e.n as f64).floor();
    e.cells
        .iter()
        .filter(|c| c.coordinate <= steps)
        .map(|c| c.probability)
        .reduce(|a, b| if b.estimate > a.estimate { b } else { a })
        .expect("step 0 is always present")
}

struct KernelRun {
    kernel: String,
    n: usize,
    local: ConditionEstimate,
    global: ConditionEstimate,
    extra: ConditionEstimate,
    fixed: ConditionEstimate,
}

fn run_kernel(p: &TightnessParams, name: &str, n: usize, seed: u64) -> Result<KernelRun> {
    let k = MarkovKernel::parse(name, n)?;
    let start = [p.start_for(name)];
    let grid = state_grid(&k, p.radius, p.grid_points);
    let h_max = p.h.iter().copied().fold(0.0, f64::max);
    Ok(KernelRun {
        kernel: name.to_string(),
        n,
        local: estimate_local_continuity(&k, p.eps, p.radius, h_max, &grid, p.replicas, seed)?,
        global: estimate_global_bound(&k, p.m, &p.radii, &start, p.replicas, seed)?,
        extra: estimate_extra_steps(&k, p.eps, &start, p.replicas, seed)?,
        fixed: fixed_discontinuity_frequency(&k, p.eps, &start, p.replicas, seed)?,
    })
}

pub fn run(p: &TightnessParams, seed: u64) -> Result<Report> {
    p.validate()?;
    let jobs: Vec<(&str, usize)> = p
        .kernels
        .iter()
        .flat_map(|k| p.n.iter().map(move |&n| (k.as_str(), n)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(k, n)| run_kernel(p, k, n, seed))
        .collect::<Result<Vec<_>>>()?;
    let hs = p.h_sorted();
    let mut report = Report::new("tightness", Some(seed), p);

    let mut trends = Table::new(&[
        "kernel", "n", "operation", "parameter", "value", "epsilon", "replicas", "estimate", "lower", "upper",
    ]);
    for r in &runs {
        for &h in &hs {
            let s = local_sup(&r.local, h);
            trends.push(row![r.kernel.as_str(), r.n, "local-continuity", "h", h, p.eps, p.replicas, s.estimate, s.lower, s.upper]);
        }
        for c in &r.global.cells {
            let s = c.probability;
            trends.push(row![r.kernel.as_str(), r.n, "global-bound", "R", c.coordinate, Option::<f64>::None, p.replicas, s.estimate, s.lower, s.upper]);
        }
        for (e, op) in [(&r.extra, "extra-steps"), (&r.fixed, "fixed-discontinuity")] {
            let s = e.sup;
            trends.push(row![r.kernel.as_str(), r.n, op, "epsilon", p.eps, p.eps, p.replicas, s.estimate, s.lower, s.upper]);
        }
    }

    let mut verdicts = Table::new(&["kernel", "condition", "verdict", "expected", "matches"]);
    for k in &p.kernels {
        let mine: Vec<&KernelRun> = runs.iter().filter(|r| &r.kernel == k).collect();
        let last = mine.last().expect("n list is nonempty");
        let local_trend = |r: &KernelRun| -> Vec<Proportion> {
            moving_h(&hs, r.n).iter().map(|&h| local_sup(&r.local, h)).collect()
        };
        let local_ok = mine.iter().all(|r| trend_passes(&local_trend(r), 1.0))
            && trend_passes(&local_trend(last), p.threshold);
        let global_ok = mine.iter().all(|r| {
            let widest = r
                .global
                .cells
                .iter()
                .max_by(|a, b| a.coordinate.total_cmp(&b.coordinate))
                .unwrap();
            widest.probability.estimate <= p.threshold
        });
        let extra_ok = trend_passes(&mine.iter().map(|r| r.extra.sup).collect::<Vec<_>>(), p.threshold);
        let fixed_ok = trend_passes(&mine.iter().map(|r| r.fixed.sup).collect::<Vec<_>>(), p.threshold);
        for (cond, ok) in [
            (ConditionId::LocalContinuity, local_ok),
            (ConditionId::GlobalBound, global_ok),
            (ConditionId::ExtraSteps, extra_ok),
            (ConditionId::FixedDiscontinuity, fixed_ok),
        ] {
            let want = expected(k, cond);
            let verdict = if ok { "pass" } else { "fail" };
            let want_text = want.map(|w| if w { "pass" } else { "fail" });
            verdicts.push(row![k.as_str(), cond.as_str(), verdict, want_text, want.map(|w| w == ok)]);
            if let Some(w) = want {
                report.assert(
                    format!("{k}: {} {}", cond.as_str(), if w { "passes" } else { "fails" }),
                    w == ok,
                    format!("verdict {verdict}"),
                );
            }
        }
    }

    let estimates: Vec<_> = runs
        .iter()
        .flat_map(|r| [&r.local, &r.global, &r.extra, &r.fixed])
        .collect();
    report.table("trends", trends);
    report.table("verdicts", verdicts);
    report.document("conditions", json!(estimates));
    Ok(report)
}
