//! Discrepancy `sup_s |s - N_{ns}/n|` between a unit-rate Poisson clock run
//! at speed `n` and deterministic time.
//!
//! `N_{nt} - nt` is a martingale, so Doob's L2 inequality gives
//! `E sup ≤ 2/√n`; that bound is asserted. The table also reports whether
//! the mean stays below `1/√n` within three standard errors, which it does
//! not: the scaled mean approaches `E sup_{s≤1} |B_s| = √(π/2)`.

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use skorokhod::embeddings::{clock_discrepancy, PoissonPath};
use skorokhod::markov::clock_rng;
use skorokhod::stats::{mean_estimate, quantile};

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ClockParams {
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: usize,
}

impl Default for ClockParams {
    fn default() -> Self {
        defaults()
    }
}

impl ClockParams {
    pub fn validate(&self) -> Result<()> {
        check(!self.n.is_empty() && self.n.iter().all(|&n| n > 0), || "n values must be positive".into())?;
        check(self.replicas >= 2, || "at least two replicas are needed".into())
    }
}

/// Discrepancies of replicas `0..replicas`; replica `r` uses clock stream `r`.
pub fn discrepancies(n: usize, replicas: usize, seed: u64) -> Vec<f64> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| clock_discrepancy(&PoissonPath::sample(&mut clock_rng(seed, r), n as f64), n))
        .collect()
}

pub fn run(p: &ClockParams, seed: u64) -> Result<Report> {
    p.validate()?;
    let mut report = Report::new("clock", Some(seed), p);
    let mut t = Table::new(&[
        "n",
        "operation",
        "replicas",
        "mean",
        "std_error",
        "mean_times_sqrt_n",
        "q50",
        "q90",
        "q99",
        "max",
        "bound_sqrt",
        "within_sqrt",
        "bound_doob",
        "within_doob",
    ]);
    for &n in &p.n {
        let mut ds = discrepancies(n, p.replicas, seed);
        let m = mean_estimate(&ds);
        ds.sort_by(f64::total_cmp);
        let root = (n as f64).sqrt();
        let within_sqrt = m.mean <= 1.0 / root + 3.0 * m.std_error;
        let within_doob = m.mean <= 2.0 / root + 3.0 * m.std_error;
        t.push(row![
            n,
            "clock-discrepancy",
            p.replicas,
            m.mean,
            m.std_error,
            m.mean * root,
            quantile(&ds, 0.5),
            quantile(&ds, 0.9),
            quantile(&ds, 0.99),
            ds[ds.len() - 1],
            1.0 / root,
            within_sqrt,
            2.0 / root,
            within_doob,
        ]);
        report.assert(
            format!("n={n}: mean discrepancy <= 2/sqrt(n) + 3 se"),
            within_doob,
            format!("mean {:.5}, se {:.5}, 2/sqrt(n) {:.5}", m.mean, m.std_error, 2.0 / root),
        );
    }
    report.table("clock", t);
    Ok(report)
}
