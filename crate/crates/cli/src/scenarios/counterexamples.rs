//! Distances, functionals and oscillations of the three counterexample
//! sequences against their pointwise limit `1_{[1/2, 1]}`.
//!
//! Each family is embedded as a step function. Family 1 converges in M1
//! only, family 2 in J2 only, and family 3 in M2 only; the level-crossing
//! functionals must follow the same pattern: overshoots converge exactly for
//! J2 limits and oscillation counts exactly for M1 limits.

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use skorokhod::embeddings::{counterexample_sequence, embed, ChooserPolicy};
use skorokhod::functionals::{oscillation_count, overshoot, Band, Window};
use skorokhod::metrics::{distance, metric_oracle, DistanceResult};
use skorokhod::oscillation::oscillation;
use skorokhod::{CadlagFunction, Topology};

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

pub const LIMIT_JUMP: f64 = 0.5;
const MAX_N: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CounterexampleParams {
    /// Families to run (1, 2 or 3).
    #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3])]
    pub families: Vec<u8>,
    /// Smallest n; n doubles up to n-max.
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 512)]
    pub n_max: usize,
    /// Windows for the oscillation functions.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.25])]
    pub deltas: Vec<f64>,
    /// Levels for the first overshoot.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9])]
    pub levels: Vec<f64>,
    /// Bands `a:b` for the number of oscillations.
    #[arg(long, value_delimiter = ',', default_values_t = ["0.25:0.75".to_string(), "0.1:0.4".into(), "0.6:0.9".into(), "0.1:0.9".into()])]
    pub bands: Vec<String>,
    /// A distance counts as vanishing when `n d <= close`.
    #[arg(long, default_value_t = 2.0)]
    pub close: f64,
    /// A distance counts as stalled when it stays at or above this.
    #[arg(long, default_value_t = 0.2)]
    pub stall: f64,
    /// Brute-force cross-checks run for n up to this value.
    #[arg(long, default_value_t = 16)]
    pub oracle_max_n: usize,
    #[arg(long, default_value_t = 200)]
    pub oracle_resolution: usize,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        defaults()
    }
}

impl CounterexampleParams {
    pub fn validate(&self) -> Result<()> {
        check(!self.families.is_empty(), || "no families given".into())?;
        for &f in &self.families {
            check((1..=3).contains(&f), || format!("family {f} must be 1, 2 or 3"))?;
        }
        check(4 <= self.n_min && self.n_min <= self.n_max && self.n_max <= MAX_N, || {
            format!("n range [{}, {}] must lie in [4, {MAX_N}] and be ordered", self.n_min, self.n_max)
        })?;
        for &d in &self.deltas {
            check(d > 0.0 && d <= 1.0, || format!("delta {d} must lie in (0, 1]"))?;
        }
        for &a in &self.levels {
            check(a.is_finite(), || format!("level {a} must be finite"))?;
        }
        self.parsed_bands()?;
        check(self.close > 0.0 && self.stall > 0.0, || "close and stall must be positive".into())?;
        check(self.oracle_resolution >= 2, || "oracle resolution must be at least 2".into())
    }

    pub fn n_values(&self) -> Vec<usize> {
        std::iter::successors(Some(self.n_min), |&n| Some(2 * n))
            .take_while(|&n| n <= self.n_max)
            .collect()
    }

    pub fn parsed_bands(&self) -> Result<Vec<Band>> {
        self.bands
            .iter()
            .map(|s| {
                let (a, b) = s
                    .split_once(':')
                    .ok_or_else(|| anyhow::anyhow!("band `{s}` must look like a:b"))?;
                Ok(Band::new(a.trim().parse()?, b.trim().parse()?)?)
            })
            .collect()
    }
}

/// Whether the family converges to the limit in the given topology.
pub fn converges(family: u8, topology: Topology) -> bool {
    matches!(
        (family, topology),
        (1, Topology::M1 | Topology::M2) | (2, Topology::J2 | Topology::M2) | (3, Topology::M2)
    )
}

/// Whether the defining burst of the family lies within `y_0, ..., y_{n-1}`.
/// Otherwise the embedded path is that of a shorter burst.
pub fn burst_complete(family: u8, n: usize) -> bool {
    n.div_ceil(2) + (family as usize) < n
}

struct Point {
    family: u8,
    n: usize,
    complete: bool,
    distances: Vec<DistanceResult>,
    overshoots: Vec<(f64, f64, f64)>,
    counts: Vec<(Band, usize, usize)>,
    oscillations: Vec<(Topology, f64, f64, bool)>,
    oracle: Vec<(Topology, f64, f64)>,
}

fn evaluate(p: &CounterexampleParams, bands: &[Band], family: u8, n: usize) -> Result<Point> {
    let limit = CadlagFunction::indicator(LIMIT_JUMP)?;
    let seq = counterexample_sequence(family, n)?;
    let x = embed(&seq, Topology::J1, &ChooserPolicy::midpoint_switch())?;
    let distances = Topology::ALL
        .iter()
        .map(|&t| distance(t, &x, &limit))
        .collect::<skorokhod::Result<Vec<_>>>()?;
    let mut overshoots = Vec::new();
    for &a in &p.levels {
        overshoots.push((a, overshoot(&x, Window::FULL, a)?, overshoot(&limit, Window::FULL, a)?));
    }
    let mut counts = Vec::new();
    for &b in bands {
        counts.push((b, oscillation_count(&x, Window::FULL, b)?, oscillation_count(&limit, Window::FULL, b)?));
    }
    let mut oscillations = Vec::new();
    for t in Topology::ALL {
        for &d in &p.deltas {
            let r = oscillation(t, d, &x)?;
            oscillations.push((t, d, r.value, r.exactness == skorokhod::oscillation::Exactness::Exact));
        }
    }
    let mut oracle = Vec::new();
    if n <= p.oracle_max_n {
        for (t, d) in Topology::ALL.iter().zip(&distances) {
            oracle.push((*t, d.value, metric_oracle(*t, &x, &limit, p.oracle_resolution)?));
        }
    }
    Ok(Point {
        family,
        n,
        complete: burst_complete(family, n),
        distances,
        overshoots,
        counts,
        oscillations,
        oracle,
    })
}

/// Largest admissible gap between an exact distance and its brute-force
/// value at the given resolution.
pub fn oracle_slack(t: Topology, resolution: usize) -> f64 {
    match t {
        Topology::J1 => 2.0 / resolution as f64,
        _ => 1.0 / resolution as f64,
    }
}

pub fn run(p: &CounterexampleParams) -> Result<Report> {
    p.validate()?;
    let bands = p.parsed_bands()?;
    let grid: Vec<(u8, usize)> = p
        .families
        .iter()
        .flat_map(|&f| p.n_values().into_iter().map(move |n| (f, n)))
        .collect();
    let points = grid
        .par_iter()
        .map(|&(f, n)| evaluate(p, &bands, f, n))
        .collect::<Result<Vec<_>>>()?;

    let mut report = Report::new("counterexamples", None, p);
    let reference = format!("indicator({LIMIT_JUMP})");

    let mut dist = Table::new(&[
        "family", "n", "embedding", "reference", "operation", "topology", "value", "lower", "exact", "n_times_value",
    ]);
    for pt in &points {
        for d in &pt.distances {
            dist.push(row![
                pt.family,
                pt.n,
                "j1",
                reference.as_str(),
                "distance",
                d.topology.as_str(),
                d.value,
                d.lower,
                d.is_exact(),
                pt.n as f64 * d.value,
            ]);
        }
    }

    let mut func = Table::new(&[
        "family", "n", "burst_complete", "operation", "window", "parameter", "value", "limit", "matches",
    ]);
    for pt in &points {
        for &(a, v, l) in &pt.overshoots {
            func.push(row![pt.family, pt.n, pt.complete, "overshoot", "0:1", format!("a={a}"), v, l, v == l]);
        }
        for &(b, v, l) in &pt.counts {
            func.push(row![
                pt.family,
                pt.n,
                pt.complete,
                "oscillation-count",
                "0:1",
                format!("band={}:{}", b.a, b.b),
                v,
                l,
                v == l
            ]);
        }
    }

    let mut osc = Table::new(&["family", "n", "operation", "topology", "delta", "value", "exact"]);
    for pt in &points {
        for &(t, d, v, exact) in &pt.oscillations {
            osc.push(row![pt.family, pt.n, "oscillation", t.as_str(), d, v, exact]);
        }
    }

    let mut oracle = Table::new(&["family", "n", "operation", "topology", "resolution", "exact", "oracle", "within"]);
    for pt in &points {
        for &(t, exact, brute) in &pt.oracle {
            let within = match t {
                // the sampled monotone coupling is an upper bound
                Topology::M1 => exact <= brute + 1e-12,
                _ => (exact - brute).abs() <= oracle_slack(t, p.oracle_resolution) + 1e-12,
            };
            oracle.push(row![pt.family, pt.n, "metric-oracle", t.as_str(), p.oracle_resolution, exact, brute, within]);
        }
    }

    assert_thresholds(&mut report, p, &points);
    assert_functional_pattern(&mut report, p, &points);
    let oracle_ok = oracle.rows.iter().all(|r| r[7] == true.into());
    report.assert(
        "distances agree with brute force",
        oracle_ok,
        format!("{} comparisons for n <= {}", oracle.rows.len(), p.oracle_max_n),
    );

    report.table("distances", dist);
    report.table("functionals", func);
    report.table("oscillations", osc);
    report.table("oracle", oracle);
    Ok(report)
}

fn assert_thresholds(report: &mut Report, p: &CounterexampleParams, points: &[Point]) {
    let families: Vec<u8> = p.families.clone();
    for family in families {
        let pts: Vec<&Point> = points.iter().filter(|pt| pt.family == family).collect();
        for t in Topology::ALL {
            let value = |pt: &Point| pt.distances.iter().find(|d| d.topology == t).unwrap().value;
            let ok = |pt: &&Point| {
                if converges(family, t) {
                    pt.n as f64 * value(pt) <= p.close + 1e-12
                } else {
                    value(pt) >= p.stall
                }
            };
            let bad: Vec<String> = pts
                .iter()
                .filter(|pt| !ok(pt))
                .map(|pt| format!("n={} d={}", pt.n, value(pt)))
                .collect();
            let name = if converges(family, t) {
                format!("family {family}: d_{t} <= {}/n", p.close)
            } else {
                format!("family {family}: d_{t} >= {}", p.stall)
            };
            let detail = if bad.is_empty() {
                format!("all {} values of n", pts.len())
            } else {
                format!("fails at {}", bad.join(", "))
            };
            report.assert(name, bad.is_empty(), detail);
        }
    }
}

fn assert_functional_pattern(report: &mut Report, p: &CounterexampleParams, points: &[Point]) {
    for &family in &p.families {
        let mut bad = Vec::new();
        let mut skipped = Vec::new();
        for pt in points.iter().filter(|pt| pt.family == family) {
            let overshoots_match = pt.overshoots.iter().all(|&(_, v, l)| v == l);
            let counts_match = pt.counts.iter().all(|&(_, v, l)| v == l);
            // a truncated burst says nothing about divergence
            let judged = |converging: bool| converging || pt.complete;
            if !pt.complete {
                skipped.push(pt.n.to_string());
            }
            let j2 = converges(family, Topology::J2);
            if judged(j2) && overshoots_match != j2 {
                bad.push(format!("overshoot at n={}", pt.n));
            }
            let m1 = converges(family, Topology::M1);
            if judged(m1) && counts_match != m1 {
                bad.push(format!("oscillation count at n={}", pt.n));
            }
        }
        let skipped = if skipped.is_empty() {
            String::new()
        } else {
            format!("; mismatches not required at n={} (burst incomplete)", skipped.join(","))
        };
        report.assert(
            format!("family {family}: functionals follow the J2 and M1 pattern"),
            bad.is_empty(),
            if bad.is_empty() {
                format!(
                    "overshoots {}, oscillation counts {}{skipped}",
                    if converges(family, Topology::J2) { "converge" } else { "differ" },
                    if converges(family, Topology::M1) { "converge" } else { "differ" }
                )
            } else {
                format!("mismatch: {}{skipped}", bad.join(", "))
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_values_double() {
        let p = CounterexampleParams {
            n_min: 4,
            n_max: 40,
            ..Default::default()
        };
        assert_eq!(p.n_values(), [4, 8, 16, 32]);
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let p = CounterexampleParams {
            n_min: 2,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = CounterexampleParams {
            bands: vec!["0.5".into()],
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = CounterexampleParams {
            n_max: 1 << 17,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn bursts_fit_from_small_n() {
        assert!(burst_complete(1, 4) && !burst_complete(2, 4) && burst_complete(2, 8));
        assert!(!burst_complete(3, 4) && burst_complete(3, 8));
        assert!(!burst_complete(3, 7) && burst_complete(1, 5));
    }

    #[test]
    fn convergence_pattern_is_nested() {
        // J1 convergence would imply all others; none of the families has it
        for f in 1..=3 {
            assert!(!converges(f, Topology::J1));
            assert!(converges(f, Topology::M2));
        }
    }
}
