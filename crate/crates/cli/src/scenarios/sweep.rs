//! Random-function sweep of the ordering between the four oscillation
//! functions: `Δ_M2 <= Δ_J2, Δ_M1 <= Δ_J1 <= Δ_M1 + Δ_J2`.

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use skorokhod::oscillation::oscillation;
use skorokhod::{CadlagFunction, Topology};

use crate::config::{check, defaults};
use crate::generators::Generator;
use crate::output::{Report, Table};
use crate::row;

pub const INEQUALITIES: [&str; 5] = ["m2<=j2", "m2<=m1", "j2<=j1", "m1<=j1", "j1<=m1+j2"];

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepParams {
    /// Functions per generator.
    #[arg(long, default_value_t = 1000)]
    pub functions: usize,
    #[arg(long, default_value_t = 20)]
    pub max_jumps: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1, 0.25, 0.5])]
    pub deltas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = Generator::ALL.map(|g| g.as_str().to_string()))]
    pub generators: Vec<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        defaults()
    }
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        check(self.functions > 0, || "functions must be positive".into())?;
        check(!self.deltas.is_empty(), || "no deltas given".into())?;
        for &d in &self.deltas {
            check(d > 0.0 && d <= 1.0, || format!("delta {d} must lie in (0, 1]"))?;
        }
        check(self.tolerance >= 0.0, || "tolerance must be nonnegative".into())?;
        self.parsed_generators().map(|_| ())
    }

    pub fn parsed_generators(&self) -> Result<Vec<Generator>> {
        check(!self.generators.is_empty(), || "no generators given".into())?;
        self.generators
            .iter()
            .map(|g| g.parse().map_err(anyhow::Error::msg))
            .collect()
    }
}

/// Left and right sides of each inequality.
pub fn sides(f: &CadlagFunction, delta: f64) -> Result<[(f64, f64); 5]> {
    let osc = |t| oscillation(t, delta, f).map(|r| r.value);
    let (j1, j2, m1, m2) = (
        osc(Topology::J1)?,
        osc(Topology::J2)?,
        osc(Topology::M1)?,
        osc(Topology::M2)?,
    );
    Ok([(m2, j2), (m2, m1), (j2, j1), (m1, j1), (j1, m1 + j2)])
}

#[derive(Debug, Clone)]
struct Violation {
    generator: Generator,
    index: u64,
    delta: f64,
    inequality: &'static str,
    lhs: f64,
    rhs: f64,
    function: CadlagFunction,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    checked: usize,
    violations: usize,
    max_excess: f64,
}

pub fn run(p: &SweepParams, seed: u64) -> Result<Report> {
    p.validate()?;
    let generators = p.parsed_generators()?;
    let mut report = Report::new("inequality-sweep", Some(seed), p);
    let mut table = Table::new(&[
        "generator", "dim", "delta", "operation", "inequality", "functions", "max_jumps", "violations", "max_excess",
    ]);
    let mut dump = Vec::new();
    for g in generators {
        for &delta in &p.deltas {
            let results = (0..p.functions as u64)
                .into_par_iter()
                .map(|i| {
                    let f = g.sample(seed, i, p.max_jumps, delta);
                    sides(&f, delta).map(|s| (i, f, s))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut tallies = vec![Tally::default(); INEQUALITIES.len()];
            for (i, f, s) in results {
                for (k, &(lhs, rhs)) in s.iter().enumerate() {
                    let t = &mut tallies[k];
                    t.checked += 1;
                    t.max_excess = t.max_excess.max(lhs - rhs);
                    if lhs > rhs + p.tolerance {
                        t.violations += 1;
                        dump.push(Violation {
                            generator: g,
                            index: i,
                            delta,
                            inequality: INEQUALITIES[k],
                            lhs,
                            rhs,
                            function: f.clone(),
                        });
                    }
                }
            }
            for (k, t) in tallies.iter().enumerate() {
                table.push(row![
                    g.as_str(),
                    g.dim(),
                    delta,
                    "oscillation",
                    INEQUALITIES[k],
                    t.checked,
                    p.max_jumps,
                    t.violations,
                    t.max_excess,
                ]);
            }
        }
        let count = dump.iter().filter(|v| v.generator == g).count();
        report.assert(
            format!("{g}: oscillation inequalities hold"),
            count == 0,
            format!("{count} violations over {} functions x {} deltas", p.functions, p.deltas.len()),
        );
    }
    let dump_json: Vec<_> = dump
        .iter()
        .map(|v| {
            json!({
                "generator": v.generator.as_str(),
                "index": v.index,
                "delta": v.delta,
                "inequality": v.inequality,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "function": v.function.to_record(),
            })
        })
        .collect();
    report.table("sweep", table);
    report.document("violations", json!(dump_json));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_sides() {
        let f = CadlagFunction::indicator(0.5).unwrap();
        let s = sides(&f, 0.25).unwrap();
        // a single jump: no J2 or M oscillation, J1 sees nothing either
        for (l, r) in s {
            assert!(l <= r);
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let p = SweepParams {
            functions: 30,
            max_jumps: 6,
            deltas: vec![0.1, 0.5],
            ..Default::default()
        };
        let r = run(&p, 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.get_table("sweep").unwrap().rows.len(), 3 * 2 * 5);
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let p = SweepParams {
            generators: vec!["gaussian".into()],
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
