//! Scenario implementations, one module per subcommand.

pub mod clock;
pub mod counterexamples;
pub mod embed;
pub mod metric;
pub mod probe;
pub mod sweep;
pub mod tightness;

use anyhow::{bail, Result};
use clap::Subcommand;

use crate::config::ScenarioConfig;
use crate::output::Report;

pub use clock::ClockParams;
pub use counterexamples::CounterexampleParams;
pub use embed::EmbedParams;
pub use metric::MetricParams;
pub use probe::ProbeParams;
pub use sweep::SweepParams;
pub use tightness::TightnessParams;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Scenario {
    /// Distance between two functions in one topology.
    Metric(MetricParams),
    /// Embed a counterexample family or a sequence as a function.
    Embed(EmbedParams),
    /// Poisson clock discrepancy statistics.
    Clock(ClockParams),
    /// Tightness conditions for built-in Markov kernels.
    Tightness(TightnessParams),
    /// Convergence-in-probability probe for an embedded chain.
    Probe(ProbeParams),
    /// Distances and functionals of the three counterexample families.
    Counterexamples(CounterexampleParams),
    /// Random sweep of the oscillation-function inequalities.
    InequalitySweep(SweepParams),
}

impl Scenario {
    pub const NAMES: [&'static str; 7] = [
        "metric",
        "embed",
        "clock",
        "tightness",
        "probe",
        "counterexamples",
        "inequality-sweep",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Metric(_) => "metric",
            Scenario::Embed(_) => "embed",
            Scenario::Clock(_) => "clock",
            Scenario::Tightness(_) => "tightness",
            Scenario::Probe(_) => "probe",
            Scenario::Counterexamples(_) => "counterexamples",
            Scenario::InequalitySweep(_) => "inequality-sweep",
        }
    }

    pub fn from_config(c: &ScenarioConfig) -> Result<Self> {
        Ok(match c.scenario.as_str() {
            "metric" => Scenario::Metric(c.params()?),
            "embed" => Scenario::Embed(c.params()?),
            "clock" => Scenario::Clock(c.params()?),
            "tightness" => Scenario::Tightness(c.params()?),
            "probe" => Scenario::Probe(c.params()?),
            "counterexamples" => Scenario::Counterexamples(c.params()?),
            "inequality-sweep" => Scenario::InequalitySweep(c.params()?),
            other => bail!("unknown scenario `{other}`, expected one of {}", Self::NAMES.join(", ")),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::Metric(p) => p.validate(),
            Scenario::Embed(p) => p.validate(),
            Scenario::Clock(p) => p.validate(),
            Scenario::Tightness(p) => p.validate(),
            Scenario::Probe(p) => p.validate(),
            Scenario::Counterexamples(p) => p.validate(),
            Scenario::InequalitySweep(p) => p.validate(),
        }
    }

    pub fn run(&self, seed: u64) -> Result<Report> {
        match self {
            Scenario::Metric(p) => metric::run(p),
            Scenario::Embed(p) => embed::run(p),
            Scenario::Clock(p) => clock::run(p, seed),
            Scenario::Tightness(p) => tightness::run(p, seed),
            Scenario::Probe(p) => probe::run(p, seed),
            Scenario::Counterexamples(p) => counterexamples::run(p),
            Scenario::InequalitySweep(p) => sweep::run(p, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_loads_from_a_config() {
        for name in Scenario::NAMES {
            let c = ScenarioConfig::parse(&format!("scenario = \"{name}\"")).unwrap();
            assert_eq!(Scenario::from_config(&c).unwrap().name(), name);
        }
        let c = ScenarioConfig::parse("scenario = \"nope\"").unwrap();
        assert!(Scenario::from_config(&c).is_err());
    }
}
