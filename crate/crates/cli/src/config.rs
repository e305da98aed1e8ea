//! Scenario configuration files.
//!
//! A configuration is a TOML document naming one scenario, with optional
//! `seed`, `out` and `format` keys and a `[params]` table holding the same
//! parameters as the matching subcommand:
//!
//! ```toml
//! scenario = "counterexamples"
//! seed = 7
//! out = "results/counterexamples"
//!
//! [params]
//! n-max = 64
//! deltas = [0.1, 0.25]
//! ```
//!
//! Unknown keys are rejected at both levels, and parameters are validated
//! before anything runs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Command, FromArgMatches};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub params: toml::Table,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// The `[params]` table as the parameter type of the named scenario.
    pub fn params<P: DeserializeOwned>(&self) -> Result<P> {
        toml::Value::Table(self.params.clone())
            .try_into()
            .with_context(|| format!("parameters of scenario `{}`", self.scenario))
    }
}

/// Parameter values a subcommand takes when no flags are given.
pub fn defaults<A: Args + FromArgMatches>() -> A {
    let cmd = A::augment_args(Command::new("defaults").no_binary_name(true));
    let matches = cmd
        .try_get_matches_from(std::iter::empty::<String>())
        .expect("every parameter has a default");
    A::from_arg_matches(&matches).expect("defaults parse")
}

pub fn check(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        bail!(message())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Args, Deserialize, PartialEq)]
    #[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
    struct Demo {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.25])]
        deltas: Vec<f64>,
    }

    impl Default for Demo {
        fn default() -> Self {
            defaults()
        }
    }

    #[test]
    fn defaults_come_from_the_flags() {
        let d = Demo::default();
        assert_eq!(d.n_min, 4);
        assert_eq!(d.deltas, [0.5, 0.25]);
    }

    #[test]
    fn params_fill_in_defaults() {
        let c = ScenarioConfig::parse("scenario = \"demo\"\nseed = 3\n[params]\nn-min = 8\n").unwrap();
        assert_eq!(c.seed, Some(3));
        let d: Demo = c.params().unwrap();
        assert_eq!(d.n_min, 8);
        assert_eq!(d.deltas, [0.5, 0.25]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ScenarioConfig::parse("scenario = \"demo\"\nspeed = 3\n").is_err());
        let c = ScenarioConfig::parse("scenario = \"demo\"\n[params]\nn_mni = 8\n").unwrap();
        assert!(c.params::<Demo>().is_err());
    }
}
