//! Scenario runner for Skorokhod distance, embedding and tightness
//! experiments.
//!
//! Each subcommand of the `skorokhod` binary is a [`Scenario`]; running one
//! yields a [`Report`] of tables, JSON documents and pass/fail assertions,
//! written to a directory together with a `manifest.json`.

pub mod config;
pub mod generators;
pub mod output;
pub mod scenarios;

pub use config::ScenarioConfig;
pub use output::{Assertion, Format, Report, Table};
pub use scenarios::{Scenario, DEFAULT_SEED};
