//! Skorokhod distances, oscillation functions and embedding diagnostics for
//! càdlàg functions with finitely many pieces.
//!
//! The crate is organised bottom-up:
//!
//! * [`cadlag`] holds the function type, its graphs and serialization.
//! * [`oscillation`] computes the three-point gauges and their suprema.
//! * [`functionals`] implements first passage, overshoot, oscillation counts
//!   and interval extrema for scalar functions.
//! * [`metrics`] computes the J1, J2, M1 and M2 distances.
//! * [`embeddings`] turns sequences and Markov paths into functions.
//! * [`markov`] simulates chains and estimates tightness conditions.

pub mod cadlag;
pub mod embeddings;
pub mod error;
pub mod functionals;
pub mod markov;
pub mod metrics;
pub mod oscillation;
pub mod stats;
pub mod time_change;
pub mod vector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cadlag::{CadlagFunction, GraphKind, GraphPoint, Piece, PolygonalGraph};
pub use error::{Error, Result};
pub use time_change::TimeChange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    J1,
    J2,
    M1,
    M2,
}

impl Topology {
    pub const ALL: [Topology; 4] = [Topology::J1, Topology::J2, Topology::M1, Topology::M2];

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::J1 => "j1",
            Topology::J2 => "j2",
            Topology::M1 => "m1",
            Topology::M2 => "m2",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "j1" => Ok(Topology::J1),
            "j2" => Ok(Topology::J2),
            "m1" => Ok(Topology::M1),
            "m2" => Ok(Topology::M2),
            other => Err(Error::Parse(format!("unknown topology `{other}`"))),
        }
    }
}
