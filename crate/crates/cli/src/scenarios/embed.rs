//! Embedding of a counterexample family or an explicit sequence.

use anyhow::Result;
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use skorokhod::embeddings::{counterexample_sequence, embed_with, ChooserPolicy, M1Formula, SequenceData};
use skorokhod::{Piece, Topology};

use crate::config::{check, defaults};
use crate::output::{Report, Table};
use crate::row;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EmbedParams {
    /// Counterexample family (1, 2 or 3); ignored when values are given.
    #[arg(long, default_value_t = 1)]
    pub family: u8,
    /// Explicit sequence `y_0, ..., y_{n-1}`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value = "j1")]
    pub topology: String,
    /// `default`, `midpoint-switch`, `linear-then-hold` or `excursion`.
    #[arg(long, default_value = "default")]
    pub policy: String,
    /// `interpolate` or `literal`.
    #[arg(long, default_value = "interpolate")]
    pub m1_formula: String,
}

impl Default for EmbedParams {
    fn default() -> Self {
        defaults()
    }
}

impl EmbedParams {
    pub fn validate(&self) -> Result<()> {
        check(self.n >= 1, || "n must be positive".into())?;
        if self.values.is_empty() {
            check((1..=3).contains(&self.family), || format!("family {} must be 1, 2 or 3", self.family))?;
            check(self.n >= 4, || "counterexample families need n >= 4".into())?;
        } else {
            check(self.values.len() >= self.n, || {
                format!("{} values given, n = {} needs at least n", self.values.len(), self.n)
            })?;
        }
        let t: Topology = self.topology.parse()?;
        self.chooser(t)?;
        self.formula().map(|_| ())
    }

    fn chooser(&self, t: Topology) -> Result<ChooserPolicy> {
        Ok(match self.policy.as_str() {
            "default" => ChooserPolicy::default_for(t),
            "midpoint-switch" => ChooserPolicy::midpoint_switch(),
            "linear-then-hold" => ChooserPolicy::linear_then_hold(),
            "excursion" => ChooserPolicy::excursion(),
            other => anyhow::bail!("unknown policy `{other}`"),
        })
    }

    fn formula(&self) -> Result<M1Formula> {
        match self.m1_formula.as_str() {
            "interpolate" => Ok(M1Formula::Interpolate),
            "literal" => Ok(M1Formula::Literal),
            other => anyhow::bail!("unknown M1 formula `{other}`, expected interpolate or literal"),
        }
    }

    fn sequence(&self) -> Result<SequenceData> {
        Ok(if self.values.is_empty() {
            counterexample_sequence(self.family, self.n)?
        } else {
            SequenceData::scalar(self.n, &self.values)?
        })
    }
}

pub fn run(p: &EmbedParams) -> Result<Report> {
    p.validate()?;
    let t: Topology = p.topology.parse()?;
    let seq = p.sequence()?;
    let f = embed_with(&seq, t, &p.chooser(t)?, p.formula()?)?;
    let mut pieces = Table::new(&["operation", "start", "end", "kind", "from", "to"]);
    for (i, piece) in f.pieces().iter().enumerate() {
        let (s, e) = f.piece_interval(i);
        let kind = match piece {
            Piece::Constant(_) => "constant",
            Piece::Linear(..) => "linear",
        };
        pieces.push(row![
            format!("embed-{}", t.as_str()),
            s,
            e,
            kind,
            piece.start_value()[0],
            piece.end_value()[0]
        ]);
    }
    let n = seq.n();
    let pinned = (0..n).all(|k| f.evaluate(k as f64 / n as f64).ok().as_deref() == Some(seq.term(k)));
    let mut report = Report::new("embed", None, p);
    report.assert("embedding takes y_k at k/n", pinned, format!("n = {n}"));
    report.table("pieces", pieces);
    report.document("function", json!(f.to_record()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_values() {
        let p = EmbedParams {
            values: vec![0.0, 1.0, -1.0, 2.0],
            n: 4,
            topology: "m1".into(),
            ..Default::default()
        };
        let r = run(&p).unwrap();
        assert!(r.passed());
        assert_eq!(r.get_table("pieces").unwrap().rows.len(), 4);
    }

    #[test]
    fn j2_rejects_holding_policy() {
        let p = EmbedParams {
            topology: "j2".into(),
            policy: "linear-then-hold".into(),
            ..Default::default()
        };
        assert!(run(&p).is_err());
    }
}
