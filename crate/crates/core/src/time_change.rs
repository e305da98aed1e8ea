//! Strictly increasing piecewise-linear bijections of `[0, 1]`.

use crate::cadlag::{CadlagFunction, Piece};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    knots: Vec<(f64, f64)>,
}

impl TimeChange {
    /// Knots `(s_i, λ(s_i))`, strictly increasing in both coordinates, from
    /// `(0, 0)` to `(1, 1)`.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidParameter("time change needs two knots".into()));
        }
        if knots[0] != (0.0, 0.0) || *knots.last().unwrap() != (1.0, 1.0) {
            return Err(Error::InvalidParameter(
                "time change must run from (0, 0) to (1, 1)".into(),
            ));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                return Err(Error::InvalidParameter(format!(
                    "time change knots not strictly increasing: {:?} then {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(TimeChange { knots })
    }

    pub fn identity() -> Self {
        TimeChange {
            knots: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::TimeOutOfRange(s));
        }
        Ok(interpolate(&self.knots, s, false))
    }

    pub fn inverse(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        Ok(interpolate(&self.knots, t, true))
    }

    /// `sup |λ(s) - s|`, attained at a knot.
    pub fn distance_to_identity(&self) -> f64 {
        self.knots
            .iter()
            .map(|(s, l)| (l - s).abs())
            .fold(0.0, f64::max)
    }

    /// `f ∘ λ` as a piecewise function.
    pub fn compose(&self, f: &CadlagFunction) -> Result<CadlagFunction> {
        let mut cuts: Vec<f64> = self.knots.iter().map(|k| k.0).collect();
        for &v in &f.starts()[1..] {
            cuts.push(interpolate(&self.knots, v, true));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut starts = Vec::with_capacity(cuts.len());
        let mut pieces = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let la = interpolate(&self.knots, a, false);
            let lb = interpolate(&self.knots, b, false);
            // pick the piece from the midpoint so that rounding of λ near a
            // breakpoint of f cannot select a neighbour
            let i = f.piece_index(interpolate(&self.knots, 0.5 * (a + b), false));
            let (s, e) = f.piece_interval(i);
            let p = &f.pieces()[i];
            let start = p.value_at(s, e, la);
            let end = p.value_at(s, e, lb);
            starts.push(a);
            pieces.push(if start == end {
                Piece::Constant(start)
            } else {
                Piece::Linear(start, end)
            });
        }
        CadlagFunction::new(starts, pieces)
    }
}

fn interpolate(knots: &[(f64, f64)], x: f64, inverse: bool) -> f64 {
    let key = |k: &(f64, f64)| if inverse { k.1 } else { k.0 };
    let val = |k: &(f64, f64)| if inverse { k.0 } else { k.1 };
    let i = knots.partition_point(|k| key(k) <= x);
    if i == 0 {
        return val(&knots[0]);
    }
    let a = &knots[i - 1];
    if key(a) == x || i == knots.len() {
        return val(a);
    }
    let b = &knots[i];
    let alpha = (x - key(a)) / (key(b) - key(a));
    val(a) + alpha * (val(b) - val(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TimeChange::new(vec![(0.0, 0.0), (0.5, 0.5), (0.5, 0.7), (1.0, 1.0)]).is_err());
        assert!(TimeChange::new(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(TimeChange::new(vec![(0.0, 0.0), (0.4, 0.6), (1.0, 1.0)]).is_ok());
    }

    #[test]
    fn knots_map_exactly() {
        let l = TimeChange::new(vec![(0.0, 0.0), (0.6, 0.5), (1.0, 1.0)]).unwrap();
        assert_eq!(l.evaluate(0.6).unwrap(), 0.5);
        assert_eq!(l.inverse(0.5).unwrap(), 0.6);
        assert_eq!(l.evaluate(0.3).unwrap(), 0.25);
        assert!((l.distance_to_identity() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn compose_moves_jumps() {
        let l = TimeChange::new(vec![(0.0, 0.0), (0.6, 0.5), (1.0, 1.0)]).unwrap();
        let f = CadlagFunction::indicator(0.5).unwrap();
        assert_eq!(l.compose(&f).unwrap(), CadlagFunction::indicator(0.6).unwrap());
        let lin = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        let c = l.compose(&lin).unwrap();
        assert!((c.evaluate(0.3).unwrap()[0] - 0.25).abs() < 1e-15);
        assert_eq!(c.evaluate(0.6).unwrap(), vec![0.5]);
    }
}
