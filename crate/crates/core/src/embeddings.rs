//! Continuous-time embeddings of finite sequences and of Markov chains run on
//! a Poisson clock.
//!
//! For a sequence `y_0, y_1, ...` and a grid size `n`, every embedding takes
//! the value `y_k` at `k / n`. Inside `(k / n, (k + 1) / n)`:
//!
//! * J1 holds `y_k`,
//! * M1 interpolates linearly from `y_k` to `y_{k+1}`,
//! * J2 switches between `y_k` and `y_{k+1}`,
//! * M2 follows any càdlàg path on the segment `[[y_k, y_{k+1}]]`.
//!
//! The J2 and M2 interiors are described by a [`ChooserPolicy`], a list of
//! sub-pieces in convex-weight coordinates that is repeated on every grid
//! interval.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::cadlag::{CadlagFunction, Piece};
use crate::error::{Error, Result};
use crate::{vector, Topology};

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceData {
    n: usize,
    values: Vec<Vec<f64>>,
}

impl SequenceData {
    /// Needs at least `n` terms. Only `y_0 .. y_{n-1}` are read; the last
    /// grid interval holds `y_{n-1}` in every embedding.
    pub fn new(n: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if values.len() < n {
            return Err(Error::SequenceTooShort {
                needed: n,
                have: values.len(),
            });
        }
        let d = values[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("values must have positive dimension".into()));
        }
        for v in &values {
            if v.len() != d {
                return Err(Error::DimensionMismatch(d, v.len()));
            }
            if !vector::all_finite(v) {
                return Err(Error::InvalidParameter("sequence values must be finite".into()));
            }
        }
        Ok(SequenceData { n, values })
    }

    pub fn scalar(n: usize, values: &[f64]) -> Result<Self> {
        Self::new(n, values.iter().map(|&v| vec![v]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// `y_k` for `k < n`, and `y_{n-1}` beyond.
    pub fn term(&self, k: usize) -> &[f64] {
        &self.values[k.min(self.n - 1)]
    }
}

/// One sub-piece of a grid interval: starting at `offset` (a fraction of
/// the interval) the path moves affinely from weight `from` to weight `to`,
/// where weight `w` stands for `y_k + w (y_{k+1} - y_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubPiece {
    pub offset: f64,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChooserPolicy {
    pieces: Vec<SubPiece>,
}

impl ChooserPolicy {
    pub fn new(pieces: Vec<SubPiece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidPolicy("no sub-pieces".into()));
        };
        if first.offset != 0.0 || first.from != 0.0 {
            return Err(Error::InvalidPolicy(
                "the first sub-piece must start at offset 0 with weight 0".into(),
            ));
        }
        for w in pieces.windows(2) {
            if !(w[0].offset < w[1].offset) {
                return Err(Error::InvalidPolicy("offsets must be strictly increasing".into()));
            }
        }
        for p in &pieces {
            if !(0.0..1.0).contains(&p.offset) {
                return Err(Error::InvalidPolicy(format!("offset {} outside [0, 1)", p.offset)));
            }
            for w in [p.from, p.to] {
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidPolicy(format!(
                        "weight {w} leaves the segment"
                    )));
                }
            }
        }
        Ok(ChooserPolicy { pieces })
    }

    /// Hold `y_k` on the first half, `y_{k+1}` on the second.
    pub fn midpoint_switch() -> Self {
        Self::switches(&[0.5]).unwrap()
    }

    /// Alternate between `y_k` and `y_{k+1}` at the given offsets.
    pub fn switches(offsets: &[f64]) -> Result<Self> {
        let mut pieces = vec![SubPiece {
            offset: 0.0,
            from: 0.0,
            to: 0.0,
        }];
        for (i, &o) in offsets.iter().enumerate() {
            let w = if i % 2 == 0 { 1.0 } else { 0.0 };
            pieces.push(SubPiece {
                offset: o,
                from: w,
                to: w,
            });
        }
        Self::new(pieces)
    }

    /// Linear from `y_k` to `y_{k+1}` on the first half, then hold.
    pub fn linear_then_hold() -> Self {
        Self::new(vec![
            SubPiece {
                offset: 0.0,
                from: 0.0,
                to: 1.0,
            },
            SubPiece {
                offset: 0.5,
                from: 1.0,
                to: 1.0,
            },
        ])
        .unwrap()
    }

    /// Rise to `y_{k+1}`, fall back to `y_k`, then jump to `y_{k+1}`.
    pub fn excursion() -> Self {
        Self::new(vec![
            SubPiece {
                offset: 0.0,
                from: 0.0,
                to: 1.0,
            },
            SubPiece {
                offset: 0.25,
                from: 1.0,
                to: 0.0,
            },
            SubPiece {
                offset: 0.5,
                from: 1.0,
                to: 1.0,
            },
        ])
        .unwrap()
    }

    /// Default interior for each topology; J1 and M1 ignore the policy.
    pub fn default_for(topology: Topology) -> Self {
        match topology {
            Topology::J2 => Self::midpoint_switch(),
            _ => Self::linear_then_hold(),
        }
    }

    pub fn pieces(&self) -> &[SubPiece] {
        &self.pieces
    }

    /// Whether every sub-piece holds one of the two endpoints.
    pub fn is_switching(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.from == p.to && (p.from == 0.0 || p.from == 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum M1Formula {
    /// `y_k + n (t - k/n) (y_{k+1} - y_k)`.
    #[default]
    Interpolate,
    /// `y_k + (t - k/n) (y_{k+1} - y_k)`, which reaches `y_{k+1}` only for
    /// `n = 1` and otherwise jumps at every grid point.
    Literal,
}

fn grid_time(k: usize, offset: f64, n: usize) -> f64 {
    (k as f64 + offset) / n as f64
}

pub fn embed(seq: &SequenceData, topology: Topology, policy: &ChooserPolicy) -> Result<CadlagFunction> {
    embed_with(seq, topology, policy, M1Formula::Interpolate)
}

pub fn embed_with(
    seq: &SequenceData,
    topology: Topology,
    policy: &ChooserPolicy,
    m1: M1Formula,
) -> Result<CadlagFunction> {
    let n = seq.n;
    let mut starts = Vec::new();
    let mut pieces = Vec::new();
    match topology {
        Topology::J1 => {
            for k in 0..n {
                starts.push(grid_time(k, 0.0, n));
                pieces.push(Piece::Constant(seq.term(k).to_vec()));
            }
        }
        Topology::M1 => {
            for k in 0..n {
                let (a, b) = (seq.term(k), seq.term(k + 1));
                let end = match m1 {
                    M1Formula::Interpolate => b.to_vec(),
                    M1Formula::Literal => vector::lerp(a, b, 1.0 / n as f64),
                };
                starts.push(grid_time(k, 0.0, n));
                pieces.push(Piece::Linear(a.to_vec(), end));
            }
        }
        Topology::J2 | Topology::M2 => {
            if topology == Topology::J2 && !policy.is_switching() {
                return Err(Error::InvalidPolicy(
                    "J2 embeddings may only take the two endpoint values".into(),
                ));
            }
            for k in 0..n {
                let (a, b) = (seq.term(k), seq.term(k + 1));
                for p in &policy.pieces {
                    let t = grid_time(k, p.offset, n);
                    if starts.last().is_some_and(|&s| t <= s) {
                        return Err(Error::InvalidPolicy(format!(
                            "offset {} collapses at n = {n}",
                            p.offset
                        )));
                    }
                    starts.push(t);
                    pieces.push(Piece::Linear(vector::lerp(a, b, p.from), vector::lerp(a, b, p.to)));
                }
            }
        }
    }
    CadlagFunction::new(starts, pieces)
}

/// The sequences of the three counterexample families, `y_0 .. y_{n-1}`.
///
/// With `c` the first index such that `c / n >= 1/2`, the families read
/// * 1: `0 .. 0, 1/2, 1, 1, ...`
/// * 2: `0 .. 0, 1, 0, 1, ...`
/// * 3: `0 .. 0, 1/2, 1, 0, 1, ...`
///
/// starting at index `c`.
pub fn counterexample_sequence(family: u8, n: usize) -> Result<SequenceData> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n = {n}, need n >= 4")));
    }
    let burst: &[f64] = match family {
        1 => &[0.5],
        2 => &[1.0, 0.0],
        3 => &[0.5, 1.0, 0.0],
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown family {family}, expected 1, 2 or 3"
            )))
        }
    };
    let c = n.div_ceil(2);
    let values: Vec<f64> = (0..n)
        .map(|k| {
            if k < c {
                0.0
            } else {
                burst.get(k - c).copied().unwrap_or(1.0)
            }
        })
        .collect();
    SequenceData::scalar(n, &values)
}

/// Jump times of a counting process on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonPath {
    jumps: Vec<f64>,
    horizon: f64,
}

impl PoissonPath {
    pub fn from_jumps(jumps: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter("horizon must be positive and finite".into()));
        }
        for w in jumps.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidParameter("jump times must be strictly increasing".into()));
            }
        }
        if jumps.iter().any(|&t| !(0.0..=horizon).contains(&t)) {
            return Err(Error::InvalidParameter("jump time outside [0, horizon]".into()));
        }
        Ok(PoissonPath { jumps, horizon })
    }

    /// Unit-rate Poisson process on `[0, horizon]` from exponential spacings.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, horizon: f64) -> Self {
        let mut jumps = Vec::with_capacity(horizon as usize + 8);
        let mut t = 0.0;
        loop {
            let e: f64 = Exp1.sample(rng);
            t += e;
            if t > horizon {
                break;
            }
            jumps.push(t);
        }
        PoissonPath { jumps, horizon }
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `N_s`, the number of jumps in `[0, s]`.
    pub fn count(&self, s: f64) -> usize {
        self.jumps.partition_point(|&t| t <= s)
    }

    /// `N_{s-}`, the number of jumps in `[0, s)`.
    pub fn count_before(&self, s: f64) -> usize {
        self.jumps.partition_point(|&t| t < s)
    }
}

/// `Z_t = Y_{N_{nt}}` for `t < 1`, with `Z_1 = Z_{1-}`.
pub fn embed_markov(path: &[Vec<f64>], clock: &PoissonPath, n: usize) -> Result<CadlagFunction> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let nf = n as f64;
    if clock.horizon < nf {
        return Err(Error::InvalidParameter(format!(
            "clock horizon {} shorter than n = {n}",
            clock.horizon
        )));
    }
    let needed = clock.count_before(nf) + 1;
    if path.len() < needed {
        return Err(Error::SequenceTooShort {
            needed,
            have: path.len(),
        });
    }
    let first = clock.count(0.0);
    let mut starts = vec![0.0];
    let mut pieces = vec![Piece::Constant(path[first].clone())];
    for (j, &t) in clock.jumps.iter().enumerate().skip(first) {
        if t >= nf {
            break;
        }
        starts.push(t / nf);
        pieces.push(Piece::Constant(path[j + 1].clone()));
    }
    CadlagFunction::new(starts, pieces).map_err(|e| e.context("markov embedding"))
}

/// `sup_{s in [0, 1)} |s - N_{ns} / n|`.
///
/// Between jumps `s - N_{ns}/n` increases, so the supremum is taken at
/// `s = 0`, at the jump times, at their left limits, or as `s -> 1`.
pub fn clock_discrepancy(clock: &PoissonPath, n: usize) -> f64 {
    let nf = n as f64;
    let mut best = clock.count(0.0) as f64 / nf;
    let mut count = 0usize;
    for &t in &clock.jumps {
        if t >= nf {
            break;
        }
        let s = t / nf;
        best = best.max((s - count as f64 / nf).abs());
        count += 1;
        best = best.max((s - count as f64 / nf).abs());
    }
    best.max((1.0 - clock.count_before(nf) as f64 / nf).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn eval(f: &CadlagFunction, t: f64) -> f64 {
        f.evaluate(t).unwrap()[0]
    }

    #[test]
    fn two_point_embeddings() {
        let s = SequenceData::scalar(2, &[0.0, 1.0]).unwrap();
        let j1 = embed(&s, Topology::J1, &ChooserPolicy::default_for(Topology::J1)).unwrap();
        assert_eq!(eval(&j1, 0.49), 0.0);
        assert_eq!(eval(&j1, 0.5), 1.0);
        assert_eq!(eval(&j1, 1.0), 1.0);
        let m1 = embed(&s, Topology::M1, &ChooserPolicy::default_for(Topology::M1)).unwrap();
        assert_eq!(eval(&m1, 0.25), 0.5);
        assert_eq!(eval(&m1, 0.5), 1.0);
    }

    #[test]
    fn literal_m1_formula_jumps_at_grid_points() {
        let s = SequenceData::scalar(2, &[0.0, 1.0, 1.0]).unwrap();
        let f = embed_with(&s, Topology::M1, &ChooserPolicy::linear_then_hold(), M1Formula::Literal).unwrap();
        assert_eq!(eval(&f, 0.5), 1.0);
        let ll = f.left_limit(0.5).unwrap().value[0];
        assert!((ll - 0.5).abs() < 1e-15);
    }

    #[test]
    fn counterexample_families() {
        let v = |fam, n| -> Vec<f64> {
            counterexample_sequence(fam, n)
                .unwrap()
                .values()
                .iter()
                .map(|x| x[0])
                .collect()
        };
        assert_eq!(v(1, 4), [0.0, 0.0, 0.5, 1.0]);
        assert_eq!(v(2, 8), [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(v(3, 8), [0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 1.0]);
        assert_eq!(v(1, 5), [0.0, 0.0, 0.0, 0.5, 1.0]);
        assert!(counterexample_sequence(1, 3).is_err());
    }

    #[test]
    fn pinning_for_all_topologies() {
        let s = SequenceData::scalar(5, &[0.3, -1.0, 2.0, 2.0, 0.5, 7.0]).unwrap();
        for t in Topology::ALL {
            for p in [
                ChooserPolicy::midpoint_switch(),
                ChooserPolicy::switches(&[0.2, 0.4, 0.9]).unwrap(),
                ChooserPolicy::excursion(),
            ] {
                let Ok(f) = embed(&s, t, &p) else {
                    assert!(t == Topology::J2 && !p.is_switching());
                    continue;
                };
                for k in 0..5 {
                    assert_eq!(eval(&f, k as f64 / 5.0), s.term(k)[0], "{t} k={k}");
                }
            }
        }
    }

    #[test]
    fn policy_validation() {
        assert!(ChooserPolicy::switches(&[0.5, 0.5]).is_err());
        assert!(ChooserPolicy::new(vec![SubPiece {
            offset: 0.0,
            from: 0.0,
            to: 1.5
        }])
        .is_err());
        let s = SequenceData::scalar(2, &[0.0, 1.0]).unwrap();
        assert!(matches!(
            embed(&s, Topology::J2, &ChooserPolicy::linear_then_hold()),
            Err(Error::InvalidPolicy(_))
        ));
    }

    #[test]
    fn markov_embedding_cases() {
        let path: Vec<Vec<f64>> = (0..6).map(|k| vec![k as f64]).collect();
        let quiet = PoissonPath::from_jumps(vec![], 4.0).unwrap();
        let z = embed_markov(&path, &quiet, 4).unwrap();
        assert_eq!(z.num_pieces(), 1);
        assert_eq!(clock_discrepancy(&quiet, 4), 1.0);

        let half = PoissonPath::from_jumps(vec![2.0], 4.0).unwrap();
        let z = embed_markov(&path, &half, 4).unwrap();
        assert_eq!(z.starts(), &[0.0, 0.5]);
        assert_eq!(eval(&z, 0.5), 1.0);

        let integers = PoissonPath::from_jumps(vec![1.0, 2.0, 3.0, 4.0], 4.0).unwrap();
        let z = embed_markov(&path, &integers, 4).unwrap();
        let seq = SequenceData::new(4, path.clone()).unwrap();
        let j1 = embed(&seq, Topology::J1, &ChooserPolicy::midpoint_switch()).unwrap();
        assert_eq!(z, j1);
        assert!((clock_discrepancy(&integers, 4) - 0.25).abs() < 1e-15);

        let at_zero = PoissonPath::from_jumps(vec![0.0], 4.0).unwrap();
        assert!((clock_discrepancy(&at_zero, 4) - 0.75).abs() < 1e-15);
        assert_eq!(eval(&embed_markov(&path, &at_zero, 4).unwrap(), 0.0), 1.0);

        assert!(matches!(
            embed_markov(&path[..2], &integers, 4),
            Err(Error::SequenceTooShort { needed: 4, have: 2 })
        ));
    }

    #[test]
    fn sampled_clock_is_reproducible() {
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = PoissonPath::sample(&mut a, 64.0);
        assert_eq!(p, PoissonPath::sample(&mut b, 64.0));
        assert!(p.jumps().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.count(64.0), p.jumps().len());
    }
}
