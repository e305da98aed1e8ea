//! Piecewise càdlàg functions on `[0, 1]` with values in `R^d`.
//!
//! A [`CadlagFunction`] is a finite list of pieces. Piece `i` lives on
//! `[t_i, t_{i+1})` (the last one on `[t_k, 1]`) and is either constant or
//! affine. The value at `1` is the left limit at `1`, so every function built
//! here is right continuous with left limits and left continuous at `1`.
//!
//! Construction always canonicalizes: affine pieces with equal end values
//! become constants and adjacent pieces that describe the same function are
//! merged. Two step functions are therefore equal as functions iff they are
//! equal as values of this type.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector;

#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Constant(Vec<f64>),
    /// Affine from the value at the piece start to the left limit at the
    /// piece end.
    Linear(Vec<f64>, Vec<f64>),
}

impl Piece {
    pub fn start_value(&self) -> &[f64] {
        match self {
            Piece::Constant(v) => v,
            Piece::Linear(a, _) => a,
        }
    }

    pub fn end_value(&self) -> &[f64] {
        match self {
            Piece::Constant(v) => v,
            Piece::Linear(_, b) => b,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Piece::Constant(_))
    }

    fn dim(&self) -> usize {
        self.start_value().len()
    }

    /// Value at time `t` for a piece living on `[start, end)`.
    pub(crate) fn value_at(&self, start: f64, end: f64, t: f64) -> Vec<f64> {
        match self {
            Piece::Constant(v) => v.clone(),
            Piece::Linear(a, b) => {
                if t <= start {
                    a.clone()
                } else if t >= end {
                    b.clone()
                } else {
                    vector::lerp(a, b, (t - start) / (end - start))
                }
            }
        }
    }

    fn map(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Piece {
        match self {
            Piece::Constant(v) => Piece::Constant(f(v)),
            Piece::Linear(a, b) => Piece::Linear(f(a), f(b)),
        }
    }
}

/// Left limit together with a flag telling whether `t = 0` was requested, in
/// which case `f(0)` is returned.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftLimit {
    pub value: Vec<f64>,
    pub at_origin: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CadlagFunction {
    dim: usize,
    starts: Vec<f64>,
    pieces: Vec<Piece>,
}

impl CadlagFunction {
    /// Builds a function from piece start times (the first must be `0`) and
    /// the matching pieces.
    pub fn new(starts: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Empty("function needs at least one piece"));
        }
        if starts.len() != pieces.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints for {} pieces",
                starts.len(),
                pieces.len()
            )));
        }
        if starts[0] != 0.0 {
            return Err(Error::InvalidFunction(format!(
                "first breakpoint must be 0, got {}",
                starts[0]
            )));
        }
        for w in starts.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidFunction(format!(
                    "breakpoints must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        let last = *starts.last().unwrap();
        if !(last < 1.0) {
            return Err(Error::InvalidFunction(format!(
                "last piece must start before 1, got {last}"
            )));
        }
        let dim = pieces[0].dim();
        if dim == 0 {
            return Err(Error::InvalidFunction("dimension must be positive".into()));
        }
        for p in &pieces {
            let ok_dim = match p {
                Piece::Constant(v) => v.len() == dim,
                Piece::Linear(a, b) => a.len() == dim && b.len() == dim,
            };
            if !ok_dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            if !vector::all_finite(p.start_value()) || !vector::all_finite(p.end_value()) {
                return Err(Error::InvalidFunction("non-finite value".into()));
            }
        }
        let mut f = CadlagFunction { dim, starts, pieces };
        f.canonicalize();
        Ok(f)
    }

    pub fn constant(value: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0], vec![Piece::Constant(value)])
    }

    /// Step function with values `values[i]` on `[starts[i], starts[i+1])`.
    pub fn step(starts: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(starts, values.into_iter().map(Piece::Constant).collect())
    }

    /// Scalar step function.
    pub fn step_1d(starts: &[f64], values: &[f64]) -> Result<Self> {
        Self::step(starts.to_vec(), values.iter().map(|v| vec![*v]).collect())
    }

    /// `1_{[a, 1]}` for `a` in `(0, 1)`.
    pub fn indicator(a: f64) -> Result<Self> {
        Self::step_1d(&[0.0, a], &[0.0, 1.0])
    }

    /// Scalar affine function from `a` at `0` to `b` at `1`.
    pub fn linear_1d(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![Piece::Linear(vec![a], vec![b])])
    }

    fn canonicalize(&mut self) {
        for p in self.pieces.iter_mut() {
            if let Piece::Linear(a, b) = p {
                if a == b {
                    *p = Piece::Constant(a.clone());
                }
            }
        }
        let mut starts: Vec<f64> = Vec::with_capacity(self.starts.len());
        let mut pieces: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        let ends: Vec<f64> = (0..self.pieces.len()).map(|i| self.end_of(i)).collect();
        let mut last_end = 0.0;
        for (i, p) in self.pieces.drain(..).enumerate() {
            let s = self.starts[i];
            let e = ends[i];
            if let Some(prev) = pieces.last_mut() {
                let prev_start = *starts.last().unwrap();
                match (&*prev, &p) {
                    (Piece::Constant(u), Piece::Constant(v)) if u == v => {
                        last_end = e;
                        continue;
                    }
                    (Piece::Linear(a1, b1), Piece::Linear(a2, b2)) if b1 == a2 => {
                        let w1 = last_end - prev_start;
                        let w2 = e - s;
                        let same_slope = a1
                            .iter()
                            .zip(b1)
                            .zip(a2.iter().zip(b2))
                            .all(|((x1, y1), (x2, y2))| (y1 - x1) / w1 == (y2 - x2) / w2);
                        if same_slope {
                            *prev = Piece::Linear(a1.clone(), b2.clone());
                            last_end = e;
                            continue;
                        }
                    }
                    _ => {}
                }
            }
            starts.push(s);
            pieces.push(p);
            last_end = e;
        }
        self.starts = starts;
        self.pieces = pieces;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Piece start times `0 = t_0 < ... < t_k < 1`.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    pub fn end_of(&self, i: usize) -> f64 {
        self.starts.get(i + 1).copied().unwrap_or(1.0)
    }

    pub fn piece_interval(&self, i: usize) -> (f64, f64) {
        (self.starts[i], self.end_of(i))
    }

    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(Piece::is_constant)
    }

    /// Times in `(0, 1)` where `f(t-) != f(t)`.
    pub fn jump_times(&self) -> Vec<f64> {
        (1..self.pieces.len())
            .filter(|&i| self.pieces[i - 1].end_value() != self.pieces[i].start_value())
            .map(|i| self.starts[i])
            .collect()
    }

    /// Largest absolute slope over all affine pieces, measured in the norm of
    /// `R^d`; zero for step functions.
    pub fn max_slope(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                Piece::Constant(_) => 0.0,
                Piece::Linear(a, b) => {
                    let (s, e) = self.piece_interval(i);
                    vector::dist(a, b) / (e - s)
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn terminal_value(&self) -> &[f64] {
        self.pieces.last().unwrap().end_value()
    }

    /// Index of the piece whose interval contains `t` (`t = 1` maps to the
    /// last piece).
    pub fn piece_index(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// Index of the piece that determines `f(t-)`.
    pub fn left_piece_index(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s < t).saturating_sub(1)
    }

    pub fn evaluate(&self, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        Ok(self.value_unchecked(t))
    }

    pub(crate) fn value_unchecked(&self, t: f64) -> Vec<f64> {
        let i = self.piece_index(t);
        let (s, e) = self.piece_interval(i);
        self.pieces[i].value_at(s, e, t)
    }

    /// `f(t-)`. At `t = 0` returns `f(0)` with `at_origin` set.
    pub fn left_limit(&self, t: f64) -> Result<LeftLimit> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        if t == 0.0 {
            return Ok(LeftLimit {
                value: self.pieces[0].start_value().to_vec(),
                at_origin: true,
            });
        }
        Ok(LeftLimit {
            value: self.left_limit_unchecked(t),
            at_origin: false,
        })
    }

    pub(crate) fn left_limit_unchecked(&self, t: f64) -> Vec<f64> {
        let i = self.left_piece_index(t);
        let (s, e) = self.piece_interval(i);
        self.pieces[i].value_at(s, e, t)
    }

    /// `sup_t |f(t) - g(t)|`, exact: on each common piece the difference is
    /// affine, so its norm peaks at a piece end or a left limit.
    pub fn sup_distance(&self, other: &CadlagFunction) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut cuts: Vec<f64> = self.starts.iter().chain(&other.starts).copied().collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.push(1.0);
        let mut best: f64 = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            best = best
                .max(vector::dist(&self.value_unchecked(a), &other.value_unchecked(a)))
                .max(vector::dist(
                    &self.left_limit_unchecked(b),
                    &other.left_limit_unchecked(b),
                ));
        }
        Ok(best)
    }

    fn graph(&self, kind: GraphKind) -> PolygonalGraph {
        let mut vertices = Vec::with_capacity(2 * self.pieces.len() + 1);
        for (i, p) in self.pieces.iter().enumerate() {
            let (s, e) = self.piece_interval(i);
            let sv = p.start_value();
            let needs_start = match vertices.last() {
                None => true,
                Some(GraphPoint { value, .. }) => value.as_slice() != sv,
            };
            if needs_start {
                vertices.push(GraphPoint::new(sv.to_vec(), s));
            }
            vertices.push(GraphPoint::new(p.end_value().to_vec(), e));
        }
        PolygonalGraph {
            dim: self.dim,
            kind,
            vertices,
        }
    }

    /// The graph without jump segments: the points `(f(t-), t)` and `(f(t), t)`.
    pub fn incomplete_graph(&self) -> PolygonalGraph {
        self.graph(GraphKind::Incomplete)
    }

    /// The graph with every jump filled by the segment `[[f(t-), f(t)]]`.
    pub fn completed_graph(&self) -> PolygonalGraph {
        self.graph(GraphKind::Completed)
    }

    /// The scalar function `t -> direction . f(t)`.
    pub fn project(&self, direction: &[f64]) -> Result<CadlagFunction> {
        if direction.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, direction.len()));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.map(|v| vec![vector::dot(direction, v)]))
            .collect();
        CadlagFunction::new(self.starts.clone(), pieces)
    }

    /// Restriction to `[0, horizon]`, rescaled to `[0, 1]`. The new terminal
    /// value is `f(horizon-)`.
    pub fn restrict(&self, horizon: f64) -> Result<CadlagFunction> {
        if !(horizon > 0.0 && horizon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "restriction horizon must lie in (0, 1], got {horizon}"
            )));
        }
        if horizon == 1.0 {
            return Ok(self.clone());
        }
        let keep = self.starts.partition_point(|&s| s < horizon);
        let mut starts = Vec::with_capacity(keep);
        let mut pieces = Vec::with_capacity(keep);
        for i in 0..keep {
            let (s, e) = self.piece_interval(i);
            starts.push(s / horizon);
            let p = if e > horizon {
                match &self.pieces[i] {
                    Piece::Constant(v) => Piece::Constant(v.clone()),
                    Piece::Linear(a, _) => {
                        Piece::Linear(a.clone(), self.pieces[i].value_at(s, e, horizon))
                    }
                }
            } else {
                self.pieces[i].clone()
            };
            pieces.push(p);
        }
        CadlagFunction::new(starts, pieces)
    }

    /// Replaces every affine piece by `steps` constant sub-pieces holding the
    /// midpoint value. Returns the step function and the sup-norm distance
    /// to `self`.
    pub fn step_approximation(&self, steps: usize) -> Result<(CadlagFunction, f64)> {
        if steps == 0 {
            return Err(Error::InvalidParameter("steps must be positive".into()));
        }
        if self.is_step() {
            return Ok((self.clone(), 0.0));
        }
        let mut starts = Vec::new();
        let mut pieces = Vec::new();
        let mut err: f64 = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let (s, e) = self.piece_interval(i);
            match p {
                Piece::Constant(_) => {
                    starts.push(s);
                    pieces.push(p.clone());
                }
                Piece::Linear(a, b) => {
                    err = err.max(vector::dist(a, b) / (2.0 * steps as f64));
                    for j in 0..steps {
                        let sj = s + (e - s) * j as f64 / steps as f64;
                        if starts.last().is_some_and(|&prev| sj <= prev) {
                            continue;
                        }
                        let alpha = (j as f64 + 0.5) / steps as f64;
                        starts.push(sj);
                        pieces.push(Piece::Constant(vector::lerp(a, b, alpha)));
                    }
                }
            }
        }
        Ok((CadlagFunction::new(starts, pieces)?, err))
    }

    pub fn to_record(&self) -> FunctionRecord {
        FunctionRecord {
            format: FunctionRecord::FORMAT.to_string(),
            dimension: self.dim,
            kinds: self
                .pieces
                .iter()
                .map(|p| match p {
                    Piece::Constant(_) => PieceKind::Constant,
                    Piece::Linear(..) => PieceKind::Linear,
                })
                .collect(),
            breakpoints: self.starts.clone(),
            values: self
                .pieces
                .iter()
                .map(|p| match p {
                    Piece::Constant(v) => v.clone(),
                    Piece::Linear(a, b) => a.iter().chain(b).copied().collect(),
                })
                .collect(),
            terminal: self.terminal_value().to_vec(),
        }
    }

    pub fn from_record(rec: &FunctionRecord) -> Result<Self> {
        if rec.format != FunctionRecord::FORMAT {
            return Err(Error::Parse(format!("unsupported format `{}`", rec.format)));
        }
        let d = rec.dimension;
        if rec.kinds.len() != rec.values.len() {
            return Err(Error::Parse("kinds and values differ in length".into()));
        }
        let mut pieces = Vec::with_capacity(rec.kinds.len());
        for (kind, vals) in rec.kinds.iter().zip(&rec.values) {
            let p = match kind {
                PieceKind::Constant if vals.len() == d => Piece::Constant(vals.clone()),
                PieceKind::Linear if vals.len() == 2 * d => {
                    Piece::Linear(vals[..d].to_vec(), vals[d..].to_vec())
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "piece of kind {kind:?} carries {} values in dimension {d}",
                        vals.len()
                    )))
                }
            };
            pieces.push(p);
        }
        let f = CadlagFunction::new(rec.breakpoints.clone(), pieces)?;
        if f.dim != d {
            return Err(Error::DimensionMismatch(d, f.dim));
        }
        if f.terminal_value() != rec.terminal.as_slice() {
            return Err(Error::Parse(
                "terminal value differs from the left limit at 1".into(),
            ));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: FunctionRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_record(&rec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Constant,
    Linear,
}

/// Text record used by the CLI. Constant pieces carry `d` numbers, linear
/// pieces `2d` (start value then end value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionRecord {
    pub format: String,
    pub dimension: usize,
    pub kinds: Vec<PieceKind>,
    pub breakpoints: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub terminal: Vec<f64>,
}

impl FunctionRecord {
    pub const FORMAT: &'static str = "cadlag/v1";
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphPoint {
    pub value: Vec<f64>,
    pub time: f64,
}

impl GraphPoint {
    pub fn new(value: Vec<f64>, time: f64) -> Self {
        GraphPoint { value, time }
    }

    /// `|x - y| v |t - s|`.
    pub fn box_dist(&self, other: &GraphPoint) -> f64 {
        vector::dist(&self.value, &other.value).max((self.time - other.time).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Incomplete,
    Completed,
}

/// Polyline in `R^d x [0, 1]`. For the incomplete kind, edges joining two
/// vertices at the same time (jump segments) are not part of the set.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalGraph {
    pub dim: usize,
    pub kind: GraphKind,
    pub vertices: Vec<GraphPoint>,
}

impl PolygonalGraph {
    pub fn new(dim: usize, kind: GraphKind, vertices: Vec<GraphPoint>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty("graph needs at least one vertex"));
        }
        if let Some(v) = vertices.iter().find(|v| v.value.len() != dim) {
            return Err(Error::DimensionMismatch(dim, v.value.len()));
        }
        Ok(PolygonalGraph {
            dim,
            kind,
            vertices,
        })
    }

    /// Index pairs of consecutive vertices that form part of the point set.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.vertices.len())
            .filter(|&i| {
                self.kind == GraphKind::Completed
                    || self.vertices[i - 1].time != self.vertices[i].time
            })
            .map(|i| (i - 1, i))
            .collect()
    }

    /// Checks the graph order: times nondecreasing, and within a run of equal
    /// times the distance to the first vertex of the run (the left limit)
    /// nondecreasing.
    pub fn is_graph_ordered(&self) -> bool {
        let mut run_start = 0;
        for i in 1..self.vertices.len() {
            let (a, b) = (&self.vertices[i - 1], &self.vertices[i]);
            if b.time < a.time {
                return false;
            }
            if b.time > a.time {
                run_start = i;
                continue;
            }
            let base = &self.vertices[run_start].value;
            if vector::dist(base, &b.value) < vector::dist(base, &a.value) {
                return false;
            }
        }
        true
    }

    /// Distance from `p` to the point set, by direct projection onto every
    /// edge under the box norm.
    pub fn box_distance_to(&self, p: &GraphPoint) -> f64 {
        let edges = self.edges();
        if edges.is_empty() {
            return self
                .vertices
                .iter()
                .map(|v| v.box_dist(p))
                .fold(f64::INFINITY, f64::min);
        }
        edges
            .iter()
            .map(|&(i, j)| {
                crate::metrics::geometry::point_segment(
                    &p.value,
                    p.time,
                    &self.vertices[i].value,
                    self.vertices[i].time,
                    &self.vertices[j].value,
                    self.vertices[j].time,
                    crate::metrics::GraphNorm::Box,
                )
                .0
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_step() -> CadlagFunction {
        CadlagFunction::indicator(0.5).unwrap()
    }

    #[test]
    fn evaluate_is_right_continuous() {
        let f = half_step();
        assert_eq!(f.evaluate(0.5).unwrap(), vec![1.0]);
        assert_eq!(f.evaluate(0.49).unwrap(), vec![0.0]);
        assert_eq!(f.evaluate(1.0).unwrap(), vec![1.0]);
        assert!(matches!(f.evaluate(1.5), Err(Error::TimeOutOfRange(_))));
        assert!(f.evaluate(-0.1).is_err());
    }

    #[test]
    fn evaluate_linear() {
        let f = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        assert_eq!(f.evaluate(0.25).unwrap(), vec![0.25]);
        assert_eq!(f.evaluate(1.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn left_limits() {
        let f = half_step();
        assert_eq!(f.left_limit(0.5).unwrap().value, vec![0.0]);
        assert_eq!(f.left_limit(0.75).unwrap().value, vec![1.0]);
        assert_eq!(f.left_limit(1.0).unwrap().value, vec![1.0]);
        let origin = f.left_limit(0.0).unwrap();
        assert!(origin.at_origin);
        assert_eq!(origin.value, vec![0.0]);
    }

    #[test]
    fn validation() {
        assert!(CadlagFunction::step_1d(&[0.1], &[0.0]).is_err());
        assert!(CadlagFunction::step_1d(&[0.0, 0.5, 0.5], &[0.0, 1.0, 2.0]).is_err());
        assert!(CadlagFunction::step_1d(&[0.0, 1.0], &[0.0, 1.0]).is_err());
        assert!(CadlagFunction::step_1d(&[0.0], &[f64::NAN]).is_err());
        assert!(CadlagFunction::new(
            vec![0.0, 0.5],
            vec![Piece::Constant(vec![0.0]), Piece::Constant(vec![0.0, 1.0])]
        )
        .is_err());
    }

    #[test]
    fn canonical_form_merges_equal_pieces() {
        let f = CadlagFunction::step_1d(&[0.0, 0.25, 0.5], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(f, half_step());
        let g = CadlagFunction::new(
            vec![0.0, 0.5],
            vec![
                Piece::Linear(vec![0.0], vec![0.5]),
                Piece::Linear(vec![0.5], vec![1.0]),
            ],
        )
        .unwrap();
        assert_eq!(g, CadlagFunction::linear_1d(0.0, 1.0).unwrap());
        let flat = CadlagFunction::linear_1d(2.0, 2.0).unwrap();
        assert!(flat.is_step());
    }

    #[test]
    fn completed_graph_of_indicator() {
        let g = half_step().completed_graph();
        let pts: Vec<(f64, f64)> = g.vertices.iter().map(|p| (p.value[0], p.time)).collect();
        assert_eq!(pts, vec![(0.0, 0.0), (0.0, 0.5), (1.0, 0.5), (1.0, 1.0)]);
        assert!(g.is_graph_ordered());
        assert_eq!(g.edges().len(), 3);
        assert_eq!(half_step().incomplete_graph().edges().len(), 2);
    }

    #[test]
    fn constant_graphs_coincide() {
        let f = CadlagFunction::constant(vec![3.0]).unwrap();
        assert_eq!(f.completed_graph().vertices, f.incomplete_graph().vertices);
        assert_eq!(f.completed_graph().edges(), f.incomplete_graph().edges());
    }

    #[test]
    fn graph_of_half_jump_step() {
        // step with values 0, 1/2, 1 at quarters 0, 1/2, 3/4
        let f = CadlagFunction::step_1d(&[0.0, 0.5, 0.75], &[0.0, 0.5, 1.0]).unwrap();
        let g = f.completed_graph();
        let pts: Vec<(f64, f64)> = g.vertices.iter().map(|p| (p.value[0], p.time)).collect();
        let needle = [(0.0, 0.5), (0.5, 0.5), (0.5, 0.75), (1.0, 0.75)];
        assert!(pts.windows(4).any(|w| w == needle));
    }

    #[test]
    fn projection() {
        let f = CadlagFunction::step(
            vec![0.0, 0.5, 0.75],
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let first = f.project(&[1.0, 0.0]).unwrap();
        assert_eq!(first, CadlagFunction::indicator(0.5).unwrap());
        let zero = f.project(&[0.0, 0.0]).unwrap();
        assert_eq!(zero, CadlagFunction::constant(vec![0.0]).unwrap());
        let sum = f.project(&[1.0, 1.0]).unwrap();
        assert_eq!(
            sum,
            CadlagFunction::step_1d(&[0.0, 0.5, 0.75], &[0.0, 1.0, 2.0]).unwrap()
        );
        assert_eq!(sum.jump_times(), vec![0.5, 0.75]);
        assert!(f.project(&[1.0]).is_err());
    }

    #[test]
    fn restriction() {
        let f = half_step();
        assert_eq!(f.restrict(1.0).unwrap(), f);
        assert_eq!(
            f.restrict(0.5).unwrap(),
            CadlagFunction::constant(vec![0.0]).unwrap()
        );
        let g = CadlagFunction::indicator(0.25).unwrap();
        assert_eq!(g.restrict(0.5).unwrap(), half_step());
        assert!(g.restrict(0.0).is_err());
        let lin = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        assert_eq!(lin.restrict(0.5).unwrap(), CadlagFunction::linear_1d(0.0, 0.5).unwrap());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f = CadlagFunction::new(
            vec![0.0, 0.1 + 0.2, 2.0 / 3.0],
            vec![
                Piece::Constant(vec![1.0 / 3.0, -0.0]),
                Piece::Linear(vec![1e-300, 5e300], vec![std::f64::consts::PI, -7.25]),
                Piece::Constant(vec![0.1, 0.7]),
            ],
        )
        .unwrap();
        let text = f.to_json();
        let back = CadlagFunction::from_json(&text).unwrap();
        assert_eq!(back.starts(), f.starts());
        for (p, q) in back.pieces().iter().zip(f.pieces()) {
            for (a, b) in p.start_value().iter().zip(q.start_value()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            for (a, b) in p.end_value().iter().zip(q.end_value()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn json_rejects_bad_terminal() {
        let mut rec = half_step().to_record();
        rec.terminal = vec![0.0];
        assert!(CadlagFunction::from_record(&rec).is_err());
        assert!(CadlagFunction::from_json("{\"format\":\"x\"}").is_err());
    }
}
