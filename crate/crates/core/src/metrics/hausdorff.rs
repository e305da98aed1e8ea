//! Hausdorff distance between polygonal graphs.
//!
//! For a segment `A(α)` of the first graph, `α -> dist(A(α), S_j)` is convex
//! for every segment `S_j` of the second, so on any parameter interval it is
//! bounded by the larger endpoint value. Branch and bound over `α` with that
//! bound gives the supremum of `min_j dist(A(α), S_j)` to within a fixed
//! absolute tolerance; the reported value is always an attained lower bound.

use super::geometry::{point_distance, point_segment};
use super::GraphNorm;
use crate::cadlag::{GraphPoint, PolygonalGraph};
use crate::error::{Error, Result};
use crate::vector;

const TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffResult {
    pub value: f64,
    /// Point of one graph realizing the supremum.
    pub from: GraphPoint,
    /// Closest point of the other graph to `from`.
    pub to: GraphPoint,
}

/// Segments of the point set, as vertex index pairs in vertex order.
/// Vertices not covered by an edge appear as degenerate pairs `(k, k)`.
fn segments(g: &PolygonalGraph) -> Vec<(usize, usize)> {
    let n = g.vertices.len();
    let included: Vec<bool> = (1..n)
        .map(|i| {
            g.kind == crate::cadlag::GraphKind::Completed
                || g.vertices[i - 1].time != g.vertices[i].time
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let left = k > 0 && included[k - 1];
        let right = k + 1 < n && included[k];
        if !left && !right {
            out.push((k, k));
        }
        if right {
            out.push((k, k + 1));
        }
    }
    out
}

struct Target<'a> {
    graph: &'a PolygonalGraph,
    segs: Vec<(usize, usize)>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    sorted: bool,
    norm: GraphNorm,
}

impl<'a> Target<'a> {
    fn new(graph: &'a PolygonalGraph, norm: GraphNorm) -> Self {
        let segs = segments(graph);
        let t = |k: usize| graph.vertices[k].time;
        let lo: Vec<f64> = segs.iter().map(|&(i, j)| t(i).min(t(j))).collect();
        let hi: Vec<f64> = segs.iter().map(|&(i, j)| t(i).max(t(j))).collect();
        let sorted = lo.windows(2).all(|w| w[0] <= w[1]) && hi.windows(2).all(|w| w[0] <= w[1]);
        Target {
            graph,
            segs,
            lo,
            hi,
            sorted,
            norm,
        }
    }

    fn dist(&self, j: usize, p: &[f64], pt: f64) -> (f64, f64) {
        let (a, b) = self.segs[j];
        let va = &self.graph.vertices[a];
        let vb = &self.graph.vertices[b];
        if a == b {
            return (point_distance(p, pt, &va.value, va.time, self.norm), 0.0);
        }
        point_segment(p, pt, &va.value, va.time, &vb.value, vb.time, self.norm)
    }

    fn time_gap(&self, j: usize, lo: f64, hi: f64) -> f64 {
        (self.lo[j] - hi).max(lo - self.hi[j]).max(0.0)
    }

    /// Indices of segments whose time range comes within `r` of `[lo, hi]`.
    fn candidates(&self, lo: f64, hi: f64, r: f64) -> std::ops::Range<usize> {
        if !self.sorted || !r.is_finite() {
            return 0..self.segs.len();
        }
        let first = self.hi.partition_point(|&h| h < lo - r);
        let last = self.lo.partition_point(|&l| l <= hi + r);
        first..last.max(first)
    }

    /// Nearest segment to a point, scanning outward in time order.
    fn nearest(&self, p: &[f64], pt: f64) -> (f64, usize, f64) {
        let mut best = (f64::INFINITY, 0, 0.0);
        if !self.sorted {
            for j in 0..self.segs.len() {
                let (d, beta) = self.dist(j, p, pt);
                if d < best.0 {
                    best = (d, j, beta);
                }
            }
            return best;
        }
        let k = self.hi.partition_point(|&h| h < pt);
        for j in k..self.segs.len() {
            if self.time_gap(j, pt, pt) >= best.0 {
                break;
            }
            let (d, beta) = self.dist(j, p, pt);
            if d < best.0 {
                best = (d, j, beta);
            }
        }
        for j in (0..k).rev() {
            if self.time_gap(j, pt, pt) >= best.0 {
                break;
            }
            let (d, beta) = self.dist(j, p, pt);
            if d < best.0 {
                best = (d, j, beta);
            }
        }
        best
    }

    fn point_on(&self, j: usize, beta: f64) -> GraphPoint {
        let (a, b) = self.segs[j];
        let va = &self.graph.vertices[a];
        let vb = &self.graph.vertices[b];
        GraphPoint::new(
            vector::lerp(&va.value, &vb.value, beta),
            va.time + beta * (vb.time - va.time),
        )
    }
}

fn point_at(a: &GraphPoint, b: &GraphPoint, alpha: f64) -> (Vec<f64>, f64) {
    (
        vector::lerp(&a.value, &b.value, alpha),
        a.time + alpha * (b.time - a.time),
    )
}

/// `sup_{p in A} dist(p, B)`.
pub fn directed(a: &PolygonalGraph, b: &PolygonalGraph, norm: GraphNorm) -> Result<HausdorffResult> {
    if a.vertices.is_empty() || b.vertices.is_empty() {
        return Err(Error::Empty("graph without vertices"));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let target = Target::new(b, norm);
    let mut best = f64::NEG_INFINITY;
    let mut best_pair: Option<(GraphPoint, GraphPoint)> = None;
    let mut record = |value: f64, from: (Vec<f64>, f64), j: usize, beta: f64, best: &mut f64| {
        if value > *best {
            *best = value;
            best_pair = Some((GraphPoint::new(from.0, from.1), target.point_on(j, beta)));
        }
    };

    for &(ia, ib) in &segments(a) {
        let pa = &a.vertices[ia];
        let pb = &a.vertices[ib];
        let (d0, j0, b0) = target.nearest(&pa.value, pa.time);
        record(d0, (pa.value.clone(), pa.time), j0, b0, &mut best);
        if ia == ib {
            continue;
        }
        let (d1, j1, b1) = target.nearest(&pb.value, pb.time);
        record(d1, (pb.value.clone(), pb.time), j1, b1, &mut best);

        // upper bound for the whole segment from the endpoint minimizers
        let env = |j: usize| {
            target
                .dist(j, &pa.value, pa.time)
                .0
                .max(target.dist(j, &pb.value, pb.time).0)
        };
        let r = env(j0).min(env(j1));
        if r <= best + TOL {
            continue;
        }
        let (tlo, thi) = (pa.time.min(pb.time), pa.time.max(pb.time));
        let cand: Vec<usize> = target
            .candidates(tlo, thi, r)
            .filter(|&j| target.time_gap(j, tlo, thi) <= r)
            .collect();
        let phis = |alpha: f64| -> Vec<f64> {
            let (p, pt) = point_at(pa, pb, alpha);
            cand.iter().map(|&j| target.dist(j, &p, pt).0).collect()
        };
        let argmin = |v: &[f64]| {
            v.iter()
                .enumerate()
                .fold((f64::INFINITY, 0), |acc, (k, &x)| if x < acc.0 { (x, k) } else { acc })
        };
        let mut stack = vec![(0.0, phis(0.0), 1.0, phis(1.0), 0u32)];
        while let Some((a0, f0, a1, f1, depth)) = stack.pop() {
            let upper = f0
                .iter()
                .zip(&f1)
                .map(|(x, y)| x.max(*y))
                .fold(f64::INFINITY, f64::min);
            if upper <= best + TOL || depth >= MAX_DEPTH {
                continue;
            }
            let mid = 0.5 * (a0 + a1);
            let fm = phis(mid);
            let (dm, km) = argmin(&fm);
            if dm > best {
                let j = cand[km];
                let (p, pt) = point_at(pa, pb, mid);
                let beta = target.dist(j, &p, pt).1;
                record(dm, (p, pt), j, beta, &mut best);
            }
            stack.push((a0, f0, mid, fm.clone(), depth + 1));
            stack.push((mid, fm, a1, f1, depth + 1));
        }
    }
    let (from, to) = best_pair.expect("at least one vertex was examined");
    Ok(HausdorffResult {
        value: best.max(0.0),
        from,
        to,
    })
}

/// Symmetric Hausdorff distance with its witness.
pub fn hausdorff_with(
    a: &PolygonalGraph,
    b: &PolygonalGraph,
    norm: GraphNorm,
) -> Result<HausdorffResult> {
    let ab = directed(a, b, norm)?;
    let ba = directed(b, a, norm)?;
    Ok(if ab.value >= ba.value { ab } else { ba })
}
