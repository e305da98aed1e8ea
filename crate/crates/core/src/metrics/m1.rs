//! Monotone matchings of completed graphs.
//!
//! A pair of parametric representations is a pair of monotone traversals of
//! the two completed graphs, so the M1 distance is the Fréchet distance of
//! the two polylines under the graph norm.
//!
//! * [`discrete_frechet`] couples densified vertex sequences. Every segment
//!   is cut into the same power-of-two number of parts; interpolating the
//!   coupling linearly gives parametric representations at the same cost,
//!   and refining by a factor of two can only lower it.
//! * [`frechet`] decides `d <= ε` on the free-space diagram of the two
//!   polylines, which is exact because the free space of two segments is
//!   convex, and bisects `ε` between a lower and an upper bound.

use super::geometry::{free_interval, point_distance};
use super::GraphNorm;
use crate::cadlag::GraphPoint;
use crate::vector;

/// Vertex sequence with zero-length segments removed and every segment cut
/// into `parts` pieces.
pub fn densify(vertices: &[GraphPoint], parts: usize) -> Vec<GraphPoint> {
    let mut clean: Vec<&GraphPoint> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if clean.last().is_none_or(|l| *l != v) {
            clean.push(v);
        }
    }
    let mut out = Vec::with_capacity(clean.len() * parts + 1);
    for w in clean.windows(2) {
        for k in 0..parts {
            let alpha = k as f64 / parts as f64;
            out.push(GraphPoint::new(
                vector::lerp(&w[0].value, &w[1].value, alpha),
                w[0].time + alpha * (w[1].time - w[0].time),
            ));
        }
    }
    out.push(clean.last().map(|v| (*v).clone()).unwrap_or_else(|| vertices[0].clone()));
    out
}

/// Discrete Fréchet distance and an optimal coupling as index pairs.
pub fn discrete_frechet(
    a: &[GraphPoint],
    b: &[GraphPoint],
    norm: GraphNorm,
) -> (f64, Vec<(usize, usize)>) {
    let (n, m) = (a.len(), b.len());
    let d = |i: usize, j: usize| point_distance(&a[i].value, a[i].time, &b[j].value, b[j].time, norm);
    // 0 = start, 1 = from (i-1, j), 2 = from (i, j-1), 3 = from (i-1, j-1)
    let mut from = vec![0u8; n * m];
    let mut prev = vec![0.0; m];
    let mut cur = vec![0.0; m];
    for i in 0..n {
        for j in 0..m {
            let here = d(i, j);
            let (best, dir) = if i == 0 && j == 0 {
                (0.0, 0)
            } else {
                let mut opt = (f64::INFINITY, 0u8);
                if i > 0 && prev[j] < opt.0 {
                    opt = (prev[j], 1);
                }
                if j > 0 && cur[j - 1] < opt.0 {
                    opt = (cur[j - 1], 2);
                }
                if i > 0 && j > 0 && prev[j - 1] <= opt.0 {
                    opt = (prev[j - 1], 3);
                }
                opt
            };
            cur[j] = here.max(best);
            from[i * m + j] = dir;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let value = prev[m - 1];
    let mut path = vec![(n - 1, m - 1)];
    let (mut i, mut j) = (n - 1, m - 1);
    loop {
        match from[i * m + j] {
            1 => i -= 1,
            2 => j -= 1,
            3 => {
                i -= 1;
                j -= 1;
            }
            _ => break,
        }
        path.push((i, j));
    }
    path.reverse();
    (value, path)
}

pub fn point_gap(x: &GraphPoint, y: &GraphPoint, norm: GraphNorm) -> f64 {
    point_distance(&x.value, x.time, &y.value, y.time, norm)
}

type Interval = Option<(f64, f64)>;

/// Point pair on the free-space diagram: `Left(i, j, t)` is vertex `i` of
/// `a` against segment `j` of `b` at parameter `t`, `Bottom(i, j, s)` is
/// vertex `j` of `b` against segment `i` of `a` at parameter `s`.
#[derive(Debug, Clone, Copy)]
enum Node {
    Left(usize, usize, f64),
    Bottom(usize, usize, f64),
}

struct FreeSpace<'a> {
    a: &'a [GraphPoint],
    b: &'a [GraphPoint],
    norm: GraphNorm,
    /// reachable part of the left edge of cell (i, j), i in 0..=p
    left: Vec<Interval>,
    /// reachable part of the bottom edge of cell (i, j), j in 0..=q
    bottom: Vec<Interval>,
}

impl<'a> FreeSpace<'a> {
    fn p(&self) -> usize {
        self.a.len() - 1
    }

    fn q(&self) -> usize {
        self.b.len() - 1
    }

    fn li(&self, i: usize, j: usize) -> usize {
        i * self.q() + j
    }

    fn bi(&self, i: usize, j: usize) -> usize {
        i * (self.q() + 1) + j
    }

    /// Vertex `i` of `a` against segment `j` of `b`.
    fn left_free(&self, i: usize, j: usize, eps: f64) -> Interval {
        let (x, s, e) = (&self.a[i], &self.b[j], &self.b[j + 1]);
        free_interval(&x.value, x.time, &s.value, s.time, &e.value, e.time, eps, self.norm)
    }

    /// Vertex `j` of `b` against segment `i` of `a`.
    fn bottom_free(&self, i: usize, j: usize, eps: f64) -> Interval {
        let (y, s, e) = (&self.b[j], &self.a[i], &self.a[i + 1]);
        free_interval(&y.value, y.time, &s.value, s.time, &e.value, e.time, eps, self.norm)
    }

    fn new(a: &'a [GraphPoint], b: &'a [GraphPoint], norm: GraphNorm) -> Self {
        FreeSpace {
            a,
            b,
            norm,
            left: Vec::new(),
            bottom: Vec::new(),
        }
    }

    fn decide(&mut self, eps: f64) -> bool {
        let (p, q) = (self.p(), self.q());
        let corner = |x: &GraphPoint, y: &GraphPoint| point_distance(&x.value, x.time, &y.value, y.time, self.norm);
        if corner(&self.a[0], &self.b[0]) > eps || corner(&self.a[p], &self.b[q]) > eps {
            return false;
        }
        self.left = vec![None; (p + 1) * q];
        self.bottom = vec![None; p * (q + 1)];
        let mut open = true;
        for j in 0..q {
            let free = if open { self.left_free(0, j, eps) } else { None };
            let k = self.li(0, j);
            self.left[k] = free.filter(|&(lo, _)| lo == 0.0);
            open = self.left[k].is_some_and(|(_, hi)| hi == 1.0);
        }
        let mut open = true;
        for i in 0..p {
            let free = if open { self.bottom_free(i, 0, eps) } else { None };
            let k = self.bi(i, 0);
            self.bottom[k] = free.filter(|&(lo, _)| lo == 0.0);
            open = self.bottom[k].is_some_and(|(_, hi)| hi == 1.0);
        }
        for i in 0..p {
            for j in 0..q {
                let l = self.left[self.li(i, j)];
                let b = self.bottom[self.bi(i, j)];
                let right = self.left_free(i + 1, j, eps).and_then(|(lo, hi)| match (b, l) {
                    (Some(_), _) => Some((lo, hi)),
                    (None, Some((llo, _))) => (llo.max(lo) <= hi).then_some((llo.max(lo), hi)),
                    (None, None) => None,
                });
                let top = self.bottom_free(i, j + 1, eps).and_then(|(lo, hi)| match (l, b) {
                    (Some(_), _) => Some((lo, hi)),
                    (None, Some((blo, _))) => (blo.max(lo) <= hi).then_some((blo.max(lo), hi)),
                    (None, None) => None,
                });
                let (ri, ti) = (self.li(i + 1, j), self.bi(i, j + 1));
                self.left[ri] = right;
                self.bottom[ti] = top;
            }
        }
        self.left[self.li(p, q - 1)].is_some_and(|(_, hi)| hi == 1.0)
            || self.bottom[self.bi(p - 1, q)].is_some_and(|(_, hi)| hi == 1.0)
    }

    fn pair(&self, node: Node) -> (GraphPoint, GraphPoint) {
        let on = |s: &GraphPoint, e: &GraphPoint, x: f64| {
            GraphPoint::new(vector::lerp(&s.value, &e.value, x), s.time + x * (e.time - s.time))
        };
        match node {
            Node::Left(i, j, t) => (self.a[i].clone(), on(&self.b[j], &self.b[j + 1], t)),
            Node::Bottom(i, j, s) => (on(&self.a[i], &self.a[i + 1], s), self.b[j].clone()),
        }
    }

    /// Monotone path through the reachable free space of the last
    /// successful decision, as matched point pairs from start to end.
    fn path(&self) -> Vec<(GraphPoint, GraphPoint)> {
        let (p, q) = (self.p(), self.q());
        let mut node = if self.left[self.li(p, q - 1)].is_some_and(|(_, hi)| hi == 1.0) {
            Node::Left(p, q - 1, 1.0)
        } else {
            Node::Bottom(p - 1, q, 1.0)
        };
        let mut out = vec![self.pair(node)];
        loop {
            node = match node {
                Node::Left(0, j, t) => {
                    if t > 0.0 {
                        Node::Left(0, j, 0.0)
                    } else if j > 0 {
                        Node::Left(0, j - 1, 0.0)
                    } else {
                        break;
                    }
                }
                Node::Bottom(i, 0, s) => {
                    if s > 0.0 {
                        Node::Bottom(i, 0, 0.0)
                    } else if i > 0 {
                        Node::Bottom(i - 1, 0, 0.0)
                    } else {
                        break;
                    }
                }
                Node::Left(i, j, _) => match self.bottom[self.bi(i - 1, j)] {
                    Some((lo, _)) => Node::Bottom(i - 1, j, lo),
                    None => Node::Left(i - 1, j, self.left[self.li(i - 1, j)].unwrap().0),
                },
                Node::Bottom(i, j, _) => match self.left[self.li(i, j - 1)] {
                    Some((lo, _)) => Node::Left(i, j - 1, lo),
                    None => Node::Bottom(i, j - 1, self.bottom[self.bi(i, j - 1)].unwrap().0),
                },
            };
            out.push(self.pair(node));
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone)]
pub struct FrechetResult {
    /// The distance is in `(lower, upper]`, or equals `upper` when `exact`.
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub matching: Vec<(GraphPoint, GraphPoint)>,
}

/// Fréchet distance of two polylines with at least two vertices each,
/// bracketed to within `tolerance`. `lower` must be a valid lower bound and
/// `upper` a feasible value.
pub fn frechet(
    a: &[GraphPoint],
    b: &[GraphPoint],
    norm: GraphNorm,
    lower: f64,
    upper: f64,
    tolerance: f64,
    max_iterations: usize,
) -> FrechetResult {
    assert!(a.len() >= 2 && b.len() >= 2);
    let mut fs = FreeSpace::new(a, b, norm);
    // comparisons at the critical value can go either way by rounding
    let slack = |e: f64| e + 1e-12 * (1.0 + e);
    if fs.decide(slack(lower)) {
        return FrechetResult {
            lower,
            upper: lower,
            exact: true,
            matching: fs.path(),
        };
    }
    let (mut lo, mut hi) = (lower, upper.max(lower));
    let mut iterations = 0;
    while hi - lo > tolerance && iterations < max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if fs.decide(slack(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let ok = fs.decide(slack(hi));
    debug_assert!(ok);
    FrechetResult {
        lower: lo,
        upper: hi,
        exact: false,
        matching: fs.path(),
    }
}

/// Largest power of two not exceeding `refinement` (at least one).
pub fn parts_for(refinement: usize) -> usize {
    let r = refinement.max(1);
    1 << (usize::BITS - 1 - r.leading_zeros())
}
