//! Three-point gauges and the oscillation functions built from them.
//!
//! For a step function the gauge `G(f(t), f(t1), f(t2))` only depends on
//! which pieces `t`, `t1` and `t2` fall in. As `t` moves, the admissible
//! windows for `t1` and `t2` slide, and the set of reachable pieces only
//! changes when a window edge crosses a breakpoint. Evaluating at every such
//! event time and at the midpoints between consecutive events therefore
//! visits every distinct configuration, which makes the supremum exact.
//! Affine pieces are handled through a midpoint step approximation with an
//! explicit error bound.

use crate::cadlag::{CadlagFunction, Piece};
use crate::error::{Error, Result};
use crate::{vector, Topology};

/// `|x - x1| ∧ |x - x2|`.
pub fn j_gauge(x: &[f64], x1: &[f64], x2: &[f64]) -> f64 {
    vector::dist(x, x1).min(vector::dist(x, x2))
}

/// Zero when `x` lies on the segment `[[x1, x2]]`, otherwise [`j_gauge`].
pub fn m_gauge(x: &[f64], x1: &[f64], x2: &[f64]) -> f64 {
    if on_segment(x, x1, x2) {
        0.0
    } else {
        j_gauge(x, x1, x2)
    }
}

const SEGMENT_TOL: f64 = 1e-12;

pub(crate) fn on_segment(x: &[f64], a: &[f64], b: &[f64]) -> bool {
    if x == a || x == b {
        return true;
    }
    if x.len() == 1 {
        return (a[0] <= x[0] && x[0] <= b[0]) || (b[0] <= x[0] && x[0] <= a[0]);
    }
    let (c, span) = a
        .iter()
        .zip(b)
        .map(|(p, q)| q - p)
        .enumerate()
        .fold((0, 0.0_f64), |acc, (i, d)| if d.abs() > acc.1.abs() { (i, d) } else { acc });
    if span == 0.0 {
        return false;
    }
    let alpha = (x[c] - a[c]) / span;
    if !(0.0..=1.0).contains(&alpha) {
        return false;
    }
    let scale = 1.0 + vector::norm(a).max(vector::norm(b));
    a.iter()
        .zip(b)
        .zip(x)
        .all(|((p, q), v)| (p + alpha * (q - p) - v).abs() <= SEGMENT_TOL * scale)
}

/// How the second triple family treats its half-windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum T2Convention {
    /// Half-windows intersected with `t1 < t < t2`, so that the family is a
    /// subset of the first one.
    #[default]
    Ordered,
    /// Half-windows as written, allowing `t1 >= t` or `t2 <= t` near the
    /// boundary when `delta` is large.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationOptions {
    pub t2: T2Convention,
    /// Sub-steps per affine piece in the step approximation.
    pub linear_steps: usize,
}

impl Default for OscillationOptions {
    fn default() -> Self {
        OscillationOptions {
            t2: T2Convention::Ordered,
            linear_steps: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exactness {
    Exact,
    /// `|reported - true| <= error_bound`; infinite when no bound is known.
    Approximate { error_bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub topology: Topology,
    pub delta: f64,
    pub value: f64,
    pub witness: Option<Witness>,
    pub exactness: Exactness,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1], got {delta}"
        )))
    }
}

/// A time interval with optional open ends.
#[derive(Debug, Clone, Copy)]
struct Window {
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl Window {
    fn closed(lo: f64, hi: f64) -> Self {
        Window {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    fn contains(&self, s: f64) -> bool {
        let above = if self.lo_open { s > self.lo } else { s >= self.lo };
        let below = if self.hi_open { s < self.hi } else { s <= self.hi };
        above && below
    }

    /// Range of piece indices meeting the window.
    fn pieces(&self, f: &CadlagFunction) -> Option<(usize, usize)> {
        if self.is_empty() {
            return None;
        }
        let first = f.piece_index(self.lo);
        let last = if self.hi_open {
            f.left_piece_index(self.hi)
        } else {
            f.piece_index(self.hi)
        };
        (first <= last).then_some((first, last))
    }

    /// A time inside the window that falls in piece `i`.
    fn time_in_piece(&self, f: &CadlagFunction, i: usize) -> f64 {
        let (s, e) = f.piece_interval(i);
        let lo = s.max(self.lo);
        if self.contains(lo) {
            return lo;
        }
        let hi = e.min(self.hi);
        0.5 * (lo + hi)
    }
}

fn windows(
    family: Family,
    convention: T2Convention,
    delta: f64,
    t: f64,
) -> Option<(Window, Window)> {
    let lo = (t - delta).max(0.0);
    let hi = (t + delta).min(1.0);
    match family {
        Family::T1 => {
            let left = Window {
                lo,
                hi: t,
                lo_open: false,
                hi_open: true,
            };
            let right = Window {
                lo: t,
                hi,
                lo_open: true,
                hi_open: false,
            };
            Some((left, right))
        }
        Family::T2 => {
            let left_hi = if t >= delta { t - 0.5 * delta } else { 0.5 * delta };
            let right_lo = if t + delta <= 1.0 {
                t + 0.5 * delta
            } else {
                1.0 - 0.5 * delta
            };
            match convention {
                T2Convention::Literal => {
                    Some((Window::closed(lo, left_hi), Window::closed(right_lo, hi)))
                }
                T2Convention::Ordered => {
                    let left = if left_hi < t {
                        Window::closed(lo, left_hi)
                    } else {
                        Window {
                            lo,
                            hi: t,
                            lo_open: false,
                            hi_open: true,
                        }
                    };
                    let right = if right_lo > t {
                        Window::closed(right_lo, hi)
                    } else {
                        Window {
                            lo: t,
                            hi,
                            lo_open: true,
                            hi_open: false,
                        }
                    };
                    Some((left, right))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    T1,
    T2,
}

fn family_of(topology: Topology) -> Family {
    match topology {
        Topology::J1 | Topology::M1 => Family::T1,
        Topology::J2 | Topology::M2 => Family::T2,
    }
}

fn uses_m_gauge(topology: Topology) -> bool {
    matches!(topology, Topology::M1 | Topology::M2)
}

/// Sparse tables answering range minimum and maximum in O(1).
struct RangeExtrema {
    min: Vec<Vec<f64>>,
    max: Vec<Vec<f64>>,
}

impl RangeExtrema {
    fn new(values: &[f64]) -> Self {
        let mut min = vec![values.to_vec()];
        let mut max = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= values.len() {
            let (pmin, pmax) = (min.last().unwrap(), max.last().unwrap());
            let len = values.len() - 2 * width + 1;
            let nmin = (0..len).map(|i| pmin[i].min(pmin[i + width])).collect();
            let nmax = (0..len).map(|i| pmax[i].max(pmax[i + width])).collect();
            min.push(nmin);
            max.push(nmax);
            width *= 2;
        }
        RangeExtrema { min, max }
    }

    fn query(&self, first: usize, last: usize) -> (f64, f64) {
        let len = last - first + 1;
        let level = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let other = last + 1 - (1 << level);
        (
            self.min[level][first].min(self.min[level][other]),
            self.max[level][first].max(self.max[level][other]),
        )
    }
}

/// Best gauge value for a fixed `t` together with the chosen pieces.
fn best_at(
    f: &CadlagFunction,
    table: Option<&RangeExtrema>,
    m_gauge_wanted: bool,
    x: &[f64],
    left: (usize, usize),
    right: (usize, usize),
) -> (f64, usize, usize) {
    let values: Vec<&[f64]> = f.pieces().iter().map(Piece::start_value).collect();
    if let Some(table) = table {
        let x = x[0];
        let (lmin, lmax) = table.query(left.0, left.1);
        let (rmin, rmax) = table.query(right.0, right.1);
        let find = |range: (usize, usize), target: f64| {
            (range.0..=range.1).find(|&i| values[i][0] == target).unwrap()
        };
        if m_gauge_wanted {
            let below = (x - lmin).min(x - rmin);
            let above = (lmax - x).min(rmax - x);
            if below <= 0.0 && above <= 0.0 {
                return (0.0, left.0, right.0);
            }
            return if below >= above {
                (below, find(left, lmin), find(right, rmin))
            } else {
                (above, find(left, lmax), find(right, rmax))
            };
        }
        let (lv, li) = if x - lmin >= lmax - x {
            (x - lmin, find(left, lmin))
        } else {
            (lmax - x, find(left, lmax))
        };
        let (rv, ri) = if x - rmin >= rmax - x {
            (x - rmin, find(right, rmin))
        } else {
            (rmax - x, find(right, rmax))
        };
        return (lv.min(rv), li, ri);
    }
    if !m_gauge_wanted {
        let far = |range: (usize, usize)| {
            (range.0..=range.1)
                .map(|i| (vector::dist(x, values[i]), i))
                .fold((-1.0, range.0), |acc, c| if c.0 > acc.0 { c } else { acc })
        };
        let (lv, li) = far(left);
        let (rv, ri) = far(right);
        return (lv.min(rv), li, ri);
    }
    let mut best = (-1.0, left.0, right.0);
    for i in left.0..=left.1 {
        for j in right.0..=right.1 {
            let g = m_gauge(x, values[i], values[j]);
            if g > best.0 {
                best = (g, i, j);
            }
        }
    }
    best
}

/// Times at which the reachable pieces or the value of `f(t)` may change.
fn event_times(f: &CadlagFunction, delta: f64) -> Vec<f64> {
    let half = 0.5 * delta;
    let mut events = vec![0.0, 1.0, delta, 1.0 - delta, half, 1.0 - half];
    for &s in &f.starts()[1..] {
        events.extend_from_slice(&[s, s - delta, s + delta, s - half, s + half]);
    }
    events.retain(|t| (0.0..=1.0).contains(t));
    events.sort_by(f64::total_cmp);
    events.dedup();
    let mut all = Vec::with_capacity(2 * events.len());
    for w in events.windows(2) {
        all.push(w[0]);
        all.push(0.5 * (w[0] + w[1]));
    }
    all.push(*events.last().unwrap());
    all
}

fn step_oscillation(
    topology: Topology,
    delta: f64,
    f: &CadlagFunction,
    convention: T2Convention,
) -> (f64, Option<Witness>) {
    let family = family_of(topology);
    let m = uses_m_gauge(topology);
    let table = (f.dim() == 1).then(|| {
        let values: Vec<f64> = f.pieces().iter().map(|p| p.start_value()[0]).collect();
        RangeExtrema::new(&values)
    });
    let mut best: Option<(f64, Witness)> = None;
    for t in event_times(f, delta) {
        let Some((lw, rw)) = windows(family, convention, delta, t) else {
            continue;
        };
        let (Some(left), Some(right)) = (lw.pieces(f), rw.pieces(f)) else {
            continue;
        };
        let x = f.value_unchecked(t);
        let (g, i, j) = best_at(f, table.as_ref(), m, &x, left, right);
        if best.as_ref().is_none_or(|b| g > b.0) {
            let w = Witness {
                t,
                t1: lw.time_in_piece(f, i),
                t2: rw.time_in_piece(f, j),
            };
            best = Some((g, w));
        }
    }
    match best {
        Some((v, w)) => (v.max(0.0), Some(w)),
        None => (0.0, None),
    }
}

/// `Δ_T(δ, f)` with default options.
pub fn oscillation(topology: Topology, delta: f64, f: &CadlagFunction) -> Result<OscillationReport> {
    oscillation_with(topology, delta, f, &OscillationOptions::default())
}

pub fn oscillation_with(
    topology: Topology,
    delta: f64,
    f: &CadlagFunction,
    options: &OscillationOptions,
) -> Result<OscillationReport> {
    check_delta(delta)?;
    if f.is_step() {
        let (value, witness) = step_oscillation(topology, delta, f, options.t2);
        return Ok(OscillationReport {
            topology,
            delta,
            value,
            witness,
            exactness: Exactness::Exact,
        });
    }
    let (g, eta) = f.step_approximation(options.linear_steps)?;
    let (value, witness) = step_oscillation(topology, delta, &g, options.t2);
    // Both gauges are 2-Lipschitz under a uniform perturbation, except the
    // M gauge in dimension above one, which is discontinuous.
    let error_bound = if uses_m_gauge(topology) && f.dim() > 1 {
        f64::INFINITY
    } else {
        2.0 * eta
    };
    Ok(OscillationReport {
        topology,
        delta,
        value,
        witness,
        exactness: Exactness::Approximate { error_bound },
    })
}

/// `sup_{0<t<δ} |f(0) - f(t)| + sup_{1-δ<t<1} |f(1) - f(t)|`, exact for
/// step and piecewise affine functions.
pub fn boundary_oscillation(delta: f64, f: &CadlagFunction) -> Result<f64> {
    check_delta(delta)?;
    let side = |lo: f64, hi: f64, anchor: &[f64]| -> f64 {
        let first = f.piece_index(lo);
        let last = f.left_piece_index(hi);
        let mut best: f64 = 0.0;
        for i in first..=last {
            let (s, e) = f.piece_interval(i);
            let a = s.max(lo);
            let b = e.min(hi);
            let at_a = f.value_unchecked(a);
            let p = &f.pieces()[i];
            let at_a = if a == s { p.start_value().to_vec() } else { at_a };
            let at_b = if b == e {
                p.end_value().to_vec()
            } else {
                f.value_unchecked(b)
            };
            let inner = match p {
                Piece::Constant(v) => vector::dist(anchor, v),
                Piece::Linear(..) => vector::dist(anchor, &at_a).max(vector::dist(anchor, &at_b)),
            };
            best = best.max(inner);
        }
        best
    };
    let f0 = f.value_unchecked(0.0);
    let f1 = f.terminal_value().to_vec();
    Ok(side(0.0, delta, &f0) + side(1.0 - delta, 1.0, &f1))
}

/// Brute-force lower bound: the gauge maximized over all triples of the
/// grid `{i / resolution}` that belong to the triple family.
pub fn grid_oracle(
    topology: Topology,
    delta: f64,
    f: &CadlagFunction,
    resolution: usize,
    convention: T2Convention,
) -> Result<f64> {
    check_delta(delta)?;
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    let grid: Vec<f64> = (0..=resolution).map(|i| i as f64 / resolution as f64).collect();
    let values: Vec<Vec<f64>> = grid.iter().map(|&t| f.value_unchecked(t)).collect();
    let family = family_of(topology);
    let m = uses_m_gauge(topology);
    let mut best: f64 = 0.0;
    for (k, &t) in grid.iter().enumerate() {
        let Some((lw, rw)) = windows(family, convention, delta, t) else {
            continue;
        };
        for (i, &t1) in grid.iter().enumerate() {
            if !lw.contains(t1) {
                continue;
            }
            for (j, &t2) in grid.iter().enumerate() {
                if !rw.contains(t2) {
                    continue;
                }
                let g = if m {
                    m_gauge(&values[k], &values[i], &values[j])
                } else {
                    j_gauge(&values[k], &values[i], &values[j])
                };
                best = best.max(g);
            }
        }
    }
    Ok(best)
}
