//! The J1 distance between step functions.
//!
//! A continuous time change only matters through where it sends the jumps of
//! `f`: if `w_i` is the time at which `f ∘ λ` takes its `i`-th jump, then
//! `‖λ - id‖ = max |w_i - v_i|` for the piecewise-linear `λ` through the
//! points `(w_i, v_i)`, and `f ∘ λ - g` is constant between consecutive
//! events of the merged jump sequence. Deciding whether a distance `ε` is
//! achievable is thus a walk through the grid of piece pairs `(i, j)`: step
//! right when `f` jumps alone, up when `g` jumps alone, diagonally when both
//! jump together, visiting only pairs with `|f_i - g_j| <= ε`. Along a walk
//! it suffices to remember the earliest admissible position of the last
//! jump of `f`, which the dynamic program minimizes per cell.
//!
//! Feasibility only changes at the values `|f_i - g_j|` and `|u_j - v_i|`,
//! so the exact infimum is found by bisection over that finite set.

use crate::cadlag::CadlagFunction;
use crate::error::{Error, Result};
use crate::time_change::TimeChange;
use crate::vector;

/// A time depending on `ε`: a fixed instant or `v - ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Pos {
    At(f64),
    Below(f64),
}

/// `a < b` evaluated so that it agrees with the candidate differences.
fn lt(a: Pos, b: Pos, eps: f64) -> bool {
    match (a, b) {
        (Pos::At(x), Pos::At(y)) => x < y,
        (Pos::Below(v), Pos::At(u)) => v - u < eps,
        (Pos::At(u), Pos::Below(v)) => eps < v - u,
        (Pos::Below(v1), Pos::Below(v2)) => v1 < v2,
    }
}

/// `a < v + ε`.
fn lt_above(a: Pos, v: f64, eps: f64) -> bool {
    match a {
        Pos::At(u) => u - v < eps,
        Pos::Below(w) => w - v < 2.0 * eps,
    }
}

fn max_pos(a: Pos, b: Pos, eps: f64) -> Pos {
    if lt(a, b, eps) {
        b
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Start,
    Right,
    Up,
    Diagonal,
}

struct Steps<'a> {
    /// piece values and piece start times of f and g
    fv: Vec<&'a [f64]>,
    fs: &'a [f64],
    gv: Vec<&'a [f64]>,
    gs: &'a [f64],
}

impl<'a> Steps<'a> {
    fn new(f: &'a CadlagFunction, g: &'a CadlagFunction) -> Self {
        Steps {
            fv: f.pieces().iter().map(|p| p.start_value()).collect(),
            fs: f.starts(),
            gv: g.pieces().iter().map(|p| p.start_value()).collect(),
            gs: g.starts(),
        }
    }

    fn u_next(&self, j: usize) -> f64 {
        self.gs.get(j + 1).copied().unwrap_or(1.0)
    }

    fn cell_ok(&self, i: usize, j: usize, eps: f64) -> bool {
        vector::dist(self.fv[i], self.gv[j]) <= eps
    }

    /// Earliest position of the jump into piece `i + 1` when it is placed
    /// inside piece `j` of `g`, or `None` if no position works.
    fn right(&self, x: Pos, i: usize, j: usize, eps: f64) -> Option<Pos> {
        let v = self.fs[i + 1];
        let lower = max_pos(x, Pos::At(self.gs[j]), eps);
        let upper = Pos::At(self.u_next(j));
        if lt(lower, Pos::Below(v), eps) {
            lt(Pos::Below(v), upper, eps).then_some(Pos::Below(v))
        } else {
            (lt(lower, upper, eps) && lt_above(lower, v, eps)).then_some(lower)
        }
    }

    fn diagonal(&self, x: Pos, i: usize, j: usize, eps: f64) -> Option<Pos> {
        let u = self.gs[j + 1];
        let v = self.fs[i + 1];
        (lt(x, Pos::At(u), eps) && (u - v).abs() <= eps).then_some(Pos::At(u))
    }

    fn up(&self, x: Pos, j: usize, eps: f64) -> Option<Pos> {
        lt(x, Pos::At(self.gs[j + 1]), eps).then_some(x)
    }

    /// Runs the dynamic program; returns the step taken into every cell.
    fn solve(&self, eps: f64) -> Option<Vec<Vec<Option<(Pos, Step)>>>> {
        let p = self.fv.len();
        let q = self.gv.len();
        let mut cells: Vec<Vec<Option<(Pos, Step)>>> = vec![vec![None; q]; p];
        if !self.cell_ok(0, 0, eps) {
            return None;
        }
        cells[0][0] = Some((Pos::At(0.0), Step::Start));
        for i in 0..p {
            for j in 0..q {
                let Some((x, _)) = cells[i][j] else {
                    continue;
                };
                let mut offer = |ni: usize, nj: usize, pos: Option<Pos>, step: Step| {
                    let Some(pos) = pos else { return };
                    if !self.cell_ok(ni, nj, eps) {
                        return;
                    }
                    let better = match cells[ni][nj] {
                        None => true,
                        Some((old, _)) => lt(pos, old, eps),
                    };
                    if better {
                        cells[ni][nj] = Some((pos, step));
                    }
                };
                if i + 1 < p {
                    offer(i + 1, j, self.right(x, i, j, eps), Step::Right);
                }
                if j + 1 < q {
                    offer(i, j + 1, self.up(x, j, eps), Step::Up);
                }
                if i + 1 < p && j + 1 < q {
                    offer(i + 1, j + 1, self.diagonal(x, i, j, eps), Step::Diagonal);
                }
            }
        }
        cells[p - 1][q - 1].is_some().then_some(cells)
    }

    fn feasible(&self, eps: f64) -> bool {
        self.solve(eps).is_some()
    }

    /// Concrete jump positions for a feasible `eps`.
    ///
    /// The dynamic program tracks infima of open constraints; the `k`-th
    /// jump placed to the right of its infimum is shifted by `k τ` with `τ`
    /// small enough to keep every strict inequality along the path.
    fn positions(&self, eps: f64) -> Option<Vec<f64>> {
        let cells = self.solve(eps)?;
        let (mut i, mut j) = (self.fv.len() - 1, self.gv.len() - 1);
        let mut path = Vec::new();
        loop {
            let (pos, step) = cells[i][j].unwrap();
            match step {
                Step::Start => break,
                Step::Right => i -= 1,
                Step::Up => j -= 1,
                Step::Diagonal => {
                    i -= 1;
                    j -= 1;
                }
            }
            path.push((step, i, j, pos));
        }
        path.reverse();
        let eval = |p: Pos| match p {
            Pos::At(u) => u,
            Pos::Below(v) => v - eps,
        };
        // infimum of the current last jump and its number of shifts
        let mut last = (0.0_f64, 0usize);
        let mut shifts = 0usize;
        // (gap, shifts) pairs: need shifts * τ < gap
        let mut limits: Vec<(f64, usize)> = Vec::new();
        let mut plan: Vec<(f64, usize)> = Vec::with_capacity(self.fv.len() - 1);
        for &(step, i, j, pos) in &path {
            match step {
                Step::Right => {
                    shifts += 1;
                    let x = eval(pos);
                    let hi = self.u_next(j).min(self.fs[i + 1] + eps);
                    limits.push((hi - x, shifts));
                    last = (x, shifts);
                    plan.push(last);
                }
                Step::Diagonal => {
                    let u = self.gs[j + 1];
                    limits.push((u - last.0, last.1));
                    last = (u, 0);
                    plan.push(last);
                }
                Step::Up => limits.push((self.gs[j + 1] - last.0, last.1)),
                Step::Start => {}
            }
        }
        let mut tau = f64::INFINITY;
        for &(gap, k) in &limits {
            if k > 0 {
                if !(gap > 0.0) {
                    return None;
                }
                tau = tau.min(gap / (2.0 * k as f64));
            }
        }
        Some(plan.into_iter().map(|(x, k)| x + k as f64 * tau.min(1.0)).collect())
    }
}

/// Exact J1 distance between two step functions of the same dimension,
/// with a time change whose replay cost is within `tolerance` of it.
pub fn step_distance(
    f: &CadlagFunction,
    g: &CadlagFunction,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(f64, TimeChange)> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    if !f.is_step() || !g.is_step() {
        return Err(Error::InvalidParameter("exact J1 needs step functions".into()));
    }
    let steps = Steps::new(f, g);
    let mut cands = vec![0.0];
    for a in &steps.fv {
        for b in &steps.gv {
            cands.push(vector::dist(a, b));
        }
    }
    for &v in &steps.fs[1..] {
        for &u in &steps.gs[1..] {
            cands.push((u - v).abs());
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let mid = |k: usize| {
        if k + 1 < cands.len() {
            0.5 * (cands[k] + cands[k + 1])
        } else {
            cands[k] + 1.0
        }
    };
    let ok = |k: usize| steps.feasible(cands[k]) || steps.feasible(mid(k));
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    let mut iterations = 0;
    if !ok(hi) {
        return Err(Error::NoConvergence(0));
    }
    while lo < hi {
        iterations += 1;
        if iterations > max_iterations {
            return Err(Error::NoConvergence(iterations));
        }
        let m = lo + (hi - lo) / 2;
        if ok(m) {
            hi = m;
        } else {
            lo = m + 1;
        }
    }
    let value = cands[lo];
    // certify strictly above the infimum so that every strict constraint
    // has room for a concrete position
    let eps = (value + tolerance.max(0.0)).min(mid(lo));
    let w = steps
        .positions(eps)
        .ok_or_else(|| Error::InvalidParameter("certificate reconstruction failed".into()))?;
    let mut knots = Vec::with_capacity(w.len() + 2);
    knots.push((0.0, 0.0));
    knots.extend(w.iter().zip(&steps.fs[1..]).map(|(&wi, &vi)| (wi, vi)));
    knots.push((1.0, 1.0));
    Ok((value, TimeChange::new(knots)?))
}

/// `‖f ∘ λ - g‖ ∨ ‖λ - id‖`.
pub fn replay(f: &CadlagFunction, g: &CadlagFunction, lambda: &TimeChange) -> Result<f64> {
    Ok(lambda
        .compose(f)?
        .sup_distance(g)?
        .max(lambda.distance_to_identity()))
}
