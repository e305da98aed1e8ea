//! Brute-force reference values for small instances.
//!
//! These are deliberately naive: J1 searches jump placements on a grid, M1
//! couples arclength samples, J2 and M2 compare dense point samples. They
//! exist to cross-check the exact algorithms in tests.

use super::geometry::point_distance;
use super::m1::discrete_frechet;
use super::GraphNorm;
use crate::cadlag::{CadlagFunction, GraphPoint, PolygonalGraph};
use crate::error::{Error, Result};
use crate::{vector, Topology};

pub const MAX_PIECES: usize = 8;

pub fn metric_oracle(
    topology: Topology,
    f: &CadlagFunction,
    g: &CadlagFunction,
    resolution: usize,
) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    if f.num_pieces() > MAX_PIECES || g.num_pieces() > MAX_PIECES {
        return Err(Error::TooLarge(format!(
            "{} and {} pieces, at most {MAX_PIECES} supported",
            f.num_pieces(),
            g.num_pieces()
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    match topology {
        Topology::J1 => j1_search(f, g, resolution),
        Topology::M1 => Ok(m1_samples(f, g, resolution)),
        Topology::J2 => Ok(sampled_hausdorff(
            &f.incomplete_graph(),
            &g.incomplete_graph(),
            resolution,
        )),
        Topology::M2 => Ok(sampled_hausdorff(
            &f.completed_graph(),
            &g.completed_graph(),
            resolution,
        )),
    }
}

fn j1_search(f: &CadlagFunction, g: &CadlagFunction, resolution: usize) -> Result<f64> {
    if !f.is_step() || !g.is_step() {
        return Err(Error::InvalidParameter("J1 search needs step functions".into()));
    }
    let v = &f.starts()[1..];
    let u = &g.starts()[1..];
    let mut anchors: Vec<f64> = [0.0, 1.0].iter().chain(u).chain(v).copied().collect();
    anchors.sort_by(f64::total_cmp);
    anchors.dedup();
    let mut grid: Vec<f64> = (1..resolution).map(|k| k as f64 / resolution as f64).collect();
    grid.extend(&anchors);
    grid.extend(anchors.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    grid.retain(|&t| t > 0.0 && t < 1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let fv: Vec<&[f64]> = f.pieces().iter().map(|p| p.start_value()).collect();
    let gv: Vec<&[f64]> = g.pieces().iter().map(|p| p.start_value()).collect();
    // value error of f's piece `i` held on [a, b)
    let span_cost = |i: usize, a: f64, b: f64, closed: bool| -> f64 {
        let first = g.piece_index(a);
        let last = if closed { g.num_pieces() - 1 } else { g.left_piece_index(b) };
        (first..=last)
            .map(|j| vector::dist(fv[i], gv[j]))
            .fold(0.0, f64::max)
    };

    struct Search<'s> {
        grid: &'s [f64],
        v: &'s [f64],
        best: f64,
    }
    fn dfs(
        s: &mut Search,
        cost: &dyn Fn(usize, f64, f64, bool) -> f64,
        i: usize,
        start: usize,
        prev: f64,
        partial: f64,
    ) {
        if partial >= s.best {
            return;
        }
        if i == s.v.len() {
            let total = partial.max(cost(i, prev, 1.0, true));
            if total < s.best {
                s.best = total;
            }
            return;
        }
        for k in start..s.grid.len() {
            let w = s.grid[k];
            let shift = (w - s.v[i]).abs();
            if w - s.v[i] >= s.best {
                break;
            }
            if shift >= s.best {
                continue;
            }
            let c = partial.max(shift).max(cost(i, prev, w, false));
            dfs(s, cost, i + 1, k + 1, w, c);
        }
    }
    let mut search = Search {
        grid: &grid,
        v,
        best: f64::INFINITY,
    };
    dfs(&mut search, &span_cost, 0, 0, 0.0, 0.0);
    Ok(search.best)
}

fn edge_samples(a: &GraphPoint, b: &GraphPoint, per_unit: usize, out: &mut Vec<GraphPoint>) {
    let len = point_distance(&a.value, a.time, &b.value, b.time, GraphNorm::Box);
    let k = ((len * per_unit as f64).ceil() as usize).max(1);
    for s in 0..=k {
        let alpha = s as f64 / k as f64;
        out.push(GraphPoint::new(
            vector::lerp(&a.value, &b.value, alpha),
            a.time + alpha * (b.time - a.time),
        ));
    }
}

/// Points of the graph's point set with spacing at most `1 / per_unit`.
pub fn sample_graph(g: &PolygonalGraph, per_unit: usize) -> Vec<GraphPoint> {
    let mut out = g.vertices.clone();
    for (i, j) in g.edges() {
        edge_samples(&g.vertices[i], &g.vertices[j], per_unit, &mut out);
    }
    out
}

fn sampled_hausdorff(a: &PolygonalGraph, b: &PolygonalGraph, per_unit: usize) -> f64 {
    let sa = sample_graph(a, per_unit);
    let sb = sample_graph(b, per_unit);
    let directed = |x: &[GraphPoint], y: &[GraphPoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.box_dist(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(&sa, &sb).max(directed(&sb, &sa))
}

fn m1_samples(f: &CadlagFunction, g: &CadlagFunction, per_unit: usize) -> f64 {
    let walk = |h: &CadlagFunction| {
        let gr = h.completed_graph();
        let mut out: Vec<GraphPoint> = Vec::new();
        for w in gr.vertices.windows(2) {
            let mut seg = Vec::new();
            edge_samples(&w[0], &w[1], per_unit, &mut seg);
            if !out.is_empty() {
                seg.remove(0);
            }
            out.extend(seg);
        }
        if out.is_empty() {
            out.push(gr.vertices[0].clone());
        }
        out
    };
    discrete_frechet(&walk(f), &walk(g), GraphNorm::Box).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_agree_in_every_topology() {
        let a = CadlagFunction::constant(vec![0.2]).unwrap();
        let b = CadlagFunction::constant(vec![0.9]).unwrap();
        for t in Topology::ALL {
            let v = metric_oracle(t, &a, &b, 50).unwrap();
            assert!((v - 0.7).abs() < 1e-12, "{t}: {v}");
        }
    }

    #[test]
    fn shifted_jump() {
        let f = CadlagFunction::indicator(0.5).unwrap();
        let g = CadlagFunction::indicator(0.6).unwrap();
        assert!((metric_oracle(Topology::J1, &f, &g, 100).unwrap() - 0.1).abs() < 1e-12);
        assert!((metric_oracle(Topology::M2, &f, &g, 100).unwrap() - 0.1).abs() < 0.01);
    }

    #[test]
    fn too_large() {
        let starts: Vec<f64> = (0..9).map(|k| k as f64 / 9.0).collect();
        let values: Vec<f64> = (0..9).map(|k| (k % 2) as f64).collect();
        let f = CadlagFunction::step_1d(&starts, &values).unwrap();
        assert!(matches!(
            metric_oracle(Topology::J1, &f, &f, 10),
            Err(Error::TooLarge(_))
        ));
    }
}
