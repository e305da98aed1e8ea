//! Point-to-segment distances in `R^d x [0, 1]`.

use super::GraphNorm;

/// Distance from the point `(p, pt)` to the segment from `(a, at)` to
/// `(b, bt)`, together with the segment parameter of a closest point.
///
/// Under the box norm the distance along the segment is `max(g, h)` with `g`
/// the spatial and `h` the temporal part, both convex in the parameter. The
/// minimum of the maximum is attained at an endpoint, at the minimizer of
/// either part, or where the two parts cross; all candidates are evaluated.
pub fn point_segment(
    p: &[f64],
    pt: f64,
    a: &[f64],
    at: f64,
    b: &[f64],
    bt: f64,
    norm: GraphNorm,
) -> (f64, f64) {
    // w = a - p, dir = b - a
    let mut ww = 0.0;
    let mut wd = 0.0;
    let mut dd = 0.0;
    for ((pi, ai), bi) in p.iter().zip(a).zip(b) {
        let w = ai - pi;
        let d = bi - ai;
        ww += w * w;
        wd += w * d;
        dd += d * d;
    }
    let tw = at - pt;
    let td = bt - at;
    let space = |beta: f64| (ww + 2.0 * beta * wd + beta * beta * dd).max(0.0).sqrt();
    let time = |beta: f64| (tw + beta * td).abs();
    let eval = |beta: f64| match norm {
        GraphNorm::Box => space(beta).max(time(beta)),
        GraphNorm::Euclidean => {
            let s = space(beta);
            let t = time(beta);
            (s * s + t * t).sqrt()
        }
    };
    let clamp = |x: f64| if x.is_finite() { x.clamp(0.0, 1.0) } else { 0.0 };
    let mut cands = [f64::NAN; 6];
    cands[0] = 0.0;
    cands[1] = 1.0;
    match norm {
        GraphNorm::Box => {
            if dd > 0.0 {
                cands[2] = clamp(-wd / dd);
            }
            if td != 0.0 {
                cands[3] = clamp(-tw / td);
            }
            // (dd - td^2) β^2 + 2 (wd - tw td) β + (ww - tw^2) = 0
            let qa = dd - td * td;
            let qb = 2.0 * (wd - tw * td);
            let qc = ww - tw * tw;
            if qa == 0.0 {
                if qb != 0.0 {
                    cands[4] = clamp(-qc / qb);
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    // numerically stable pair of roots
                    let q = -0.5 * (qb + qb.signum() * sq);
                    if q != 0.0 {
                        cands[4] = clamp(q / qa);
                        cands[5] = clamp(qc / q);
                    } else {
                        cands[4] = 0.0;
                    }
                }
            }
        }
        GraphNorm::Euclidean => {
            let denom = dd + td * td;
            if denom > 0.0 {
                cands[2] = clamp(-(wd + tw * td) / denom);
            }
        }
    }
    let mut best = (f64::INFINITY, 0.0);
    for &beta in cands.iter().filter(|c| !c.is_nan()) {
        let v = eval(beta);
        if v < best.0 {
            best = (v, beta);
        }
    }
    best
}

/// Parameters `β ∈ [0, 1]` with `‖(p, pt) - (a, at) - β ((b, bt) - (a, at))‖
/// <= eps`, an interval since norm balls are convex.
pub fn free_interval(
    p: &[f64],
    pt: f64,
    a: &[f64],
    at: f64,
    b: &[f64],
    bt: f64,
    eps: f64,
    norm: GraphNorm,
) -> Option<(f64, f64)> {
    let mut ww = 0.0;
    let mut wd = 0.0;
    let mut dd = 0.0;
    for ((pi, ai), bi) in p.iter().zip(a).zip(b) {
        let w = ai - pi;
        let d = bi - ai;
        ww += w * w;
        wd += w * d;
        dd += d * d;
    }
    let tw = at - pt;
    let td = bt - at;
    // β² dd + 2 β wd + ww <= r²
    let quadratic = |dd: f64, wd: f64, ww: f64, r: f64| -> Option<(f64, f64)> {
        let c = ww - r * r;
        if dd == 0.0 {
            return if c <= 0.0 { Some((0.0, 1.0)) } else { None };
        }
        let disc = wd * wd - dd * c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        Some(((-wd - sq) / dd, (-wd + sq) / dd))
    };
    let (mut lo, mut hi) = match norm {
        GraphNorm::Box => {
            let (slo, shi) = quadratic(dd, wd, ww, eps)?;
            let (tlo, thi) = if td == 0.0 {
                if tw.abs() > eps {
                    return None;
                }
                (0.0, 1.0)
            } else {
                let x = (-tw - eps) / td;
                let y = (-tw + eps) / td;
                (x.min(y), x.max(y))
            };
            (slo.max(tlo), shi.min(thi))
        }
        GraphNorm::Euclidean => quadratic(dd + td * td, wd + tw * td, ww + tw * tw, eps)?,
    };
    lo = lo.max(0.0);
    hi = hi.min(1.0);
    (lo <= hi).then_some((lo, hi))
}

pub fn point_distance(p: &[f64], pt: f64, q: &[f64], qt: f64, norm: GraphNorm) -> f64 {
    let s = crate::vector::dist(p, q);
    let t = (pt - qt).abs();
    match norm {
        GraphNorm::Box => s.max(t),
        GraphNorm::Euclidean => (s * s + t * t).sqrt(),
    }
}
