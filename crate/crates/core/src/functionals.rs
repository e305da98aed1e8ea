//! Scalar functionals that characterize convergence: interval extrema, first
//! passage and overshoot, and the number of oscillations across a band.
//!
//! All functions expect a one-dimensional [`CadlagFunction`]; use
//! [`CadlagFunction::project`] for vector-valued paths.

use crate::cadlag::{CadlagFunction, Piece};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub t1: f64,
    pub t2: f64,
}

impl Window {
    pub const FULL: Window = Window { t1: 0.0, t2: 1.0 };

    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(0.0 <= t1 && t1 <= t2 && t2 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "window [{t1}, {t2}] must satisfy 0 <= t1 <= t2 <= 1"
            )));
        }
        Ok(Window { t1, t2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub a: f64,
    pub b: f64,
}

impl Band {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("band needs a < b, got [{a}, {b}]")));
        }
        Ok(Band { a, b })
    }
}

fn require_scalar(f: &CadlagFunction) -> Result<()> {
    if f.dim() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(1, f.dim()))
    }
}

/// `f(t1)` before `t1`, `f` on `[t1, t2)` and `f(t2-)` from `t2` on.
///
/// The value `f(t2)` at the single point `t2` is replaced by `f(t2-)` so the
/// result stays right continuous; no functional below can see the
/// difference except at levels hit only at that instant.
pub fn clamp_extend(f: &CadlagFunction, w: Window) -> Result<CadlagFunction> {
    require_scalar(f)?;
    let Window { t1, t2 } = w;
    let mut starts = Vec::new();
    let mut pieces = Vec::new();
    if t1 > 0.0 {
        starts.push(0.0);
        pieces.push(Piece::Constant(f.value_unchecked(t1)));
    }
    if t2 > t1 {
        let first = f.piece_index(t1);
        let last = f.left_piece_index(t2);
        for i in first..=last {
            let (s, e) = f.piece_interval(i);
            let a = s.max(t1);
            let b = e.min(t2);
            let p = &f.pieces()[i];
            starts.push(a);
            pieces.push(match p {
                Piece::Constant(v) => Piece::Constant(v.clone()),
                Piece::Linear(..) => Piece::Linear(p.value_at(s, e, a), p.value_at(s, e, b)),
            });
        }
    }
    if t2 < 1.0 {
        let tail = if t2 > 0.0 {
            f.left_limit_unchecked(t2)
        } else {
            f.value_unchecked(0.0)
        };
        if starts.last().is_none_or(|&s| s < t2) {
            starts.push(t2);
            pieces.push(Piece::Constant(tail));
        }
    }
    if starts.is_empty() {
        return CadlagFunction::constant(f.value_unchecked(t1));
    }
    CadlagFunction::new(starts, pieces)
}

/// `inf { t : f(t) >= a }` with `inf ∅ = 1`.
pub fn first_passage(f: &CadlagFunction, a: f64) -> Result<f64> {
    require_scalar(f)?;
    let last = f.num_pieces() - 1;
    for (i, p) in f.pieces().iter().enumerate() {
        let (s, e) = f.piece_interval(i);
        let (u, v) = (p.start_value()[0], p.end_value()[0]);
        if u >= a {
            return Ok(s);
        }
        if v > a || (i == last && v >= a) {
            let t = s + (a - u) / (v - u) * (e - s);
            let t = t.clamp(s, e);
            if t < e || i == last {
                return Ok(t.min(1.0));
            }
        }
    }
    Ok(1.0)
}

/// First overshoot of the clamp extension over level `a`: `f~(τ) - a` when
/// the level is reached before `1`, otherwise `-1`.
pub fn overshoot(f: &CadlagFunction, w: Window, a: f64) -> Result<f64> {
    let g = clamp_extend(f, w)?;
    let tau = first_passage(&g, a)?;
    if tau < 1.0 {
        Ok((g.value_unchecked(tau)[0] - a).max(0.0))
    } else {
        Ok(-1.0)
    }
}

/// Largest `k` such that there are times `t^(0) < ... < t^(k)` in the window
/// with `f(t^(0)) <= a`, `f(t^(1)) >= b`, `f(t^(2)) <= a`, and so on.
///
/// Computed by a greedy scan that takes the earliest time satisfying the
/// current requirement; each piece is monotone, so only its start value and
/// its end value (attained only on the last piece) need to be examined.
pub fn oscillation_count(f: &CadlagFunction, w: Window, band: Band) -> Result<usize> {
    let g = clamp_extend(f, w)?;
    let last = g.num_pieces() - 1;
    let mut hits = 0usize;
    let mut want_low = true;
    for (i, p) in g.pieces().iter().enumerate() {
        let start = p.start_value()[0];
        let end = p.end_value()[0];
        let end_attained = i == last || p.is_constant();
        let meets = |v: f64, attained: bool, low: bool| {
            if low {
                v < band.a || (attained && v <= band.a)
            } else {
                v > band.b || (attained && v >= band.b)
            }
        };
        if meets(start, true, want_low) {
            hits += 1;
            want_low = !want_low;
        }
        if meets(end, end_attained, want_low) {
            hits += 1;
            want_low = !want_low;
        }
    }
    Ok(hits.saturating_sub(1))
}

/// `(inf, sup)` of `f` over `[t1, t2]`, including values approached as left
/// limits inside the window.
pub fn interval_extrema(f: &CadlagFunction, w: Window) -> Result<(f64, f64)> {
    require_scalar(f)?;
    let first = f.piece_index(w.t1);
    let last = f.piece_index(w.t2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in first..=last {
        let (s, e) = f.piece_interval(i);
        let p = &f.pieces()[i];
        let a = p.value_at(s, e, s.max(w.t1))[0];
        let b = p.value_at(s, e, e.min(w.t2))[0];
        lo = lo.min(a).min(b);
        hi = hi.max(a).max(b);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> CadlagFunction {
        CadlagFunction::indicator(0.5).unwrap()
    }

    #[test]
    fn clamp_examples() {
        let f = half();
        assert_eq!(clamp_extend(&f, Window::FULL).unwrap(), f);
        assert_eq!(
            clamp_extend(&f, Window::new(0.0, 0.25).unwrap()).unwrap(),
            CadlagFunction::constant(vec![0.0]).unwrap()
        );
        assert_eq!(clamp_extend(&f, Window::new(0.25, 0.75).unwrap()).unwrap(), f);
        let lin = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        let c = clamp_extend(&lin, Window::new(0.25, 0.5).unwrap()).unwrap();
        assert_eq!(c.evaluate(0.1).unwrap(), vec![0.25]);
        assert_eq!(c.evaluate(0.375).unwrap(), vec![0.375]);
        assert_eq!(c.evaluate(0.9).unwrap(), vec![0.5]);
    }

    #[test]
    fn passage_and_overshoot() {
        let f = half();
        assert_eq!(first_passage(&f, 0.5).unwrap(), 0.5);
        assert_eq!(first_passage(&f, 2.0).unwrap(), 1.0);
        assert_eq!(first_passage(&f, -1.0).unwrap(), 0.0);
        let lin = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        assert!((first_passage(&lin, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(overshoot(&f, Window::FULL, 0.5).unwrap(), 0.5);
        assert_eq!(overshoot(&f, Window::FULL, 2.0).unwrap(), -1.0);
        let g = CadlagFunction::step_1d(&[0.0, 0.5, 0.75], &[0.0, 0.5, 1.0]).unwrap();
        assert!((overshoot(&g, Window::FULL, 0.6).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(overshoot(&lin, Window::FULL, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn counts() {
        let band = Band::new(0.25, 0.75).unwrap();
        assert_eq!(oscillation_count(&half(), Window::FULL, band).unwrap(), 1);
        let starts: Vec<f64> = (0..8).map(|k| k as f64 / 8.0).collect();
        let f = CadlagFunction::step_1d(&starts, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!(oscillation_count(&f, Window::FULL, band).unwrap(), 3);
        let c = CadlagFunction::constant(vec![0.5]).unwrap();
        assert_eq!(oscillation_count(&c, Window::FULL, band).unwrap(), 0);
        let starts_high = CadlagFunction::step_1d(&[0.0, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(oscillation_count(&starts_high, Window::FULL, band).unwrap(), 0);
        let zigzag = CadlagFunction::new(
            vec![0.0, 0.5],
            vec![
                Piece::Linear(vec![0.0], vec![1.0]),
                Piece::Linear(vec![1.0], vec![0.0]),
            ],
        )
        .unwrap();
        assert_eq!(oscillation_count(&zigzag, Window::FULL, band).unwrap(), 2);
        assert!(Band::new(1.0, 1.0).is_err());
    }

    #[test]
    fn extrema() {
        assert_eq!(interval_extrema(&half(), Window::FULL).unwrap(), (0.0, 1.0));
        let lin = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
        let (lo, hi) = interval_extrema(&lin, Window::new(0.2, 0.4).unwrap()).unwrap();
        assert!((lo - 0.2).abs() < 1e-15 && (hi - 0.4).abs() < 1e-15);
        let starts: Vec<f64> = (0..8).map(|k| k as f64 / 8.0).collect();
        let f = CadlagFunction::step_1d(&starts, &[0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(interval_extrema(&f, Window::new(0.4, 0.9).unwrap()).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn vector_input_rejected() {
        let f = CadlagFunction::constant(vec![0.0, 1.0]).unwrap();
        assert!(matches!(first_passage(&f, 0.0), Err(Error::DimensionMismatch(1, 2))));
    }
}
