//! Small Monte Carlo summaries: binomial proportions with 99% bands, means
//! with standard errors, and empirical quantiles.

use serde::Serialize;

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    /// Normal-approximation band at 99%, widened to contain the Wilson
    /// interval so that counts near 0 or `trials` keep a nonzero width.
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let n = trials as f64;
        let p = successes as f64 / n;
        let wald = Z99 * (p * (1.0 - p) / n).sqrt();
        let z2 = Z99 * Z99;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let spread = Z99 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        Proportion {
            successes,
            trials,
            estimate: p,
            lower: (p - wald).min(centre - spread).max(0.0),
            upper: (p + wald).max(centre + spread).min(1.0),
        }
    }

    pub fn half_width(&self) -> f64 {
        (self.estimate - self.lower).max(self.upper - self.estimate)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn mean_estimate(xs: &[f64]) -> MeanEstimate {
    let n = xs.len();
    if n == 0 {
        return MeanEstimate {
            mean: f64::NAN,
            std_error: f64::NAN,
            samples: 0,
        };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    MeanEstimate {
        mean,
        std_error: (var / n as f64).sqrt(),
        samples: n,
    }
}

/// Linear-interpolation quantile of an ascending slice.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let h = q.clamp(0.0, 1.0) * (len - 1) as f64;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(len - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_has_positive_upper() {
        let p = Proportion::new(0, 1000);
        assert_eq!(p.estimate, 0.0);
        assert_eq!(p.lower, 0.0);
        // Wilson upper end for 0/1000 at z = 2.576
        let z2 = Z99 * Z99;
        let expect = z2 / 1000.0 / (1.0 + z2 / 1000.0);
        assert!((p.upper - expect).abs() < 1e-12);
    }

    #[test]
    fn band_contains_normal_interval() {
        let p = Proportion::new(500, 1000);
        let wald = Z99 * (0.25f64 / 1000.0).sqrt();
        assert!(p.lower <= 0.5 - wald + 1e-15 && p.upper >= 0.5 + wald - 1e-15);
        assert!(p.contains(0.5));
    }

    #[test]
    fn mean_and_quantiles() {
        let m = mean_estimate(&[1.0, 2.0, 3.0]);
        assert_eq!(m.mean, 2.0);
        assert!((m.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let s = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile(&s, 0.5), 1.5);
        assert_eq!(quantile(&s, 1.0), 3.0);
    }
}
