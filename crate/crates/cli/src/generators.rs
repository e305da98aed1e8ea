//! Random step functions for sweeps.
//!
//! Jump times lie on a dyadic grid and values are multiples of 1/4, so every
//! gauge and distance between them is computed without rounding.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use skorokhod::CadlagFunction;

const TIME_GRID: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Scalar step function with uniformly placed jumps.
    Random,
    /// Scalar function with a unit jump and a half jump close to it.
    Adversarial,
    /// Planar random walk with unit-grid increments.
    Walk2d,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::Random, Generator::Adversarial, Generator::Walk2d];

    pub fn as_str(self) -> &'static str {
        match self {
            Generator::Random => "random",
            Generator::Adversarial => "adversarial",
            Generator::Walk2d => "walk-2d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Generator::Walk2d => 2,
            _ => 1,
        }
    }

    fn index(self) -> u64 {
        Generator::ALL.iter().position(|&g| g == self).unwrap() as u64
    }

    /// Function number `i`; depends only on `(seed, generator, i)`.
    pub fn sample(self, seed: u64, i: u64, max_jumps: usize, delta: f64) -> CadlagFunction {
        let mut rng = stream(seed, (self.index() << 40) | i);
        match self {
            Generator::Random => random_step(&mut rng, 1, max_jumps),
            Generator::Adversarial => adversarial(&mut rng, max_jumps, delta),
            Generator::Walk2d => walk(&mut rng, 2, max_jumps),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Generator::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| format!("unknown generator `{s}`, expected random, adversarial or walk-2d"))
    }
}

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn quarter<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-8i32..=8) as f64 * 0.25
}

fn grid_times<R: Rng>(rng: &mut R, count: usize) -> Vec<f64> {
    let mut ticks: Vec<u32> = (0..count).map(|_| rng.random_range(1..TIME_GRID)).collect();
    ticks.sort_unstable();
    ticks.dedup();
    ticks.into_iter().map(|t| t as f64 / TIME_GRID as f64).collect()
}

/// Step function with at most `max_jumps` jumps and independent values.
pub fn random_step<R: Rng>(rng: &mut R, dim: usize, max_jumps: usize) -> CadlagFunction {
    let k = rng.random_range(0..=max_jumps);
    let mut starts = vec![0.0];
    starts.extend(grid_times(rng, k));
    let values = starts.iter().map(|_| (0..dim).map(|_| quarter(rng)).collect()).collect();
    CadlagFunction::step(starts, values).expect("grid times are increasing")
}

/// Random walk with increments of `±1/4` or `0` per coordinate at each jump.
pub fn walk<R: Rng>(rng: &mut R, dim: usize, max_jumps: usize) -> CadlagFunction {
    let k = rng.random_range(0..=max_jumps);
    let mut starts = vec![0.0];
    starts.extend(grid_times(rng, k));
    let mut x = vec![0.0; dim];
    let mut values = Vec::with_capacity(starts.len());
    for _ in &starts {
        values.push(x.clone());
        for c in &mut x {
            *c += rng.random_range(-1i32..=1) as f64 * 0.25;
        }
    }
    CadlagFunction::step(starts, values).expect("grid times are increasing")
}

/// A jump of size one and a jump of size one half, closer than `δ/2`, in
/// either order and either direction, plus a few unrelated jumps.
pub fn adversarial<R: Rng>(rng: &mut R, max_jumps: usize, delta: f64) -> CadlagFunction {
    let spread = ((delta / 2.0) * TIME_GRID as f64).floor().max(1.0) as u32;
    let gap = rng.random_range(1..=spread);
    let first = rng.random_range(1..TIME_GRID - gap);
    let (full, half) = if rng.random_bool(0.5) {
        (first, first + gap)
    } else {
        (first + gap, first)
    };
    let full_size = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let half_size = if rng.random_bool(0.5) { 0.5 } else { -0.5 };
    let extra = rng.random_range(0..=max_jumps.saturating_sub(2));
    let mut jumps: Vec<(u32, f64)> = vec![(full, full_size), (half, half_size)];
    for _ in 0..extra {
        jumps.push((rng.random_range(1..TIME_GRID), quarter(rng)));
    }
    jumps.sort_by_key(|j| j.0);
    jumps.dedup_by_key(|j| j.0);
    let mut starts = vec![0.0];
    let mut level = quarter(rng);
    let mut values = vec![vec![level]];
    for (t, size) in jumps {
        level += size;
        starts.push(t as f64 / TIME_GRID as f64);
        values.push(vec![level]);
    }
    CadlagFunction::step(starts, values).expect("grid times are increasing")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible() {
        for g in Generator::ALL {
            let a = g.sample(5, 17, 20, 0.1);
            assert_eq!(a, g.sample(5, 17, 20, 0.1));
            assert_eq!(a.dim(), g.dim());
            assert!(a.num_pieces() <= 21);
        }
        assert_ne!(Generator::Random.sample(5, 1, 20, 0.1), Generator::Random.sample(5, 2, 20, 0.1));
    }

    #[test]
    fn adversarial_jumps_are_close() {
        let mut rng = stream(1, 0);
        for _ in 0..200 {
            let f = adversarial(&mut rng, 2, 0.1);
            let jumps = f.jump_times();
            assert!(!jumps.is_empty());
            if jumps.len() == 2 {
                assert!(jumps[1] - jumps[0] <= 0.05);
            }
        }
    }

    #[test]
    fn names_parse() {
        for g in Generator::ALL {
            assert_eq!(g.as_str().parse::<Generator>().unwrap(), g);
        }
    }
}
