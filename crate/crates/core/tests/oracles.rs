use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skorokhod::embeddings::{clock_discrepancy, embed, embed_markov, ChooserPolicy, PoissonPath, SequenceData};
use skorokhod::markov::{
    estimate_extra_steps, estimate_global_bound, estimate_local_continuity, simulate_chain, MarkovKernel,
};
use skorokhod::metrics::{d_j1, d_j2, d_m1_upper, d_m2, metric_oracle, replay};
use skorokhod::oscillation::{grid_oracle, oscillation, T2Convention};
use skorokhod::{CadlagFunction, Topology};

fn random_step(rng: &mut ChaCha8Rng, max_jumps: usize, grid: u32) -> CadlagFunction {
    let k = rng.random_range(0..=max_jumps);
    let mut times: Vec<u32> = (0..k).map(|_| rng.random_range(1..grid)).collect();
    times.sort();
    times.dedup();
    let mut starts = vec![0.0];
    starts.extend(times.iter().map(|&t| t as f64 / grid as f64));
    let values: Vec<f64> = starts.iter().map(|_| rng.random_range(-4..=4) as f64 * 0.25).collect();
    CadlagFunction::step_1d(&starts, &values).unwrap()
}

/// `P(|S_k| > m)` for a simple random walk, by convolution.
fn srw_tail(k: usize, m: f64) -> f64 {
    let mut p = vec![1.0f64];
    for _ in 0..k {
        let mut q = vec![0.0; p.len() + 1];
        for (i, &x) in p.iter().enumerate() {
            q[i] += 0.5 * x;
            q[i + 1] += 0.5 * x;
        }
        p = q;
    }
    p.iter()
        .enumerate()
        .filter(|&(i, _)| (2.0 * i as f64 - k as f64).abs() > m)
        .map(|(_, x)| x)
        .sum()
}

/// `P(max_{j <= k} |S_j| > r)` by dynamic programming with absorption.
fn srw_max_tail(k: usize, r: i64) -> f64 {
    let width = (2 * r + 1) as usize;
    let mut p = vec![0.0f64; width];
    p[r as usize] = 1.0;
    for _ in 0..k {
        let mut q = vec![0.0; width];
        for (i, &x) in p.iter().enumerate() {
            if i > 0 {
                q[i - 1] += 0.5 * x;
            }
            if i + 1 < width {
                q[i + 1] += 0.5 * x;
            }
        }
        p = q;
    }
    1.0 - p.iter().sum::<f64>()
}

fn poisson_pmf(lambda: f64, k: usize) -> f64 {
    let mut log = -lambda + k as f64 * lambda.ln();
    for i in 1..=k {
        log -= (i as f64).ln();
    }
    log.exp()
}

#[test]
fn j1_matches_brute_force_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let f = random_step(&mut rng, 3, 50);
        let g = random_step(&mut rng, 3, 50);
        let exact = d_j1(&f, &g, 1e-9).unwrap().value;
        let brute = metric_oracle(Topology::J1, &f, &g, 200).unwrap();
        assert!(exact <= brute + 1e-12, "{exact} > {brute}");
        assert!(brute - exact <= 2.0 / 200.0, "{exact} vs {brute}");
    }
}

#[test]
fn hausdorff_matches_dense_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let f = random_step(&mut rng, 4, 64);
        let g = random_step(&mut rng, 4, 64);
        for (t, exact) in [
            (Topology::J2, d_j2(&f, &g).unwrap().value),
            (Topology::M2, d_m2(&f, &g).unwrap().value),
        ] {
            let sampled = metric_oracle(t, &f, &g, 400).unwrap();
            assert!((exact - sampled).abs() <= 1.0 / 400.0 + 1e-12, "{t}: {exact} vs {sampled}");
        }
    }
}

#[test]
fn m1_below_sampled_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let f = random_step(&mut rng, 4, 64);
        let g = random_step(&mut rng, 4, 64);
        let r = d_m1_upper(&f, &g, 8).unwrap();
        let sampled = metric_oracle(Topology::M1, &f, &g, 400).unwrap();
        assert!(r.lower <= sampled + 1e-12, "{} > {sampled}", r.lower);
        assert!(r.value - r.lower <= 1e-8);
        assert!((replay(&r, &f, &g).unwrap() - r.value).abs() <= 1e-8);
        // the sampled coupling converges from above
        assert!(sampled - r.value <= 0.05, "{} vs {sampled}", r.value);
    }
}

#[test]
fn oscillation_matches_grid_search() {
    // with jumps on the 1/64 grid and deltas on the 1/16 grid, a grid of
    // 1/256 contains maximizing triples
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let f = random_step(&mut rng, 6, 64);
        for delta in [0.0625, 0.25, 0.5] {
            for t in Topology::ALL {
                let exact = oscillation(t, delta, &f).unwrap().value;
                let grid = grid_oracle(t, delta, &f, 256, T2Convention::Ordered).unwrap();
                assert!(grid <= exact + 1e-12, "{t} {delta}: grid {grid} > {exact}");
                assert!(exact - grid <= 1e-12, "{t} {delta}: {exact} vs grid {grid}");
            }
        }
    }
}

#[test]
fn srw_local_continuity_matches_convolution() {
    let n = 256;
    let k = MarkovKernel::parse("srw", n).unwrap();
    let eps = 0.25;
    let h = 0.1;
    let e = estimate_local_continuity(&k, eps, 1.0, h, &[0.0], 4000, 5).unwrap();
    for steps in [5usize, 12, 25] {
        let cell = &e.cells[steps];
        // |S_k| / 16 > 0.25
        let exact = srw_tail(steps, eps * (n as f64).sqrt());
        assert!(cell.probability.contains(exact), "k = {steps}: {:?} vs {exact}", cell.probability);
    }
}

#[test]
fn srw_global_bound_matches_barrier_dp() {
    let n = 64;
    let k = MarkovKernel::parse("srw", n).unwrap();
    let e = estimate_global_bound(&k, 1, &[0.5, 1.0, 3.0], &[0.0], 4000, 6).unwrap();
    for cell in &e.cells {
        let r = (cell.coordinate * 8.0).floor() as i64;
        let exact = srw_max_tail(n, r);
        assert!(cell.probability.contains(exact), "R = {}: {:?} vs {exact}", cell.coordinate, cell.probability);
    }
    assert!(e.cells[2].probability.estimate < 0.01);
    // reflection: P(max S > 24) = 2 P(S_64 >= 26) = P(|S_64| > 24.5), at
    // most doubled for the two-sided maximum
    let one_sided = srw_tail(n, 24.5);
    assert!(srw_max_tail(n, 24) <= 2.0 * one_sided + 1e-15);
}

#[test]
fn unit_jumps_extra_steps_match_poisson() {
    let n = 16;
    let k = MarkovKernel::parse(&format!("drift({n})"), n).unwrap();
    let e = estimate_extra_steps(&k, 0.5, &[0.0], 4000, 7).unwrap();
    // the sup exceeds 1/2 iff |n - 1 - N_{n-}| >= 2
    let near: f64 = (n - 2..=n).map(|j| poisson_pmf(n as f64, j)).sum();
    assert!(e.sup.contains(1.0 - near), "{:?} vs {}", e.sup, 1.0 - near);
}

#[test]
fn clock_discrepancy_against_dense_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [4usize, 16, 64] {
        let clock = PoissonPath::sample(&mut rng, n as f64);
        let exact = clock_discrepancy(&clock, n);
        let mut probe: Vec<f64> = (0..20_000).map(|i| i as f64 / 20_000.0).collect();
        for &t in clock.jumps() {
            let s = t / n as f64;
            if s < 1.0 {
                probe.push(s);
                probe.push(s - 1e-12);
            }
        }
        probe.push(1.0 - 1e-12);
        let brute = probe
            .iter()
            .filter(|&&s| (0.0..1.0).contains(&s))
            .map(|&s| (s - clock.count(n as f64 * s) as f64 / n as f64).abs())
            .fold(0.0, f64::max);
        assert!((exact - brute).abs() < 1e-9, "n = {n}: {exact} vs {brute}");
    }
}

#[test]
fn markov_embedding_reads_the_clock() {
    let n = 32;
    let k = MarkovKernel::parse("srw", n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let clock = PoissonPath::sample(&mut rng, n as f64);
    let path = simulate_chain(&k, &[0.0], clock.jumps().len() + 1, 3).unwrap();
    let z = embed_markov(&path, &clock, n).unwrap();
    for i in 0..1000 {
        let t = i as f64 / 1000.0;
        let expect = &path[clock.count(n as f64 * t)];
        assert_eq!(&z.evaluate(t).unwrap(), expect, "t = {t}");
    }
}

#[test]
fn drift_chain_approaches_the_identity() {
    let line = CadlagFunction::linear_1d(0.0, 1.0).unwrap();
    for n in [4usize, 16, 64] {
        let k = MarkovKernel::parse("drift(1)", n).unwrap();
        let path = simulate_chain(&k, &[0.0], n, 0).unwrap();
        let seq = SequenceData::new(n, path).unwrap();
        let x = embed(&seq, Topology::J1, &ChooserPolicy::midpoint_switch()).unwrap();
        let r = d_j1(&x, &line, 1e-9).unwrap();
        // the step function stays within 1/n of the line pointwise
        assert!(r.lower <= 1.0 / n as f64 + 1e-12, "n = {n}: {}", r.lower);
        assert!(x.sup_distance(&line).unwrap() <= 1.0 / n as f64 + 1e-12);
    }
}
