//! Time-homogeneous Markov chains and Monte Carlo estimators for the
//! conditions that transfer convergence between embeddings.
//!
//! Randomness: a root seed `s` seeds a ChaCha8 generator; replica `r` draws
//! its chain from stream `2r` and its Poisson clock from stream `2r + 1`.
//! Replicas are therefore independent of each other and of the order in
//! which they run. [`simulate_chain`] uses stream 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cadlag::CadlagFunction;
use crate::embeddings::{self, ChooserPolicy, PoissonPath, SequenceData};
use crate::error::{Error, Result};
use crate::metrics;
use crate::stats::{self, Proportion};
use crate::{vector, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelKind {
    /// Never moves.
    Identity { dim: usize },
    /// `x -> x + c / n`.
    Drift { c: f64 },
    /// `x -> x ± scale / √n` with probability 1/2 each.
    Srw { scale: f64 },
    /// Stays with probability 1/2, otherwise a `srw` step.
    Lazy { scale: f64 },
    /// Discretization with time step `1/n` of the deterministic process
    /// that holds on `[0, 1)`, drifts at unit speed elsewhere and jumps by
    /// `+1` when it reaches 0 from below.
    FixedJump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovKernel {
    pub kind: KernelKind,
    pub n: usize,
}

pub const KERNEL_NAMES: [&str; 5] = ["identity", "drift", "srw", "lazy", "fixed-jump"];

fn parse_arg(name: &str) -> Result<(&str, Option<f64>)> {
    let Some(open) = name.find('(') else {
        return Ok((name, None));
    };
    let Some(inner) = name[open + 1..].strip_suffix(')') else {
        return Err(Error::UnknownKernel(name.into()));
    };
    let arg = inner
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("kernel argument `{inner}`")))?;
    Ok((&name[..open], Some(arg)))
}

impl MarkovKernel {
    /// Parses `identity`, `identity(d)`, `drift(c)`, `srw(scale)`,
    /// `lazy(scale)` or `fixed-jump` at grid size `n`.
    pub fn parse(name: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let (base, arg) = parse_arg(name.trim())?;
        let positive = |v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::InvalidParameter(format!("kernel parameter {v} must be positive")))
            }
        };
        let kind = match base {
            "identity" => {
                let d = arg.unwrap_or(1.0);
                if d < 1.0 || d.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!("dimension {d}")));
                }
                KernelKind::Identity { dim: d as usize }
            }
            "drift" => {
                let c = arg.unwrap_or(1.0);
                if !c.is_finite() {
                    return Err(Error::InvalidParameter("drift must be finite".into()));
                }
                KernelKind::Drift { c }
            }
            "srw" => KernelKind::Srw {
                scale: positive(arg.unwrap_or(1.0))?,
            },
            "lazy" => KernelKind::Lazy {
                scale: positive(arg.unwrap_or(1.0))?,
            },
            "fixed-jump" if arg.is_none() => KernelKind::FixedJump,
            _ => return Err(Error::UnknownKernel(name.into())),
        };
        Ok(MarkovKernel { kind, n })
    }

    pub fn name(&self) -> String {
        match self.kind {
            KernelKind::Identity { dim } => format!("identity({dim})"),
            KernelKind::Drift { c } => format!("drift({c})"),
            KernelKind::Srw { scale } => format!("srw({scale})"),
            KernelKind::Lazy { scale } => format!("lazy({scale})"),
            KernelKind::FixedJump => "fixed-jump".into(),
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            KernelKind::Identity { dim } => dim,
            _ => 1,
        }
    }

    /// States at which the kernel is known to misbehave.
    pub fn critical_points(&self) -> Vec<f64> {
        match self.kind {
            KernelKind::FixedJump => vec![-0.5 / self.n as f64],
            _ => Vec::new(),
        }
    }

    fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn step<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), x.len()));
        }
        let sqrt_h = self.h().sqrt();
        let next = match self.kind {
            KernelKind::Identity { .. } => x.to_vec(),
            KernelKind::Drift { c } => vec![x[0] + c * self.h()],
            KernelKind::Srw { scale } => {
                let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
                vec![x[0] + s * scale * sqrt_h]
            }
            KernelKind::Lazy { scale } => {
                let u: u32 = rng.random_range(0..4);
                let s = [0.0, 0.0, 1.0, -1.0][u as usize];
                vec![x[0] + s * scale * sqrt_h]
            }
            KernelKind::FixedJump => {
                let x0 = x[0];
                let h = self.h();
                if (0.0..1.0).contains(&x0) {
                    vec![x0]
                } else if x0 < 0.0 && x0 + h >= 0.0 {
                    vec![x0 + h + 1.0]
                } else {
                    vec![x0 + h]
                }
            }
        };
        if !vector::all_finite(&next) {
            return Err(Error::Sampler {
                kernel: self.name(),
                reason: format!("non-finite state from {x:?}"),
            });
        }
        Ok(next)
    }

    /// Appends `steps` transitions from `start` to `out`.
    fn run<R: Rng + ?Sized>(&self, start: &[f64], steps: usize, rng: &mut R, out: &mut Vec<Vec<f64>>) -> Result<()> {
        out.clear();
        out.push(start.to_vec());
        for _ in 0..steps {
            let next = self.step(out.last().unwrap(), rng)?;
            out.push(next);
        }
        Ok(())
    }
}

/// The built-in kernels at grid size `n` with their default parameters.
pub fn builtin_kernels(n: usize) -> Vec<MarkovKernel> {
    KERNEL_NAMES
        .iter()
        .map(|name| MarkovKernel::parse(name, n).unwrap())
        .collect()
}

pub fn chain_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * replica);
    rng
}

pub fn clock_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * replica + 1);
    rng
}

/// Path `Y_0 = start, Y_1, ..., Y_steps`.
pub fn simulate_chain(kernel: &MarkovKernel, start: &[f64], steps: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(steps + 1);
    kernel.run(start, steps, &mut chain_rng(seed, 0), &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    LocalContinuity,
    GlobalBound,
    ExtraSteps,
    FixedDiscontinuity,
}

impl ConditionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::LocalContinuity => "local-continuity",
            ConditionId::GlobalBound => "global-bound",
            ConditionId::ExtraSteps => "extra-steps",
            ConditionId::FixedDiscontinuity => "fixed-discontinuity",
        }
    }
}

/// One estimated probability with the grid point it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateCell {
    /// Starting state, where the condition depends on one.
    pub x: Option<f64>,
    /// Step count, radius or similar grid coordinate.
    pub coordinate: f64,
    pub probability: Proportion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionEstimate {
    pub condition: ConditionId,
    pub kernel: String,
    pub n: usize,
    pub epsilon: Option<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub cells: Vec<EstimateCell>,
    /// Largest cell estimate, the sup over the grid.
    pub sup: Proportion,
}

impl ConditionEstimate {
    fn new(
        condition: ConditionId,
        kernel: &MarkovKernel,
        epsilon: Option<f64>,
        replicas: usize,
        seed: u64,
        cells: Vec<EstimateCell>,
    ) -> Self {
        let sup = cells
            .iter()
            .map(|c| c.probability)
            .reduce(|a, b| if b.estimate > a.estimate { b } else { a })
            .unwrap_or_else(|| Proportion::new(0, replicas.max(1) as u64));
        ConditionEstimate {
            condition,
            kernel: kernel.name(),
            n: kernel.n,
            epsilon,
            replicas,
            seed,
            cells,
            sup,
        }
    }
}

fn check_replicas(replicas: usize) -> Result<()> {
    if replicas == 0 {
        Err(Error::InvalidParameter("replicas must be positive".into()))
    } else {
        Ok(())
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

/// Uniform grid of `points` states over `[-radius, radius]` plus the
/// kernel's critical points inside the ball.
pub fn state_grid(kernel: &MarkovKernel, radius: f64, points: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.0],
        p => (0..p)
            .map(|i| -radius + 2.0 * radius * i as f64 / (p - 1) as f64)
            .collect(),
    };
    grid.extend(kernel.critical_points().into_iter().filter(|x| x.abs() < radius));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Estimates `sup_{x, k <= ⌊hn⌋} P(|Y_k - x| > ε | Y_0 = x)` over a state
/// grid. Step counts replace continuous times exactly since the step
/// embedding only changes at grid times. All grid states share the same
/// random streams.
#[allow(clippy::too_many_arguments)]
pub fn estimate_local_continuity(
    kernel: &MarkovKernel,
    epsilon: f64,
    radius: f64,
    h: f64,
    x_grid: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<ConditionEstimate> {
    check_positive("epsilon", epsilon)?;
    check_positive("R", radius)?;
    check_positive("h", h)?;
    check_replicas(replicas)?;
    if x_grid.is_empty() {
        return Err(Error::Empty("state grid"));
    }
    if let Some(x) = x_grid.iter().find(|x| x.abs() > radius) {
        return Err(Error::InvalidParameter(format!("grid state {x} outside radius {radius}")));
    }
    if kernel.dim() != 1 {
        return Err(Error::InvalidParameter("state grids are one-dimensional".into()));
    }
    let steps = (h * kernel.n as f64).floor() as usize;
    let mut cells = Vec::with_capacity(x_grid.len() * (steps + 1));
    let mut path = Vec::new();
    for &x in x_grid {
        let mut hits = vec![0u64; steps + 1];
        for r in 0..replicas {
            kernel.run(&[x], steps, &mut chain_rng(seed, r as u64), &mut path)?;
            for (k, y) in path.iter().enumerate() {
                if (y[0] - x).abs() > epsilon {
                    hits[k] += 1;
                }
            }
        }
        for (k, &c) in hits.iter().enumerate() {
            cells.push(EstimateCell {
                x: Some(x),
                coordinate: k as f64,
                probability: Proportion::new(c, replicas as u64),
            });
        }
    }
    Ok(ConditionEstimate::new(
        ConditionId::LocalContinuity,
        kernel,
        Some(epsilon),
        replicas,
        seed,
        cells,
    ))
}

/// Estimates `P(max_{k <= nm} |Y_k| > R)` for every radius, started at
/// `start`. Every radius uses the same paths, so the estimates are
/// nonincreasing in `R`.
pub fn estimate_global_bound(
    kernel: &MarkovKernel,
    m: usize,
    radii: &[f64],
    start: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<ConditionEstimate> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    check_replicas(replicas)?;
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let steps = kernel.n * m;
    let mut maxima = Vec::with_capacity(replicas);
    let mut path = Vec::new();
    for r in 0..replicas {
        kernel.run(start, steps, &mut chain_rng(seed, r as u64), &mut path)?;
        maxima.push(path.iter().map(|y| vector::norm(y)).fold(0.0, f64::max));
    }
    let cells = radii
        .iter()
        .map(|&radius| EstimateCell {
            x: None,
            coordinate: radius,
            probability: Proportion::new(
                maxima.iter().filter(|&&m| m > radius).count() as u64,
                replicas as u64,
            ),
        })
        .collect();
    Ok(ConditionEstimate::new(
        ConditionId::GlobalBound,
        kernel,
        None,
        replicas,
        seed,
        cells,
    ))
}

/// The steps a Poisson clock takes more or fewer than the grid:
/// `sup_{k < |n-1-N_{n-}|} |Y_{b+k} - Y_b|` with `b = (n-1) ∧ N_{n-}`.
pub fn extra_steps_sup(path: &[Vec<f64>], clock: &PoissonPath, n: usize) -> Result<f64> {
    let count = clock.count_before(n as f64);
    let base = (n - 1).min(count);
    let len = (n - 1).abs_diff(count);
    let needed = base + len.max(1);
    if path.len() < needed {
        return Err(Error::SequenceTooShort {
            needed,
            have: path.len(),
        });
    }
    Ok((0..len)
        .map(|k| vector::dist(&path[base + k], &path[base]))
        .fold(0.0, f64::max))
}

/// Estimates `P(sup_{k < |n-1-N_{n-}|} |Y_{b+k} - Y_b| > ε)`.
pub fn estimate_extra_steps(
    kernel: &MarkovKernel,
    epsilon: f64,
    start: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<ConditionEstimate> {
    check_positive("epsilon", epsilon)?;
    check_replicas(replicas)?;
    let n = kernel.n;
    let mut hits = 0u64;
    let mut path = Vec::new();
    for r in 0..replicas {
        let clock = PoissonPath::sample(&mut clock_rng(seed, r as u64), n as f64);
        let count = clock.count_before(n as f64);
        kernel.run(start, count.max(n - 1), &mut chain_rng(seed, r as u64), &mut path)?;
        if extra_steps_sup(&path, &clock, n)? > epsilon {
            hits += 1;
        }
    }
    let cells = vec![EstimateCell {
        x: None,
        coordinate: epsilon,
        probability: Proportion::new(hits, replicas as u64),
    }];
    Ok(ConditionEstimate::new(
        ConditionId::ExtraSteps,
        kernel,
        Some(epsilon),
        replicas,
        seed,
        cells,
    ))
}

/// `max_k P(|Y_k - Y_{k-1}| > ε)` over `k = 1..n`: the step embedding can
/// only jump at grid times, so this is the largest probability of a jump of
/// size `ε` at a fixed time.
pub fn fixed_discontinuity_frequency(
    kernel: &MarkovKernel,
    epsilon: f64,
    start: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<ConditionEstimate> {
    check_positive("epsilon", epsilon)?;
    check_replicas(replicas)?;
    let n = kernel.n;
    let mut hits = vec![0u64; n];
    let mut path = Vec::new();
    for r in 0..replicas {
        kernel.run(start, n, &mut chain_rng(seed, r as u64), &mut path)?;
        for k in 1..=n {
            if vector::dist(&path[k], &path[k - 1]) > epsilon {
                hits[k - 1] += 1;
            }
        }
    }
    let cells = hits
        .iter()
        .enumerate()
        .map(|(k, &c)| EstimateCell {
            x: None,
            coordinate: (k + 1) as f64 / n as f64,
            probability: Proportion::new(c, replicas as u64),
        })
        .collect();
    Ok(ConditionEstimate::new(
        ConditionId::FixedDiscontinuity,
        kernel,
        Some(epsilon),
        replicas,
        seed,
        cells,
    ))
}

/// What the chain embedding is compared with in a convergence probe.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// A fixed limit function, compared with the embedding of the topology.
    Function(CadlagFunction),
    /// The step embedding against the embedding of the topology.
    StepEmbedding,
    /// The step embedding against the Poisson-clock embedding.
    MarkovEmbedding,
}

impl Reference {
    pub fn label(&self) -> &'static str {
        match self {
            Reference::Function(_) => "function",
            Reference::StepEmbedding => "step-embedding",
            Reference::MarkovEmbedding => "markov-embedding",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    pub kernel: String,
    pub reference: Reference,
    pub topology: Topology,
    pub n_list: Vec<usize>,
    pub epsilon: f64,
    pub start: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    /// Largest exceedance probability accepted at the last `n`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub mean: f64,
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    pub max: f64,
    pub exceedance: Proportion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub kernel: String,
    pub reference: String,
    pub topology: Topology,
    pub epsilon: f64,
    pub replicas: usize,
    pub seed: u64,
    pub rows: Vec<ProbeRow>,
    /// Exceedance at the largest `n` is at most the threshold and no row's
    /// lower band exceeds an earlier row's upper band.
    pub pass: bool,
}

fn probe_distance(
    spec: &ProbeSpec,
    path: &[Vec<f64>],
    n: usize,
    clock: Option<&PoissonPath>,
) -> Result<f64> {
    let seq = SequenceData::new(n, path.to_vec())?;
    let policy = ChooserPolicy::default_for(spec.topology);
    let x = embeddings::embed(&seq, spec.topology, &policy)?;
    let other = match &spec.reference {
        Reference::Function(f) => f.clone(),
        Reference::StepEmbedding => embeddings::embed(&seq, Topology::J1, &policy)?,
        Reference::MarkovEmbedding => embeddings::embed_markov(path, clock.unwrap(), n)?,
    };
    Ok(metrics::distance(spec.topology, &x, &other)?.value)
}

/// Distributions of the distance between the embedded chain and the
/// reference for every `n`, with exceedance probabilities of `ε`.
pub fn convergence_probe(spec: &ProbeSpec) -> Result<ScenarioResult> {
    check_positive("epsilon", spec.epsilon)?;
    check_replicas(spec.replicas)?;
    if spec.n_list.is_empty() {
        return Err(Error::Empty("n list"));
    }
    let mut rows = Vec::with_capacity(spec.n_list.len());
    let mut path = Vec::new();
    for &n in &spec.n_list {
        let kernel = MarkovKernel::parse(&spec.kernel, n)?;
        let mut ds = Vec::with_capacity(spec.replicas);
        for r in 0..spec.replicas {
            let clock = match spec.reference {
                Reference::MarkovEmbedding => {
                    Some(PoissonPath::sample(&mut clock_rng(spec.seed, r as u64), n as f64))
                }
                _ => None,
            };
            let steps = clock.as_ref().map_or(n, |c| c.count_before(n as f64).max(n));
            kernel.run(&spec.start, steps, &mut chain_rng(spec.seed, r as u64), &mut path)?;
            let d = probe_distance(spec, &path, n, clock.as_ref())
                .map_err(|e| e.context(format!("probe at n = {n}, replica {r}")))?;
            ds.push(d);
        }
        let hits = ds.iter().filter(|&&d| d > spec.epsilon).count() as u64;
        let mean = stats::mean_estimate(&ds).mean;
        ds.sort_by(f64::total_cmp);
        rows.push(ProbeRow {
            n,
            mean,
            q50: stats::quantile(&ds, 0.5),
            q90: stats::quantile(&ds, 0.9),
            q99: stats::quantile(&ds, 0.99),
            max: *ds.last().unwrap(),
            exceedance: Proportion::new(hits, spec.replicas as u64),
        });
    }
    let last_ok = rows.last().unwrap().exceedance.estimate <= spec.threshold;
    let trend_ok = rows.iter().enumerate().all(|(i, r)| {
        rows[..i]
            .iter()
            .all(|earlier| r.exceedance.lower <= earlier.exceedance.upper)
    });
    Ok(ScenarioResult {
        kernel: spec.kernel.clone(),
        reference: spec.reference.label().into(),
        topology: spec.topology,
        epsilon: spec.epsilon,
        replicas: spec.replicas,
        seed: spec.seed,
        rows,
        pass: last_ok && trend_ok,
    })
}
