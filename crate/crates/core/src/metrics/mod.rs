//! The four Skorokhod distances.
//!
//! * J2 and M2 are Hausdorff distances between incomplete and completed
//!   graphs, computed exactly.
//! * J1 is exact for step functions; affine pieces are replaced by a fine
//!   step approximation and the result is reported as an upper bound.
//! * M1 is the Fréchet distance of the completed graphs, found by bisecting
//!   a free-space decision between the M2 distance and a discrete matching.
//!
//! Graph distances use the box norm `|x - y| ∨ |t - s|` unless
//! [`GraphNorm::Euclidean`] is requested.

pub mod geometry;
pub mod hausdorff;
pub mod j1;
pub mod m1;
pub mod oracle;

use crate::cadlag::{CadlagFunction, GraphPoint, PolygonalGraph};
use crate::error::{Error, Result};
use crate::time_change::TimeChange;
use crate::Topology;

pub use hausdorff::HausdorffResult;
pub use oracle::metric_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphNorm {
    #[default]
    Box,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exactness {
    Exact,
    /// The true distance lies in `[value - gap, value]`.
    UpperBound { gap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    TimeChange(TimeChange),
    /// Matched point pairs of the two completed graphs, in traversal order.
    Matching(Vec<(GraphPoint, GraphPoint)>),
    /// A point of one graph and its nearest point on the other.
    Witness { from: GraphPoint, to: GraphPoint },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub topology: Topology,
    pub value: f64,
    /// Certified lower bound; equals `value` for exact results.
    pub lower: f64,
    pub exactness: Exactness,
    pub certificate: Certificate,
}

impl DistanceResult {
    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOptions {
    pub norm: GraphNorm,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Segment subdivision for the discrete M1 matching that seeds the
    /// bisection.
    pub refinement: usize,
    /// Sub-steps per affine piece when J1 needs step functions.
    pub linear_steps: usize,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            norm: GraphNorm::Box,
            tolerance: 1e-9,
            max_iterations: 200,
            refinement: 8,
            linear_steps: 256,
        }
    }
}

/// Exact Hausdorff distance between two polygonal graphs under the box norm.
pub fn hausdorff(a: &PolygonalGraph, b: &PolygonalGraph) -> Result<f64> {
    Ok(hausdorff::hausdorff_with(a, b, GraphNorm::Box)?.value)
}

fn same_dim(f: &CadlagFunction, g: &CadlagFunction) -> Result<()> {
    if f.dim() == g.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(f.dim(), g.dim()))
    }
}

fn graph_distance(
    topology: Topology,
    a: &PolygonalGraph,
    b: &PolygonalGraph,
    norm: GraphNorm,
) -> Result<DistanceResult> {
    let h = hausdorff::hausdorff_with(a, b, norm)?;
    Ok(DistanceResult {
        topology,
        value: h.value,
        lower: h.value,
        exactness: Exactness::Exact,
        certificate: Certificate::Witness {
            from: h.from,
            to: h.to,
        },
    })
}

pub fn d_j2(f: &CadlagFunction, g: &CadlagFunction) -> Result<DistanceResult> {
    d_j2_with(f, g, &MetricOptions::default())
}

pub fn d_j2_with(f: &CadlagFunction, g: &CadlagFunction, o: &MetricOptions) -> Result<DistanceResult> {
    same_dim(f, g)?;
    graph_distance(Topology::J2, &f.incomplete_graph(), &g.incomplete_graph(), o.norm)
}

pub fn d_m2(f: &CadlagFunction, g: &CadlagFunction) -> Result<DistanceResult> {
    d_m2_with(f, g, &MetricOptions::default())
}

pub fn d_m2_with(f: &CadlagFunction, g: &CadlagFunction, o: &MetricOptions) -> Result<DistanceResult> {
    same_dim(f, g)?;
    graph_distance(Topology::M2, &f.completed_graph(), &g.completed_graph(), o.norm)
}

pub fn d_j1(f: &CadlagFunction, g: &CadlagFunction, tolerance: f64) -> Result<DistanceResult> {
    d_j1_with(
        f,
        g,
        &MetricOptions {
            tolerance,
            ..MetricOptions::default()
        },
    )
}

pub fn d_j1_with(f: &CadlagFunction, g: &CadlagFunction, o: &MetricOptions) -> Result<DistanceResult> {
    same_dim(f, g)?;
    if !(o.tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if f.is_step() && g.is_step() {
        let (value, lambda) = j1::step_distance(f, g, o.tolerance, o.max_iterations)?;
        return Ok(DistanceResult {
            topology: Topology::J1,
            value,
            lower: value,
            exactness: Exactness::Exact,
            certificate: Certificate::TimeChange(lambda),
        });
    }
    let (fs, ef) = f.step_approximation(o.linear_steps)?;
    let (gs, eg) = g.step_approximation(o.linear_steps)?;
    let (core, lambda) = j1::step_distance(&fs, &gs, o.tolerance, o.max_iterations)?;
    let slack = ef + eg;
    Ok(DistanceResult {
        topology: Topology::J1,
        value: core + slack,
        lower: (core - slack).max(0.0),
        exactness: Exactness::UpperBound { gap: 2.0 * slack },
        certificate: Certificate::TimeChange(lambda),
    })
}

pub fn d_m1_upper(f: &CadlagFunction, g: &CadlagFunction, refinement: usize) -> Result<DistanceResult> {
    d_m1_with(
        f,
        g,
        &MetricOptions {
            refinement,
            ..MetricOptions::default()
        },
    )
}

pub fn d_m1_with(f: &CadlagFunction, g: &CadlagFunction, o: &MetricOptions) -> Result<DistanceResult> {
    same_dim(f, g)?;
    if o.refinement == 0 {
        return Err(Error::InvalidParameter("refinement must be at least 1".into()));
    }
    let parts = m1::parts_for(o.refinement);
    let a = m1::densify(&f.completed_graph().vertices, 1);
    let b = m1::densify(&g.completed_graph().vertices, 1);
    let (upper, _) = m1::discrete_frechet(&m1::densify(&a, parts), &m1::densify(&b, parts), o.norm);
    let ends = |x: &GraphPoint, y: &GraphPoint| m1::point_gap(x, y, o.norm);
    let lower = d_m2_with(f, g, o)?
        .value
        .max(ends(&a[0], &b[0]))
        .max(ends(&a[a.len() - 1], &b[b.len() - 1]))
        .min(upper);
    let r = m1::frechet(&a, &b, o.norm, lower, upper, o.tolerance, o.max_iterations);
    Ok(DistanceResult {
        topology: Topology::M1,
        value: r.upper,
        lower: r.lower,
        exactness: if r.exact {
            Exactness::Exact
        } else {
            Exactness::UpperBound { gap: r.upper - r.lower }
        },
        certificate: Certificate::Matching(r.matching),
    })
}

/// Distance in the given topology with default options (M1 as upper bound).
pub fn distance(topology: Topology, f: &CadlagFunction, g: &CadlagFunction) -> Result<DistanceResult> {
    distance_with(topology, f, g, &MetricOptions::default())
}

pub fn distance_with(
    topology: Topology,
    f: &CadlagFunction,
    g: &CadlagFunction,
    o: &MetricOptions,
) -> Result<DistanceResult> {
    match topology {
        Topology::J1 => d_j1_with(f, g, o),
        Topology::J2 => d_j2_with(f, g, o),
        Topology::M1 => d_m1_with(f, g, o),
        Topology::M2 => d_m2_with(f, g, o),
    }
}

/// Recomputes the cost claimed by a certificate.
pub fn replay(result: &DistanceResult, f: &CadlagFunction, g: &CadlagFunction) -> Result<f64> {
    match &result.certificate {
        Certificate::TimeChange(l) => j1::replay(f, g, l),
        Certificate::Matching(pairs) => Ok(pairs
            .iter()
            .map(|(p, q)| p.box_dist(q))
            .fold(0.0, f64::max)),
        Certificate::Witness { from, to } => Ok(from.box_dist(to)),
    }
}
