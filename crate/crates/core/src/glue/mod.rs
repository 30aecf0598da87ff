//! Boundary self-gluings `C̄^R_κ(Σ) / x ∼ φ(x)` and their quotient metrics.

mod graph;
mod polygon;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cone::{ConePoint, ConeSpace};
use crate::dirspace::{DirPoint, DirectionSpace};
use crate::error::{ensure, invalid, Result};
use crate::estimate::VolumeEstimate;
use crate::mc;
use crate::spaceform::{model_distance, Curvature};

pub use graph::{shortest_paths, Paths};
pub use polygon::PolygonGluing;

/// Default cap on boundary crossings used for error reporting.
pub const DEFAULT_CROSSING_CAP: usize = 4;

const BOUNDARY_SLACK: f64 = 1e-12;
const MIN_PAIR_DISTANCE: f64 = 1e-4;

/// An isometric involution of the boundary Σ×{R}, acting on Σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Involution {
    Identity,
    /// `x ↦ 2·axis − x` on a circle.
    ReflectionCircle { axis: f64 },
    /// `x ↦ x + L/2` on a circle of length L.
    AntipodalCircle,
    /// Reflection of a round sphere in the hyperplane orthogonal to `normal`.
    ReflectionSphere { normal: Vec<f64> },
    AntipodalSphere,
    /// `x ↦ θ − x` on [0, θ].
    IntervalReflection,
    /// Swaps the listed index pairs of a finite net and fixes the rest.
    FinitePairing { pairs: Vec<[usize; 2]> },
}

impl Involution {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Involution::Identity => "identity",
            Involution::ReflectionCircle { .. } => "reflection_circle",
            Involution::AntipodalCircle => "antipodal_circle",
            Involution::ReflectionSphere { .. } => "reflection_sphere",
            Involution::AntipodalSphere => "antipodal_sphere",
            Involution::IntervalReflection => "interval_reflection",
            Involution::FinitePairing { .. } => "finite_pairing",
        }
    }

    /// Checks that the involution acts on `sigma`'s point representation.
    pub fn validate_for(&self, sigma: &DirectionSpace) -> Result<()> {
        let mismatch = || invalid(format!("{} does not act on {}", self.kind_name(), sigma.kind_name()));
        match (self, sigma) {
            (Involution::Identity, _) => Ok(()),
            (Involution::ReflectionCircle { axis }, DirectionSpace::Circle { .. }) => {
                ensure(axis.is_finite(), || format!("reflection axis must be finite, got {axis}"))
            }
            (Involution::AntipodalCircle, DirectionSpace::Circle { .. }) => Ok(()),
            (Involution::ReflectionSphere { normal }, DirectionSpace::Sphere { dim }) => {
                ensure(normal.len() == dim + 1, || format!("normal needs {} coordinates", dim + 1))?;
                let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
                ensure(norm > 0.0 && norm.is_finite(), || "reflection normal must be nonzero".into())
            }
            (Involution::AntipodalSphere, DirectionSpace::Sphere { .. }) => Ok(()),
            (Involution::IntervalReflection, DirectionSpace::Interval { .. }) => Ok(()),
            (Involution::FinitePairing { pairs }, DirectionSpace::FiniteNet { matrix }) => {
                let mut seen = vec![false; matrix.len()];
                for &[a, b] in pairs {
                    ensure(a < matrix.len() && b < matrix.len(), || format!("pair ({a}, {b}) out of range"))?;
                    ensure(a != b, || format!("pair ({a}, {a}) is not a swap"))?;
                    ensure(!seen[a] && !seen[b], || format!("index in pair ({a}, {b}) appears twice"))?;
                    seen[a] = true;
                    seen[b] = true;
                }
                Ok(())
            }
            _ => Err(mismatch()),
        }
    }

    /// Image of a direction. Assumes [`Involution::validate_for`] passed.
    pub fn apply(&self, sigma: &DirectionSpace, p: &DirPoint) -> DirPoint {
        match (self, sigma, p) {
            (Involution::ReflectionCircle { axis }, DirectionSpace::Circle { length }, DirPoint::Angle(x)) => {
                DirPoint::Angle((2.0 * axis - x).rem_euclid(*length))
            }
            (Involution::AntipodalCircle, DirectionSpace::Circle { length }, DirPoint::Angle(x)) => {
                DirPoint::Angle((x + 0.5 * length).rem_euclid(*length))
            }
            (Involution::ReflectionSphere { normal }, _, DirPoint::Vector(v)) => {
                let nn: f64 = normal.iter().map(|x| x * x).sum();
                let dot: f64 = v.iter().zip(normal).map(|(a, b)| a * b).sum();
                DirPoint::Vector(v.iter().zip(normal).map(|(a, b)| a - 2.0 * dot / nn * b).collect())
            }
            (Involution::AntipodalSphere, _, DirPoint::Vector(v)) => DirPoint::Vector(v.iter().map(|x| -x).collect()),
            (Involution::IntervalReflection, DirectionSpace::Interval { theta }, DirPoint::Scalar(x)) => {
                DirPoint::Scalar(theta - x)
            }
            (Involution::FinitePairing { pairs }, _, DirPoint::Index(i)) => {
                let image = pairs.iter().find_map(|&[a, b]| {
                    if a == *i {
                        Some(b)
                    } else if b == *i {
                        Some(a)
                    } else {
                        None
                    }
                });
                DirPoint::Index(image.unwrap_or(*i))
            }
            _ => p.clone(),
        }
    }
}

/// Outcome of [`involution_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionReport {
    /// max d(φ(φ(x)), x).
    pub max_displacement: f64,
    /// max |d(φx, φy) − d(x, y)|.
    pub max_isometry_defect: f64,
    /// The pair attaining the isometry defect.
    pub witness: Option<(DirPoint, DirPoint)>,
    pub pass: bool,
}

/// Samples (or, for finite nets, enumerates) points and pairs to test that
/// `phi` is an isometric involution of `sigma`.
pub fn involution_check(phi: &Involution, sigma: &DirectionSpace, samples: usize, tol: f64, seed: u64) -> Result<InvolutionReport> {
    phi.validate_for(sigma)?;
    let points: Vec<DirPoint> = match sigma {
        DirectionSpace::FiniteNet { matrix } => (0..matrix.len()).map(DirPoint::Index).collect(),
        _ => {
            let mut rng = mc::rng(seed);
            (0..samples.max(2)).map(|_| sigma.any_point(&mut rng)).collect()
        }
    };
    let images: Vec<DirPoint> = points.iter().map(|p| phi.apply(sigma, p)).collect();
    let max_displacement = points
        .iter()
        .zip(&images)
        .map(|(p, q)| sigma.distance_unchecked(p, &phi.apply(sigma, q)))
        .fold(0.0, f64::max);
    let pairs: Vec<(usize, usize)> = match sigma {
        DirectionSpace::FiniteNet { .. } => {
            (0..points.len()).flat_map(|i| (i + 1..points.len()).map(move |j| (i, j))).collect()
        }
        _ => (0..points.len()).map(|i| (i, (i + 1) % points.len())).collect(),
    };
    let mut max_isometry_defect = 0.0;
    let mut witness = None;
    for (i, j) in pairs {
        let before = sigma.distance_unchecked(&points[i], &points[j]);
        let after = sigma.distance_unchecked(&images[i], &images[j]);
        let defect = (after - before).abs();
        if witness.is_none() || defect > max_isometry_defect {
            max_isometry_defect = defect;
            witness = Some((points[i].clone(), points[j].clone()));
        }
    }
    let pass = max_displacement <= tol && max_isometry_defect <= tol;
    Ok(InvolutionReport { max_displacement, max_isometry_defect, witness, pass })
}

/// Result of the close-pair distortion check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionReport {
    /// max | |φx φy| / |xy| − 1 | over the tested pairs.
    pub max_defect: f64,
    /// Cone distance |xy| of the pair attaining `max_defect`.
    pub at_distance: f64,
    /// max of defect / (20·|xy|); at most 1 when every pair is inside the envelope.
    pub envelope_usage: f64,
    pub within_envelope: bool,
    pub pairs: usize,
}

/// Distortion of `phi` on close boundary pairs of the cone `C̄^R_κ(Σ)`,
/// measured in the cone metric on Σ×{R}.
pub fn involution_bilipschitz_property(
    phi: &Involution,
    sigma: &DirectionSpace,
    kappa: Curvature,
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<DistortionReport> {
    phi.validate_for(sigma)?;
    let cone = ConeSpace::new(sigma.clone(), kappa, radius)?;
    let boundary = |p: DirPoint| ConePoint::new(p, radius);
    let pairs: Vec<(DirPoint, DirPoint)> = match sigma {
        DirectionSpace::FiniteNet { matrix } => (0..matrix.len())
            .flat_map(|i| (i + 1..matrix.len()).map(move |j| (DirPoint::Index(i), DirPoint::Index(j))))
            .collect(),
        _ => {
            let mut rng = mc::rng(seed);
            (0..samples)
                .map(|k| {
                    let x = sigma.any_point(&mut rng);
                    let scale = 0.2 * 0.5f64.powi((k % 8) as i32);
                    let y = sigma.perturb(&x, scale, &mut rng);
                    (x, y)
                })
                .collect()
        }
    };
    let mut report = DistortionReport { max_defect: 0.0, at_distance: 0.0, envelope_usage: 0.0, within_envelope: true, pairs: 0 };
    for (x, y) in pairs {
        let before = cone.distance_unchecked(&boundary(x.clone()), &boundary(y.clone()));
        // below this separation the ratio measures rounding, not distortion
        if before < MIN_PAIR_DISTANCE {
            continue;
        }
        let after = cone.distance_unchecked(&boundary(phi.apply(sigma, &x)), &boundary(phi.apply(sigma, &y)));
        let defect = (after / before - 1.0).abs();
        report.pairs += 1;
        if defect > report.max_defect {
            report.max_defect = defect;
            report.at_distance = before;
        }
        report.envelope_usage = report.envelope_usage.max(defect / (20.0 * before));
    }
    report.within_envelope = report.envelope_usage <= 1.0;
    Ok(report)
}

/// Quotient distance estimate from an identification graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GluedDistance {
    pub value: f64,
    /// One-sided: the true quotient distance lies in `[value − error_bound, value]`.
    pub error_bound: f64,
    /// Identification edges used by the returned path.
    pub crossings: usize,
    pub nodes: usize,
}

/// A cone with its boundary glued by an isometric involution.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedSpace {
    cone: ConeSpace,
    phi: Involution,
    crossing_cap: usize,
}

impl GluedSpace {
    /// Rejects κ > 0 with π/(2√κ) < R < π/√κ.
    pub fn new(cone: ConeSpace, phi: Involution) -> Result<Self> {
        ensure(cone.rigidity_admissible(), || {
            format!(
                "radius {} is not admissible for κ = {}: need R ≤ π/(2√κ) or R = π/√κ",
                cone.radius(),
                cone.kappa().value()
            )
        })?;
        Self::new_non_admissible(cone, phi)
    }

    /// Same as [`GluedSpace::new`] without the radius restriction.
    pub fn new_non_admissible(cone: ConeSpace, phi: Involution) -> Result<Self> {
        phi.validate_for(cone.sigma())?;
        Ok(Self { cone, phi, crossing_cap: DEFAULT_CROSSING_CAP })
    }

    pub fn with_crossing_cap(mut self, cap: usize) -> Self {
        self.crossing_cap = cap;
        self
    }

    pub fn cone(&self) -> &ConeSpace {
        &self.cone
    }

    pub fn phi(&self) -> &Involution {
        &self.phi
    }

    pub fn crossing_cap(&self) -> usize {
        self.crossing_cap
    }

    fn on_boundary(&self, p: &ConePoint) -> bool {
        p.t >= self.cone.radius() * (1.0 - BOUNDARY_SLACK)
    }

    /// The glued volume, which equals the cone volume since the boundary is null.
    pub fn volume(&self) -> Result<VolumeEstimate> {
        self.cone.ball_volume(self.cone.radius())
    }

    /// Boundary directions at resolution `eps` in the cone metric, with the
    /// covering radius of the net in Σ. Nets at `eps` and `eps/2` are nested.
    fn boundary_net(&self, eps: f64) -> Result<(Vec<DirPoint>, f64)> {
        let sigma = self.cone.sigma();
        let spread = self.cone.kappa().sn_raw(self.cone.radius());
        if spread <= 1e-12 * self.cone.radius() {
            // the boundary sphere of radius π/√κ collapses to a point
            let p = sigma.any_point(&mut mc::rng(0));
            return Ok((vec![p], 0.0));
        }
        let angular = eps / spread;
        Ok(match sigma {
            DirectionSpace::Circle { length } => {
                let n = ((length / angular).ceil().max(1.0) as usize).next_power_of_two();
                ((0..n).map(|i| DirPoint::Angle(length * i as f64 / n as f64)).collect(), length / (2.0 * n as f64))
            }
            DirectionSpace::Interval { theta } => {
                let m = ((theta / angular).ceil().max(1.0) as usize).next_power_of_two();
                ((0..=m).map(|i| DirPoint::Scalar(theta * i as f64 / m as f64)).collect(), theta / (2.0 * m as f64))
            }
            DirectionSpace::FiniteNet { matrix } => ((0..matrix.len()).map(DirPoint::Index).collect(), 0.0),
            _ => (sigma.net(0.5 * angular)?, 0.5 * angular),
        })
    }

    fn build_graph(&self, eps: f64, queries: &[&ConePoint]) -> Result<(Vec<ConePoint>, Vec<Vec<usize>>, f64)> {
        ensure(eps > 0.0 && eps.is_finite(), || format!("graph resolution must be positive, got {eps}"))?;
        let sigma = self.cone.sigma();
        let radius = self.cone.radius();
        let (net, covering) = self.boundary_net(eps)?;
        let mut nodes: Vec<ConePoint> = Vec::new();
        let mut partners: Vec<Vec<usize>> = Vec::new();
        let add_pair = |nodes: &mut Vec<ConePoint>, partners: &mut Vec<Vec<usize>>, p: ConePoint, boundary: bool| {
            let i = nodes.len();
            nodes.push(p.clone());
            partners.push(Vec::new());
            if boundary && self.phi != Involution::Identity {
                let j = nodes.len();
                nodes.push(ConePoint::new(self.phi.apply(sigma, &p.direction), p.t));
                partners.push(vec![i]);
                partners[i].push(j);
            }
        };
        for q in queries {
            self.cone.validate_point(q)?;
            add_pair(&mut nodes, &mut partners, (*q).clone(), self.on_boundary(q));
        }
        for d in net {
            add_pair(&mut nodes, &mut partners, ConePoint::new(d, radius), true);
        }
        let rho = model_distance(self.cone.kappa(), radius, radius, covering.min(PI));
        Ok((nodes, partners, rho))
    }

    /// Quotient distance between `x` and `y` over a boundary net at resolution `eps`.
    pub fn distance(&self, x: &ConePoint, y: &ConePoint, eps: f64) -> Result<GluedDistance> {
        if self.phi == Involution::Identity {
            let value = self.cone.distance(x, y)?;
            return Ok(GluedDistance { value, error_bound: 0.0, crossings: 0, nodes: 2 });
        }
        let (nodes, partners, rho) = self.build_graph(eps, &[x, y])?;
        let target = if self.on_boundary(x) && self.phi != Involution::Identity { 2 } else { 1 };
        let paths = shortest_paths(nodes.len(), 0, |i, j| self.cone.distance_unchecked(&nodes[i], &nodes[j]), &partners);
        Ok(GluedDistance {
            value: paths.dist[target],
            error_bound: self.crossing_cap as f64 * 2.0 * rho,
            crossings: paths.crossings[target],
            nodes: nodes.len(),
        })
    }

    /// Distances from `source` to every boundary net node, as (node, distance) pairs.
    pub fn distances_to_boundary_net(&self, source: &ConePoint, eps: f64) -> Result<(Vec<(ConePoint, f64)>, f64)> {
        let (nodes, partners, rho) = self.build_graph(eps, &[source])?;
        let paths = shortest_paths(nodes.len(), 0, |i, j| self.cone.distance_unchecked(&nodes[i], &nodes[j]), &partners);
        let first_net = if self.on_boundary(source) && self.phi != Involution::Identity { 2 } else { 1 };
        let out = nodes.into_iter().zip(paths.dist).skip(first_net).collect();
        Ok((out, self.crossing_cap as f64 * 2.0 * rho))
    }

    /// Largest glued distance from the apex to a boundary net node; should be R.
    pub fn radius_report(&self, eps: f64) -> Result<GluedDistance> {
        let apex = self.cone.apex();
        let (nodes, partners, rho) = self.build_graph(eps, &[&apex])?;
        let paths = shortest_paths(nodes.len(), 0, |i, j| self.cone.distance_unchecked(&nodes[i], &nodes[j]), &partners);
        let (far, value) = paths
            .dist
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("graph has the apex");
        Ok(GluedDistance {
            value,
            error_bound: self.crossing_cap as f64 * 2.0 * rho,
            crossings: paths.crossings[far],
            nodes: nodes.len(),
        })
    }
}

/// The five two-dimensional families: the cone over a circle of length 2θ
/// glued by the identity, a reflection or the antipodal map, and the cone over
/// [0, θ] glued by the identity or the end-swapping reflection.
pub fn catalog_2d(kappa: Curvature, radius: f64, theta: f64) -> Result<Vec<(&'static str, GluedSpace)>> {
    let circle = DirectionSpace::circle(2.0 * theta)?;
    let interval = DirectionSpace::interval(theta)?;
    let c = ConeSpace::new(circle, kappa, radius)?;
    let i = ConeSpace::new(interval, kappa, radius)?;
    Ok(vec![
        ("circle_identity", GluedSpace::new(c.clone(), Involution::Identity)?),
        ("circle_reflection", GluedSpace::new(c.clone(), Involution::ReflectionCircle { axis: 0.0 })?),
        ("circle_antipodal", GluedSpace::new(c, Involution::AntipodalCircle)?),
        ("interval_identity", GluedSpace::new(i.clone(), Involution::Identity)?),
        ("interval_reflection", GluedSpace::new(i, Involution::IntervalReflection)?),
    ])
}
