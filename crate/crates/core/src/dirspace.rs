//! Model spaces of directions: round spheres, circles, intervals, spherical
//! suspensions and finite metric nets. All have diameter at most π.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, invalid, Error, Result};
use crate::mc;
use crate::spaceform::{model_distance, Curvature};

const UNIT_TOL: f64 = 1e-9;
const METRIC_SLACK: f64 = 1e-12;
const NET_CANDIDATE_CAP: f64 = 300_000.0;
const NET_SEED: u64 = 0x5eed_0fd1;

/// A direction space Σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DirectionSpace {
    /// Unit sphere S^dim ⊂ R^{dim+1}.
    Sphere { dim: usize },
    /// Circle of total length `length` ∈ (0, 2π].
    Circle { length: f64 },
    /// Segment [0, theta], theta ∈ (0, π].
    Interval { theta: f64 },
    /// Spherical suspension: the κ = 1 cone over `inner` with radii in [0, π].
    Suspension { inner: Box<DirectionSpace> },
    /// Finite metric space given by its distance matrix.
    FiniteNet { matrix: Vec<Vec<f64>> },
}

/// A point of a [`DirectionSpace`], in the variant's own coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum DirPoint {
    /// Unit vector (sphere).
    Vector(Vec<f64>),
    /// Arc-length position (circle), taken modulo the circle length.
    Angle(f64),
    /// Position in [0, θ] (interval).
    Scalar(f64),
    /// Polar angle in [0, π] from the north pole and a point of the inner space.
    Suspended { polar: f64, inner: Box<DirPoint> },
    /// Index into a finite net.
    Index(usize),
}

impl DirPoint {
    pub fn suspended(polar: f64, inner: DirPoint) -> Self {
        DirPoint::Suspended { polar, inner: Box::new(inner) }
    }
}

impl DirectionSpace {
    pub fn sphere(dim: usize) -> Self {
        DirectionSpace::Sphere { dim }
    }

    pub fn circle(length: f64) -> Result<Self> {
        let s = DirectionSpace::Circle { length };
        s.validate()?;
        Ok(s)
    }

    pub fn interval(theta: f64) -> Result<Self> {
        let s = DirectionSpace::Interval { theta };
        s.validate()?;
        Ok(s)
    }

    pub fn suspension(inner: DirectionSpace) -> Result<Self> {
        let s = DirectionSpace::Suspension { inner: Box::new(inner) };
        s.validate()?;
        Ok(s)
    }

    pub fn finite_net(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let s = DirectionSpace::FiniteNet { matrix };
        s.validate()?;
        Ok(s)
    }

    /// Checks the variant invariants; needed after deserializing.
    pub fn validate(&self) -> Result<()> {
        match self {
            DirectionSpace::Sphere { .. } => Ok(()),
            DirectionSpace::Circle { length } => ensure(*length > 0.0 && *length <= 2.0 * PI * (1.0 + METRIC_SLACK), || {
                format!("circle length must lie in (0, 2π], got {length}")
            }),
            DirectionSpace::Interval { theta } => ensure(*theta > 0.0 && *theta <= PI * (1.0 + METRIC_SLACK), || {
                format!("interval length must lie in (0, π], got {theta}")
            }),
            DirectionSpace::Suspension { inner } => inner.validate(),
            DirectionSpace::FiniteNet { matrix } => validate_matrix(matrix),
        }
    }

    /// Hausdorff dimension.
    pub fn dim(&self) -> usize {
        match self {
            DirectionSpace::Sphere { dim } => *dim,
            DirectionSpace::Circle { .. } | DirectionSpace::Interval { .. } => 1,
            DirectionSpace::Suspension { inner } => inner.dim() + 1,
            DirectionSpace::FiniteNet { .. } => 0,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            DirectionSpace::Sphere { .. } | DirectionSpace::Suspension { .. } => PI,
            DirectionSpace::Circle { length } => length / 2.0,
            DirectionSpace::Interval { theta } => *theta,
            DirectionSpace::FiniteNet { matrix } => matrix.iter().flatten().fold(0.0, |m, &d| m.max(d)),
        }
    }

    pub fn has_measure(&self) -> bool {
        match self {
            DirectionSpace::FiniteNet { .. } => false,
            DirectionSpace::Suspension { inner } => inner.has_measure(),
            _ => true,
        }
    }

    pub fn validate_point(&self, p: &DirPoint) -> Result<()> {
        match (self, p) {
            (DirectionSpace::Sphere { dim }, DirPoint::Vector(v)) => {
                ensure(v.len() == dim + 1, || format!("sphere point needs {} coordinates, got {}", dim + 1, v.len()))?;
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                ensure((norm - 1.0).abs() <= UNIT_TOL, || format!("sphere point must be a unit vector, |v| = {norm}"))
            }
            (DirectionSpace::Circle { .. }, DirPoint::Angle(a)) => {
                ensure(a.is_finite(), || format!("circle coordinate must be finite, got {a}"))
            }
            (DirectionSpace::Interval { theta }, DirPoint::Scalar(x)) => {
                ensure(*x >= 0.0 && *x <= *theta, || format!("interval coordinate {x} outside [0, {theta}]"))
            }
            (DirectionSpace::Suspension { inner }, DirPoint::Suspended { polar, inner: q }) => {
                ensure((0.0..=PI).contains(polar), || format!("polar angle {polar} outside [0, π]"))?;
                inner.validate_point(q)
            }
            (DirectionSpace::FiniteNet { matrix }, DirPoint::Index(i)) => {
                ensure(*i < matrix.len(), || format!("net index {i} out of range 0..{}", matrix.len()))
            }
            _ => Err(invalid(format!("point {p:?} does not belong to {}", self.kind_name()))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DirectionSpace::Sphere { .. } => "sphere",
            DirectionSpace::Circle { .. } => "circle",
            DirectionSpace::Interval { .. } => "interval",
            DirectionSpace::Suspension { .. } => "suspension",
            DirectionSpace::FiniteNet { .. } => "finite_net",
        }
    }

    /// Intrinsic distance, in [0, π].
    pub fn distance(&self, u: &DirPoint, v: &DirPoint) -> Result<f64> {
        self.validate_point(u)?;
        self.validate_point(v)?;
        Ok(self.distance_unchecked(u, v))
    }

    pub(crate) fn distance_unchecked(&self, u: &DirPoint, v: &DirPoint) -> f64 {
        match (self, u, v) {
            (DirectionSpace::Sphere { .. }, DirPoint::Vector(a), DirPoint::Vector(b)) => {
                let (mut diff, mut sum) = (0.0, 0.0);
                for (x, y) in a.iter().zip(b) {
                    diff += (x - y) * (x - y);
                    sum += (x + y) * (x + y);
                }
                2.0 * diff.sqrt().atan2(sum.sqrt())
            }
            (DirectionSpace::Circle { length }, DirPoint::Angle(a), DirPoint::Angle(b)) => {
                let gap = (a - b).rem_euclid(*length);
                gap.min(length - gap)
            }
            (DirectionSpace::Interval { .. }, DirPoint::Scalar(a), DirPoint::Scalar(b)) => (a - b).abs(),
            (
                DirectionSpace::Suspension { inner },
                DirPoint::Suspended { polar: ra, inner: qa },
                DirPoint::Suspended { polar: rb, inner: qb },
            ) => {
                let angle = inner.distance_unchecked(qa, qb).min(PI);
                model_distance(Curvature::SPHERICAL, *ra, *rb, angle)
            }
            (DirectionSpace::FiniteNet { matrix }, DirPoint::Index(i), DirPoint::Index(j)) => matrix[*i][*j],
            _ => f64::NAN,
        }
    }

    /// dim-dimensional Hausdorff measure.
    pub fn volume(&self) -> Result<f64> {
        match self {
            DirectionSpace::Sphere { dim } => Ok(sphere_area(*dim)),
            DirectionSpace::Circle { length } => Ok(*length),
            DirectionSpace::Interval { theta } => Ok(*theta),
            DirectionSpace::Suspension { inner } => Ok(inner.volume()? * sine_power_integral(inner.dim())),
            DirectionSpace::FiniteNet { .. } => {
                Err(Error::UnsupportedMeasure("a finite net has no canonical Hausdorff measure".into()))
            }
        }
    }

    /// A point drawn from the normalized Hausdorff measure.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DirPoint> {
        match self {
            DirectionSpace::Sphere { dim } => loop {
                let v: Vec<f64> = (0..=*dim).map(|_| StandardNormal.sample(rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-300 {
                    break Ok(DirPoint::Vector(v.into_iter().map(|x| x / norm).collect()));
                }
            },
            DirectionSpace::Circle { length } => Ok(DirPoint::Angle(rng.gen::<f64>() * length)),
            DirectionSpace::Interval { theta } => Ok(DirPoint::Scalar(rng.gen::<f64>() * theta)),
            DirectionSpace::Suspension { inner } => {
                let polar = sample_polar(inner.dim(), rng);
                Ok(DirPoint::suspended(polar, inner.sample(rng)?))
            }
            DirectionSpace::FiniteNet { .. } => {
                Err(Error::UnsupportedMeasure("cannot sample a finite net by Hausdorff measure".into()))
            }
        }
    }

    /// Uniformly random point, or a uniformly random index for a finite net.
    pub(crate) fn any_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DirPoint {
        match self {
            DirectionSpace::FiniteNet { matrix } => DirPoint::Index(rng.gen_range(0..matrix.len())),
            DirectionSpace::Suspension { inner } => {
                DirPoint::suspended(rng.gen::<f64>() * PI, inner.any_point(rng))
            }
            _ => self.sample(rng).expect("analytic variants have a measure"),
        }
    }

    /// A point near `p`, displaced by at most about `scale`.
    pub(crate) fn perturb<R: Rng + ?Sized>(&self, p: &DirPoint, scale: f64, rng: &mut R) -> DirPoint {
        match (self, p) {
            (DirectionSpace::Sphere { dim }, DirPoint::Vector(v)) => {
                let spread = scale / ((dim + 1) as f64).sqrt();
                let w: Vec<f64> = v.iter().map(|x| x + spread * (2.0 * rng.gen::<f64>() - 1.0)).collect();
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                DirPoint::Vector(w.into_iter().map(|x| x / norm).collect())
            }
            (DirectionSpace::Circle { length }, DirPoint::Angle(a)) => DirPoint::Angle((a + jitter(scale, rng)).rem_euclid(*length)),
            (DirectionSpace::Interval { theta }, DirPoint::Scalar(x)) => DirPoint::Scalar((x + jitter(scale, rng)).clamp(0.0, *theta)),
            (DirectionSpace::Suspension { inner }, DirPoint::Suspended { polar, inner: q }) => {
                let polar = (polar + jitter(scale, rng)).clamp(0.0, PI);
                DirPoint::suspended(polar, inner.perturb(q, scale, rng))
            }
            _ => p.clone(),
        }
    }

    /// ε-net: covering radius at most ε, pairwise separation at least ε/2.
    pub fn net(&self, eps: f64) -> Result<Vec<DirPoint>> {
        self.net_with_seed(eps, NET_SEED)
    }

    pub fn net_with_seed(&self, eps: f64, seed: u64) -> Result<Vec<DirPoint>> {
        ensure(eps > 0.0 && eps.is_finite(), || format!("net radius must be positive, got {eps}"))?;
        match self {
            DirectionSpace::Circle { length } => {
                let n = (length / eps).ceil().max(1.0) as usize;
                Ok((0..n).map(|i| DirPoint::Angle(length * i as f64 / n as f64)).collect())
            }
            DirectionSpace::Interval { theta } => {
                if *theta < eps {
                    return Ok(vec![DirPoint::Scalar(theta / 2.0)]);
                }
                let m = (theta / eps).ceil() as usize;
                Ok((0..=m).map(|i| DirPoint::Scalar(theta * i as f64 / m as f64)).collect())
            }
            DirectionSpace::FiniteNet { matrix } => {
                let all: Vec<_> = (0..matrix.len()).map(DirPoint::Index).collect();
                Ok(farthest_point_net(self, all, Vec::new(), eps))
            }
            DirectionSpace::Sphere { .. } | DirectionSpace::Suspension { .. } => {
                let mut rng = mc::rng(seed);
                let count = self.candidate_count(eps);
                let mut seeds = Vec::new();
                if let DirectionSpace::Suspension { inner } = self {
                    let anchor = inner.any_point(&mut rng);
                    seeds.push(DirPoint::suspended(0.0, anchor.clone()));
                    seeds.push(DirPoint::suspended(PI, anchor));
                }
                let candidates = (0..count).map(|_| self.any_point(&mut rng)).collect();
                Ok(farthest_point_net(self, candidates, seeds, eps / 2.0))
            }
        }
    }

    fn candidate_count(&self, eps: f64) -> usize {
        let d = self.dim().max(1) as i32;
        let vol = self.volume().unwrap_or(PI);
        let cells = (vol / (unit_ball_volume(d as usize) * (eps / 4.0).powi(d))).max(4.0);
        (cells * (cells.ln() + 2.0)).min(NET_CANDIDATE_CAP).ceil() as usize
    }
}

/// Greedy farthest-point insertion over `candidates`, starting from `seeds`
/// (or the first candidate), until every candidate is within `stop` of the net.
fn farthest_point_net(space: &DirectionSpace, candidates: Vec<DirPoint>, seeds: Vec<DirPoint>, stop: f64) -> Vec<DirPoint> {
    if candidates.is_empty() {
        return seeds;
    }
    let mut net = seeds;
    if net.is_empty() {
        net.push(candidates[0].clone());
    }
    let mut gap: Vec<f64> = candidates
        .iter()
        .map(|c| net.iter().map(|p| space.distance_unchecked(c, p)).fold(f64::INFINITY, f64::min))
        .collect();
    loop {
        let (far, &worst) = gap
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        if worst <= stop {
            return net;
        }
        let chosen = candidates[far].clone();
        for (g, c) in gap.iter_mut().zip(&candidates) {
            *g = g.min(space.distance_unchecked(c, &chosen));
        }
        net.push(chosen);
    }
}

fn validate_matrix(matrix: &[Vec<f64>]) -> Result<()> {
    let n = matrix.len();
    ensure(n > 0, || "finite net needs at least one point".into())?;
    for (i, row) in matrix.iter().enumerate() {
        ensure(row.len() == n, || format!("distance matrix row {i} has {} entries, expected {n}", row.len()))?;
        ensure(row[i] == 0.0, || format!("diagonal entry ({i}, {i}) must be 0"))?;
        for (j, &d) in row.iter().enumerate() {
            ensure(d.is_finite() && d >= 0.0, || format!("entry ({i}, {j}) = {d} is not a distance"))?;
            ensure(d <= PI * (1.0 + METRIC_SLACK), || format!("entry ({i}, {j}) = {d} exceeds π"))?;
            ensure(d == matrix[j][i], || format!("distance matrix not symmetric at ({i}, {j})"))?;
            ensure(i == j || d > 0.0, || format!("distinct points {i}, {j} at distance 0"))?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, c) = (matrix[i][k], matrix[i][j], matrix[j][k]);
                ensure(a <= b + c + METRIC_SLACK * (1.0 + a), || {
                    format!("triangle inequality fails: d({i},{k}) = {a} > d({i},{j}) + d({j},{k}) = {}", b + c)
                })?;
            }
        }
    }
    Ok(())
}

/// Area of the unit m-sphere in R^{m+1}.
pub fn sphere_area(m: usize) -> f64 {
    let (mut even, mut odd) = (2.0, 2.0 * PI);
    if m == 0 {
        return even;
    }
    for k in 2..=m {
        let next = 2.0 * PI / (k - 1) as f64 * if k % 2 == 0 { even } else { odd };
        if k % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
    }
    if m % 2 == 0 { even } else { odd }
}

/// Volume of the unit n-ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    let (mut even, mut odd) = (1.0, 2.0);
    if n == 0 {
        return even;
    }
    for k in 2..=n {
        if k % 2 == 0 {
            even *= 2.0 * PI / k as f64;
        } else {
            odd *= 2.0 * PI / k as f64;
        }
    }
    if n % 2 == 0 { even } else { odd }
}

/// ∫₀^π sin^m t dt by the Wallis recursion.
pub fn sine_power_integral(m: usize) -> f64 {
    let mut w = if m % 2 == 0 { PI } else { 2.0 };
    let mut k = if m % 2 == 0 { 2 } else { 3 };
    while k <= m {
        w *= (k - 1) as f64 / k as f64;
        k += 2;
    }
    w
}

fn jitter<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    scale * (2.0 * rng.gen::<f64>() - 1.0)
}

/// Polar angle with density ∝ sin^m on [0, π].
pub(crate) fn sample_polar<R: Rng + ?Sized>(m: usize, rng: &mut R) -> f64 {
    match m {
        0 => rng.gen::<f64>() * PI,
        1 => (1.0 - 2.0 * rng.gen::<f64>()).clamp(-1.0, 1.0).acos(),
        _ => loop {
            let t = rng.gen::<f64>() * PI;
            if rng.gen::<f64>() <= t.sin().powi(m as i32) {
                break t;
            }
        },
    }
}
