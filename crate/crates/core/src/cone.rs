//! The closed κ-cone of radius R over a direction space.

use std::f64::consts::PI;

use rand::Rng;

use crate::dirspace::{DirPoint, DirectionSpace};
use crate::error::{ensure, invalid, Error, Result};
use crate::estimate::VolumeEstimate;
use crate::mc;
use crate::quad::{adaptive_simpson, DEFAULT_TOLERANCE};
use crate::spaceform::{comparison_angle, model_distance, Curvature};

const RADIUS_SLACK: f64 = 1e-12;
const PROFILE_CELLS: usize = 1024;

/// A point of the cone: a direction and a radial coordinate. All points with
/// `t = 0` are the apex and compare equal.
#[derive(Debug, Clone)]
pub struct ConePoint {
    pub direction: DirPoint,
    pub t: f64,
}

impl ConePoint {
    pub fn new(direction: DirPoint, t: f64) -> Self {
        Self { direction, t }
    }

    pub fn is_apex(&self) -> bool {
        self.t == 0.0
    }
}

impl PartialEq for ConePoint {
    fn eq(&self, other: &Self) -> bool {
        if self.is_apex() || other.is_apex() {
            return self.t == other.t;
        }
        self.t == other.t && self.direction == other.direction
    }
}

/// C̄^R_κ(Σ) with the κ-cone metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpace {
    sigma: DirectionSpace,
    kappa: Curvature,
    radius: f64,
    tolerance: f64,
}

impl ConeSpace {
    pub fn new(sigma: DirectionSpace, kappa: Curvature, radius: f64) -> Result<Self> {
        sigma.validate()?;
        ensure(radius > 0.0 && radius.is_finite(), || format!("cone radius must be positive, got {radius}"))?;
        if let Some(d) = kappa.diameter() {
            ensure(radius <= d * (1.0 + RADIUS_SLACK), || {
                format!("cone radius {radius} exceeds π/√κ = {d}")
            })?;
        }
        Ok(Self { sigma, kappa, radius, tolerance: DEFAULT_TOLERANCE })
    }

    /// Absolute tolerance used by volume quadratures.
    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        ensure(tolerance > 0.0, || format!("quadrature tolerance must be positive, got {tolerance}"))?;
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn sigma(&self) -> &DirectionSpace {
        &self.sigma
    }

    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Dimension of the cone, one more than that of Σ.
    pub fn dim(&self) -> usize {
        self.sigma.dim() + 1
    }

    /// R ≤ π/(2√κ) or R = π/√κ (always true for κ ≤ 0).
    pub fn rigidity_admissible(&self) -> bool {
        match self.kappa.diameter() {
            None => true,
            Some(d) => {
                self.radius <= 0.5 * d * (1.0 + RADIUS_SLACK) || (self.radius - d).abs() <= RADIUS_SLACK * d
            }
        }
    }

    pub fn apex(&self) -> ConePoint {
        ConePoint::new(DirPoint::Index(0), 0.0)
    }

    pub fn point(&self, direction: DirPoint, t: f64) -> Result<ConePoint> {
        let p = ConePoint::new(direction, t);
        self.validate_point(&p)?;
        Ok(p)
    }

    pub fn validate_point(&self, p: &ConePoint) -> Result<()> {
        ensure(p.t >= 0.0 && p.t <= self.radius * (1.0 + RADIUS_SLACK), || {
            format!("radial coordinate {} outside [0, R = {}]", p.t, self.radius)
        })?;
        if p.is_apex() {
            Ok(())
        } else {
            self.sigma.validate_point(&p.direction)
        }
    }

    pub fn distance(&self, x: &ConePoint, y: &ConePoint) -> Result<f64> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(self.distance_unchecked(x, y))
    }

    pub(crate) fn distance_unchecked(&self, x: &ConePoint, y: &ConePoint) -> f64 {
        if x.is_apex() || y.is_apex() {
            return (x.t - y.t).abs();
        }
        let angle = self.sigma.distance_unchecked(&x.direction, &y.direction).min(PI);
        model_distance(self.kappa, x.t, y.t, angle)
    }

    fn density(&self) -> impl Fn(f64) -> f64 + '_ {
        let m = self.sigma.dim() as i32;
        move |t| self.kappa.sn_raw(t).max(0.0).powi(m)
    }

    fn check_radius(&self, r: f64, what: &str) -> Result<()> {
        ensure(r >= 0.0 && r <= self.radius * (1.0 + RADIUS_SLACK), || {
            format!("{what} = {r} outside [0, R = {}]", self.radius)
        })
    }

    /// vol(Σ)·∫_a^b sn_κ^{dim Σ}, with the tolerance applying to the product.
    fn shell_volume(&self, a: f64, b: f64) -> Result<VolumeEstimate> {
        let total = self.sigma.volume()?;
        let q = adaptive_simpson(self.density(), a, b, self.tolerance / total.max(1.0));
        Ok(VolumeEstimate::quadrature(total * q.value, self.tolerance))
    }

    /// Volume of the ball of radius `r` about the apex.
    pub fn ball_volume(&self, r: f64) -> Result<VolumeEstimate> {
        self.check_radius(r, "r")?;
        self.shell_volume(0.0, r.min(self.radius))
    }

    /// Volume of the annulus `r < t < outer`, as a single quadrature.
    pub fn annulus_volume(&self, r: f64, outer: f64) -> Result<VolumeEstimate> {
        self.check_radius(r, "r")?;
        self.check_radius(outer, "outer radius")?;
        ensure(r <= outer, || format!("annulus radii out of order: {r} > {outer}"))?;
        self.shell_volume(r, outer.min(self.radius))
    }

    /// Cumulative radial measure on [0, R] for inverse-CDF sampling.
    pub fn radial_profile(&self) -> Result<RadialProfile> {
        if !self.sigma.has_measure() {
            return Err(Error::UnsupportedMeasure(format!("{} has no measure", self.sigma.kind_name())));
        }
        Ok(RadialProfile::new(self.kappa, self.sigma.dim(), self.radius))
    }

    pub fn sampler(&self) -> Result<ConeSampler<'_>> {
        Ok(ConeSampler { cone: self, profile: self.radial_profile()? })
    }

    /// One point drawn from the cone measure; builds a sampler per call, so
    /// prefer [`ConeSpace::sampler`] for repeated draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ConePoint> {
        self.sampler()?.sample(rng)
    }

    /// Monte-Carlo estimate of the ball volume: total volume times the
    /// fraction of cone samples with `t ≤ r`.
    pub fn ball_volume_mc(&self, r: f64, samples: u64, seed: u64) -> Result<VolumeEstimate> {
        self.check_radius(r, "r")?;
        ensure(samples > 0, || "sample count must be positive".into())?;
        let total = self.ball_volume(self.radius)?.value;
        let profile = self.radial_profile()?;
        let hits = mc::count_hits(seed, samples, |rng| profile.inverse(rng.gen::<f64>()) <= r);
        let (value, stderr) = mc::proportion_estimate(hits, samples, total);
        Ok(VolumeEstimate::monte_carlo(value, stderr, samples))
    }
}

/// Tabulated CDF of the radial density `sn_κ^m` on [0, R].
#[derive(Debug, Clone)]
pub struct RadialProfile {
    kappa: Curvature,
    power: i32,
    radius: f64,
    cumulative: Vec<f64>,
}

impl RadialProfile {
    fn new(kappa: Curvature, power: usize, radius: f64) -> Self {
        let h = radius / PROFILE_CELLS as f64;
        let f = |t: f64| kappa.sn_raw(t).max(0.0).powi(power as i32);
        let mut cumulative = Vec::with_capacity(PROFILE_CELLS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..PROFILE_CELLS {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            acc += adaptive_simpson(f, a, b, 1e-15 * (1.0 + acc)).value;
            cumulative.push(acc);
        }
        Self { kappa, power: power as i32, radius, cumulative }
    }

    fn density(&self, t: f64) -> f64 {
        self.kappa.sn_raw(t).max(0.0).powi(self.power)
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().expect("nonempty table")
    }

    /// Radius `t` with `∫₀^t sn^m = u·∫₀^R sn^m`.
    pub fn inverse(&self, u: f64) -> f64 {
        let target = u.clamp(0.0, 1.0) * self.total();
        let cell = self.cumulative.partition_point(|&c| c <= target).clamp(1, PROFILE_CELLS) - 1;
        let h = self.radius / PROFILE_CELLS as f64;
        let (mut lo, mut hi) = (cell as f64 * h, (cell + 1) as f64 * h);
        let base = self.cumulative[cell];
        let start = lo;
        let mass = |t: f64| {
            let mid = 0.5 * (start + t);
            base + (t - start) / 6.0 * (self.density(start) + 4.0 * self.density(mid) + self.density(t))
        };
        let mut t = 0.5 * (lo + hi);
        for _ in 0..60 {
            let g = mass(t) - target;
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = self.density(t);
            let newton = if d > 0.0 { t - g / d } else { f64::NAN };
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - t).abs() <= 1e-15 * self.radius {
                return next;
            }
            t = next;
        }
        t
    }
}

/// Draws points of a cone from its volume measure.
#[derive(Debug, Clone)]
pub struct ConeSampler<'a> {
    cone: &'a ConeSpace,
    profile: RadialProfile,
}

impl ConeSampler<'_> {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ConePoint> {
        let t = self.profile.inverse(rng.gen::<f64>());
        let direction = self.cone.sigma.sample(rng)?;
        Ok(ConePoint::new(direction, t))
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }
}

/// A shortest path in a flat cone over a circle, obtained by unrolling the
/// sector spanned by its endpoints into the plane.
#[derive(Debug, Clone)]
pub struct FlatGeodesic {
    pub from: ConePoint,
    pub to: ConePoint,
    pub length: f64,
    pub through_apex: bool,
    circle_length: f64,
    start_angle: f64,
    turn: f64,
}

impl FlatGeodesic {
    /// Planar coordinates of the point at arc length `s`, with `from` on the positive x-axis.
    fn developed_at(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, self.length);
        if self.through_apex {
            if s <= self.from.t {
                (self.from.t - s, 0.0)
            } else {
                let r = s - self.from.t;
                (r * self.turn.cos(), r * self.turn.sin())
            }
        } else {
            let (x0, y0) = (self.from.t, 0.0);
            let (x1, y1) = (self.to.t * self.turn.abs().cos(), self.to.t * self.turn.abs().sin());
            let f = if self.length > 0.0 { s / self.length } else { 0.0 };
            (x0 + f * (x1 - x0), y0 + f * (y1 - y0))
        }
    }

    /// Point at arc length `s` from `from`.
    pub fn point_at(&self, s: f64) -> ConePoint {
        let (x, y) = self.developed_at(s);
        let t = x.hypot(y);
        if t == 0.0 {
            return ConePoint::new(DirPoint::Angle(0.0), 0.0);
        }
        let swing = if self.through_apex {
            if s <= self.from.t { 0.0 } else { self.turn }
        } else {
            y.atan2(x) * self.turn.signum()
        };
        let angle = (self.start_angle + swing).rem_euclid(self.circle_length);
        ConePoint::new(DirPoint::Angle(angle), t)
    }

    /// `samples + 1` evenly spaced points including both ends.
    pub fn path(&self, samples: usize) -> Vec<ConePoint> {
        let n = samples.max(1);
        (0..=n).map(|i| self.point_at(self.length * i as f64 / n as f64)).collect()
    }
}

fn flat_circle(cone: &ConeSpace) -> Result<f64> {
    match cone.sigma() {
        DirectionSpace::Circle { length } if cone.kappa().value() == 0.0 => Ok(*length),
        _ => Err(Error::Unsupported("development needs a flat cone over a circle".into())),
    }
}

/// Shortest path between two points of a flat cone over a circle.
pub fn flat_cone_geodesic(cone: &ConeSpace, x: &ConePoint, y: &ConePoint) -> Result<FlatGeodesic> {
    let length_of_circle = flat_circle(cone)?;
    cone.validate_point(x)?;
    cone.validate_point(y)?;
    ensure(!(x.is_apex() && y.is_apex()), || "both endpoints are the apex".into())?;
    let angle_of = |p: &ConePoint| match p.direction {
        DirPoint::Angle(a) if !p.is_apex() => a,
        _ => 0.0,
    };
    let (ax, ay) = (angle_of(x), if y.is_apex() { angle_of(x) } else { angle_of(y) });
    let ax = if x.is_apex() { ay } else { ax };
    let mut turn = (ay - ax).rem_euclid(length_of_circle);
    if turn > 0.5 * length_of_circle {
        turn -= length_of_circle;
    }
    let gap = turn.abs();
    let through_apex = gap >= PI;
    let length = if through_apex {
        x.t + y.t
    } else if gap == 0.0 {
        (x.t - y.t).abs()
    } else {
        let (dx, dy) = (y.t * gap.cos() - x.t, y.t * gap.sin());
        dx.hypot(dy)
    };
    Ok(FlatGeodesic {
        from: x.clone(),
        to: y.clone(),
        length,
        through_apex,
        circle_length: length_of_circle,
        start_angle: ax,
        turn,
    })
}

/// Finite-difference estimate of the angle at `a` between the direction to
/// the apex and the geodesic towards `b`, against the flat comparison angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseAngleReport {
    pub estimate: f64,
    pub comparison: f64,
    pub margin: f64,
}

pub fn base_angle_check(cone: &ConeSpace, a: &ConePoint, b: &ConePoint, step: f64) -> Result<BaseAngleReport> {
    ensure(!a.is_apex() && !b.is_apex(), || "base angle needs both points off the apex".into())?;
    let geo = flat_cone_geodesic(cone, a, b)?;
    if geo.through_apex {
        return Err(Error::Unsupported("geodesic passes through the apex".into()));
    }
    ensure(step > 0.0 && 2.0 * step < geo.length, || {
        format!("step {step} must be positive and below half the geodesic length {}", geo.length)
    })?;
    let sample = |s: f64| {
        let (x, y) = geo.developed_at(s);
        (x.hypot(y), y.atan2(x))
    };
    let (r0, p0) = sample(0.0);
    let (r1, p1) = sample(step);
    let (r2, p2) = sample(2.0 * step);
    let radial = (-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * step);
    let swing = (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * step);
    let estimate = (a.t * swing).abs().atan2(-radial);
    let comparison = comparison_angle(Curvature::FLAT, a.t, geo.length, b.t)?;
    Ok(BaseAngleReport { estimate, comparison, margin: (estimate - comparison).abs() })
}

/// Angle at the apex realized by a pair, which should equal `min(d_Σ, π)`.
pub fn apex_angle(cone: &ConeSpace, x: &ConePoint, y: &ConePoint) -> Result<f64> {
    if x.is_apex() || y.is_apex() {
        return Err(invalid("apex angle needs both points off the apex"));
    }
    comparison_angle(cone.kappa(), x.t, y.t, cone.distance(x, y)?)
}
