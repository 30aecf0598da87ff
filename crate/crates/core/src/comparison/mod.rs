//! Relative volume comparison about a base point, checked against the κ-cone
//! over the space of directions.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::ConeSpace;
use crate::dirspace::{sample_polar, sphere_area, DirectionSpace};
use crate::error::{ensure, Error, Result};
use crate::estimate::VolumeEstimate;
use crate::glue::GluedSpace;
use crate::mc;
use crate::quad::{adaptive_simpson, DEFAULT_TOLERANCE};
use crate::spaceform::Curvature;

mod partition;
mod rough;

pub use partition::{
    annulus_map, bilipschitz_bounds_check, bilipschitz_constant, homothety_volume_check, partition_sequence,
    riemann_sum_consistency, AnnulusMap, BiLipschitzReport, HomothetyReport, PartitionCheck, PartitionSequence,
    RiemannReport, RATIO_SLACK,
};
pub use rough::{geometric_eps, rough_volume_estimate, RoughRegion, RoughSample, RoughVolumeFit};

const RADIUS_SLACK: f64 = 1e-12;

/// Monte-Carlo rows pass when the margin is above −4σ.
pub const MC_SIGMAS: f64 = 4.0;

/// `r_inner < |px| < r_outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusSpec {
    pub r_inner: f64,
    pub r_outer: f64,
}

impl AnnulusSpec {
    pub fn new(r_inner: f64, r_outer: f64) -> Result<Self> {
        ensure(r_inner >= 0.0 && r_inner.is_finite(), || format!("inner radius must be ≥ 0, got {r_inner}"))?;
        ensure(r_outer > r_inner && r_outer.is_finite(), || {
            format!("outer radius {r_outer} must exceed inner radius {r_inner}")
        })?;
        Ok(Self { r_inner, r_outer })
    }

    pub fn ball(r: f64) -> Result<Self> {
        Self::new(0.0, r)
    }
}

/// vol(Σ)·∫ sn_κ^{dim Σ} over the annulus, i.e. the annulus in C_κ(Σ).
pub fn model_annulus_volume(sigma: &DirectionSpace, kappa: Curvature, spec: AnnulusSpec) -> Result<VolumeEstimate> {
    kappa.check_length(spec.r_outer, "outer radius")?;
    let total = sigma.volume()?;
    let m = sigma.dim() as i32;
    let q = adaptive_simpson(
        |t| kappa.sn_raw(t).max(0.0).powi(m),
        spec.r_inner,
        spec.r_outer,
        DEFAULT_TOLERANCE / total.max(1.0),
    );
    Ok(VolumeEstimate::quadrature(total * q.value, DEFAULT_TOLERANCE))
}

/// Draws distances from the base point, distributed as the volume measure.
pub type DistanceSampler<'a> = Box<dyn Fn(&mut mc::Rng) -> f64 + Sync + 'a>;

/// Spaces with known ball volumes about a base point: the apex of a cone or
/// gluing, or the pole of an analytic space.
pub trait PointedSpace: Sync {
    fn dim(&self) -> usize;

    /// Largest distance from the base point.
    fn max_radius(&self) -> f64;

    fn ball_volume(&self, r: f64) -> Result<VolumeEstimate>;

    fn annulus_volume(&self, spec: AnnulusSpec) -> Result<VolumeEstimate> {
        let outer = self.ball_volume(spec.r_outer)?;
        if spec.r_inner == 0.0 {
            return Ok(outer);
        }
        Ok(outer.minus(&self.ball_volume(spec.r_inner)?))
    }

    fn total_volume(&self) -> Result<f64> {
        Ok(self.ball_volume(self.max_radius())?.value)
    }

    /// Draws the distance to the base point of a point sampled from the
    /// normalized volume measure.
    fn base_distance_sampler(&self) -> Result<DistanceSampler<'_>>;
}

impl PointedSpace for ConeSpace {
    fn dim(&self) -> usize {
        ConeSpace::dim(self)
    }

    fn max_radius(&self) -> f64 {
        self.radius()
    }

    fn ball_volume(&self, r: f64) -> Result<VolumeEstimate> {
        ConeSpace::ball_volume(self, r)
    }

    fn annulus_volume(&self, spec: AnnulusSpec) -> Result<VolumeEstimate> {
        ConeSpace::annulus_volume(self, spec.r_inner, spec.r_outer)
    }

    fn base_distance_sampler(&self) -> Result<DistanceSampler<'_>> {
        let profile = self.radial_profile()?;
        Ok(Box::new(move |rng| profile.inverse(rng.gen::<f64>())))
    }
}

// Gluing only touches the boundary sphere, so distances from the apex and the
// volume measure are those of the cone.
impl PointedSpace for GluedSpace {
    fn dim(&self) -> usize {
        self.cone().dim()
    }

    fn max_radius(&self) -> f64 {
        self.cone().radius()
    }

    fn ball_volume(&self, r: f64) -> Result<VolumeEstimate> {
        self.cone().ball_volume(r)
    }

    fn annulus_volume(&self, spec: AnnulusSpec) -> Result<VolumeEstimate> {
        self.cone().annulus_volume(spec.r_inner, spec.r_outer)
    }

    fn base_distance_sampler(&self) -> Result<DistanceSampler<'_>> {
        self.cone().base_distance_sampler()
    }
}

/// Spaces with closed-form ball volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticSpace {
    /// The round `dim`-sphere of radius `radius`, based at a pole.
    RoundSphere { radius: f64, dim: usize },
}

impl AnalyticSpace {
    pub fn round_sphere(radius: f64, dim: usize) -> Result<Self> {
        ensure(radius > 0.0 && radius.is_finite(), || format!("sphere radius must be positive, got {radius}"))?;
        ensure(dim >= 1, || "sphere dimension must be at least 1".into())?;
        Ok(AnalyticSpace::RoundSphere { radius, dim })
    }

    /// Curvature of the space, which bounds it from below.
    pub fn curvature(&self) -> Curvature {
        match *self {
            AnalyticSpace::RoundSphere { radius, .. } => {
                Curvature::new(1.0 / (radius * radius)).expect("finite curvature")
            }
        }
    }

    /// Space of directions at the base point.
    pub fn directions(&self) -> DirectionSpace {
        match *self {
            AnalyticSpace::RoundSphere { dim, .. } => DirectionSpace::sphere(dim - 1),
        }
    }
}

impl PointedSpace for AnalyticSpace {
    fn dim(&self) -> usize {
        match *self {
            AnalyticSpace::RoundSphere { dim, .. } => dim,
        }
    }

    fn max_radius(&self) -> f64 {
        match *self {
            AnalyticSpace::RoundSphere { radius, .. } => PI * radius,
        }
    }

    fn ball_volume(&self, r: f64) -> Result<VolumeEstimate> {
        let rad = self.max_radius();
        ensure(r >= 0.0 && r <= rad * (1.0 + RADIUS_SLACK), || format!("r = {r} outside [0, {rad}]"))?;
        let r = r.min(rad);
        match *self {
            AnalyticSpace::RoundSphere { radius, dim } => match dim {
                1 => Ok(VolumeEstimate::closed_form(2.0 * r)),
                2 => {
                    // 1 − cos x = 2 sin²(x/2) keeps small balls accurate
                    let s = (0.5 * r / radius).sin();
                    Ok(VolumeEstimate::closed_form(4.0 * PI * radius * radius * s * s))
                }
                _ => {
                    let area = sphere_area(dim - 1);
                    let m = (dim - 1) as i32;
                    let q = adaptive_simpson(
                        |t| (radius * (t / radius).sin()).max(0.0).powi(m),
                        0.0,
                        r,
                        DEFAULT_TOLERANCE / area.max(1.0),
                    );
                    Ok(VolumeEstimate::quadrature(area * q.value, DEFAULT_TOLERANCE))
                }
            },
        }
    }

    fn base_distance_sampler(&self) -> Result<DistanceSampler<'_>> {
        match *self {
            AnalyticSpace::RoundSphere { radius, dim } => {
                Ok(Box::new(move |rng| radius * sample_polar(dim - 1, rng)))
            }
        }
    }
}

/// How volumes are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

/// Volume of the annulus about the base point.
pub fn space_annulus_volume<S: PointedSpace + ?Sized>(space: &S, spec: AnnulusSpec, method: Method) -> Result<VolumeEstimate> {
    let rad = space.max_radius();
    ensure(spec.r_outer <= rad * (1.0 + RADIUS_SLACK), || {
        format!("radius {} exceeds the space radius {rad}", spec.r_outer)
    })?;
    match method {
        Method::Exact => space.annulus_volume(spec),
        Method::MonteCarlo { samples, seed } => {
            ensure(samples > 0, || "sample count must be positive".into())?;
            let total = space.total_volume()?;
            let draw = space.base_distance_sampler()?;
            let hits = mc::count_hits(seed, samples, |rng| {
                let d = draw(rng);
                d > spec.r_inner && d < spec.r_outer
            });
            let (value, stderr) = mc::proportion_estimate(hits, samples, total);
            Ok(VolumeEstimate::monte_carlo(value, stderr, samples))
        }
    }
}

/// The three displayed comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioForm {
    /// vol A(R1, R3) / vol A(R2, R3)
    OuterAnnulus,
    /// vol A(R1, R2) / vol A(R2, R3)
    SplitAnnulus,
    /// vol B(R1) / vol B(R3)
    Ball,
}

impl RatioForm {
    pub const ALL: [RatioForm; 3] = [RatioForm::OuterAnnulus, RatioForm::SplitAnnulus, RatioForm::Ball];

    pub fn name(&self) -> &'static str {
        match self {
            RatioForm::OuterAnnulus => "outer_annulus",
            RatioForm::SplitAnnulus => "split_annulus",
            RatioForm::Ball => "ball",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub form: RatioForm,
    pub radii: [f64; 3],
    pub space_ratio: f64,
    pub model_ratio: f64,
    /// space ratio − model ratio
    pub margin: f64,
    pub method: &'static str,
    /// Propagated error of the margin (tolerance or one standard error).
    pub error: f64,
}

impl RatioRow {
    /// Margin ≥ −2·tolerance for exact rows, ≥ −4σ for Monte-Carlo rows.
    pub fn pass(&self) -> bool {
        let z = if self.method == "mc" { MC_SIGMAS } else { 2.0 };
        self.margin >= -(z * self.error + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmittedRow {
    pub form: RatioForm,
    pub radii: [f64; 3],
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub omitted: Vec<OmittedRow>,
}

impl RatioReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(RatioRow::pass)
    }

    pub fn min_margin(&self) -> f64 {
        self.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }
}

fn ratio(num: &VolumeEstimate, den: &VolumeEstimate) -> (f64, f64) {
    let q = num.value / den.value;
    let rel = num.error_value() / num.value.abs().max(f64::MIN_POSITIVE)
        + den.error_value() / den.value.abs().max(f64::MIN_POSITIVE);
    (q, q.abs() * rel)
}

/// The region volumes a report needs: B(R1), A(R1, R2), A(R2, R3).
fn pieces<S: PointedSpace + ?Sized>(space: &S, radii: [f64; 3], method: Method) -> Result<[VolumeEstimate; 3]> {
    let [r1, r2, r3] = radii;
    match method {
        Method::Exact => Ok([
            if r1 > 0.0 { space.ball_volume(r1)? } else { VolumeEstimate::closed_form(0.0) },
            space.annulus_volume(AnnulusSpec::new(r1, r2)?)?,
            space.annulus_volume(AnnulusSpec::new(r2, r3)?)?,
        ]),
        Method::MonteCarlo { samples, seed } => {
            ensure(samples > 0, || "sample count must be positive".into())?;
            let total = space.total_volume()?;
            let draw = space.base_distance_sampler()?;
            let bins = mc::count_bins(seed, samples, 3, |rng| {
                let d = draw(rng);
                if d < r1 {
                    Some(0)
                } else if d < r2 {
                    Some(1)
                } else if d < r3 {
                    Some(2)
                } else {
                    None
                }
            });
            let bins: [u64; 3] = bins.try_into().expect("three bins");
            Ok(bins.map(|h| {
                let (v, e) = mc::proportion_estimate(h, samples, total);
                VolumeEstimate::monte_carlo(v, e, samples)
            }))
        }
    }
}

fn sum(a: &VolumeEstimate, b: &VolumeEstimate) -> VolumeEstimate {
    a.minus(&b.scaled(-1.0))
}

/// Space ratios against the model cone over `sigma_p` for one radius triple.
pub fn bg_ratio_report<S: PointedSpace + ?Sized>(
    space: &S,
    radii: [f64; 3],
    sigma_p: &DirectionSpace,
    kappa: Curvature,
    method: Method,
) -> Result<RatioReport> {
    let [r1, r2, r3] = radii;
    ensure(0.0 <= r1 && r1 < r2 && r2 < r3, || format!("radii must satisfy 0 ≤ R1 < R2 < R3, got {r1}, {r2}, {r3}"))?;
    let rad = space.max_radius();
    ensure(r3 <= rad * (1.0 + RADIUS_SLACK), || format!("R3 = {r3} exceeds the space radius {rad}"))?;
    kappa.check_length(r3, "R3")?;
    let [b1, a12, a23] = pieces(space, radii, method)?;
    let model = |a: f64, b: f64| model_annulus_volume(sigma_p, kappa, AnnulusSpec::new(a, b)?);
    let (mb1, ma12, ma23) = (
        if r1 > 0.0 { model(0.0, r1)? } else { VolumeEstimate::closed_form(0.0) },
        model(r1, r2)?,
        model(r2, r3)?,
    );
    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    for form in RatioForm::ALL {
        let (num, den, mnum, mden) = match form {
            RatioForm::OuterAnnulus => (sum(&a12, &a23), a23, sum(&ma12, &ma23), ma23),
            RatioForm::SplitAnnulus => (a12, a23, ma12, ma23),
            RatioForm::Ball => {
                if r1 == 0.0 {
                    omitted.push(OmittedRow { form, radii, reason: "empty_inner_ball" });
                    continue;
                }
                (b1, sum(&sum(&b1, &a12), &a23), mb1, sum(&sum(&mb1, &ma12), &ma23))
            }
        };
        if den.value <= 0.0 || mden.value <= 0.0 {
            omitted.push(OmittedRow { form, radii, reason: "zero_denominator" });
            continue;
        }
        let (q, qe) = ratio(&num, &den);
        let (mq, mqe) = ratio(&mnum, &mden);
        rows.push(RatioRow {
            form,
            radii,
            space_ratio: q,
            model_ratio: mq,
            margin: q - mq,
            method: method.name(),
            error: qe + mqe,
        });
    }
    Ok(RatioReport { rows, omitted })
}

/// Reports for several radius triples, in parallel. Monte-Carlo seeds are
/// offset by the triple index.
pub fn bg_ratio_reports<S: PointedSpace + ?Sized>(
    space: &S,
    triples: &[[f64; 3]],
    sigma_p: &DirectionSpace,
    kappa: Curvature,
    method: Method,
) -> Result<Vec<RatioReport>> {
    triples
        .par_iter()
        .enumerate()
        .map(|(i, &radii)| {
            let m = match method {
                Method::MonteCarlo { samples, seed } => {
                    Method::MonteCarlo { samples, seed: seed.wrapping_add(i as u64) }
                }
                Method::Exact => Method::Exact,
            };
            bg_ratio_report(space, radii, sigma_p, kappa, m)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidityReport {
    /// vol(B_r) / vol(B̃_r)
    pub inner_ratio: f64,
    /// vol(B_R) / vol(B̃_R)
    pub outer_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// On the cone C^R_κ(Σ) itself both ball ratios against the model are 1.
/// The cone side goes through [`ConeSpace`], the model side through
/// [`model_annulus_volume`].
pub fn rigidity_equality_check(sigma: &DirectionSpace, kappa: Curvature, r: f64, big_r: f64) -> Result<RigidityReport> {
    ensure(0.0 < r && r < big_r, || format!("need 0 < r < R, got r = {r}, R = {big_r}"))?;
    let cone = ConeSpace::new(sigma.clone(), kappa, big_r)?;
    let (ci, co) = (cone.ball_volume(r)?, cone.ball_volume(big_r)?);
    let (mi, mo) = (
        model_annulus_volume(sigma, kappa, AnnulusSpec::ball(r)?)?,
        model_annulus_volume(sigma, kappa, AnnulusSpec::ball(big_r)?)?,
    );
    let (inner_ratio, ei) = ratio(&ci, &mi);
    let (outer_ratio, eo) = ratio(&co, &mo);
    let tolerance = 2.0 * ei.max(eo);
    let pass = (inner_ratio - 1.0).abs() <= tolerance && (outer_ratio - 1.0).abs() <= tolerance;
    Ok(RigidityReport { inner_ratio, outer_ratio, tolerance, pass })
}

/// `Err(Unsupported)` for spaces without a measure, otherwise `Ok(())`.
pub(crate) fn require_measure(sigma: &DirectionSpace) -> Result<()> {
    if sigma.has_measure() {
        Ok(())
    } else {
        Err(Error::UnsupportedMeasure(format!("{} has no measure", sigma.kind_name())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glue::{catalog_2d, Involution};
    use std::f64::consts::FRAC_PI_2;

    fn disk() -> ConeSpace {
        ConeSpace::new(DirectionSpace::circle(2.0 * PI).unwrap(), Curvature::FLAT, 1.0).unwrap()
    }

    #[test]
    fn model_annulus_examples() {
        let c = DirectionSpace::circle(2.0 * PI).unwrap();
        let v = model_annulus_volume(&c, Curvature::FLAT, AnnulusSpec::new(1.0, 2.0).unwrap()).unwrap();
        assert!((v.value - 3.0 * PI).abs() < 1e-9);
        // 2π·∫ sin over [π/2, π] = 2π
        let v = model_annulus_volume(&c, Curvature::SPHERICAL, AnnulusSpec::new(FRAC_PI_2, PI).unwrap()).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-9);
        let v = model_annulus_volume(&c, Curvature::FLAT, AnnulusSpec::new(1.0, 1.0 + 1e-12).unwrap()).unwrap();
        assert!(v.value.abs() < 1e-10);
        assert!(model_annulus_volume(&c, Curvature::SPHERICAL, AnnulusSpec::new(1.0, 4.0).unwrap()).is_err());
        assert!(AnnulusSpec::new(2.0, 1.0).is_err());
    }

    #[test]
    fn space_annulus_examples() {
        let v = space_annulus_volume(&disk(), AnnulusSpec::ball(1.0).unwrap(), Method::Exact).unwrap();
        assert!((v.value - PI).abs() < 1e-9);
        let s = AnalyticSpace::round_sphere(1.0, 2).unwrap();
        for r in [0.3, 1.0, 2.5, PI] {
            let v = space_annulus_volume(&s, AnnulusSpec::ball(r).unwrap(), Method::Exact).unwrap();
            assert!((v.value - 2.0 * PI * (1.0 - r.cos())).abs() < 1e-12);
        }
        let g = GluedSpace::new(disk(), Involution::AntipodalCircle).unwrap();
        let v = space_annulus_volume(&g, AnnulusSpec::ball(1.0).unwrap(), Method::Exact).unwrap();
        assert!((v.value - PI).abs() < 1e-9);
        let mc = space_annulus_volume(&g, AnnulusSpec::ball(0.5).unwrap(), Method::MonteCarlo { samples: 200_000, seed: 3 })
            .unwrap();
        assert!((mc.value - PI / 4.0).abs() < 4.0 * mc.error_value());
        assert!(space_annulus_volume(&g, AnnulusSpec::ball(1.5).unwrap(), Method::Exact).is_err());
    }

    #[test]
    fn higher_sphere_matches_quadrature_of_sine_power() {
        // vol B_r(S³) = 4π·(r/2 − sin 2r / 4)
        let s = AnalyticSpace::round_sphere(1.0, 3).unwrap();
        for r in [0.5, 1.5, PI] {
            let v = s.ball_volume(r).unwrap().value;
            assert!((v - 4.0 * PI * (r / 2.0 - (2.0 * r).sin() / 4.0)).abs() < 1e-9);
        }
        let mc = space_annulus_volume(&s, AnnulusSpec::new(0.5, 1.5).unwrap(), Method::MonteCarlo { samples: 300_000, seed: 1 })
            .unwrap();
        let exact = s.annulus_volume(AnnulusSpec::new(0.5, 1.5).unwrap()).unwrap().value;
        assert!((mc.value - exact).abs() < 4.0 * mc.error_value());
    }

    #[test]
    fn cones_compare_equal_to_their_model() {
        for (kappa, radius) in [(Curvature::FLAT, 2.0), (Curvature::SPHERICAL, FRAC_PI_2), (Curvature::HYPERBOLIC, 1.5)] {
            for (_, g) in catalog_2d(kappa, radius, PI).unwrap() {
                let rep = bg_ratio_report(&g, [0.2 * radius, 0.5 * radius, radius], g.cone().sigma(), kappa, Method::Exact)
                    .unwrap();
                assert_eq!(rep.rows.len(), 3);
                for row in &rep.rows {
                    assert!(row.margin.abs() <= 2e-9, "{row:?}");
                    assert!(row.pass());
                }
            }
        }
    }

    #[test]
    fn sphere_beats_flat_model() {
        let s = AnalyticSpace::round_sphere(1.0, 2).unwrap();
        let circle = DirectionSpace::circle(2.0 * PI).unwrap();
        let rep = bg_ratio_report(&s, [PI / 4.0, FRAC_PI_2, 3.0 * PI / 4.0], &circle, Curvature::FLAT, Method::Exact).unwrap();
        let ball = rep.rows.iter().find(|r| r.form == RatioForm::Ball).unwrap();
        let expect = (1.0 - (PI / 4.0).cos()) / (1.0 - (3.0 * PI / 4.0).cos());
        assert!((ball.space_ratio - expect).abs() < 1e-12);
        assert!((ball.model_ratio - 1.0 / 9.0).abs() < 1e-10);
        assert!(rep.pass() && rep.min_margin() > 0.0);

        let rep = bg_ratio_report(&s, [0.0, 1.0, 2.0], &circle, Curvature::FLAT, Method::Exact).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert_eq!(rep.omitted[0].reason, "empty_inner_ball");
    }

    #[test]
    fn monte_carlo_report_is_reproducible() {
        let s = AnalyticSpace::round_sphere(1.0, 2).unwrap();
        let circle = DirectionSpace::circle(2.0 * PI).unwrap();
        let m = Method::MonteCarlo { samples: 100_000, seed: 11 };
        let a = bg_ratio_reports(&s, &[[0.5, 1.0, 2.0], [1.0, 2.0, 3.0]], &circle, Curvature::FLAT, m).unwrap();
        let b = bg_ratio_reports(&s, &[[0.5, 1.0, 2.0], [1.0, 2.0, 3.0]], &circle, Curvature::FLAT, m).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.pass()));
        assert!(a[0].rows.iter().all(|r| r.method == "mc" && r.error > 0.0));
    }

    #[test]
    fn report_rejects_bad_radii() {
        let circle = DirectionSpace::circle(2.0 * PI).unwrap();
        assert!(bg_ratio_report(&disk(), [0.5, 0.4, 0.9], &circle, Curvature::FLAT, Method::Exact).is_err());
        assert!(bg_ratio_report(&disk(), [0.1, 0.4, 1.9], &circle, Curvature::FLAT, Method::Exact).is_err());
    }

    #[test]
    fn rigidity_examples() {
        let cases = [
            (DirectionSpace::circle(PI).unwrap(), Curvature::FLAT, 1.0, 2.0),
            (DirectionSpace::suspension(DirectionSpace::circle(2.0 * PI).unwrap()).unwrap(), Curvature::SPHERICAL, FRAC_PI_2, PI),
            (DirectionSpace::interval(FRAC_PI_2).unwrap(), Curvature::HYPERBOLIC, 0.5, 1.5),
        ];
        for (sigma, kappa, r, big_r) in cases {
            let rep = rigidity_equality_check(&sigma, kappa, r, big_r).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn cone_ratio_is_independent_of_directions() {
        // ball ratios of C_κ(Σ) depend only on dim Σ
        let a = ConeSpace::new(DirectionSpace::interval(0.7).unwrap(), Curvature::HYPERBOLIC, 2.0).unwrap();
        let b = ConeSpace::new(DirectionSpace::sphere(1), Curvature::HYPERBOLIC, 2.0).unwrap();
        let q = |c: &ConeSpace| c.ball_volume(2.0).unwrap().value / c.ball_volume(0.8).unwrap().value;
        assert!((q(&a) - q(&b)).abs() < 1e-9);
    }
}
