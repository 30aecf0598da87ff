//! The invariant battery behind `kcone lemma-suite`.
//!
//! Every check is a deterministic function of the seed and sample count, so
//! two runs with the same configuration give byte-identical reports.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::{
    bg_ratio_report, bilipschitz_bounds_check, geometric_eps, RATIO_SLACK, homothety_volume_check, partition_sequence,
    rigidity_equality_check, riemann_sum_consistency, rough_volume_estimate, AnalyticSpace, AnnulusMap, Method,
    RoughRegion,
};
use crate::cone::{base_angle_check, ConePoint, ConeSpace};
use crate::dirspace::{unit_ball_volume, DirPoint, DirectionSpace};
use crate::error::Result;
use crate::glue::{catalog_2d, involution_bilipschitz_property, involution_check, GluedSpace, Involution, PolygonGluing};
use crate::mc;
use crate::spaceform::{
    comparison_angle, cosine_law_side, half_chord_value, trig_inequality_margin, Curvature, Triangle, TrigInequality,
};
use crate::tube::{
    trapezoidal_ball_mc, trapezoidal_ball_volume, tube_volume_exact, tube_volume_expansion, union_volume_mc, BallChain,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Monte-Carlo samples per volume estimate.
    pub samples: u64,
    /// Sampled pairs per bi-Lipschitz configuration.
    pub pairs: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 20_240_611, samples: 1_000_000, pairs: 100_000 }
    }
}

/// One invariant: `observed` is compared against `limit` in the direction
/// given by `sense` (`"max"`: observed ≤ limit, `"min"`: observed ≥ limit).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub observed: f64,
    pub limit: f64,
    pub sense: &'static str,
    pub detail: String,
}

impl Check {
    fn at_most(name: &'static str, observed: f64, limit: f64, detail: String) -> Self {
        Self { name, pass: observed <= limit, observed, limit, sense: "max", detail }
    }

    fn at_least(name: &'static str, observed: f64, limit: f64, detail: String) -> Self {
        Self { name, pass: observed >= limit, observed, limit, sense: "min", detail }
    }

    fn failed(name: &'static str, err: crate::Error) -> Self {
        Self { name, pass: false, observed: f64::NAN, limit: f64::NAN, sense: "max", detail: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,pass,observed,limit,sense,method,error,detail\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{:?},{:?},{},check,{:?},\"{}\"\n",
                c.name,
                c.pass,
                c.observed,
                c.limit,
                c.sense,
                (c.observed - c.limit).abs(),
                c.detail.replace('"', "'")
            ));
        }
        out
    }
}

type CheckFn = fn(&SuiteConfig) -> Result<Check>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("cosine_law_monotone_symmetric", cosine_law_monotone),
    ("cosine_law_scaling", cosine_law_scaling),
    ("half_chord_identity", half_chord_identity),
    ("trig_inequality_1", |_| trig_case(TrigInequality::SinConcave)),
    ("trig_inequality_2", |_| trig_case(TrigInequality::SinhConvex)),
    ("trig_inequality_3", |_| trig_case(TrigInequality::SinRatio)),
    ("trig_inequality_4", |_| trig_case(TrigInequality::SinhRatio)),
    ("comparison_angle_inverse", comparison_angle_inverse),
    ("direction_diameter", direction_diameter),
    ("direction_volume", direction_volume),
    ("direction_net_covering", direction_net_covering),
    ("cone_ball_volume", cone_ball_volume),
    ("flat_cone_base_angles", flat_cone_base_angles),
    ("tube_two_ball_closed_form", tube_two_ball),
    ("tube_monte_carlo", tube_monte_carlo),
    ("tube_expansion_bound", tube_expansion),
    ("trapezoidal_half_ball", trapezoidal_half_ball),
    ("trapezoidal_monte_carlo", trapezoidal_monte_carlo),
    ("involution_isometry", involution_isometry),
    ("involution_distortion", involution_distortion),
    ("identity_gluing_exact", identity_gluing),
    ("antipodal_disk_distance", antipodal_disk),
    ("glued_radius", glued_radius),
    ("glued_volume", glued_volume),
    ("tetrahedron_distances", tetrahedron),
    ("model_self_comparison", model_self_comparison),
    ("cone_ratio_direction_independent", cone_ratio_independent),
    ("sphere_vs_flat_ball_ratio", sphere_vs_flat_grid),
    ("sphere_vs_flat_report", sphere_vs_flat_report),
    ("rigidity_equality", rigidity),
    ("partition_sequence", partition),
    ("partition_flat_geometric", partition_flat),
    ("annulus_map_scaling", annulus_map_scaling),
    ("bilipschitz_bounds", bilipschitz),
    ("bilipschitz_flat_exact", bilipschitz_flat),
    ("homothety_volume", homothety),
    ("riemann_sum_order", riemann_order),
    ("riemann_i2_matches_i1", riemann_spherical),
    ("rough_volume_square", |c| rough(c, RoughRegion::unit_square(), 2.0, 0.1, (0.004, 0.04))),
    ("rough_volume_disk", |c| rough(c, RoughRegion::disk(1.0), 2.0, 0.1, (0.004, 0.04))),
    ("rough_volume_interval", |c| rough(c, RoughRegion::segment(1.0), 1.0, 0.05, (0.001, 0.01))),
];

/// Names of every check, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs the whole battery; checks run in parallel, results keep their order.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let checks: Vec<Check> = CHECKS
        .par_iter()
        .map(|(name, f)| match f(config) {
            Ok(mut c) => {
                c.name = name;
                c
            }
            Err(e) => Check::failed(name, e),
        })
        .collect();
    SuiteReport { config: *config, pass: checks.iter().all(|c| c.pass), checks }
}

const KAPPAS: [Curvature; 3] = [Curvature::HYPERBOLIC, Curvature::FLAT, Curvature::SPHERICAL];

fn side_limit(kappa: Curvature) -> f64 {
    if kappa.value() > 0.0 { FRAC_PI_2 } else { 3.0 }
}

fn cosine_law_monotone(_: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for kappa in KAPPAS {
        let top = side_limit(kappa);
        for i in 0..=20 {
            for j in 0..=20 {
                let (s, t) = (top * i as f64 / 20.0, top * j as f64 / 20.0);
                let mut last = 0.0;
                for k in 0..=64 {
                    let theta = PI * k as f64 / 64.0;
                    let d = cosine_law_side(kappa, s, t, theta)?;
                    let swapped = cosine_law_side(kappa, t, s, theta)?;
                    worst = worst.max(last - d).max((d - swapped).abs());
                    last = d;
                }
            }
        }
    }
    Ok(Check::at_most("", worst, 1e-12, "largest decrease in θ or asymmetry over a 21×21×65 grid per κ".into()))
}

fn cosine_law_scaling(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 1);
    let mut worst: f64 = 0.0;
    for k in [-4.0, -0.25, 0.25, 4.0] {
        let kappa = Curvature::new(k)?;
        let unit = Curvature::new(f64::signum(k))?;
        let root = f64::sqrt(k.abs());
        for _ in 0..2000 {
            let limit = if k > 0.0 { FRAC_PI_2 / root } else { 2.0 };
            let (s, t, theta) = (limit * rng.gen::<f64>(), limit * rng.gen::<f64>(), PI * rng.gen::<f64>());
            let d = cosine_law_side(kappa, s, t, theta)?;
            let scaled = cosine_law_side(unit, root * s, root * t, theta)? / root;
            worst = worst.max((d - scaled).abs() / d.max(1e-300));
        }
    }
    Ok(Check::at_most("", worst, 1e-12, "relative deviation from the rescaled unit-curvature law".into()))
}

fn half_chord_identity(c: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (i, kappa) in KAPPAS.into_iter().enumerate() {
        let mut rng = mc::stream_rng(c.seed, 10 + i as u64);
        let top = side_limit(kappa);
        for _ in 0..10_000 {
            let tri = Triangle::new(top * rng.gen::<f64>(), top * rng.gen::<f64>(), PI * rng.gen::<f64>());
            let h = half_chord_value(kappa, &tri)?;
            let d = cosine_law_side(kappa, tri.side_a, tri.side_b, tri.angle)?;
            let sn = kappa.sn(0.5 * d)?;
            worst = worst.max((h - sn * sn).abs() / h.max(1e-300));
        }
    }
    Ok(Check::at_most("", worst, 1e-12, "relative gap on 10⁴ random triangles per κ".into()))
}

fn trig_case(case: TrigInequality) -> Result<Check> {
    let n = 100;
    let mut worst = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            let (lambda, x) = match case {
                TrigInequality::SinConcave => (u, PI * v),
                TrigInequality::SinhConvex => (u, 5.0 * v),
                TrigInequality::SinRatio => {
                    let x = 3.1 * v;
                    let top = if x > 0.0 { (PI / x).min(3.0) } else { 3.0 };
                    (top * u, x)
                }
                TrigInequality::SinhRatio => (3.0 * u, 5.0 * v),
            };
            worst = worst.min(trig_inequality_margin(case, lambda, x)?);
        }
    }
    Ok(Check::at_least("", worst, -1e-12, format!("smallest margin on a {n}×{n} grid")))
}

fn comparison_angle_inverse(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 2);
    let mut worst: f64 = 0.0;
    for kappa in KAPPAS {
        let top = side_limit(kappa);
        for _ in 0..5000 {
            let (a, b) = (top * (0.01 + 0.99 * rng.gen::<f64>()), top * (0.01 + 0.99 * rng.gen::<f64>()));
            let theta = 1e-3 + (PI - 2e-3) * rng.gen::<f64>();
            let side = cosine_law_side(kappa, a, b, theta)?;
            let back = comparison_angle(kappa, a, b, side)?;
            let again = cosine_law_side(kappa, a, b, back)?;
            worst = worst.max((back - theta).abs()).max((again - side).abs());
        }
    }
    Ok(Check::at_most("", worst, 1e-10, "angle and side round trips".into()))
}

fn direction_catalog() -> Result<Vec<DirectionSpace>> {
    Ok(vec![
        DirectionSpace::sphere(1),
        DirectionSpace::sphere(2),
        DirectionSpace::circle(2.0 * PI)?,
        DirectionSpace::circle(PI)?,
        DirectionSpace::interval(FRAC_PI_2)?,
        DirectionSpace::interval(PI)?,
        DirectionSpace::suspension(DirectionSpace::circle(2.0 * PI)?)?,
        DirectionSpace::suspension(DirectionSpace::interval(1.0)?)?,
    ])
}

fn direction_diameter(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 3);
    let mut worst: f64 = 0.0;
    for sigma in direction_catalog()? {
        for _ in 0..2000 {
            let (u, v) = (sigma.sample(&mut rng)?, sigma.sample(&mut rng)?);
            worst = worst.max(sigma.distance(&u, &v)?);
        }
    }
    Ok(Check::at_most("", worst, PI + 1e-12, "largest sampled distance".into()))
}

fn direction_volume(_: &SuiteConfig) -> Result<Check> {
    let cases = [
        (DirectionSpace::circle(2.0 * PI)?, 2.0 * PI),
        (DirectionSpace::interval(PI / 3.0)?, PI / 3.0),
        (DirectionSpace::suspension(DirectionSpace::circle(2.0 * PI)?)?, 4.0 * PI),
        (DirectionSpace::sphere(2), 4.0 * PI),
    ];
    let worst = cases.iter().map(|(s, v)| s.volume().map(|x| (x - v).abs())).collect::<Result<Vec<_>>>()?;
    Ok(Check::at_most("", worst.into_iter().fold(0.0, f64::max), 1e-12, "against closed-form measures".into()))
}

fn direction_net_covering(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 4);
    let eps = 0.2;
    let mut worst: f64 = 0.0;
    for sigma in direction_catalog()? {
        let net = sigma.net(eps)?;
        for _ in 0..500 {
            let p = sigma.sample(&mut rng)?;
            let gap = net.iter().map(|q| sigma.distance_unchecked(&p, q)).fold(f64::INFINITY, f64::min);
            worst = worst.max(gap);
        }
    }
    Ok(Check::at_most("", worst, eps, "sampled covering radius of 0.2-nets".into()))
}

fn cone_ball_volume(_: &SuiteConfig) -> Result<Check> {
    let circle = DirectionSpace::circle(2.0 * PI)?;
    let disk = ConeSpace::new(circle.clone(), Curvature::FLAT, 1.0)?.ball_volume(1.0)?.value;
    let sphere = ConeSpace::new(circle, Curvature::SPHERICAL, PI)?.ball_volume(PI)?.value;
    let worst = (disk - PI).abs().max((sphere - 4.0 * PI).abs());
    Ok(Check::at_most("", worst, 1e-9, format!("flat disk {disk}, κ = 1 suspension {sphere}")))
}

fn flat_cone_base_angles(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 5);
    let mut worst: f64 = 0.0;
    for length in [2.0 * PI, PI, 1.0] {
        let cone = ConeSpace::new(DirectionSpace::circle(length)?, Curvature::FLAT, 2.0)?;
        let mut done = 0;
        while done < 50 {
            let a = ConePoint::new(DirPoint::Angle(length * rng.gen::<f64>()), 0.2 + 1.8 * rng.gen::<f64>());
            let b = ConePoint::new(DirPoint::Angle(length * rng.gen::<f64>()), 0.2 + 1.8 * rng.gen::<f64>());
            match base_angle_check(&cone, &a, &b, 1e-4) {
                Ok(r) => {
                    worst = worst.max(r.margin);
                    done += 1;
                }
                Err(crate::Error::Unsupported(_)) | Err(crate::Error::InvalidArgument(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Check::at_most("", worst, 1e-6, "developed base angle against the flat comparison angle".into()))
}

fn tube_two_ball(_: &SuiteConfig) -> Result<Check> {
    let v = tube_volume_exact(&BallChain::new(2, 1.0, vec![1.0])?);
    let expect = 4.0 * PI / 3.0 + 3f64.sqrt() / 2.0;
    Ok(Check::at_most("", (v - expect).abs(), 1e-9, format!("two unit disks at distance 1: {v}")))
}

fn tube_monte_carlo(c: &SuiteConfig) -> Result<Check> {
    let chain = BallChain::new(2, 1.0, vec![1.0])?;
    let mc = union_volume_mc(2, 1.0, &chain.collinear_centers(), c.samples, c.seed)?;
    let z = (mc.value - tube_volume_exact(&chain)).abs() / mc.error_value();
    Ok(Check::at_most("", z, 4.0, format!("Monte-Carlo {} ± {}", mc.value, mc.error_value())))
}

fn tube_expansion(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 6);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 3;
        let eps = 0.2 + 0.6 * rng.gen::<f64>();
        let gaps: Vec<f64> = (0..1 + k % 5).map(|_| eps * eps * rng.gen::<f64>()).collect();
        let chain = BallChain::new(n, eps, gaps)?;
        let e = tube_volume_expansion(&chain)?;
        worst = worst.max((tube_volume_exact(&chain) - e.value).abs() / e.bound);
    }
    Ok(Check::at_most("", worst, 1.0, "largest error as a fraction of the bound over 20 chains".into()))
}

fn trapezoidal_half_ball(_: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for r in [0.5, 1.0, 1.7] {
            let half = 0.5 * unit_ball_volume(n) * f64::powi(r, n as i32);
            worst = worst.max((trapezoidal_ball_volume(n, r, r)? - half).abs());
        }
    }
    Ok(Check::at_most("", worst, 1e-9, "h = r against half the ball, n = 2..6".into()))
}

fn trapezoidal_monte_carlo(c: &SuiteConfig) -> Result<Check> {
    let exact = trapezoidal_ball_volume(2, 1.0, 0.5)?;
    let mc = trapezoidal_ball_mc(2, 1.0, 0.5, c.samples, c.seed)?;
    let z = (mc.value - exact).abs() / mc.error_value();
    Ok(Check::at_most("", z, 4.0, format!("n = 2, h = r/2: {exact} vs {} ± {}", mc.value, mc.error_value())))
}

fn involution_catalog() -> Result<Vec<(Involution, DirectionSpace)>> {
    Ok(vec![
        (Involution::ReflectionCircle { axis: 0.4 }, DirectionSpace::circle(2.0 * PI)?),
        (Involution::AntipodalCircle, DirectionSpace::circle(PI)?),
        (Involution::ReflectionSphere { normal: vec![1.0, 2.0, 0.5] }, DirectionSpace::sphere(2)),
        (Involution::AntipodalSphere, DirectionSpace::sphere(2)),
        (Involution::IntervalReflection, DirectionSpace::interval(1.0)?),
    ])
}

fn involution_isometry(c: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (phi, sigma) in involution_catalog()? {
        let r = involution_check(&phi, &sigma, 2000, 1e-12, c.seed)?;
        worst = worst.max(r.max_displacement).max(r.max_isometry_defect);
    }
    Ok(Check::at_most("", worst, 1e-12, "φ∘φ displacement and isometry defect".into()))
}

fn involution_distortion(c: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (phi, sigma) in involution_catalog()? {
        let r = involution_bilipschitz_property(&phi, &sigma, Curvature::FLAT, 1.0, 2000, c.seed)?;
        worst = worst.max(r.envelope_usage);
    }
    Ok(Check::at_most("", worst, 1.0, "defect / (20·|xy|) on close boundary pairs".into()))
}

fn flat_disk(phi: Involution) -> Result<GluedSpace> {
    GluedSpace::new(ConeSpace::new(DirectionSpace::circle(2.0 * PI)?, Curvature::FLAT, 1.0)?, phi)
}

fn identity_gluing(c: &SuiteConfig) -> Result<Check> {
    let g = flat_disk(Involution::Identity)?;
    let mut rng = mc::stream_rng(c.seed, 7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (x, y) = (g.cone().sample(&mut rng)?, g.cone().sample(&mut rng)?);
        worst = worst.max((g.distance(&x, &y, 0.1)?.value - g.cone().distance(&x, &y)?).abs());
    }
    Ok(Check::at_most("", worst, 0.0, "identity gluing against the cone metric".into()))
}

fn antipodal_disk(_: &SuiteConfig) -> Result<Check> {
    let g = flat_disk(Involution::AntipodalCircle)?;
    let x = ConePoint::new(DirPoint::Angle(0.0), 0.9);
    let y = ConePoint::new(DirPoint::Angle(PI), 0.9);
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for eps in [0.1, 0.05, 0.025] {
        let d = g.distance(&x, &y, eps)?.value;
        worst = worst.max((d - 0.2).abs() / (3.0 * eps));
        detail.push_str(&format!("ε = {eps}: {d}; "));
    }
    Ok(Check::at_most("", worst, 1.0, detail.trim_end_matches("; ").into()))
}

fn glued_radius(_: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for theta in [FRAC_PI_2, PI] {
        for (_, g) in catalog_2d(Curvature::FLAT, 1.0, theta)? {
            let r = g.radius_report(0.05)?;
            worst = worst.max((r.value - 1.0).abs() / r.error_bound.max(1e-12));
        }
    }
    Ok(Check::at_most("", worst, 1.0, "apex radius error as a fraction of the graph bound".into()))
}

fn glued_volume(c: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (_, g) in catalog_2d(Curvature::FLAT, 1.0, PI)? {
        let v = g.volume()?.value;
        let cone = g.cone().ball_volume(1.0)?.value;
        if v != cone {
            worst = f64::INFINITY;
        }
        let mc = g.cone().ball_volume_mc(0.6, c.samples, c.seed)?;
        let exact = g.cone().ball_volume(0.6)?.value;
        worst = worst.max((mc.value - exact).abs() / mc.error_value());
    }
    Ok(Check::at_most("", worst, 4.0, "glued volume equals the cone volume; Monte-Carlo z-score".into()))
}

fn tetrahedron(_: &SuiteConfig) -> Result<Check> {
    let p = PolygonGluing::new(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]])?;
    let v = p.vertices().to_vec();
    let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let mut worst: f64 = 0.0;
    for eps in [0.1, 0.05] {
        let mm = p.distance(mid(v[0], v[1]), mid(v[1], v[2]), eps)?.value;
        let vm = p.distance(v[2], mid(v[0], v[1]), eps)?.value;
        worst = worst.max((mm - 1.0).abs() / (2.0 * eps)).max((vm - 1.0).abs() / (3.0 * eps));
    }
    Ok(Check::at_most("", worst, 1.0, "midpoint and vertex distances in units of their allowance".into()))
}

fn model_self_comparison(_: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (kappa, radius) in [(Curvature::FLAT, 2.0), (Curvature::SPHERICAL, FRAC_PI_2), (Curvature::HYPERBOLIC, 1.5)] {
        for theta in [FRAC_PI_2, PI] {
            for (_, g) in catalog_2d(kappa, radius, theta)? {
                for radii in [[0.0, 0.4, 1.0], [0.2, 0.5, 1.0], [0.1, 0.8, 0.9]] {
                    let radii = radii.map(|x| x * radius);
                    let rep = bg_ratio_report(&g, radii, g.cone().sigma(), kappa, Method::Exact)?;
                    worst = worst.max(rep.rows.iter().map(|r| r.margin.abs()).fold(0.0, f64::max));
                }
            }
        }
    }
    Ok(Check::at_most("", worst, 2e-9, "|margin| of every catalog cone against its own model".into()))
}

fn cone_ratio_independent(_: &SuiteConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for kappa in KAPPAS {
        let big = if kappa.value() > 0.0 { 2.5 } else { 2.0 };
        let model = ConeSpace::new(DirectionSpace::sphere(1), kappa, big)?;
        let q = |c: &ConeSpace| -> Result<f64> { Ok(c.ball_volume(big)?.value / c.ball_volume(0.7)?.value) };
        let reference = q(&model)?;
        for sigma in [DirectionSpace::circle(PI)?, DirectionSpace::interval(1.0)?] {
            worst = worst.max((q(&ConeSpace::new(sigma, kappa, big)?)? - reference).abs() / reference);
        }
    }
    Ok(Check::at_most("", worst, 1e-9, "cone ball ratio against the space-form ratio".into()))
}

fn radius_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| PI * i as f64 / n as f64).collect()
}

fn sphere_vs_flat_grid(_: &SuiteConfig) -> Result<Check> {
    let grid = radius_grid(100);
    let mut worst = f64::INFINITY;
    for (i, &r1) in grid.iter().enumerate() {
        for &r3 in &grid[i + 1..] {
            let lhs = (1.0 - r1.cos()) / (1.0 - r3.cos());
            worst = worst.min(lhs - (r1 / r3).powi(2));
        }
    }
    Ok(Check::at_least("", worst, 0.0, "(1 − cos R1)/(1 − cos R3) − (R1/R3)² on a 100-point grid".into()))
}

fn sphere_vs_flat_report(_: &SuiteConfig) -> Result<Check> {
    let s = AnalyticSpace::round_sphere(1.0, 2)?;
    let circle = DirectionSpace::circle(2.0 * PI)?;
    let grid = radius_grid(10);
    let mut worst = f64::INFINITY;
    let mut triples = 0;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            for k in j + 1..grid.len() {
                let rep = bg_ratio_report(&s, [grid[i], grid[j], grid[k]], &circle, Curvature::FLAT, Method::Exact)?;
                worst = worst.min(rep.min_margin());
                triples += 1;
            }
        }
    }
    Ok(Check::at_least("", worst, 0.0, format!("smallest margin over {triples} radius triples")))
}

fn rigidity(_: &SuiteConfig) -> Result<Check> {
    let cases = [
        (DirectionSpace::circle(PI)?, Curvature::FLAT, 1.0, 2.0),
        (DirectionSpace::suspension(DirectionSpace::circle(2.0 * PI)?)?, Curvature::SPHERICAL, FRAC_PI_2, PI),
        (DirectionSpace::interval(FRAC_PI_2)?, Curvature::HYPERBOLIC, 0.5, 1.5),
    ];
    let mut worst: f64 = 0.0;
    for (sigma, kappa, r, big) in cases {
        let rep = rigidity_equality_check(&sigma, kappa, r, big)?;
        worst = worst.max((rep.inner_ratio - 1.0).abs()).max((rep.outer_ratio - 1.0).abs());
    }
    Ok(Check::at_most("", worst, 1e-9, "ball ratios against the model on the cone itself".into()))
}

fn partition(_: &SuiteConfig) -> Result<Check> {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for kappa in KAPPAS {
        for delta in [1e-2, 1e-3] {
            let c = partition_sequence(kappa, 1.0, delta, 0.0)?.check();
            ok &= c.strictly_decreasing && c.positive;
            worst = worst.min(c.envelope_margin);
        }
    }
    let observed = if ok { worst } else { f64::NEG_INFINITY };
    Ok(Check::at_least("", observed, -4.0 * f64::EPSILON, "smallest envelope − a_{i+1}/a_i; decrease and positivity".into()))
}

fn partition_flat(_: &SuiteConfig) -> Result<Check> {
    let s = partition_sequence(Curvature::FLAT, 1.0, 0.01, 0.0)?;
    let mut expect = 1.0;
    let mut worst: f64 = 0.0;
    for &a in &s.a {
        worst = worst.max((a - expect).abs());
        expect *= 0.99;
    }
    Ok(Check::at_most("", worst, 0.0, format!("{} terms against the iterated product (1 − δ/r)^i", s.a.len())))
}

fn annulus_map_scaling(c: &SuiteConfig) -> Result<Check> {
    let mut rng = mc::stream_rng(c.seed, 8);
    let mut worst: f64 = 0.0;
    for kappa in KAPPAS {
        let m = AnnulusMap::new(kappa, 0.5, 1.0, 0.05)?;
        for _ in 0..1000 {
            let (a, b) = (1.0 - 0.05 * rng.gen::<f64>(), 1.0 - 0.05 * rng.gen::<f64>());
            let gap = m.apply_radius(a)? - m.apply_radius(b)?;
            worst = worst.max((gap - m.lambda * (a - b)).abs());
        }
    }
    Ok(Check::at_most("", worst, 1e-15, "|(t'x − t'y) − λ(tx − ty)|".into()))
}

const BILIPSCHITZ_CONFIGS: [(f64, f64, f64); 3] = [(0.5, 1.0, 0.01), (0.3, 0.8, 0.005), (1.0, 1.5, 0.02)];

fn bilipschitz(c: &SuiteConfig) -> Result<Check> {
    let sigma = DirectionSpace::circle(2.0 * PI)?;
    let mut worst = f64::INFINITY;
    for (i, kappa) in KAPPAS.into_iter().enumerate() {
        for (j, &(r, big, delta)) in BILIPSCHITZ_CONFIGS.iter().enumerate() {
            let rep = bilipschitz_bounds_check(&sigma, kappa, r, big, delta, c.pairs, c.seed + (3 * i + j) as u64)?;
            // relative room left inside [cλ, λ/c]
            worst = worst.min((rep.min_ratio / rep.lower - 1.0).min(1.0 - rep.max_ratio / rep.upper));
        }
    }
    Ok(Check::at_least("", worst, -RATIO_SLACK, "relative slack inside [cλ, λ/c] over all sampled pairs".into()))
}

fn bilipschitz_flat(c: &SuiteConfig) -> Result<Check> {
    let sigma = DirectionSpace::sphere(2);
    let mut worst: f64 = 0.0;
    for &(r, big, delta) in &BILIPSCHITZ_CONFIGS {
        let rep = bilipschitz_bounds_check(&sigma, Curvature::FLAT, r, big, delta, c.pairs / 4, c.seed)?;
        let lambda = r / big;
        worst = worst.max((rep.min_ratio / lambda - 1.0).abs()).max((rep.max_ratio / lambda - 1.0).abs());
    }
    Ok(Check::at_most("", worst, 1e-14, "flat ratio against r/R".into()))
}

fn homothety(c: &SuiteConfig) -> Result<Check> {
    let rep = homothety_volume_check(&DirectionSpace::circle(2.0 * PI)?, 0.5, 1.0, 0.1, c.samples, c.seed)?;
    Ok(Check::at_most("", rep.z_score, 4.0, format!("image {} vs λⁿ·domain {}", rep.image.value, rep.predicted)))
}

fn riemann_order(_: &SuiteConfig) -> Result<Check> {
    let cases = [
        (DirectionSpace::circle(2.0 * PI)?, Curvature::FLAT, 0.0, 1.0, 2.0),
        (DirectionSpace::sphere(2), Curvature::SPHERICAL, 0.3, 1.0, 2.5),
        (DirectionSpace::circle(PI)?, Curvature::HYPERBOLIC, 0.2, 0.7, 1.8),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut detail = String::new();
    for (sigma, kappa, r1, r2, r3) in cases {
        let coarse = riemann_sum_consistency(&sigma, kappa, r1, r2, r3, 0.02)?;
        let fine = riemann_sum_consistency(&sigma, kappa, r1, r2, r3, 0.01)?;
        let q = coarse.residual / fine.residual;
        // distance outside [1.5, 3]
        worst = worst.max((1.5 - q).max(q - 3.0));
        detail.push_str(&format!("{q:.4} "));
    }
    Ok(Check::at_most("", worst, 0.0, format!("residual ratios under halving δ: {}", detail.trim_end())))
}

fn riemann_spherical(_: &SuiteConfig) -> Result<Check> {
    let rep = riemann_sum_consistency(&DirectionSpace::sphere(1), Curvature::SPHERICAL, 0.4, 1.2, 2.8, 0.01)?;
    Ok(Check::at_most("", (rep.i1 - rep.i2).abs(), 1e-9, "log annulus ratio against log ∫ sn ratio".into()))
}

fn rough(c: &SuiteConfig, region: RoughRegion, exponent: f64, tol: f64, range: (f64, f64)) -> Result<Check> {
    let fit = rough_volume_estimate(&region, &geometric_eps(range.0, range.1, 6), c.seed)?;
    let exp_miss = (fit.exponent - exponent).abs() / tol;
    let flat_miss = fit.flatness / 0.1;
    Ok(Check::at_most(
        "",
        exp_miss.max(flat_miss),
        1.0,
        format!("exponent {:.4}, flatness {:.4}, empirical constant {:.4}", fit.exponent, fit.flatness, fit.empirical_c),
    ))
}
