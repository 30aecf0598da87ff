//! End-to-end acceptance checks, one test per criterion.
//!
//! Reference values come from oracles written here (embeddings, closed
//! forms, direct summation), not from the library code under test.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

use kcone::comparison::{
    bg_ratio_report, bilipschitz_bounds_check, bilipschitz_constant, geometric_eps, partition_sequence,
    riemann_sum_consistency, rough_volume_estimate, space_annulus_volume, AnalyticSpace, AnnulusSpec, Method,
    PointedSpace, RoughRegion,
};
use kcone::glue::catalog_2d;
use kcone::spaceform::{trig_inequality_margin, TrigInequality};
use kcone::tube::{
    trapezoidal_ball_mc, trapezoidal_ball_volume, tube_volume_exact, tube_volume_expansion, union_volume_mc, BallChain,
};
use kcone::{half_chord_value, ConePoint, ConeSpace, Curvature, DirPoint, DirectionSpace, PolygonGluing, Triangle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn circle() -> DirectionSpace {
    DirectionSpace::circle(2.0 * PI).unwrap()
}

/// Volume of the Euclidean unit n-ball by the recursion V_n = 2π/n · V_{n−2}.
fn unit_ball(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball(n - 2),
    }
}

#[test]
fn c01_cone_volume_exactness() {
    let flat = ConeSpace::new(circle(), Curvature::FLAT, 1.0).unwrap();
    let round = ConeSpace::new(circle(), Curvature::SPHERICAL, PI).unwrap();
    let disk = flat.ball_volume(1.0).unwrap().value;
    let sphere = round.ball_volume(PI).unwrap().value;
    assert!((disk - PI).abs() <= 1e-9, "flat disk {disk}");
    assert!((sphere - 4.0 * PI).abs() <= 1e-9, "round sphere {sphere}");
}

/// Area of the union of two unit disks whose centers are `d` apart, from the
/// circular-segment formula.
fn two_unit_disks(d: f64) -> f64 {
    let half_angle = (d / 2.0).acos();
    let segment = half_angle - half_angle.sin() * half_angle.cos();
    2.0 * PI - 2.0 * segment
}

#[test]
fn c02_tube_formula() {
    let chain = BallChain::new(2, 1.0, vec![1.0]).unwrap();
    let exact = tube_volume_exact(&chain);
    let closed = 4.0 * PI / 3.0 + 3f64.sqrt() / 2.0;
    assert!((two_unit_disks(1.0) - closed).abs() < 1e-14);
    assert!((exact - closed).abs() <= 1e-9, "exact {exact} vs {closed}");

    let mc = union_volume_mc(2, 1.0, &chain.collinear_centers(), 10_000_000, SEED).unwrap();
    let z = (mc.value - closed).abs() / mc.error_value();
    assert!(z <= 4.0, "Monte-Carlo {} ± {} is {z}σ off", mc.value, mc.error_value());

    let mut r = rng(2);
    for k in 0..20 {
        let n = 2 + k % 4;
        let eps: f64 = r.gen_range(0.1..0.9);
        let gaps: Vec<f64> = (0..r.gen_range(1..6)).map(|_| eps * eps * r.gen_range(0.0..1.0)).collect();
        let chain = BallChain::new(n, eps, gaps.clone()).unwrap();
        let expansion = tube_volume_expansion(&chain).unwrap();
        let err = (tube_volume_exact(&chain) - expansion.value).abs();
        assert!(err <= expansion.bound, "chain {k}: n = {n}, ε = {eps}, gaps {gaps:?}: {err} > {}", expansion.bound);
    }
}

#[test]
fn c03_trapezoidal_ball() {
    for n in 2..=6 {
        for r in [0.5f64, 1.0, 2.0] {
            let half = 0.5 * unit_ball(n) * r.powi(n as i32);
            let v = trapezoidal_ball_volume(n, r, r).unwrap();
            assert!((v - half).abs() <= 1e-9, "n = {n}, r = {r}: {v} vs {half}");
        }
    }
    // n = 2, h = r/2: a disk minus the cap beyond height r/2
    let cap = PI / 3.0 - 3f64.sqrt() / 4.0;
    let expect = PI / 2.0 - cap;
    let exact = trapezoidal_ball_volume(2, 1.0, 0.5).unwrap();
    assert!((exact - expect).abs() <= 1e-9, "{exact} vs {expect}");
    let mc = trapezoidal_ball_mc(2, 1.0, 0.5, 2_000_000, SEED).unwrap();
    let z = (mc.value - expect).abs() / mc.error_value();
    assert!(z <= 4.0, "Monte-Carlo {} ± {} is {z}σ off", mc.value, mc.error_value());
}

/// Distance in the model plane through an embedding: the unit sphere in ℝ³,
/// the plane, or the hyperboloid in Minkowski space.
fn embedded_distance(kappa: f64, a: f64, b: f64, theta: f64) -> f64 {
    if kappa > 0.0 {
        let x = [a.sin(), 0.0, a.cos()];
        let y = [b.sin() * theta.cos(), b.sin() * theta.sin(), b.cos()];
        let dot: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
        let cross = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
        cross.iter().map(|c| c * c).sum::<f64>().sqrt().atan2(dot)
    } else if kappa == 0.0 {
        let (dx, dy) = (a - b * theta.cos(), -b * theta.sin());
        dx.hypot(dy)
    } else {
        let x = [a.cosh(), a.sinh(), 0.0];
        let y = [b.cosh(), b.sinh() * theta.cos(), b.sinh() * theta.sin()];
        let inner = x[0] * y[0] - x[1] * y[1] - x[2] * y[2];
        inner.max(1.0).acosh()
    }
}

fn oracle_sn(kappa: f64, t: f64) -> f64 {
    if kappa > 0.0 {
        t.sin()
    } else if kappa == 0.0 {
        t
    } else {
        t.sinh()
    }
}

#[test]
fn c04_trig_battery() {
    let n = 100;
    for case in [TrigInequality::SinConcave, TrigInequality::SinhConvex, TrigInequality::SinRatio, TrigInequality::SinhRatio] {
        let mut worst = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
                let (lambda, x) = match case {
                    TrigInequality::SinConcave => (u, PI * v),
                    TrigInequality::SinhConvex => (u, 6.0 * v),
                    TrigInequality::SinRatio => {
                        let x = 3.1 * v;
                        (if x > 0.0 { (PI / x).min(4.0) } else { 4.0 } * u, x)
                    }
                    TrigInequality::SinhRatio => (4.0 * u, 6.0 * v),
                };
                worst = worst.min(trig_inequality_margin(case, lambda, x).unwrap());
            }
        }
        assert!(worst >= -1e-12, "{case:?}: margin {worst}");
    }

    for kappa in [-1.0, 0.0, 1.0] {
        let k = Curvature::new(kappa).unwrap();
        let top = if kappa > 0.0 { FRAC_PI_2 } else { 3.0 };
        let mut r = rng(4 + (kappa + 1.0) as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let (a, b, theta) = (top * r.gen::<f64>(), top * r.gen::<f64>(), PI * r.gen::<f64>());
            let lhs = oracle_sn(kappa, embedded_distance(kappa, a, b, theta) / 2.0).powi(2);
            let rhs = half_chord_value(k, &Triangle::new(a, b, theta)).unwrap();
            worst = worst.max((lhs - rhs).abs() / lhs.max(1.0));
        }
        assert!(worst <= 1e-12, "κ = {kappa}: half-chord gap {worst}");
    }
}

#[test]
fn c05_bilipschitz_bounds() {
    let configs = [(0.5, 1.0, 0.01), (0.3, 0.8, 0.005), (1.0, 1.5, 0.02)];
    for kappa in [-1.0, 0.0, 1.0] {
        let k = Curvature::new(kappa).unwrap();
        for (i, &(r, big, delta)) in configs.iter().enumerate() {
            let rep = bilipschitz_bounds_check(&circle(), k, r, big, delta, 100_000, SEED + i as u64).unwrap();
            assert_eq!(rep.pairs, 100_000, "κ = {kappa}, config {i}: pairs dropped");
            assert!(rep.pass, "κ = {kappa}, config {i}: {rep:?}");
            let lambda = oracle_sn(kappa, r) / oracle_sn(kappa, big);
            assert!((rep.lambda - lambda).abs() <= 1e-14 * lambda);
            if kappa == 0.0 {
                assert_eq!(bilipschitz_constant(k, big, delta), 1.0);
                for ratio in [rep.min_ratio, rep.max_ratio] {
                    assert!((ratio - r / big).abs() <= 4.0 * f64::EPSILON * (r / big), "flat ratio {ratio}");
                }
            }
        }
    }
}

#[test]
fn c06_partition_sequence() {
    for kappa in [-1.0, 0.0, 1.0] {
        let k = Curvature::new(kappa).unwrap();
        for (r, delta) in [(1.0, 1e-2), (1.0, 1e-3), (0.5, 1e-2)] {
            let seq = partition_sequence(k, r, delta, 0.0).unwrap();
            let envelope = if kappa >= 0.0 { 1.0 - delta / r } else { 1.0 - delta / oracle_sn(kappa, r) };
            assert_eq!(seq.a[0], 1.0);
            for w in seq.a.windows(2) {
                assert!(w[1] > 0.0 && w[1] < w[0], "κ = {kappa}: {} → {}", w[0], w[1]);
                assert!(w[1] / w[0] <= envelope + 4.0 * f64::EPSILON, "κ = {kappa}: ratio {} above {envelope}", w[1] / w[0]);
            }
            if kappa == 0.0 {
                let q = 1.0 - delta / r;
                let mut expect = 1.0;
                for (i, &a) in seq.a.iter().enumerate() {
                    assert_eq!(a, expect, "term {i}");
                    expect *= q;
                }
            }
        }
    }
}

#[test]
fn c07_bishop_gromov() {
    // every catalog cone against its own model
    for (kappa, radius) in [(0.0, 2.0), (1.0, FRAC_PI_2), (-1.0, 1.5)] {
        let k = Curvature::new(kappa).unwrap();
        for theta in [FRAC_PI_2, PI] {
            for (name, g) in catalog_2d(k, radius, theta).unwrap() {
                for radii in [[0.0, 0.3, 1.0], [0.1, 0.5, 0.9], [0.25, 0.75, 1.0]] {
                    let radii = radii.map(|x| x * radius);
                    let rep = bg_ratio_report(&g, radii, g.cone().sigma(), k, Method::Exact).unwrap();
                    for row in &rep.rows {
                        assert!(row.margin.abs() <= 2e-9, "{name} κ = {kappa} θ = {theta}: {row:?}");
                    }
                }
            }
        }
    }
    let cones = [
        ConeSpace::new(DirectionSpace::sphere(2), Curvature::SPHERICAL, 2.0).unwrap(),
        ConeSpace::new(DirectionSpace::suspension(DirectionSpace::interval(1.0).unwrap()).unwrap(), Curvature::HYPERBOLIC, 1.0).unwrap(),
    ];
    for cone in &cones {
        let rep = bg_ratio_report(cone, [0.2, 0.6, 1.0], cone.sigma(), cone.kappa(), Method::Exact).unwrap();
        assert!(rep.rows.iter().all(|r| r.margin.abs() <= 2e-9), "{rep:?}");
    }

    // unit round sphere against the flat plane: 120 radius triples
    let sphere = AnalyticSpace::round_sphere(1.0, 2).unwrap();
    let grid: Vec<f64> = (1..=10).map(|i| PI * i as f64 / 10.0).collect();
    let mut triples = 0;
    for i in 0..10 {
        for j in i + 1..10 {
            for l in j + 1..10 {
                let radii = [grid[i], grid[j], grid[l]];
                let rep = bg_ratio_report(&sphere, radii, &circle(), Curvature::FLAT, Method::Exact).unwrap();
                // closed forms: sphere area 2π(1 − cos r), plane area πr²
                let cap = |r: f64| 2.0 * PI * (1.0 - r.cos());
                let ball_margin = cap(radii[0]) / cap(radii[2]) - (radii[0] / radii[2]).powi(2);
                assert!(ball_margin >= 0.0);
                for row in &rep.rows {
                    assert!(row.margin >= 0.0, "{row:?}");
                }
                let ball = rep.rows.iter().find(|r| r.form.name() == "ball").unwrap();
                assert!((ball.margin - ball_margin).abs() <= 1e-9, "{ball:?} vs {ball_margin}");
                triples += 1;
            }
        }
    }
    assert!(triples >= 100);

    // discretized log-ratios converge at first order
    let cases = [
        (circle(), 0.0, 0.0, 1.0, 2.0),
        (DirectionSpace::sphere(2), 1.0, 0.3, 1.0, 2.5),
        (DirectionSpace::circle(PI).unwrap(), -1.0, 0.2, 0.7, 1.8),
    ];
    for (sigma, kappa, r1, r2, r3) in cases {
        let k = Curvature::new(kappa).unwrap();
        let coarse = riemann_sum_consistency(&sigma, k, r1, r2, r3, 0.02).unwrap();
        let fine = riemann_sum_consistency(&sigma, k, r1, r2, r3, 0.01).unwrap();
        let q = coarse.residual / fine.residual;
        assert!((1.5..=3.0).contains(&q), "κ = {kappa}: residual ratio {q} ({coarse:?}, {fine:?})");
    }
}

fn at(angle: f64, t: f64) -> ConePoint {
    ConePoint::new(DirPoint::Angle(angle), t)
}

#[test]
fn c08_gluing_metric() {
    let cone = ConeSpace::new(circle(), Curvature::FLAT, 1.0).unwrap();
    let families = catalog_2d(Curvature::FLAT, 1.0, PI).unwrap();

    let (_, identity) = &families[0];
    let mut r = rng(8);
    for _ in 0..500 {
        let (a, s) = (2.0 * PI * r.gen::<f64>(), r.gen::<f64>());
        let (b, t) = (2.0 * PI * r.gen::<f64>(), r.gen::<f64>());
        let (x, y) = (at(a, s), at(b, t));
        let planar = (s * a.cos() - t * b.cos()).hypot(s * a.sin() - t * b.sin());
        let d = identity.distance(&x, &y, 0.1).unwrap().value;
        assert_eq!(d, cone.distance(&x, &y).unwrap());
        assert!((d - planar).abs() <= 1e-12, "{d} vs {planar}");
    }

    let (_, antipodal) = &families[2];
    for eps in [0.1, 0.05, 0.025, 0.0125] {
        let d = antipodal.distance(&at(0.0, 0.9), &at(PI, 0.9), eps).unwrap().value;
        assert!((d - 0.2).abs() <= 3.0 * eps, "ε = {eps}: {d}");
    }

    for kappa in [-1.0, 0.0, 1.0] {
        let k = Curvature::new(kappa).unwrap();
        let radius = if kappa > 0.0 { 1.2 } else { 1.0 };
        for theta in [FRAC_PI_2, PI] {
            let families = catalog_2d(k, radius, theta).unwrap();
            assert_eq!(families.len(), 5);
            for (name, g) in &families {
                for eps in [0.1, 0.05] {
                    let rep = g.radius_report(eps).unwrap();
                    assert!((rep.value - radius).abs() <= eps, "{name} κ = {kappa} θ = {theta} ε = {eps}: {rep:?}");
                }
            }
        }
    }

    for (name, g) in &families {
        let v = g.volume().unwrap();
        assert_eq!(v.value, g.cone().ball_volume(1.0).unwrap().value, "{name}");
        let r = 0.7;
        // a flat cone over a circle of length 2π or an interval of length π
        let expect = if name.starts_with("circle") { PI * r * r } else { PI * r * r / 2.0 };
        let exact = PointedSpace::ball_volume(g, r).unwrap();
        assert!((exact.value - expect).abs() <= 1e-9, "{name}: {exact:?}");
        let mc = space_annulus_volume(g, AnnulusSpec::ball(r).unwrap(), Method::MonteCarlo { samples: 1_000_000, seed: SEED }).unwrap();
        let z = (mc.value - expect).abs() / mc.error_value();
        assert!(z <= 4.0, "{name}: Monte-Carlo {} ± {} is {z}σ off", mc.value, mc.error_value());
    }
}

#[test]
fn c09_tetrahedron() {
    let p = PolygonGluing::new(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 3f64.sqrt()]]).unwrap();
    let v = p.vertices().to_vec();
    let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    for eps in [0.2, 0.1, 0.05, 0.025] {
        let mm = p.distance(mid(v[0], v[1]), mid(v[1], v[2]), eps).unwrap().value;
        assert!((mm - 1.0).abs() <= 2.0 * eps, "ε = {eps}: midpoint to midpoint {mm}");
        for (i, j, k) in [(2, 0, 1), (0, 1, 2), (1, 2, 0)] {
            let vm = p.distance(v[i], mid(v[j], v[k]), eps).unwrap().value;
            assert!((vm - 1.0).abs() <= 3.0 * eps, "ε = {eps}: vertex {i} to midpoint {vm}");
        }
    }
}

#[test]
fn c10_rough_volume() {
    let cases = [
        (RoughRegion::unit_square(), 2.0, 0.1, (0.004, 0.04)),
        (RoughRegion::disk(1.0), 2.0, 0.1, (0.004, 0.04)),
        (RoughRegion::segment(1.0), 1.0, 0.05, (0.001, 0.01)),
    ];
    for (region, exponent, tol, (lo, hi)) in cases {
        let fit = rough_volume_estimate(&region, &geometric_eps(lo, hi, 6), SEED).unwrap();
        assert!((fit.exponent - exponent).abs() <= tol, "{region:?}: exponent {}", fit.exponent);
        assert!(fit.flatness <= 0.1, "{region:?}: flatness {}", fit.flatness);
        // direct re-derivation of the trend from the raw counts
        let scaled: Vec<f64> =
            fit.samples.iter().map(|s| s.eps.powi(region.dim() as i32) * s.count as f64).collect();
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        let spread = scaled.iter().copied().fold(f64::MIN, f64::max) - scaled.iter().copied().fold(f64::MAX, f64::min);
        assert!(spread / mean <= 0.1);
    }
}

fn lemma_suite(format: &str, extra: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_kcone"))
        .args(["lemma-suite", "--seed", "7", "--format", format])
        .args(extra)
        .env_remove("KCONE_SEED")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn c11_determinism() {
    let a = lemma_suite("json", &[]);
    let b = lemma_suite("json", &[]);
    assert!(!a.is_empty());
    assert_eq!(a, b, "JSON reports differ between runs");
    let summary: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(summary["pass"], true);

    let quick = ["--samples", "200000", "--pairs", "20000"];
    let c = lemma_suite("csv", &quick);
    let d = lemma_suite("csv", &quick);
    assert_eq!(c, d, "CSV reports differ between runs");
    assert!(c.starts_with(b"check,pass,"));
    assert!(!c.contains(&b'\r'));
}
