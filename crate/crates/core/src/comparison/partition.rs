//! The shrinking partition of [0, r], the radial annulus map and its
//! distortion bounds, and the Riemann-sum form of the log-volume ratio.

use rand::Rng;
use serde::Serialize;

use super::{model_annulus_volume, require_measure, AnnulusSpec};
use crate::cone::{ConePoint, ConeSpace};
use crate::dirspace::DirectionSpace;
use crate::error::{ensure, Error, Result};
use crate::estimate::VolumeEstimate;
use crate::mc;
use crate::quad::adaptive_simpson;
use crate::spaceform::{half_chord_with_diff, Curvature};

const RADIUS_SLACK: f64 = 1e-12;
/// With no floor the sequence is cut once `a_i` drops below this.
const MIN_FRACTION: f64 = 1e-12;
const MAX_TERMS: usize = 50_000_000;

/// `a_0 = 1, a_{i+1} = a_i − sn(a_i r) / (r·sn r)·δ`, truncated at a floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSequence {
    pub a: Vec<f64>,
    pub delta: f64,
    pub r: f64,
    pub kappa: f64,
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionCheck {
    pub strictly_decreasing: bool,
    pub positive: bool,
    /// Contraction factor bounding `a_{i+1} / a_i`.
    pub envelope: f64,
    /// min over i of `envelope − a_{i+1}/a_i`; nonnegative up to rounding
    /// when the envelope holds.
    pub envelope_margin: f64,
}

impl PartitionCheck {
    pub fn pass(&self) -> bool {
        self.strictly_decreasing && self.positive && self.envelope_margin >= -4.0 * f64::EPSILON
    }
}

impl PartitionSequence {
    /// `1 − δ/r` for κ ≥ 0, `1 − δ/sn r` for κ < 0.
    pub fn envelope(&self) -> f64 {
        let kappa = Curvature::new(self.kappa).expect("validated at construction");
        if self.kappa >= 0.0 {
            1.0 - self.delta / self.r
        } else {
            1.0 - self.delta / kappa.sn_raw(self.r)
        }
    }

    pub fn check(&self) -> PartitionCheck {
        let envelope = self.envelope();
        let pairs = self.a.windows(2);
        PartitionCheck {
            strictly_decreasing: self.a.windows(2).all(|w| w[1] < w[0]),
            positive: self.a.iter().all(|&x| x > 0.0),
            envelope,
            envelope_margin: pairs.map(|w| envelope - w[1] / w[0]).fold(f64::INFINITY, f64::min),
        }
    }

    /// Radii `a_i·r` of the partition.
    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.a.iter().map(move |x| x * self.r)
    }
}

/// Terms are kept while `a_i·r ≥ floor`; with `floor = 0` the sequence runs
/// until `a_i < 1e-12`.
pub fn partition_sequence(kappa: Curvature, r: f64, delta: f64, floor: f64) -> Result<PartitionSequence> {
    ensure(r > 0.0 && r.is_finite(), || format!("r must be positive, got {r}"))?;
    if let Some(d) = kappa.diameter() {
        ensure(r < d, || format!("r = {r} must be below π/√κ = {d}"))?;
    }
    ensure(delta > 0.0 && delta < r, || format!("step δ = {delta} must lie in (0, r = {r})"))?;
    ensure((0.0..r).contains(&floor), || format!("floor {floor} must lie in [0, r = {r})"))?;
    let scale = delta / (r * kappa.sn_raw(r));
    // for κ = 0 the step is a fixed fraction; multiplying keeps the terms
    // bit-identical to the iterated geometric product
    let ratio = 1.0 - delta / r;
    let flat = kappa.value() == 0.0;
    let mut a = vec![1.0];
    let mut cur = 1.0f64;
    loop {
        let next = if flat { cur * ratio } else { cur - kappa.sn_raw(cur * r) * scale };
        if next <= 0.0 {
            return Err(Error::StepViolation(format!(
                "step δ = {delta} drives the sequence to {next} after {} terms",
                a.len()
            )));
        }
        if next * r < floor || (floor == 0.0 && next < MIN_FRACTION) {
            break;
        }
        a.push(next);
        cur = next;
        ensure(a.len() < MAX_TERMS, || format!("partition exceeds {MAX_TERMS} terms; δ = {delta} is too small"))?;
    }
    Ok(PartitionSequence { a, delta, r, kappa: kappa.value(), floor })
}

/// `t ↦ r − λ(R − t)` from `[R−δ, R]` onto `[r−λδ, r]`, `λ = sn r / sn R`,
/// keeping the direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusMap {
    pub kappa: Curvature,
    pub r: f64,
    pub big_r: f64,
    pub delta: f64,
    pub lambda: f64,
}

impl AnnulusMap {
    pub fn new(kappa: Curvature, r: f64, big_r: f64, delta: f64) -> Result<Self> {
        kappa.check_length(r, "r")?;
        kappa.check_length(big_r, "R")?;
        ensure(r > 0.0, || format!("r must be positive, got {r}"))?;
        ensure(delta > 0.0 && delta <= big_r, || format!("δ = {delta} must lie in (0, R = {big_r}]"))?;
        let sn_big = kappa.sn_raw(big_r);
        ensure(sn_big > 0.0, || format!("sn_κ(R) vanishes at R = {big_r}"))?;
        let lambda = kappa.sn_raw(r) / sn_big;
        ensure(r - lambda * delta > 0.0, || format!("r − λδ = {} must be positive", r - lambda * delta))?;
        Ok(Self { kappa, r, big_r, delta, lambda })
    }

    pub fn apply_radius(&self, t: f64) -> Result<f64> {
        let slack = RADIUS_SLACK * self.big_r;
        ensure(t >= self.big_r - self.delta - slack && t <= self.big_r + slack, || {
            format!("t = {t} outside [R − δ, R] = [{}, {}]", self.big_r - self.delta, self.big_r)
        })?;
        Ok(self.r - self.lambda * (self.big_r - t.min(self.big_r)))
    }

    pub fn apply(&self, x: &ConePoint) -> Result<ConePoint> {
        Ok(ConePoint::new(x.direction.clone(), self.apply_radius(x.t)?))
    }
}

/// The annulus map applied to one cone point.
pub fn annulus_map(x: &ConePoint, r: f64, big_r: f64, delta: f64, kappa: Curvature) -> Result<ConePoint> {
    AnnulusMap::new(kappa, r, big_r, delta)?.apply(x)
}

/// `c(κ, δ)`: 1 for κ = 0, `1 − 2δ/(sn R + δ)` for κ > 0,
/// `1 − δ·cosh_κ(R)/R` for κ < 0.
pub fn bilipschitz_constant(kappa: Curvature, big_r: f64, delta: f64) -> f64 {
    let k = kappa.value();
    if k > 0.0 {
        1.0 - 2.0 * delta / (kappa.sn_raw(big_r) + delta)
    } else if k < 0.0 {
        1.0 - delta * kappa.cs(big_r) / big_r
    } else {
        1.0
    }
}

/// Relative rounding allowance on the bi-Lipschitz bounds.
pub const RATIO_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiLipschitzReport {
    pub lambda: f64,
    pub c: f64,
    pub lower: f64,
    pub upper: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub pairs: usize,
    pub pass: bool,
}

/// Samples pairs in the annulus `A(R−δ, R)` of C_κ(Σ) and records
/// `sn(|f(x)f(y)|/2) / sn(|xy|/2)` for the annulus map `f`.
pub fn bilipschitz_bounds_check(
    sigma: &DirectionSpace,
    kappa: Curvature,
    r: f64,
    big_r: f64,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<BiLipschitzReport> {
    require_measure(sigma)?;
    ensure(samples > 0, || "sample count must be positive".into())?;
    let map = AnnulusMap::new(kappa, r, big_r, delta)?;
    let k = kappa.value();
    if k > 0.0 {
        let sn = kappa.sn_raw(big_r);
        ensure(delta < 0.5 * sn, || format!("need δ < sn_κ(R)/2 = {}, got {delta}", 0.5 * sn))?;
    } else if k < 0.0 {
        let bound = big_r / kappa.cs(big_r);
        ensure(delta < bound, || format!("need δ < R/cosh_κ(R) = {bound}, got {delta}"))?;
    }
    let c = bilipschitz_constant(kappa, big_r, delta);
    let lambda = map.lambda;
    let ratios = mc::collect(seed, samples, |rng| {
        let x = sigma.sample(rng).expect("measure checked");
        let tx = big_r - delta * rng.gen::<f64>();
        let ty = big_r - delta * rng.gen::<f64>();
        let kind = rng.gen::<f64>();
        let y = if kind < 0.125 {
            x.clone()
        } else if kind < 0.5 {
            sigma.sample(rng).expect("measure checked")
        } else {
            let scale = 10f64.powf(-4.0 * rng.gen::<f64>());
            sigma.perturb(&x, scale, rng)
        };
        let theta = sigma.distance_unchecked(&x, &y).min(std::f64::consts::PI);
        let before = half_chord_with_diff(kappa, tx - ty, tx, ty, theta);
        if before <= 0.0 {
            return f64::NAN;
        }
        let (sx, sy) = (map.r - lambda * (big_r - tx), map.r - lambda * (big_r - ty));
        let after = half_chord_with_diff(kappa, lambda * (tx - ty), sx, sy, theta);
        (after / before).sqrt()
    });
    let valid: Vec<f64> = ratios.into_iter().filter(|x| x.is_finite()).collect();
    let min_ratio = valid.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = valid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lower, upper) = (c * lambda, lambda / c);
    // c = 1 in the flat case, so the bounds are met with equality up to rounding
    let slack = 1.0 - RATIO_SLACK;
    let pass = !valid.is_empty() && min_ratio >= lower * slack && max_ratio * slack <= upper;
    Ok(BiLipschitzReport { lambda, c, lower, upper, min_ratio, max_ratio, pairs: valid.len(), pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomothetyReport {
    pub lambda: f64,
    pub domain: VolumeEstimate,
    pub image: VolumeEstimate,
    /// `λⁿ·vol(domain)`
    pub predicted: f64,
    /// |image − predicted| in combined standard errors.
    pub z_score: f64,
    pub pass: bool,
}

/// On the flat cone the annulus map is the homothety by `λ = r/R`, so the
/// image annulus has `λⁿ` times the volume of its domain. Both volumes are
/// Monte-Carlo estimates from independent streams.
pub fn homothety_volume_check(
    sigma: &DirectionSpace,
    r: f64,
    big_r: f64,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<HomothetyReport> {
    let map = AnnulusMap::new(Curvature::FLAT, r, big_r, delta)?;
    ensure(r <= big_r, || format!("need r ≤ R, got r = {r}, R = {big_r}"))?;
    let cone = ConeSpace::new(sigma.clone(), Curvature::FLAT, big_r)?;
    let n = cone.dim() as i32;
    let domain = super::space_annulus_volume(
        &cone,
        AnnulusSpec::new(big_r - delta, big_r)?,
        super::Method::MonteCarlo { samples, seed },
    )?;
    let image = super::space_annulus_volume(
        &cone,
        AnnulusSpec::new(r - map.lambda * delta, r)?,
        super::Method::MonteCarlo { samples, seed: seed.wrapping_add(1) },
    )?;
    let scale = map.lambda.powi(n);
    let predicted = scale * domain.value;
    let sigma_diff = image.error_value().hypot(scale * domain.error_value());
    let z_score = (image.value - predicted).abs() / sigma_diff.max(f64::MIN_POSITIVE);
    Ok(HomothetyReport { lambda: map.lambda, domain, image, predicted, z_score, pass: z_score <= super::MC_SIGMAS })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannReport {
    /// Number of subintervals of [R2, R3].
    pub m: usize,
    /// Their common length `Δ = (R3 − R2)/m`.
    pub step: f64,
    pub i1: f64,
    pub i1_sum: f64,
    pub i2: f64,
    pub i2_sum: f64,
    /// |I1 sum − I1| + |I2 sum − I2|
    pub residual: f64,
}

/// Compares `I1 = log(vol A(R1,R3) / vol A(R1,R2))` on the model cone and
/// `I2 = log(φ(R3)/φ(R2))`, `φ(r) = ∫_{R1}^r sn^{dim Σ}`, with their
/// first-order sums over `r_j = R2 + jΔ`, `m = ⌊(R3−R2)/δ⌋ + 1`.
pub fn riemann_sum_consistency(
    sigma: &DirectionSpace,
    kappa: Curvature,
    r1: f64,
    r2: f64,
    r3: f64,
    delta: f64,
) -> Result<RiemannReport> {
    ensure(0.0 <= r1 && r1 < r2 && r2 < r3, || format!("radii must satisfy 0 ≤ R1 < R2 < R3, got {r1}, {r2}, {r3}"))?;
    kappa.check_length(r3, "R3")?;
    ensure(delta > 0.0 && delta.is_finite(), || format!("step δ must be positive, got {delta}"))?;
    let m = ((r3 - r2) / delta).floor() as usize + 1;
    let step = (r3 - r2) / m as f64;
    let dim = sigma.dim() as i32;
    let f = |t: f64| kappa.sn_raw(t).max(0.0).powi(dim);
    let tol = 1e-14 * f(r3).max(1e-300) * (r3 - r1);
    let phi_r2 = adaptive_simpson(f, r1, r2, tol).value;
    let phi_r3 = adaptive_simpson(f, r1, r3, tol).value;
    let i1 = (model_annulus_volume(sigma, kappa, AnnulusSpec::new(r1, r3)?)?.value
        / model_annulus_volume(sigma, kappa, AnnulusSpec::new(r1, r2)?)?.value)
        .ln();
    let i2 = (phi_r3 / phi_r2).ln();
    let (mut i1_sum, mut i2_sum) = (0.0, 0.0);
    let mut phi = phi_r2;
    for j in 1..=m {
        let (lo, hi) = (r2 + (j - 1) as f64 * step, if j == m { r3 } else { r2 + j as f64 * step });
        let shell = adaptive_simpson(f, lo, hi, tol / m as f64).value;
        phi += shell;
        i1_sum += shell / phi;
        i2_sum += step * f(hi) / phi;
    }
    Ok(RiemannReport { m, step, i1, i1_sum, i2, i2_sum, residual: (i1_sum - i1).abs() + (i2_sum - i2).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirspace::DirPoint;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn flat_sequence_is_geometric() {
        let s = partition_sequence(Curvature::FLAT, 2.0, 0.01, 0.0).unwrap();
        let q: f64 = 1.0 - 0.01 / 2.0;
        // a_{i+1} = a_i·q computed the same way as the recurrence
        let mut expect = 1.0;
        for (i, &a) in s.a.iter().enumerate() {
            assert_eq!(a, expect, "term {i}");
            expect *= q;
        }
        for (i, &a) in s.a.iter().enumerate().step_by(97) {
            assert!((a - q.powi(i as i32)).abs() <= 1e-12 * q.powi(i as i32) * (1.0 + i as f64));
        }
        assert!(s.check().pass());
    }

    #[test]
    fn envelopes_hold() {
        for kappa in [Curvature::HYPERBOLIC, Curvature::FLAT, Curvature::SPHERICAL] {
            for delta in [1e-2, 1e-3] {
                let s = partition_sequence(kappa, 1.0, delta, 0.0).unwrap();
                let c = s.check();
                assert!(c.pass(), "{kappa:?} {delta} {c:?}");
                assert!(*s.a.last().unwrap() < 1e-11);
            }
        }
        let s = partition_sequence(Curvature::SPHERICAL, 1.0, 0.01, 0.0).unwrap();
        for (i, &a) in s.a.iter().enumerate() {
            assert!(a <= 0.99f64.powi(i as i32) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn floor_truncation() {
        let s = partition_sequence(Curvature::FLAT, 1.0, 0.01, 0.5).unwrap();
        let last = *s.a.last().unwrap();
        assert!((0.5..0.5 / 0.99).contains(&last), "{last}");
    }

    #[test]
    fn oversized_step_is_rejected() {
        assert!(matches!(partition_sequence(Curvature::SPHERICAL, 1.5, 1.2, 0.0), Err(Error::StepViolation(_))));
        assert!(partition_sequence(Curvature::FLAT, 1.0, 1.5, 0.0).is_err());
        assert!(partition_sequence(Curvature::SPHERICAL, PI, 0.1, 0.0).is_err());
    }

    #[test]
    fn annulus_map_examples() {
        let d = DirPoint::Angle(0.3);
        let m = AnnulusMap::new(Curvature::FLAT, 0.5, 1.0, 0.1).unwrap();
        assert_eq!(m.apply(&ConePoint::new(d.clone(), 1.0)).unwrap().t, 0.5);
        assert!((m.apply_radius(0.9).unwrap() - (0.5 - m.lambda * 0.1)).abs() < 1e-15);
        let m = AnnulusMap::new(Curvature::SPHERICAL, FRAC_PI_4, FRAC_PI_2, 0.1).unwrap();
        assert!((m.lambda - 0.5f64.sqrt()).abs() < 1e-15);
        let (a, b) = (m.apply_radius(1.5).unwrap(), m.apply_radius(1.52).unwrap());
        assert!(((b - a) - m.lambda * 0.02).abs() < 1e-14);
        assert!(annulus_map(&ConePoint::new(d, 0.5), 0.5, 1.0, 0.1, Curvature::FLAT).is_err());
        assert!(AnnulusMap::new(Curvature::FLAT, 0.05, 1.0, 1.0).is_err());
    }

    #[test]
    fn flat_ratio_is_lambda() {
        let s = DirectionSpace::circle(2.0 * PI).unwrap();
        let rep = bilipschitz_bounds_check(&s, Curvature::FLAT, 0.5, 1.0, 0.1, 20_000, 1).unwrap();
        assert!(rep.pass);
        assert!((rep.min_ratio - 0.5).abs() < 1e-14 && (rep.max_ratio - 0.5).abs() < 1e-14, "{rep:?}");
    }

    #[test]
    fn curved_ratios_within_envelope() {
        let s = DirectionSpace::circle(2.0 * PI).unwrap();
        let rep = bilipschitz_bounds_check(&s, Curvature::SPHERICAL, 0.5, 1.0, 0.01, 20_000, 2).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!((rep.c - (1.0 - 0.02 / (1f64.sin() + 0.01))).abs() < 1e-15);
        let rep = bilipschitz_bounds_check(&s, Curvature::HYPERBOLIC, 0.5, 1.0, 0.005, 20_000, 3).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!((rep.c - (1.0 - 0.005 * 1f64.cosh())).abs() < 1e-15);
        assert!(bilipschitz_bounds_check(&s, Curvature::SPHERICAL, 0.5, 1.0, 0.5, 100, 2).is_err());
    }

    #[test]
    fn homothety_scales_volume() {
        let s = DirectionSpace::circle(2.0 * PI).unwrap();
        let rep = homothety_volume_check(&s, 0.5, 1.0, 0.1, 400_000, 5).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn flat_riemann_sums() {
        let s = DirectionSpace::circle(2.0 * PI).unwrap();
        let rep = riemann_sum_consistency(&s, Curvature::FLAT, 0.0, 1.0, 2.0, 0.01).unwrap();
        assert!((rep.i1 - 4f64.ln()).abs() < 1e-9 && (rep.i2 - 4f64.ln()).abs() < 1e-12);
        let fine = riemann_sum_consistency(&s, Curvature::FLAT, 0.0, 1.0, 2.0, 0.005).unwrap();
        let q = rep.residual / fine.residual;
        assert!((1.5..=3.0).contains(&q), "{q}");
    }

    #[test]
    fn spherical_i2_matches_volume_ratio() {
        let s = DirectionSpace::sphere(2);
        let rep = riemann_sum_consistency(&s, Curvature::SPHERICAL, 0.3, 1.0, 2.5, 0.01).unwrap();
        assert!((rep.i1 - rep.i2).abs() < 1e-9, "{rep:?}");
        assert_eq!(rep.m, 151);
    }
}
