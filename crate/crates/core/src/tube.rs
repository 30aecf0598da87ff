//! Euclidean volumes of trapezoidal balls and of ε-ball tubes along chains.

use rand::Rng;
use serde::Serialize;

use crate::dirspace::unit_ball_volume;
use crate::error::{ensure, Error, Result};
use crate::estimate::VolumeEstimate;
use crate::mc;
use crate::quad::adaptive_simpson;

const SINE_TOL: f64 = 1e-14;

/// Volume of the Euclidean n-ball of radius `r`.
pub fn euclidean_ball_volume(n: usize, r: f64) -> f64 {
    unit_ball_volume(n) * r.powi(n as i32)
}

/// ∫_θ^{π/2} sinⁿ t dt by quadrature.
pub fn sine_power_tail(n: usize, theta: f64) -> f64 {
    adaptive_simpson(|t| t.sin().powi(n as i32), theta, std::f64::consts::FRAC_PI_2, SINE_TOL).value
}

/// Volume of `{x ∈ B_r(0) ⊂ Rⁿ : 0 ≤ x_n ≤ h}`.
pub fn trapezoidal_ball_volume(n: usize, r: f64, h: f64) -> Result<f64> {
    ensure(n >= 1, || "dimension must be at least 1".into())?;
    ensure(r >= 0.0 && r.is_finite(), || format!("radius must be a nonnegative length, got {r}"))?;
    ensure(h >= 0.0 && h <= r, || format!("height {h} must lie in [0, r = {r}]"))?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let theta = (h / r).clamp(0.0, 1.0).acos();
    Ok(r * euclidean_ball_volume(n - 1, r) * sine_power_tail(n, theta))
}

/// Chain of n-balls of radius ε with consecutive center distances `gaps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallChain {
    pub n: usize,
    pub epsilon: f64,
    pub gaps: Vec<f64>,
}

impl BallChain {
    pub fn new(n: usize, epsilon: f64, gaps: Vec<f64>) -> Result<Self> {
        ensure(n >= 1, || "dimension must be at least 1".into())?;
        ensure(epsilon > 0.0 && epsilon.is_finite(), || format!("ε must be positive, got {epsilon}"))?;
        for (i, &g) in gaps.iter().enumerate() {
            ensure(g >= 0.0 && g < 2.0 * epsilon, || {
                format!("gap {i} = {g} must lie in [0, 2ε = {})", 2.0 * epsilon)
            })?;
        }
        Ok(Self { n, epsilon, gaps })
    }

    /// Centers on the first axis, starting at the origin.
    pub fn collinear_centers(&self) -> Vec<Vec<f64>> {
        let mut x = 0.0;
        let mut out = vec![vec![0.0; self.n]];
        for g in &self.gaps {
            x += g;
            let mut c = vec![0.0; self.n];
            c[0] = x;
            out.push(c);
        }
        out
    }
}

/// Union volume of a chain whose only overlaps are between neighbours.
pub fn tube_volume_exact(chain: &BallChain) -> f64 {
    let (n, eps) = (chain.n, chain.epsilon);
    let caps: f64 = chain
        .gaps
        .iter()
        .map(|g| sine_power_tail(n, (g / (2.0 * eps)).clamp(0.0, 1.0).acos()))
        .sum();
    euclidean_ball_volume(n, eps) + 2.0 * eps * euclidean_ball_volume(n - 1, eps) * caps
}

/// First-order tube volume and a bound on its deviation from the exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeExpansion {
    pub value: f64,
    /// `C·ε^{n+1}·Σ gaps`.
    pub bound: f64,
    /// The constant `C` in the bound.
    pub constant: f64,
}

/// First-order expansion in the gaps, valid when every gap is at most ε².
pub fn tube_volume_expansion(chain: &BallChain) -> Result<TubeExpansion> {
    let (n, eps) = (chain.n, chain.epsilon);
    if let Some(&g) = chain.gaps.iter().find(|&&g| g > eps * eps * (1.0 + 1e-12)) {
        return Err(Error::ExpansionDomain(format!("gap {g} exceeds ε² = {}", eps * eps)));
    }
    let total: f64 = chain.gaps.iter().sum();
    let slice = euclidean_ball_volume(n - 1, eps);
    let value = euclidean_ball_volume(n, eps) + slice * total;
    let reach = chain.gaps.iter().fold(0.0f64, |m, &g| m.max(g / (2.0 * eps)));
    // The grid maximum can undershoot between nodes, and for n = 3 the bound is
    // attained exactly, so the calibrated constant carries a small safety factor.
    let constant = unit_ball_volume(n - 1) * max_third_derivative(n, reach) * (1.0 + 1e-6) / 24.0;
    Ok(TubeExpansion { value, bound: constant * eps.powi(n as i32 + 1) * total, constant })
}

/// max |G'''| on [0, reach] for G(u) = ∫₀^u (1 − v²)^{(n−1)/2} dv, on a fine grid.
fn max_third_derivative(n: usize, reach: f64) -> f64 {
    let m = (n as f64 - 1.0) / 2.0;
    let g3 = |u: f64| {
        let w = 1.0 - u * u;
        let first = if m == 0.0 { 0.0 } else { -2.0 * m * w.powf(m - 1.0) };
        let second = if m == 0.0 || m == 1.0 { 0.0 } else { 4.0 * m * (m - 1.0) * u * u * w.powf(m - 2.0) };
        (first + second).abs()
    };
    let steps = 2000;
    (0..=steps).map(|i| g3(reach * i as f64 / steps as f64)).fold(0.0, f64::max)
}

/// Whether any three of the ε-balls share a point, i.e. some triple of centers
/// has a minimal enclosing ball of radius at most ε.
pub fn has_triple_intersection(centers: &[Vec<f64>], epsilon: f64) -> bool {
    let k = centers.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if enclosing_radius(&centers[i], &centers[j], &centers[l]) <= epsilon {
                    return true;
                }
            }
        }
    }
    false
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Radius of the smallest ball containing three points.
fn enclosing_radius(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let (ab, bc, ca) = (dist2(a, b), dist2(b, c), dist2(c, a));
    let mut sides = [ab, bc, ca];
    sides.sort_by(f64::total_cmp);
    let [x, y, z] = sides;
    // obtuse or right: the longest side is a diameter
    if z >= x + y {
        return z.sqrt() / 2.0;
    }
    // circumradius R = abc / (4·area), with 16·area² = 2(xy + yz + zx) − (x² + y² + z²)
    let area16 = 2.0 * (x * y + y * z + z * x) - (x * x + y * y + z * z);
    (x * y * z / area16).sqrt()
}

/// Monte-Carlo volume of a union of ε-balls, sampling their bounding box.
pub fn union_volume_mc(n: usize, epsilon: f64, centers: &[Vec<f64>], samples: u64, seed: u64) -> Result<VolumeEstimate> {
    ensure(n >= 1, || "dimension must be at least 1".into())?;
    ensure(epsilon > 0.0, || format!("ε must be positive, got {epsilon}"))?;
    ensure(!centers.is_empty(), || "need at least one center".into())?;
    ensure(centers.iter().all(|c| c.len() == n), || format!("every center needs {n} coordinates"))?;
    ensure(samples > 0, || "sample count must be positive".into())?;
    let lo: Vec<f64> = (0..n).map(|d| centers.iter().map(|c| c[d]).fold(f64::INFINITY, f64::min) - epsilon).collect();
    let hi: Vec<f64> = (0..n).map(|d| centers.iter().map(|c| c[d]).fold(f64::NEG_INFINITY, f64::max) + epsilon).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let e2 = epsilon * epsilon;
    let hits = mc::count_hits(seed, samples, |rng| {
        let p: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.gen::<f64>()).collect();
        centers.iter().any(|c| dist2(c, &p) <= e2)
    });
    let (value, stderr) = mc::proportion_estimate(hits, samples, box_volume);
    Ok(VolumeEstimate::monte_carlo(value, stderr, samples))
}

/// Monte-Carlo volume of the trapezoidal ball, sampling `[−r, r]^{n−1} × [0, h]`.
pub fn trapezoidal_ball_mc(n: usize, r: f64, h: f64, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    ensure(n >= 1 && h >= 0.0 && h <= r && samples > 0, || "need n ≥ 1, 0 ≤ h ≤ r, samples > 0".into())?;
    let box_volume = (2.0 * r).powi(n as i32 - 1) * h;
    let hits = mc::count_hits(seed, samples, |rng| {
        let mut s = 0.0;
        for _ in 0..n - 1 {
            let x = r * (2.0 * rng.gen::<f64>() - 1.0);
            s += x * x;
        }
        let y = h * rng.gen::<f64>();
        s + y * y <= r * r
    });
    let (value, stderr) = mc::proportion_estimate(hits, samples, box_volume);
    Ok(VolumeEstimate::monte_carlo(value, stderr, samples))
}
