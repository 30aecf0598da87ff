//! Rough volume: counting greedy ε-separated nets and fitting their growth.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dirspace::unit_ball_volume;
use crate::error::{ensure, Error, Result};
use crate::mc;

/// Candidates drawn per unit of vol/εⁿ. A budget that scales with the
/// count keeps the packing equally close to saturation at every ε.
const ATTEMPTS_PER_CELL: f64 = 50.0;
const MAX_CELLS: usize = 1 << 26;

/// Bounded Euclidean regions of dimension 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoughRegion {
    Cube { dim: usize, side: f64 },
    Ball { dim: usize, radius: f64 },
}

type Pt = [f64; 3];

impl RoughRegion {
    pub fn unit_square() -> Self {
        RoughRegion::Cube { dim: 2, side: 1.0 }
    }

    pub fn disk(radius: f64) -> Self {
        RoughRegion::Ball { dim: 2, radius }
    }

    pub fn segment(length: f64) -> Self {
        RoughRegion::Cube { dim: 1, side: length }
    }

    fn validate(&self) -> Result<()> {
        let (dim, size) = match *self {
            RoughRegion::Cube { dim, side } => (dim, side),
            RoughRegion::Ball { dim, radius } => (dim, radius),
        };
        ensure((1..=3).contains(&dim), || format!("region dimension must be 1, 2 or 3, got {dim}"))?;
        ensure(size > 0.0 && size.is_finite(), || format!("region size must be positive, got {size}"))
    }

    pub fn dim(&self) -> usize {
        match *self {
            RoughRegion::Cube { dim, .. } | RoughRegion::Ball { dim, .. } => dim,
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            RoughRegion::Cube { dim, side } => side.powi(dim as i32),
            RoughRegion::Ball { dim, radius } => unit_ball_volume(dim) * radius.powi(dim as i32),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pt {
        let mut p = [0.0; 3];
        match *self {
            RoughRegion::Cube { dim, side } => {
                for x in p.iter_mut().take(dim) {
                    *x = side * rng.gen::<f64>();
                }
            }
            RoughRegion::Ball { dim, radius } => loop {
                for x in p.iter_mut().take(dim) {
                    *x = radius * (2.0 * rng.gen::<f64>() - 1.0);
                }
                if p.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
                    break;
                }
            },
        }
        p
    }
}

/// Points bucketed in cells of side ε over the bounding box, so a candidate
/// only meets its 3^dim neighbouring cells.
struct Grid {
    eps: f64,
    dim: usize,
    origin: f64,
    cells: usize,
    buckets: Vec<Vec<Pt>>,
}

impl Grid {
    fn new(region: &RoughRegion, eps: f64) -> Result<Self> {
        let (origin, extent) = match *region {
            RoughRegion::Cube { side, .. } => (0.0, side),
            RoughRegion::Ball { radius, .. } => (-radius, 2.0 * radius),
        };
        let dim = region.dim();
        let cells = (extent / eps).ceil() as usize + 1;
        let total = cells.checked_pow(dim as u32).filter(|&n| n <= MAX_CELLS).ok_or_else(|| {
            Error::InvalidArgument(format!("ε = {eps} is too fine for a {dim}-dimensional net"))
        })?;
        Ok(Self { eps, dim, origin, cells, buckets: vec![Vec::new(); total] })
    }

    fn coords(&self, p: &Pt) -> [usize; 3] {
        let mut c = [0; 3];
        for d in 0..self.dim {
            c[d] = (((p[d] - self.origin) / self.eps).floor().max(0.0) as usize).min(self.cells - 1);
        }
        c
    }

    fn index(&self, c: [usize; 3]) -> usize {
        (0..self.dim).rev().fold(0, |acc, d| acc * self.cells + c[d])
    }

    fn too_close(&self, p: &Pt) -> bool {
        let c = self.coords(p);
        let range = |d: usize| {
            if d < self.dim {
                c[d].saturating_sub(1)..=(c[d] + 1).min(self.cells - 1)
            } else {
                0..=0
            }
        };
        for i in range(0) {
            for j in range(1) {
                for k in range(2) {
                    let near = self.buckets[self.index([i, j, k])].iter().any(|q| {
                        let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                        d2 < self.eps * self.eps
                    });
                    if near {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn insert(&mut self, p: Pt) {
        let i = self.index(self.coords(&p));
        self.buckets[i].push(p);
    }
}

/// Size of a greedy ε-separated set built from random candidates.
fn greedy_net_count<R: Rng + ?Sized>(region: &RoughRegion, eps: f64, rng: &mut R) -> Result<u64> {
    let dim = region.dim();
    let budget = (ATTEMPTS_PER_CELL * region.volume() / eps.powi(dim as i32)).ceil() as u64;
    let mut grid = Grid::new(region, eps)?;
    let mut count = 0u64;
    for _ in 0..budget {
        let p = region.sample(rng);
        if !grid.too_close(&p) {
            grid.insert(p);
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoughSample {
    pub eps: f64,
    pub count: u64,
    /// εⁿ·β(ε) with n the region dimension.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoughVolumeFit {
    /// Least-squares slope of log β against −log ε.
    pub exponent: f64,
    pub samples: Vec<RoughSample>,
    /// Mean of εⁿ·β(ε).
    pub constant: f64,
    /// (max − min)/mean of εⁿ·β(ε).
    pub flatness: f64,
    /// constant / volume: the empirical ratio of rough volume to measure.
    pub empirical_c: f64,
}

/// Counts greedy nets at each ε (in parallel, one stream per ε) and fits the
/// growth exponent. The ε values must span at least one decade.
pub fn rough_volume_estimate(region: &RoughRegion, eps_list: &[f64], seed: u64) -> Result<RoughVolumeFit> {
    region.validate()?;
    ensure(eps_list.iter().all(|&e| e > 0.0 && e.is_finite()), || "every ε must be positive".into())?;
    let lo = eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eps_list.iter().copied().fold(0.0, f64::max);
    if eps_list.len() < 2 || hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(Error::InsufficientRange(format!(
            "ε values must span a decade, got [{lo}, {hi}] over {} values",
            eps_list.len()
        )));
    }
    let n = region.dim() as i32;
    let samples: Vec<RoughSample> = eps_list
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let count = greedy_net_count(region, eps, &mut mc::stream_rng(seed, i as u64))?;
            Ok(RoughSample { eps, count, scaled: eps.powi(n) * count as f64 })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = samples.iter().map(|s| -s.eps.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.count.max(1) as f64).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let scaled: Vec<f64> = samples.iter().map(|s| s.scaled).collect();
    let constant = scaled.iter().sum::<f64>() / k;
    let spread = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max) - scaled.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RoughVolumeFit {
        exponent: sxy / sxx,
        samples,
        constant,
        flatness: spread / constant,
        empirical_c: constant / region.volume(),
    })
}

/// `count` values geometrically spaced over `[lo, hi]`.
pub fn geometric_eps(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1).max(1) as f64)).collect()
}
