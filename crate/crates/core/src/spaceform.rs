//! Trigonometry of the 2-dimensional model spaces of constant curvature κ.
//!
//! Every distance here is computed in half-chord form,
//! `sn²(d/2) = sn²((s−t)/2) + sin²(θ/2)·sn(s)·sn(t)`, which stays accurate for
//! short and long sides alike. For κ > 0 the complementary
//! `cs²(d/2) = cs²((s+t)/2) + cos²(θ/2)·sn(s)·sn(t)` form is used as well so
//! near-antipodal sides do not lose half their digits in `asin`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, invalid, Error, Result};

/// Below this value of `|κ|·t²` the model sine switches to its Taylor series.
pub const TAYLOR_THRESHOLD: f64 = 1e-8;

const DOMAIN_SLACK: f64 = 1e-12;

/// Curvature κ of the model plane S²_κ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Curvature(f64);

impl TryFrom<f64> for Curvature {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        Curvature::new(k)
    }
}

impl From<Curvature> for f64 {
    fn from(k: Curvature) -> f64 {
        k.0
    }
}

impl Curvature {
    pub const FLAT: Curvature = Curvature(0.0);
    pub const SPHERICAL: Curvature = Curvature(1.0);
    pub const HYPERBOLIC: Curvature = Curvature(-1.0);

    pub fn new(kappa: f64) -> Result<Self> {
        ensure(kappa.is_finite(), || format!("curvature must be finite, got {kappa}"))?;
        Ok(Curvature(kappa))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `π/√κ` for κ > 0, the diameter of the model sphere.
    pub fn diameter(self) -> Option<f64> {
        (self.0 > 0.0).then(|| PI / self.0.sqrt())
    }

    /// Whether `t` is a legal radial argument (nonnegative, at most `π/√κ`).
    pub fn admits(self, t: f64) -> bool {
        t >= 0.0 && t.is_finite() && self.diameter().is_none_or(|d| t <= d * (1.0 + DOMAIN_SLACK))
    }

    pub(crate) fn check_length(self, t: f64, what: &str) -> Result<()> {
        ensure(self.admits(t), || match self.diameter() {
            Some(d) => format!("{what} = {t} outside [0, π/√κ = {d}] for κ = {}", self.0),
            None => format!("{what} = {t} must be a nonnegative finite length"),
        })
    }

    fn small(self, t: f64) -> bool {
        self.0 == 0.0 || self.0.abs() * t * t < TAYLOR_THRESHOLD
    }

    /// `"series"` where `sn_κ(t)` is evaluated by its Taylor polynomial,
    /// `"closed_form"` elsewhere.
    pub fn sn_method(self, t: f64) -> &'static str {
        if self.small(t) && self.0 != 0.0 {
            "series"
        } else {
            "closed_form"
        }
    }

    /// Model sine `sn_κ(t)` without domain checks; odd in `t`.
    pub(crate) fn sn_raw(self, t: f64) -> f64 {
        let k = self.0;
        if self.small(t) {
            let t2 = t * t;
            return t * (1.0 - k * t2 / 6.0 + k * k * t2 * t2 / 120.0);
        }
        if k > 0.0 {
            let s = k.sqrt();
            (s * t).sin() / s
        } else {
            let s = (-k).sqrt();
            (s * t).sinh() / s
        }
    }

    /// Inverse of `sn_κ` on `[0, π/(2√κ)]` (all of `[0, ∞)` for κ ≤ 0).
    pub(crate) fn asn_raw(self, y: f64) -> f64 {
        let k = self.0;
        if self.small(y) {
            let y2 = y * y;
            return y * (1.0 + k * y2 / 6.0 + 3.0 * k * k * y2 * y2 / 40.0);
        }
        if k > 0.0 {
            let s = k.sqrt();
            (s * y).min(1.0).asin() / s
        } else {
            let s = (-k).sqrt();
            (s * y).asinh() / s
        }
    }

    /// `sn_κ(t)` with the radial domain enforced.
    pub fn sn(self, t: f64) -> Result<f64> {
        self.check_length(t, "t")?;
        Ok(self.sn_raw(t).max(0.0))
    }

    /// `cosh_κ` in the sense used by bi-Lipschitz constants: `cosh(√−κ·t)`
    /// for κ < 0, `cos(√κ·t)` for κ > 0, 1 for κ = 0.
    pub fn cs(self, t: f64) -> f64 {
        let k = self.0;
        if k > 0.0 {
            (k.sqrt() * t).cos()
        } else if k < 0.0 {
            ((-k).sqrt() * t).cosh()
        } else {
            1.0
        }
    }
}

/// `sn_κ(t)`: `t` for κ = 0, `sin(√κ t)/√κ` for κ > 0, `sinh(√−κ t)/√−κ` for κ < 0.
pub fn sn(kappa: Curvature, t: f64) -> Result<f64> {
    kappa.sn(t)
}

/// Two sides and their included angle in S²_κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub side_a: f64,
    pub side_b: f64,
    pub angle: f64,
}

impl Triangle {
    pub fn new(side_a: f64, side_b: f64, angle: f64) -> Self {
        Self { side_a, side_b, angle }
    }

    fn validate(&self, kappa: Curvature) -> Result<()> {
        kappa.check_length(self.side_a, "side_a")?;
        kappa.check_length(self.side_b, "side_b")?;
        check_angle(self.angle)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    ensure((0.0..=PI).contains(&theta), || format!("angle {theta} outside [0, π]"))
}

/// Half-chord quantity `sn²_κ(d/2)` where `diff = s − t` is passed separately so
/// callers holding an exact radial difference keep its precision.
pub(crate) fn half_chord_with_diff(kappa: Curvature, diff: f64, s: f64, t: f64, theta: f64) -> f64 {
    let radial = kappa.sn_raw(0.5 * diff);
    let half = (0.5 * theta).sin();
    radial * radial + half * half * kappa.sn_raw(s) * kappa.sn_raw(t)
}

/// Model distance opposite `theta`, defined for every `s, t` in the radial
/// domain. For κ > 0 and `s + t > π/√κ` at `θ = π` this returns the wrapped
/// value `2π/√κ − s − t`, which is what the cone over a space of diameter π
/// needs; the public [`cosine_law_side`] rejects that configuration.
pub(crate) fn model_distance(kappa: Curvature, s: f64, t: f64, theta: f64) -> f64 {
    if s == 0.0 || t == 0.0 || theta == 0.0 {
        return (s - t).abs();
    }
    let k = kappa.value();
    let big = s.max(t);
    if k > 0.0 && !kappa.small(big) {
        let r = k.sqrt();
        let (a, b) = (r * s, r * t);
        let (sa, sb) = (a.sin().max(0.0), b.sin().max(0.0));
        let sh = (0.5 * (a - b)).sin();
        let ch = (0.5 * (a + b)).cos();
        let (ht, ct) = ((0.5 * theta).sin(), (0.5 * theta).cos());
        let h_sin = sh * sh + ht * ht * sa * sb;
        let h_cos = ch * ch + ct * ct * sa * sb;
        return 2.0 * h_sin.sqrt().atan2(h_cos.sqrt()) / r;
    }
    let h = half_chord_with_diff(kappa, s - t, s, t, theta).max(0.0);
    2.0 * kappa.asn_raw(h.sqrt())
}

/// Length of the side opposite `theta` in the model triangle with sides `s`, `t`.
pub fn cosine_law_side(kappa: Curvature, s: f64, t: f64, theta: f64) -> Result<f64> {
    kappa.check_length(s, "s")?;
    kappa.check_length(t, "t")?;
    check_angle(theta)?;
    if let Some(d) = kappa.diameter() {
        ensure(!(theta == PI && s + t > d * (1.0 + DOMAIN_SLACK)), || {
            format!("θ = π with s + t = {} > π/√κ = {d} leaves the model ball", s + t)
        })?;
    }
    Ok(model_distance(kappa, s, t, theta))
}

/// Right-hand side of the half-chord cosine law,
/// `sn²((a−b)/2) + sin²(θ/2)·sn(a)·sn(b)`.
pub fn half_chord_value(kappa: Curvature, tri: &Triangle) -> Result<f64> {
    tri.validate(kappa)?;
    Ok(half_chord_with_diff(kappa, tri.side_a - tri.side_b, tri.side_a, tri.side_b, tri.angle))
}

/// Angle between sides `a` and `b` of the model triangle whose third side is `c`.
pub fn comparison_angle(kappa: Curvature, a: f64, b: f64, c: f64) -> Result<f64> {
    kappa.check_length(a, "a")?;
    kappa.check_length(b, "b")?;
    ensure(a > 0.0 && b > 0.0, || format!("sides adjacent to the angle must be positive, got {a}, {b}"))?;
    ensure(c >= 0.0 && c.is_finite(), || format!("opposite side must be a nonnegative length, got {c}"))?;
    if let Some(d) = kappa.diameter() {
        ensure(a < d && b < d, || format!("sides {a}, {b} reach the antipode π/√κ = {d}; angle undefined"))?;
    }
    let slack = 1e-12 * (a + b).max(1.0);
    let lo = (a - b).abs();
    let hi = model_distance(kappa, a, b, PI);
    if c < lo - slack || c > hi + slack {
        return Err(Error::InfeasibleTriangle { a, b, c });
    }
    // Sides within rounding of a degenerate triangle give the exact endpoint;
    // the square roots below would otherwise turn one ulp into ~1e-8 radians.
    let ulps = 4.0 * f64::EPSILON * (a + b);
    if c - lo <= ulps {
        return Ok(0.0);
    }
    if hi - c <= ulps {
        return Ok(PI);
    }
    // sin²(θ/2) ∝ sn((c−|a−b|)/2)·sn((c+|a−b|)/2) and
    // cos²(θ/2) ∝ sn((a+b−c)/2)·sn((a+b+c)/2) with the same factor 1/(sn a sn b).
    let sin_part = kappa.sn_raw(0.5 * (c - lo).max(0.0)) * kappa.sn_raw(0.5 * (c + lo));
    let cos_part = kappa.sn_raw(0.5 * (a + b - c).max(0.0)) * kappa.sn_raw(0.5 * (a + b + c));
    Ok(2.0 * sin_part.max(0.0).sqrt().atan2(cos_part.max(0.0).sqrt()))
}

/// The four scalar inequalities used to bound the annulus map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrigInequality {
    /// `sin λx ≥ λ sin x` for λ ∈ [0,1], x ∈ [0,π].
    SinConcave = 1,
    /// `sinh λx ≤ λ sinh x` for λ ∈ [0,1], x ≥ 0.
    SinhConvex = 2,
    /// `sin λx / (λ sin x) ≥ 1 − (λx)²/6` for λ ≥ 0, 0 < x < π, λx ≤ π.
    SinRatio = 3,
    /// `sinh λx / (λ sinh x) ≥ 1 − x` for λ ≥ 0, x ≥ 0.
    SinhRatio = 4,
}

impl TrigInequality {
    pub fn from_case(case: u8) -> Result<Self> {
        match case {
            1 => Ok(Self::SinConcave),
            2 => Ok(Self::SinhConvex),
            3 => Ok(Self::SinRatio),
            4 => Ok(Self::SinhRatio),
            _ => Err(invalid(format!("inequality case must be 1..=4, got {case}"))),
        }
    }

    pub const ALL: [TrigInequality; 4] =
        [Self::SinConcave, Self::SinhConvex, Self::SinRatio, Self::SinhRatio];
}

/// Signed slack of the inequality in its stated direction (≥ 0 when it holds).
pub fn trig_inequality_margin(case: TrigInequality, lambda: f64, x: f64) -> Result<f64> {
    ensure(lambda.is_finite() && x.is_finite(), || "λ and x must be finite".to_string())?;
    ensure(lambda >= 0.0 && x >= 0.0, || format!("need λ ≥ 0 and x ≥ 0, got λ = {lambda}, x = {x}"))?;
    match case {
        TrigInequality::SinConcave => {
            ensure(lambda <= 1.0 && x <= PI, || format!("case 1 needs λ ≤ 1, x ≤ π; got {lambda}, {x}"))?;
            Ok((lambda * x).sin() - lambda * x.sin())
        }
        TrigInequality::SinhConvex => {
            ensure(lambda <= 1.0, || format!("case 2 needs λ ≤ 1, got {lambda}"))?;
            Ok(lambda * x.sinh() - (lambda * x).sinh())
        }
        TrigInequality::SinRatio => {
            ensure(x < PI && lambda * x <= PI * (1.0 + DOMAIN_SLACK), || {
                format!("case 3 needs x < π and λx ≤ π; got λ = {lambda}, x = {x}")
            })?;
            let lx = lambda * x;
            let ratio = if x == 0.0 {
                1.0
            } else if lambda == 0.0 {
                x / x.sin()
            } else {
                lx.sin() / (lambda * x.sin())
            };
            Ok(ratio - (1.0 - lx * lx / 6.0))
        }
        TrigInequality::SinhRatio => {
            let ratio = if x == 0.0 {
                1.0
            } else if lambda == 0.0 {
                x / x.sinh()
            } else {
                (lambda * x).sinh() / (lambda * x.sinh())
            };
            Ok(ratio - (1.0 - x))
        }
    }
}
