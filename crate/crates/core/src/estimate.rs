use serde::Serialize;

/// How a volume value was obtained and how far it may be off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum VolumeError {
    /// Deterministic quadrature; `tolerance` is the absolute bound carried
    /// into the value (already scaled by any constant factor).
    Quadrature { tolerance: f64 },
    /// Monte-Carlo estimate with one standard error.
    MonteCarlo { std_error: f64, samples: u64 },
    /// Closed-form value, exact up to rounding.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub error: VolumeError,
}

impl VolumeEstimate {
    pub fn quadrature(value: f64, tolerance: f64) -> Self {
        Self { value, error: VolumeError::Quadrature { tolerance } }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: u64) -> Self {
        Self { value, error: VolumeError::MonteCarlo { std_error, samples } }
    }

    pub fn closed_form(value: f64) -> Self {
        Self { value, error: VolumeError::ClosedForm }
    }

    /// `"exact"` for deterministic values, `"mc"` for Monte-Carlo.
    pub fn method(&self) -> &'static str {
        match self.error {
            VolumeError::MonteCarlo { .. } => "mc",
            _ => "exact",
        }
    }

    /// Tolerance or standard error, whichever applies.
    pub fn error_value(&self) -> f64 {
        match self.error {
            VolumeError::Quadrature { tolerance } => tolerance,
            VolumeError::MonteCarlo { std_error, .. } => std_error,
            VolumeError::ClosedForm => 0.0,
        }
    }

    pub fn samples(&self) -> u64 {
        match self.error {
            VolumeError::MonteCarlo { samples, .. } => samples,
            _ => 0,
        }
    }

    /// Difference of two estimates (e.g. an annulus from two balls); errors add.
    pub fn minus(&self, other: &VolumeEstimate) -> VolumeEstimate {
        let value = self.value - other.value;
        match (self.error, other.error) {
            (VolumeError::MonteCarlo { std_error: a, samples }, VolumeError::MonteCarlo { std_error: b, .. }) => {
                VolumeEstimate::monte_carlo(value, a + b, samples)
            }
            (VolumeError::ClosedForm, VolumeError::ClosedForm) => VolumeEstimate::closed_form(value),
            _ => VolumeEstimate::quadrature(value, self.error_value() + other.error_value()),
        }
    }

    pub fn scaled(&self, factor: f64) -> VolumeEstimate {
        let value = self.value * factor;
        match self.error {
            VolumeError::Quadrature { tolerance } => VolumeEstimate::quadrature(value, tolerance * factor.abs()),
            VolumeError::MonteCarlo { std_error, samples } => {
                VolumeEstimate::monte_carlo(value, std_error * factor.abs(), samples)
            }
            VolumeError::ClosedForm => VolumeEstimate::closed_form(value),
        }
    }
}
