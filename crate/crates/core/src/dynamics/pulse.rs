use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use crate::error::DynamicsError;

/// Gaussian envelopes are treated as zero outside `center ± TRUNCATION·width`.
pub const TRUNCATION: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseShape {
    /// `Ω₀·exp(−(t−t₀)²/2τ²)`
    Gaussian,
    /// `Ω₀` for `|t−t₀| ≤ τ`, zero elsewhere.
    FlatTop,
}

impl FromStr for PulseShape {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(PulseShape::Gaussian),
            "flat_top" | "flat-top" => Ok(PulseShape::FlatTop),
            other => Err(DynamicsError::InvalidPulse(format!("unknown pulse shape `{other}`"))),
        }
    }
}

/// Envelope of one optical drive, in Rabi-frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    shape: PulseShape,
    peak_rabi: f64,
    width: f64,
    center: f64,
    detuning: f64,
}

impl PulseSpec {
    pub fn new(shape: PulseShape, peak_rabi: f64, width: f64, center: f64) -> Result<Self, DynamicsError> {
        if !(peak_rabi >= 0.0) || !peak_rabi.is_finite() {
            return Err(DynamicsError::InvalidPulse(format!(
                "peak Rabi frequency {peak_rabi:e} must be ≥ 0"
            )));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(DynamicsError::InvalidPulse(format!("width {width:e} must be > 0")));
        }
        if !center.is_finite() {
            return Err(DynamicsError::InvalidPulse("center must be finite".into()));
        }
        Ok(PulseSpec {
            shape,
            peak_rabi,
            width,
            center,
            detuning: 0.0,
        })
    }

    pub fn gaussian(peak_rabi: f64, width: f64) -> Result<Self, DynamicsError> {
        Self::new(PulseShape::Gaussian, peak_rabi, width, 0.0)
    }

    pub fn flat_top(peak_rabi: f64, width: f64) -> Result<Self, DynamicsError> {
        Self::new(PulseShape::FlatTop, peak_rabi, width, 0.0)
    }

    /// Gaussian pulse whose area `2√2∫Ω dt` equals `area`.
    pub fn gaussian_with_area(area: f64, width: f64) -> Result<Self, DynamicsError> {
        Self::gaussian(area / (4.0 * PI.sqrt() * width), width)
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_peak_rabi(self, peak_rabi: f64) -> Result<Self, DynamicsError> {
        Ok(Self::new(self.shape, peak_rabi, self.width, self.center)?.with_detuning(self.detuning))
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }
    pub fn peak_rabi(&self) -> f64 {
        self.peak_rabi
    }
    pub fn width(&self) -> f64 {
        self.width
    }
    pub fn center(&self) -> f64 {
        self.center
    }
    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Time interval outside which the envelope is zero.
    pub fn window(&self) -> (f64, f64) {
        let half = match self.shape {
            PulseShape::Gaussian => TRUNCATION * self.width,
            PulseShape::FlatTop => self.width,
        };
        (self.center - half, self.center + half)
    }

    /// Times at which the envelope is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.window();
        vec![lo, hi]
    }

    /// Envelope Ω(t).
    pub fn rabi(&self, t: f64) -> f64 {
        let (lo, hi) = self.window();
        if t < lo || t > hi {
            return 0.0;
        }
        match self.shape {
            PulseShape::Gaussian => {
                let x = (t - self.center) / self.width;
                self.peak_rabi * (-0.5 * x * x).exp()
            }
            PulseShape::FlatTop => self.peak_rabi,
        }
    }

    /// `∫_{-∞}^{t} Ω(t′) dt′` over the truncated envelope.
    pub fn cumulative_integral(&self, t: f64) -> f64 {
        let (lo, hi) = self.window();
        let t = t.clamp(lo, hi);
        match self.shape {
            PulseShape::Gaussian => {
                let s = SQRT_2 * self.width;
                let scale = self.peak_rabi * self.width * (PI / 2.0).sqrt();
                scale * (libm::erf((t - self.center) / s) - libm::erf((lo - self.center) / s))
            }
            PulseShape::FlatTop => self.peak_rabi * (t - lo),
        }
    }

    /// Integral of the envelope over its whole window.
    pub fn integral(&self) -> f64 {
        self.cumulative_integral(self.window().1)
    }
}

/// Pulse area `S = 2√2 ∫ Ω dt`; a pair of equal resonant pulses with `S = π`
/// leaves the upper-level coherence at its maximum of one half.
pub fn pulse_area(pulse: &PulseSpec) -> f64 {
    2.0 * SQRT_2 * pulse.integral()
}
