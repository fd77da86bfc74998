use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{DriveStrength, ScenarioConfig};
use super::run::{run_inner, ReportRow};
use crate::error::ScenarioError;
use crate::units::{parse_quantity, Dimension};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    PeakRabi,
    PeakIntensity,
    PulseEnergy,
    PulseArea,
    Width,
    SigmaMax,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [
        SweepParam::PeakRabi,
        SweepParam::PeakIntensity,
        SweepParam::PulseEnergy,
        SweepParam::PulseArea,
        SweepParam::Width,
        SweepParam::SigmaMax,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SweepParam::PeakRabi => "peak_rabi",
            SweepParam::PeakIntensity => "peak_intensity",
            SweepParam::PulseEnergy => "pulse_energy",
            SweepParam::PulseArea => "pulse_area",
            SweepParam::Width => "width",
            SweepParam::SigmaMax => "sigma_max",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            SweepParam::PeakRabi => Dimension::Rate,
            SweepParam::PeakIntensity => Dimension::Intensity,
            SweepParam::PulseEnergy => Dimension::Energy,
            SweepParam::Width => Dimension::Time,
            SweepParam::PulseArea | SweepParam::SigmaMax => Dimension::Dimensionless,
        }
    }

    /// Parses a bound: a bare number is taken as SI, otherwise a unit is required.
    pub fn parse_value(self, text: &str) -> Result<f64, ScenarioError> {
        match text.trim().parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => Ok(parse_quantity(text, self.dimension())?),
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut cfg = base.clone();
        let d = &mut cfg.drive;
        match self {
            SweepParam::PeakRabi => d.strength = DriveStrength::PeakRabi(value),
            SweepParam::PeakIntensity => d.strength = DriveStrength::PeakIntensity(value),
            SweepParam::PulseEnergy => d.strength = DriveStrength::PulseEnergy(value),
            SweepParam::PulseArea => d.strength = DriveStrength::PulseArea(value),
            SweepParam::Width => d.width = value,
            SweepParam::SigmaMax => d.sigma_max = Some(value),
        }
        cfg.reference.clear();
        cfg
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepParam::ALL.into_iter().find(|p| p.key() == s).ok_or_else(|| {
            let keys: Vec<_> = SweepParam::ALL.iter().map(|p| p.key()).collect();
            format!("unknown sweep parameter `{s}` (expected one of {})", keys.join(", "))
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

impl FromStr for SweepScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(SweepScale::Linear),
            "log" => Ok(SweepScale::Log),
            other => Err(format!("unknown sweep scale `{other}` (expected linear or log)")),
        }
    }
}

/// Sampled parameter values: `steps` points from `min` to `max` inclusive.
pub fn sweep_values(min: f64, max: f64, steps: usize, scale: SweepScale) -> Result<Vec<f64>, ScenarioError> {
    let invalid = |message: String| ScenarioError::Config {
        origin: "sweep".into(),
        message,
    };
    if steps == 0 {
        return Err(invalid("`--steps` must be at least 1".into()));
    }
    if !min.is_finite() || !max.is_finite() {
        return Err(invalid("sweep bounds must be finite".into()));
    }
    if scale == SweepScale::Log && !(min > 0.0 && max > 0.0) {
        return Err(invalid("a log sweep needs positive bounds".into()));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let frac = |k: usize| k as f64 / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| match scale {
            SweepScale::Linear => min + (max - min) * frac(k),
            SweepScale::Log => (min.ln() + (max.ln() - min.ln()) * frac(k)).exp(),
        })
        .collect())
}

/// One sweep point; failures are kept so the sweep can continue.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<ReportRow, String>,
}

/// Runs the scenario at every value of `param`, in parallel when `parallel`
/// is set. Results are ordered by parameter index either way.
pub fn sweep(base: &ScenarioConfig, param: SweepParam, values: &[f64], parallel: bool) -> Vec<SweepPoint> {
    let point = |&value: &f64| SweepPoint {
        value,
        result: run_inner(&param.apply(base, value), false).map_err(|e| e.to_string()),
    };
    if parallel {
        values.par_iter().map(point).collect()
    } else {
        values.iter().map(point).collect()
    }
}
