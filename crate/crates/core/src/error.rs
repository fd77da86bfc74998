use std::path::PathBuf;

use thiserror::Error;

use crate::units::Dimension;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitError {
    #[error("negative value {0} where a non-negative quantity is required")]
    Negative(f64),
    #[error("cannot parse a number from `{0}`")]
    BadNumber(String),
    #[error("`{text}` has no unit; a {dimension} unit is required")]
    MissingUnit { text: String, dimension: Dimension },
    #[error("unit `{unit}` is not a known {dimension} unit")]
    UnknownUnit { unit: String, dimension: Dimension },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("step size underflow at t = {t:e} s (h = {h:e} s): local error stays above tolerance")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("exceeded {max_steps} steps before reaching t = {t:e} s")]
    MaxStepsExceeded { t: f64, max_steps: usize },
    #[error("non-finite state encountered at t = {t:e} s")]
    NonFinite { t: f64 },
    #[error("time grid must be non-empty and strictly increasing")]
    BadGrid,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid initial state: {0}")]
    InvalidState(String),
    #[error("invalid relaxation rates: {0}")]
    InvalidRates(String),
    #[error("the reduced system assumes resonant driving; got detuning {0:e} rad/s")]
    NotResonant(f64),
    #[error("decay rates must be strictly positive (gamma_opt = {gamma_opt:e}, gamma_thz = {gamma_thz:e})")]
    ZeroDecayRate { gamma_opt: f64, gamma_thz: f64 },
    #[error("unsupported polarization `{0}` (expected right_circular, left_circular or linear_perp)")]
    UnsupportedPolarization(String),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("cannot read material file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed material file {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("material field `{field}`: {source}")]
    Field { field: &'static str, source: UnitError },
    #[error("material field `{0}` is missing")]
    Missing(&'static str),
    #[error("material field `{field}` must be positive, got {value:e}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("refractive index `{field}` must be at least 1, got {value}")]
    RefractiveIndex { field: &'static str, value: f64 },
    #[error("material `{0}` lacks the low-temperature THz reference values")]
    MissingLtReference(String),
    #[error("no material preset named `{0}`")]
    UnknownPreset(String),
    #[error("damage threshold table: {0}")]
    ThresholdTable(String),
    #[error("geometry field `{field}` must be positive, got {value:e}")]
    Geometry { field: &'static str, value: f64 },
}

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error("no real phase-matching solution: n_thz = {n_thz} does not exceed n_opt = {n_opt}")]
    NoRealSolution { n_opt: f64, n_thz: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("source undersampled: spatial step {step:e} m exceeds a quarter of the coherence length {scale:e} m")]
    Undersampled { step: f64, scale: f64 },
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid configuration {origin}: {message}")]
    Config { origin: String, message: String },
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error("{0} table cell(s) outside tolerance")]
    Tolerance(usize),
}

impl ScenarioError {
    /// Process exit status: 1 validation, 2 tolerance, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Tolerance(_) => 2,
            ScenarioError::Dynamics(DynamicsError::Integration(_))
            | ScenarioError::Propagation(PropagationError::Integration(_))
            | ScenarioError::Propagation(PropagationError::Dynamics(DynamicsError::Integration(_)))
            | ScenarioError::Propagation(PropagationError::Undersampled { .. }) => 3,
            _ => 1,
        }
    }
}
