//! Intensity and energy bookkeeping for the optical pump, the absorbed
//! fraction, the THz dipole calibration and the damage-threshold lookup.

use std::f64::consts::PI;

use super::params::{CrystalGeometry, MaterialParams};
use crate::error::MaterialError;
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// `2πħc/(γ n λ σ_abs)`: peak intensity per unit Ω₀².
fn intensity_per_rabi_sq(mat: &MaterialParams) -> f64 {
    2.0 * PI * HBAR * SPEED_OF_LIGHT / (mat.gamma_opt * mat.n_opt * mat.lambda_opt * mat.sigma_abs_opt)
}

/// Peak intensity (W/m²) of a pump with peak Rabi frequency `omega_0`.
pub fn peak_intensity(omega_0: f64, mat: &MaterialParams) -> f64 {
    intensity_per_rabi_sq(mat) * omega_0 * omega_0
}

/// Inverse of [`peak_intensity`].
pub fn rabi_from_intensity(intensity: f64, mat: &MaterialParams) -> f64 {
    (intensity.max(0.0) / intensity_per_rabi_sq(mat)).sqrt()
}

/// Energy (J) of one Gaussian pump pulse of width `tau` through `A_opt`.
///
/// Equals `peak_intensity · √π · τ · A_opt`.
pub fn optical_pulse_energy(omega_0: f64, tau: f64, geom: &CrystalGeometry, mat: &MaterialParams) -> f64 {
    peak_intensity(omega_0, mat) * PI.sqrt() * tau * geom.area_opt
}

/// Inverse of [`optical_pulse_energy`].
pub fn rabi_from_energy(energy: f64, tau: f64, geom: &CrystalGeometry, mat: &MaterialParams) -> f64 {
    rabi_from_intensity(energy / (PI.sqrt() * tau * geom.area_opt), mat)
}

/// Fraction `1 − exp(−σ_abs N L_opt)` of the pump absorbed in the crystal.
pub fn absorbed_fraction(mat: &MaterialParams, geom: &CrystalGeometry) -> f64 {
    -(-mat.sigma_abs_opt * mat.density * geom.length_opt).exp_m1()
}

/// THz transition dipole and the emission coupling it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleCalibration {
    /// `μ_cb²` in C²·m².
    pub dipole_sq: f64,
    /// Emission coupling `η = N γ_cb^LT σ_abs,THz^LT` (m⁻¹·s⁻¹).
    pub coupling: f64,
}

/// Calibrates `μ_cb²` from the low-temperature THz linewidth and absorption
/// cross-section.
///
/// The Gaussian-unit relation `μ² = γ c ħ n₃ σ / (2π ω₃)` is carried to SI by
/// the factor `4πε₀`.
pub fn derived_dipole(mat: &MaterialParams) -> Result<DipoleCalibration, MaterialError> {
    let (gamma_lt, sigma_lt) = mat.lt_references()?;
    let dipole_sq =
        4.0 * PI * EPSILON_0 * gamma_lt * SPEED_OF_LIGHT * HBAR * mat.n_thz * sigma_lt / (2.0 * PI * mat.omega_thz);
    Ok(DipoleCalibration {
        dipole_sq,
        coupling: mat.density * gamma_lt * sigma_lt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DamageVerdict {
    /// Below the lower bound of the bucket.
    Pass,
    /// Inside the quoted threshold range.
    Marginal,
    /// Above the upper bound.
    Exceeded,
    /// No bucket covers the pulse duration.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamageAssessment {
    pub verdict: DamageVerdict,
    /// Lower threshold divided by the intensity; NaN when `Unknown`.
    pub margin: f64,
}

impl DamageAssessment {
    pub fn passed(&self) -> bool {
        self.verdict == DamageVerdict::Pass
    }
}

/// Compares a peak intensity against the duration bucket containing `tau`.
pub fn damage_check(intensity: f64, tau: f64, mat: &MaterialParams) -> Result<DamageAssessment, MaterialError> {
    if mat.damage_threshold.is_empty() {
        return Err(MaterialError::ThresholdTable(format!(
            "material `{}` has no damage thresholds",
            mat.name
        )));
    }
    let Some(bucket) = mat
        .damage_threshold
        .iter()
        .find(|b| tau >= b.min_duration * (1.0 - 1e-9) && tau <= b.max_duration * (1.0 + 1e-9))
    else {
        return Ok(DamageAssessment {
            verdict: DamageVerdict::Unknown,
            margin: f64::NAN,
        });
    };
    let margin = if intensity > 0.0 {
        bucket.intensity_low / intensity
    } else {
        f64::INFINITY
    };
    let verdict = if intensity < bucket.intensity_low {
        DamageVerdict::Pass
    } else if intensity <= bucket.intensity_high {
        DamageVerdict::Marginal
    } else {
        DamageVerdict::Exceeded
    };
    Ok(DamageAssessment { verdict, margin })
}
