use num_complex::Complex64;

use crate::error::DynamicsError;

/// Two long (quasi-CW) resonant drives with relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CWDriveParams {
    pub rabi_1: Complex64,
    pub rabi_2: Complex64,
    pub gamma_opt: f64,
    pub gamma_thz: f64,
}

impl CWDriveParams {
    pub fn new(rabi_1: Complex64, rabi_2: Complex64, gamma_opt: f64, gamma_thz: f64) -> Result<Self, DynamicsError> {
        if !(gamma_opt > 0.0) || !(gamma_thz > 0.0) {
            return Err(DynamicsError::ZeroDecayRate { gamma_opt, gamma_thz });
        }
        Ok(CWDriveParams {
            rabi_1,
            rabi_2,
            gamma_opt,
            gamma_thz,
        })
    }

    /// Equal real drives of strength `rabi`.
    pub fn symmetric(rabi: f64, gamma_opt: f64, gamma_thz: f64) -> Result<Self, DynamicsError> {
        Self::new(rabi.into(), rabi.into(), gamma_opt, gamma_thz)
    }

    /// `γ + (|Ω₁|² + |Ω₂|²)/γ_cb`, the power-broadened optical width.
    fn broadened_width(&self) -> f64 {
        self.gamma_opt + (self.rabi_1.norm_sqr() + self.rabi_2.norm_sqr()) / self.gamma_thz
    }

    /// Decay rate of the induced coherence,
    /// `G = 6|Ω₁|² / (γ + (|Ω₁|² + |Ω₂|²)/γ_cb)`.
    pub fn gain_decay(&self) -> f64 {
        6.0 * self.rabi_1.norm_sqr() / self.broadened_width()
    }

    /// Coherence at switch-on, `2Ω₂Ω₁* / (γγ_cb + |Ω₁|² + |Ω₂|²)`.
    pub fn sigma_max(&self) -> Complex64 {
        self.rabi_2 * self.rabi_1.conj() * 2.0 / (self.gamma_thz * self.broadened_width())
    }
}

/// THz coherence `σ_cb(t)` under quasi-CW driving.
pub fn cw_coherence(params: &CWDriveParams, t: f64) -> Result<Complex64, DynamicsError> {
    if !(params.gamma_opt > 0.0) || !(params.gamma_thz > 0.0) {
        return Err(DynamicsError::ZeroDecayRate {
            gamma_opt: params.gamma_opt,
            gamma_thz: params.gamma_thz,
        });
    }
    Ok(params.sigma_max() * (-params.gain_decay() * t).exp())
}
