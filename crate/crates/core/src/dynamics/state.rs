use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::DynamicsError;

/// Level indices in the density matrix: ground `a`, upper levels `b` and `c`.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;

/// Tolerance used when validating a density matrix.
pub const STATE_TOLERANCE: f64 = 1e-9;

/// Density matrix of the V system together with the symmetric-drive
/// variables derived from it.
///
/// `σ_ba = ρ_ba`, `σ_ca = ρ_ca`, `σ_cb = ρ_cb`; the reduced variables are
/// `α = (σ_ba + σ_ca)/2`, `β = Re σ_cb` and `ξ = α − α*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VSystemState {
    rho: Matrix3<Complex64>,
}

impl VSystemState {
    /// All population in the ground level.
    pub fn ground() -> Self {
        let mut rho = Matrix3::zeros();
        rho[(A, A)] = Complex64::new(1.0, 0.0);
        VSystemState { rho }
    }

    /// Validates trace, Hermiticity and positivity.
    pub fn from_matrix(rho: Matrix3<Complex64>) -> Result<Self, DynamicsError> {
        let state = VSystemState { rho };
        let trace_err = (state.trace() - 1.0).abs();
        if trace_err > STATE_TOLERANCE || state.rho.trace().im.abs() > STATE_TOLERANCE {
            return Err(DynamicsError::InvalidState(format!(
                "trace deviates from 1 by {trace_err:e}"
            )));
        }
        let herm = state.hermiticity_error();
        if herm > STATE_TOLERANCE {
            return Err(DynamicsError::InvalidState(format!(
                "not Hermitian (max |ρ−ρ†| = {herm:e})"
            )));
        }
        let min_eig = state.min_eigenvalue();
        if min_eig < -STATE_TOLERANCE {
            return Err(DynamicsError::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(state)
    }

    /// Wraps a matrix produced by the integrator without validation.
    pub(crate) fn from_matrix_unchecked(rho: Matrix3<Complex64>) -> Self {
        VSystemState { rho }
    }

    /// Pure state `|ψ⟩⟨ψ|` with amplitudes `(c_a, c_b, c_c)`; normalised here.
    pub fn pure(amplitudes: [Complex64; 3]) -> Result<Self, DynamicsError> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(DynamicsError::InvalidState("zero state vector".into()));
        }
        let v = nalgebra::Vector3::from_iterator(amplitudes.iter().map(|c| c / norm));
        Self::from_matrix(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.rho
    }

    pub fn rho_a(&self) -> f64 {
        self.rho[(A, A)].re
    }
    pub fn rho_b(&self) -> f64 {
        self.rho[(B, B)].re
    }
    pub fn rho_c(&self) -> f64 {
        self.rho[(C, C)].re
    }
    pub fn sigma_ba(&self) -> Complex64 {
        self.rho[(B, A)]
    }
    pub fn sigma_ca(&self) -> Complex64 {
        self.rho[(C, A)]
    }
    pub fn sigma_cb(&self) -> Complex64 {
        self.rho[(C, B)]
    }

    pub fn alpha(&self) -> Complex64 {
        (self.sigma_ba() + self.sigma_ca()) * 0.5
    }
    pub fn beta(&self) -> f64 {
        self.sigma_cb().re
    }
    pub fn xi(&self) -> Complex64 {
        let a = self.alpha();
        a - a.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

impl Default for VSystemState {
    fn default() -> Self {
        Self::ground()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_variables() {
        let s = VSystemState::ground();
        assert_eq!(s.rho_a(), 1.0);
        assert_eq!(s.beta(), 0.0);
        assert_eq!(s.xi(), Complex64::new(0.0, 0.0));
        assert!((s.min_eigenvalue()).abs() < 1e-12);
    }

    #[test]
    fn bright_state_coherence() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = VSystemState::pure([0.0.into(), h.into(), h.into()]).unwrap();
        assert!((s.sigma_cb().re - 0.5).abs() < 1e-15);
        assert!((s.rho_b() - s.rho_c()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unphysical() {
        let mut m = Matrix3::zeros();
        m[(A, A)] = Complex64::new(1.5, 0.0);
        m[(B, B)] = Complex64::new(-0.5, 0.0);
        assert!(VSystemState::from_matrix(m).is_err());

        let mut m = VSystemState::ground().rho;
        m[(A, A)] = Complex64::new(0.9, 0.0);
        assert!(VSystemState::from_matrix(m).is_err());

        let mut m = VSystemState::ground().rho;
        m[(C, B)] = Complex64::new(0.1, 0.0);
        assert!(VSystemState::from_matrix(m).is_err());
    }
}
