use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::PropagationError;
use crate::materials::MaterialParams;

/// `sin(x)/x` with the removable point handled by its Taylor series.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Phase-matching prefactor `e^{iδkL/2}·sin(δkL/2)/(δkL/2)` of the CW output
/// field in the lossless limit.
pub fn phase_mismatch_factor(delta_k: f64, length: f64) -> Result<Complex64, PropagationError> {
    if !(length > 0.0) || !delta_k.is_finite() {
        return Err(PropagationError::InvalidInput(format!(
            "phase mismatch needs L > 0 and finite δk, got L = {length:e}, δk = {delta_k:e}"
        )));
    }
    let half = 0.5 * delta_k * length;
    Ok(Complex64::from_polar(sinc(half), half))
}

/// Wavevectors and angles of the non-collinear CW difference-frequency
/// geometry `k⃗₂ − k⃗₁ = k⃗₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatchGeometry {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// Small-angle estimate `√((n₃² − n₁²)/n₁²)·λ₁/λ₃` of the pump crossing angle.
    pub phi: f64,
    /// Crossing angle that closes the wavevector triangle exactly.
    pub phi_exact: f64,
    /// Angle between `k⃗₁` and the THz propagation direction.
    pub theta_thz: f64,
    /// Residual `|k⃗₂ − k⃗₁| − k₃` when the pumps cross at `phi`.
    pub delta_k: f64,
}

impl PhaseMatchGeometry {
    /// `k₃² − (k₁² + k₂² − 2k₁k₂ cos φ)` relative to `k₃²`, evaluated in the
    /// cancellation-free form `(k₂ − k₁)² + 4k₁k₂ sin²(φ/2)`.
    pub fn triangle_residual(&self, phi: f64) -> f64 {
        let s = (0.5 * phi).sin();
        let closing = (self.k2 - self.k1).powi(2) + 4.0 * self.k1 * self.k2 * s * s;
        (self.k3 * self.k3 - closing) / (self.k3 * self.k3)
    }
}

/// Crossing geometry of two pumps whose frequencies differ by the THz
/// frequency; `lambda_opt` is the lower-frequency pump.
pub fn cw_phase_match(
    mat: &MaterialParams,
    lambda_opt: f64,
    lambda_thz: f64,
) -> Result<PhaseMatchGeometry, PropagationError> {
    if !(lambda_opt > 0.0) || !(lambda_thz > 0.0) {
        return Err(PropagationError::InvalidInput(format!(
            "wavelengths must be positive, got {lambda_opt:e} m and {lambda_thz:e} m"
        )));
    }
    let (n1, n3) = (mat.n_opt, mat.n_thz);
    if n3 < n1 {
        return Err(PropagationError::NoRealSolution { n_opt: n1, n_thz: n3 });
    }
    let lambda_2 = 1.0 / (1.0 / lambda_opt + 1.0 / lambda_thz);
    let k1 = 2.0 * PI * n1 / lambda_opt;
    let k2 = 2.0 * PI * n1 / lambda_2;
    let k3 = 2.0 * PI * n3 / lambda_thz;

    let phi = ((n3 * n3 - n1 * n1) / (n1 * n1)).sqrt() * lambda_opt / lambda_thz;
    // sin²(φ/2) = (k₃ − k₂ + k₁)(k₃ + k₂ − k₁)/(4k₁k₂)
    let s2 = ((k3 - k2 + k1) * (k3 + k2 - k1) / (4.0 * k1 * k2)).clamp(0.0, 1.0);
    let phi_exact = 2.0 * s2.sqrt().asin();
    let cos_theta = ((k2 - k1) * (k2 + k1) - k3 * k3) / (2.0 * k1 * k3);
    let theta_thz = cos_theta.clamp(-1.0, 1.0).acos();
    let s = (0.5 * phi).sin();
    let delta_k = ((k2 - k1).powi(2) + 4.0 * k1 * k2 * s * s).sqrt() - k3;

    Ok(PhaseMatchGeometry {
        k1,
        k2,
        k3,
        phi,
        phi_exact,
        theta_thz,
        delta_k,
    })
}

/// Pump tilt `λ₁n₃/(λ₃n₁)` that phase-matches the two-beam pulsed scheme.
pub fn pulsed_tilt_angle(mat: &MaterialParams, lambda_opt: f64, lambda_thz: f64) -> f64 {
    lambda_opt * mat.n_thz / (lambda_thz * mat.n_opt)
}

/// Free-space diffraction loss `λ₃/D²` (m⁻¹) of a THz beam of aperture `D`.
pub fn diffraction_loss(lambda_thz: f64, aperture: f64) -> Result<f64, PropagationError> {
    if !(aperture > 0.0) || !(lambda_thz > 0.0) {
        return Err(PropagationError::InvalidInput(format!(
            "diffraction loss needs positive λ and D, got λ = {lambda_thz:e} m, D = {aperture:e} m"
        )));
    }
    Ok(lambda_thz / (aperture * aperture))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ruby() -> MaterialParams {
        MaterialParams::preset("ruby-rt").unwrap()
    }

    #[test]
    fn sinc_prefactor() {
        assert_eq!(phase_mismatch_factor(0.0, 1.0).unwrap(), Complex64::new(1.0, 0.0));
        assert!(phase_mismatch_factor(2.0 * PI, 1.0).unwrap().norm() < 1e-15);
        assert_relative_eq!(
            phase_mismatch_factor(PI, 1.0).unwrap().norm(),
            2.0 / PI,
            max_relative = 1e-14
        );
        assert!(phase_mismatch_factor(1.0, 0.0).is_err());
        // series branch agrees with the direct quotient
        let x = 0.999e-4;
        assert!((sinc(x) - x.sin() / x).abs() < 1e-15);
    }

    #[test]
    fn ruby_geometry() {
        let m = ruby();
        let g = cw_phase_match(&m, m.lambda_opt, m.lambda_thz()).unwrap();
        assert!((g.phi - 3.46e-3).abs() < 0.02e-3, "{}", g.phi);
        assert!((g.theta_thz - PI / 3.0).abs() < 0.02 * PI / 3.0);
        assert!(g.triangle_residual(g.phi_exact).abs() < 1e-12);
        assert!((g.phi_exact - g.phi).abs() < 0.01 * g.phi);
    }

    #[test]
    fn equal_indices_collinear() {
        let mut m = ruby();
        m.n_thz = m.n_opt;
        let g = cw_phase_match(&m, m.lambda_opt, m.lambda_thz()).unwrap();
        assert_eq!(g.phi, 0.0);
        assert!(g.phi_exact < 1e-6);
        m.n_thz = 1.5;
        assert!(matches!(
            cw_phase_match(&m, m.lambda_opt, m.lambda_thz()),
            Err(PropagationError::NoRealSolution { .. })
        ));
    }

    #[test]
    fn tilt_angle() {
        let m = ruby();
        let phi = pulsed_tilt_angle(&m, m.lambda_opt, m.lambda_thz());
        assert!((phi - 4.0e-3).abs() < 0.05e-3, "{phi}");
        assert_relative_eq!(pulsed_tilt_angle(&m, m.lambda_opt, m.lambda_thz() / 2.0), 2.0 * phi);
        let mut same = m.clone();
        same.n_thz = same.n_opt;
        assert_eq!(pulsed_tilt_angle(&same, 1e-6, 1e-6), 1.0);
    }

    #[test]
    fn diffraction() {
        assert_relative_eq!(diffraction_loss(344.8e-6, 1e-3).unwrap(), 344.8, max_relative = 1e-12);
        let l = diffraction_loss(344.8e-6, 1e-3).unwrap();
        assert_relative_eq!(
            diffraction_loss(344.8e-6, 4e-3).unwrap(),
            l / 16.0,
            max_relative = 1e-14
        );
        assert_eq!(diffraction_loss(344.8e-6, f64::INFINITY).unwrap(), 0.0);
        assert!(diffraction_loss(1.0, 0.0).is_err());
    }
}
