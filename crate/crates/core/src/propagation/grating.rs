//! THz coherence grating written by two weak pump beams crossing at ±k_z.
//!
//! To lowest order in the pump fields
//!
//! ```text
//! σ_cb(z,t) = 2∫dt′∫^{t′}dt″ [Ω₁(t′)Ω₁(t″) + Ω₂(t′)Ω₂(t″)
//!                              + (Ω₁(t′)Ω₂(t″) + Ω₁(t″)Ω₂(t′))·cos 2k_z z]
//! ```

use num_complex::Complex64;

use crate::dynamics::{pulse_area, PulseSpec};
use crate::error::PropagationError;
use crate::integrate::{integrate, OdeSystem, Stepper};

/// Largest pulse area for which the perturbative result is trusted.
pub const PERTURBATIVE_AREA_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingCoherence {
    pub sigma: Complex64,
    /// Larger of the two pulse areas.
    pub max_pulse_area: f64,
}

impl GratingCoherence {
    pub fn is_perturbative(&self) -> bool {
        self.max_pulse_area <= PERTURBATIVE_AREA_LIMIT
    }

    pub fn warning(&self) -> Option<String> {
        (!self.is_perturbative()).then(|| {
            format!(
                "pulse area {:.3} exceeds {PERTURBATIVE_AREA_LIMIT}; lowest-order perturbation theory is unreliable",
                self.max_pulse_area
            )
        })
    }
}

// y = [F₁, F₂, ∫Ω₁F₁, ∫Ω₂F₂, ∫(Ω₁F₂ + Ω₂F₁)] with F_i the running integral of Ω_i
struct Nested<'a> {
    drive_1: &'a PulseSpec,
    drive_2: &'a PulseSpec,
}

impl OdeSystem for Nested<'_> {
    fn dim(&self) -> usize {
        5
    }

    fn rhs(&self, t: f64, y: &[f64], d: &mut [f64]) {
        let (o1, o2) = (self.drive_1.rabi(t), self.drive_2.rabi(t));
        d[0] = o1;
        d[1] = o2;
        d[2] = o1 * y[0];
        d[3] = o2 * y[1];
        d[4] = o1 * y[1] + o2 * y[0];
    }
}

/// Perturbative `σ_cb(z, t)` by direct quadrature of the nested time integral.
pub fn grating_coherence(
    drive_1: &PulseSpec,
    drive_2: &PulseSpec,
    k_z: f64,
    z: f64,
    t: f64,
) -> Result<GratingCoherence, PropagationError> {
    if drive_1.detuning() != 0.0 || drive_2.detuning() != 0.0 {
        return Err(PropagationError::InvalidInput(
            "grating coherence assumes resonant pumps".into(),
        ));
    }
    let max_pulse_area = pulse_area(drive_1).max(pulse_area(drive_2));
    let t0 = drive_1.window().0.min(drive_2.window().0);
    if t <= t0 {
        return Ok(GratingCoherence {
            sigma: Complex64::new(0.0, 0.0),
            max_pulse_area,
        });
    }
    let t_end = t.min(drive_1.window().1.max(drive_2.window().1));
    let mut breaks = drive_1.breakpoints();
    breaks.extend(drive_2.breakpoints());
    let stepper = Stepper::default().with_max_step(drive_1.width().min(drive_2.width()) / 4.0);
    let sys = Nested { drive_1, drive_2 };
    let y = integrate(&sys, &[t0, t_end], &[0.0; 5], &breaks, stepper)?
        .pop()
        .expect("two grid points");
    let sigma = 2.0 * (y[2] + y[3] + (2.0 * k_z * z).cos() * y[4]);
    Ok(GratingCoherence {
        sigma: Complex64::new(sigma, 0.0),
        max_pulse_area,
    })
}
