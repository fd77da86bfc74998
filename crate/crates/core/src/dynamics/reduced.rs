//! Symmetric resonant driving of the V system by two equal, real envelopes.
//!
//! With `Ω₁ = Ω₂ = Ω(t)` and no relaxation the density matrix stays in the
//! subspace `ρ_b = ρ_c`, `σ_ba = σ_ca`, `σ_cb` real, and the dynamics reduce to
//!
//! ```text
//! dξ/dt = 2iΩ(1 − 4β)
//! dβ/dt = −iΩξ
//! ```
//!
//! with `ρ_a = 1 − 2β` conserved. The solution is
//! `ξ = (√2 i/2)·sin Θ`, `β = (1 − cos Θ)/4`, `Θ(t) = 2√2 ∫_{-∞}^{t} Ω dt′`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::pulse::PulseSpec;
use crate::error::DynamicsError;
use crate::integrate::{integrate, OdeSystem, Stepper};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSample {
    pub t: f64,
    pub xi: Complex64,
    pub beta: f64,
    pub rho_a: f64,
}

/// Closed-form `(ξ(t), β(t))` for a pair of identical resonant pulses.
pub fn analytic_coherence(pulse: &PulseSpec, t: f64) -> (Complex64, f64) {
    let theta = 2.0 * SQRT_2 * pulse.cumulative_integral(t);
    let xi = Complex64::new(0.0, SQRT_2 / 2.0 * theta.sin());
    let beta = 0.25 * (1.0 - theta.cos());
    (xi, beta)
}

/// Coherence left behind once the pulse pair has passed.
pub fn asymptotic_coherence(pulse: &PulseSpec) -> f64 {
    analytic_coherence(pulse, f64::INFINITY).1
}

struct ReducedSystem<'a> {
    pulse: &'a PulseSpec,
}

impl OdeSystem for ReducedSystem<'_> {
    fn dim(&self) -> usize {
        3
    }

    // y = [Re ξ, Im ξ, β]
    fn rhs(&self, t: f64, y: &[f64], d: &mut [f64]) {
        let omega = self.pulse.rabi(t);
        let drive = 2.0 * omega * (1.0 - 4.0 * y[2]);
        // 2iΩ(1−4β) is purely imaginary
        d[0] = 0.0;
        d[1] = drive;
        // −iΩξ = Ω·Im ξ − iΩ·Re ξ; β is real so only the real part is kept
        d[2] = omega * y[1];
    }
}

/// Integrates the reduced system from the ground state over `t_grid`.
///
/// The grid must start no later than the beginning of the pulse window.
pub fn evolve_reduced(
    pulse: &PulseSpec,
    t_grid: &[f64],
    stepper: Stepper,
) -> Result<Vec<ReducedSample>, DynamicsError> {
    if pulse.detuning() != 0.0 {
        return Err(DynamicsError::NotResonant(pulse.detuning()));
    }
    if let Some(&t0) = t_grid.first() {
        if t0 > pulse.window().0 {
            return Err(DynamicsError::InvalidPulse(format!(
                "time grid starts at {t0:e} s, after the pulse window opens at {:e} s",
                pulse.window().0
            )));
        }
    }
    let sys = ReducedSystem { pulse };
    let stepper = stepper.with_max_step(pulse.width() / 4.0);
    let states = integrate(&sys, t_grid, &[0.0, 0.0, 0.0], &pulse.breakpoints(), stepper)?;
    Ok(t_grid
        .iter()
        .zip(states)
        .map(|(&t, y)| ReducedSample {
            t,
            xi: Complex64::new(y[0], y[1]),
            beta: y[2],
            rho_a: 1.0 - 2.0 * y[2],
        })
        .collect())
}

/// Uniform grid covering the pulse window with `n` samples.
pub fn pulse_grid(pulse: &PulseSpec, n: usize) -> Vec<f64> {
    let (lo, hi) = pulse.window();
    let n = n.max(2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pi_pulse_gives_half() {
        let p = PulseSpec::gaussian_with_area(PI, 1e-12).unwrap();
        assert!((asymptotic_coherence(&p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn before_pulse_nothing_happens() {
        let p = PulseSpec::gaussian(2e11, 1e-12).unwrap();
        let (xi, beta) = analytic_coherence(&p, f64::NEG_INFINITY);
        assert_eq!(xi, Complex64::new(0.0, 0.0));
        assert_eq!(beta, 0.0);
    }

    #[test]
    fn room_temperature_coherences() {
        let ps = PulseSpec::gaussian(2e11, 1e-12).unwrap();
        assert!((asymptotic_coherence(&ps) - 0.212).abs() < 5e-4);
        let fs = PulseSpec::gaussian(2e11, 100e-15).unwrap();
        assert!((asymptotic_coherence(&fs) - 2.5e-3).abs() < 1e-4);
    }

    #[test]
    fn zero_drive_is_constant() {
        let p = PulseSpec::gaussian(0.0, 1e-12).unwrap();
        let traj = evolve_reduced(&p, &pulse_grid(&p, 11), Stepper::default()).unwrap();
        for s in traj {
            assert_eq!((s.xi, s.beta, s.rho_a), (Complex64::new(0.0, 0.0), 0.0, 1.0));
        }
    }

    #[test]
    fn numeric_pi_pulse() {
        let p = PulseSpec::gaussian_with_area(PI, 1e-12).unwrap();
        let traj = evolve_reduced(&p, &pulse_grid(&p, 201), Stepper::default()).unwrap();
        let last = traj.last().unwrap();
        assert!((last.beta - 0.5).abs() < 1e-6);
        assert!((last.rho_a + 2.0 * last.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detuned_pulse_rejected() {
        let p = PulseSpec::gaussian(1.0, 1.0).unwrap().with_detuning(0.1);
        assert!(matches!(
            evolve_reduced(&p, &pulse_grid(&p, 3), Stepper::default()),
            Err(DynamicsError::NotResonant(_))
        ));
    }
}
