//! Full 3×3 density-matrix evolution in the rotating frame.
//!
//! Hamiltonian (ħ = 1):
//! `H = −Δ₁|b⟩⟨b| − Δ₂|c⟩⟨c| − [Ω₁(t)|b⟩⟨a| + Ω₂(t)|c⟩⟨a| + h.c.]`.
//! The generated THz field is not fed back into `H`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::pulse::PulseSpec;
use super::state::{VSystemState, A, B, C};
use crate::error::DynamicsError;
use crate::integrate::{integrate, OdeSystem, Stepper};

/// Phenomenological relaxation rates (s⁻¹).
///
/// Coherences decay at exactly `gamma_opt` (σ_ba, σ_ca) and `gamma_thz`
/// (σ_cb). Upper-level populations decay to the ground level at
/// `population_decay_b/c`; the part of the coherence decay not produced by
/// population decay is pure dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelaxationSpec {
    pub gamma_opt: f64,
    pub gamma_thz: f64,
    pub population_decay_b: f64,
    pub population_decay_c: f64,
}

impl RelaxationSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn coherence_only(gamma_opt: f64, gamma_thz: f64) -> Self {
        RelaxationSpec {
            gamma_opt,
            gamma_thz,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let rates = [
            self.gamma_opt,
            self.gamma_thz,
            self.population_decay_b,
            self.population_decay_c,
        ];
        if rates.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(DynamicsError::InvalidRates(format!(
                "all rates must be finite and ≥ 0: {rates:?}"
            )));
        }
        let (gb, gc) = (self.population_decay_b, self.population_decay_c);
        if self.gamma_opt < 0.5 * gb.max(gc) || self.gamma_thz < 0.5 * (gb + gc) {
            return Err(DynamicsError::InvalidRates(
                "coherence decay rates are smaller than the population-decay contribution".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSample {
    pub t: f64,
    pub state: VSystemState,
}

struct Liouville<'a> {
    drive_1: &'a PulseSpec,
    drive_2: &'a PulseSpec,
    relax: RelaxationSpec,
}

fn unpack(y: &[f64]) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| {
        let k = 2 * (3 * i + j);
        Complex64::new(y[k], y[k + 1])
    })
}

fn pack(m: &Matrix3<Complex64>, y: &mut [f64]) {
    for i in 0..3 {
        for j in 0..3 {
            let k = 2 * (3 * i + j);
            y[k] = m[(i, j)].re;
            y[k + 1] = m[(i, j)].im;
        }
    }
}

impl Liouville<'_> {
    fn hamiltonian(&self, t: f64) -> Matrix3<Complex64> {
        let o1 = Complex64::new(self.drive_1.rabi(t), 0.0);
        let o2 = Complex64::new(self.drive_2.rabi(t), 0.0);
        let mut h = Matrix3::zeros();
        h[(B, B)] = Complex64::new(-self.drive_1.detuning(), 0.0);
        h[(C, C)] = Complex64::new(-self.drive_2.detuning(), 0.0);
        h[(B, A)] = -o1;
        h[(A, B)] = -o1.conj();
        h[(C, A)] = -o2;
        h[(A, C)] = -o2.conj();
        h
    }
}

impl OdeSystem for Liouville<'_> {
    fn dim(&self) -> usize {
        18
    }

    fn rhs(&self, t: f64, y: &[f64], d: &mut [f64]) {
        let rho = unpack(y);
        let h = self.hamiltonian(t);
        let i = Complex64::new(0.0, 1.0);
        let mut drho = (h * rho - rho * h) * (-i);

        let r = &self.relax;
        let (gb, gc) = (r.population_decay_b, r.population_decay_c);
        drho[(A, A)] += rho[(B, B)] * gb + rho[(C, C)] * gc;
        drho[(B, B)] -= rho[(B, B)] * gb;
        drho[(C, C)] -= rho[(C, C)] * gc;
        for (p, q, g) in [(B, A, r.gamma_opt), (C, A, r.gamma_opt), (C, B, r.gamma_thz)] {
            drho[(p, q)] -= rho[(p, q)] * g;
            drho[(q, p)] -= rho[(q, p)] * g;
        }
        pack(&drho, d);
    }
}

/// Evolves `initial` under two drives and the given relaxation.
pub fn evolve_full(
    drive_1: &PulseSpec,
    drive_2: &PulseSpec,
    relax: &RelaxationSpec,
    initial: &VSystemState,
    t_grid: &[f64],
    stepper: Stepper,
) -> Result<Vec<FullSample>, DynamicsError> {
    relax.validate()?;
    let initial = VSystemState::from_matrix(*initial.matrix())?;
    let sys = Liouville {
        drive_1,
        drive_2,
        relax: *relax,
    };
    let mut y0 = vec![0.0; 18];
    pack(initial.matrix(), &mut y0);
    let mut breaks = drive_1.breakpoints();
    breaks.extend(drive_2.breakpoints());
    let stepper = stepper.with_max_step(drive_1.width().min(drive_2.width()) / 4.0);
    let states = integrate(&sys, t_grid, &y0, &breaks, stepper)?;
    Ok(t_grid
        .iter()
        .zip(states)
        .map(|(&t, y)| FullSample {
            t,
            state: VSystemState::from_matrix_unchecked(unpack(&y)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::reduced::{asymptotic_coherence, pulse_grid};
    use std::f64::consts::PI;

    #[test]
    fn no_drive_no_relaxation_is_static() {
        let p = PulseSpec::gaussian(0.0, 1e-12).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let init = VSystemState::pure([h.into(), Complex64::new(0.0, h), 0.0.into()]).unwrap();
        let traj = evolve_full(
            &p,
            &p,
            &RelaxationSpec::none(),
            &init,
            &pulse_grid(&p, 5),
            Stepper::default(),
        )
        .unwrap();
        for s in traj {
            assert_eq!(s.state, init);
        }
    }

    #[test]
    fn pi_pulse_pair_reaches_half() {
        let p = PulseSpec::gaussian_with_area(PI, 1e-12).unwrap();
        let traj = evolve_full(
            &p,
            &p,
            &RelaxationSpec::none(),
            &VSystemState::ground(),
            &pulse_grid(&p, 101),
            Stepper::default(),
        )
        .unwrap();
        let last = traj.last().unwrap().state;
        assert!((last.sigma_cb().re - 0.5).abs() < 1e-6);
        assert!(last.sigma_cb().im.abs() < 1e-9);
        assert!((asymptotic_coherence(&p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pure_dephasing_decay_rate() {
        let p = PulseSpec::flat_top(0.0, 1e-9).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let init = VSystemState::pure([0.0.into(), h.into(), h.into()]).unwrap();
        let relax = RelaxationSpec::coherence_only(3e9, 1e9);
        let traj = evolve_full(&p, &p, &relax, &init, &[-1e-9, 0.0], Stepper::default()).unwrap();
        let s = traj[1].state;
        assert!((s.sigma_cb().re - 0.5 * (-1.0f64).exp()).abs() < 1e-9);
        assert!((s.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn population_decay_preserves_trace() {
        let p = PulseSpec::flat_top(1e9, 1e-9).unwrap();
        let relax = RelaxationSpec {
            gamma_opt: 2e9,
            gamma_thz: 2e9,
            population_decay_b: 1e9,
            population_decay_c: 2e9,
        };
        let grid: Vec<f64> = (0..=20).map(|k| -1e-9 + k as f64 * 1e-10).collect();
        let traj = evolve_full(&p, &p, &relax, &VSystemState::ground(), &grid, Stepper::default()).unwrap();
        for s in traj {
            assert!((s.state.trace() - 1.0).abs() < 1e-12);
            assert!(s.state.min_eigenvalue() > -1e-9);
        }
    }

    #[test]
    fn inconsistent_rates_rejected() {
        let relax = RelaxationSpec {
            gamma_opt: 1.0,
            gamma_thz: 1.0,
            population_decay_b: 5.0,
            population_decay_c: 0.0,
        };
        assert!(relax.validate().is_err());
        assert!(RelaxationSpec::coherence_only(-1.0, 0.0).validate().is_err());
    }

    #[test]
    fn invalid_initial_state_rejected() {
        let p = PulseSpec::gaussian(1.0, 1.0).unwrap();
        let bad = VSystemState::from_matrix_unchecked(Matrix3::zeros());
        let r = evolve_full(
            &p,
            &p,
            &RelaxationSpec::none(),
            &bad,
            &[-10.0, 10.0],
            Stepper::default(),
        );
        assert!(matches!(r, Err(DynamicsError::InvalidState(_))));
    }
}
