//! Explicit Runge–Kutta integration of real ODE systems.
//!
//! The adaptive path is the Dormand–Prince 5(4) pair with a max-norm error
//! controller. A classic fixed-step RK4 stepper is provided for runs that must
//! be reproducible independently of the step-size controller.

use crate::error::IntegrationError;

/// Right-hand side of `dy/dt = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepper {
    /// `max_step` caps the step size so that short features of the
    /// right-hand side cannot be stepped over.
    Adaptive {
        rtol: f64,
        atol: f64,
        max_steps: usize,
        max_step: f64,
    },
    /// Fixed RK4 with the given number of steps per output interval.
    Fixed { steps_per_interval: usize },
}

impl Stepper {
    /// Same stepper with the adaptive step capped at `max_step`.
    pub fn with_max_step(self, cap: f64) -> Self {
        match self {
            Stepper::Adaptive {
                rtol,
                atol,
                max_steps,
                max_step,
            } => Stepper::Adaptive {
                rtol,
                atol,
                max_steps,
                max_step: max_step.min(cap),
            },
            fixed => fixed,
        }
    }
}

impl Default for Stepper {
    fn default() -> Self {
        Stepper::Adaptive {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
            max_step: f64::INFINITY,
        }
    }
}

// Dormand–Prince coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded fourth-order error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Workspace {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y_new: vec![0.0; n],
        }
    }
}

/// Advances `y` from `t0` to `t1` with Dormand–Prince, starting from step
/// `h` (updated in place for the next call).
#[allow(clippy::too_many_arguments)]
fn dopri_interval<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    h: &mut f64,
    rtol: f64,
    atol: f64,
    steps_left: &mut usize,
    max_steps: usize,
    max_step: f64,
    ws: &mut Workspace,
) -> Result<(), IntegrationError> {
    let n = y.len();
    let span = t1 - t0;
    let h_min = span.abs() * 1e-14 + f64::MIN_POSITIVE;
    let mut t = t0;
    if !(*h > 0.0) || *h > span {
        *h = span;
    }
    *h = h.min(max_step);
    // Stage times are kept strictly inside the interval so that a
    // right-hand side with a jump at an endpoint is sampled on the correct side.
    let eps = span * 1e-12;
    let inside = |tt: f64| tt.clamp(t0 + eps, t1 - eps);
    let Workspace { k, tmp, y_new } = ws;
    sys.rhs(inside(t), y, &mut k[0]);
    while t < t1 {
        if *steps_left == 0 {
            return Err(IntegrationError::MaxStepsExceeded { t, max_steps });
        }
        let last = t + *h >= t1;
        let hs = if last { t1 - t } else { *h };

        for i in 0..n {
            tmp[i] = y[i] + hs * A21 * k[0][i];
        }
        let (k0, rest) = k.split_at_mut(1);
        sys.rhs(inside(t + C2 * hs), tmp, &mut rest[0]);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A31 * k0[0][i] + A32 * rest[0][i]);
        }
        sys.rhs(inside(t + C3 * hs), tmp, &mut rest[1]);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A41 * k0[0][i] + A42 * rest[0][i] + A43 * rest[1][i]);
        }
        sys.rhs(inside(t + C4 * hs), tmp, &mut rest[2]);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A51 * k0[0][i] + A52 * rest[0][i] + A53 * rest[1][i] + A54 * rest[2][i]);
        }
        sys.rhs(inside(t + C5 * hs), tmp, &mut rest[3]);
        for i in 0..n {
            tmp[i] = y[i]
                + hs * (A61 * k0[0][i] + A62 * rest[0][i] + A63 * rest[1][i] + A64 * rest[2][i] + A65 * rest[3][i]);
        }
        sys.rhs(inside(t + hs), tmp, &mut rest[4]);
        for i in 0..n {
            y_new[i] =
                y[i] + hs * (B1 * k0[0][i] + B3 * rest[1][i] + B4 * rest[2][i] + B5 * rest[3][i] + B6 * rest[4][i]);
        }
        sys.rhs(inside(t + hs), y_new, &mut rest[5]);

        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = hs
                * (E1 * k0[0][i]
                    + E3 * rest[1][i]
                    + E4 * rest[2][i]
                    + E5 * rest[3][i]
                    + E6 * rest[4][i]
                    + E7 * rest[5][i]);
            let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        // f64::max drops NaN, so the state itself is checked as well
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            return Err(IntegrationError::NonFinite { t });
        }
        *steps_left -= 1;

        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y.copy_from_slice(y_new);
            // FSAL: the last stage is the derivative at the new point
            k0[0].copy_from_slice(&rest[5]);
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).min(5.0)
            };
            if !last || hs >= *h {
                *h = (hs * grow).min(max_step);
            }
        } else {
            let shrink = (0.9 * err.powf(-0.2)).max(0.2);
            *h = hs * shrink;
            if *h < h_min {
                return Err(IntegrationError::StepSizeUnderflow { t, h: *h });
            }
        }
    }
    Ok(())
}

fn rk4_interval<S: OdeSystem + ?Sized>(
    sys: &S,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    steps: usize,
    ws: &mut Workspace,
) -> Result<(), IntegrationError> {
    let n = y.len();
    let h = (t1 - t0) / steps as f64;
    let eps = (t1 - t0) * 1e-12;
    let inside = |tt: f64| tt.clamp(t0 + eps, t1 - eps);
    let Workspace { k, tmp, .. } = ws;
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let (k1, rest) = k.split_at_mut(1);
        let (k2, rest) = rest.split_at_mut(1);
        let (k3, rest) = rest.split_at_mut(1);
        let k4 = &mut rest[0];
        let (k1, k2, k3) = (&mut k1[0], &mut k2[0], &mut k3[0]);
        sys.rhs(inside(t), y, k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        sys.rhs(inside(t + 0.5 * h), tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        sys.rhs(inside(t + 0.5 * h), tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        sys.rhs(inside(t + h), tmp, k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrationError::NonFinite { t: t + h });
        }
    }
    Ok(())
}

/// Integrates `sys` from `t_grid[0]` and returns the state at every grid point.
///
/// `breakpoints` are times where the right-hand side is discontinuous (for
/// instance flat-top pulse edges); steps never straddle them.
pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    t_grid: &[f64],
    y0: &[f64],
    breakpoints: &[f64],
    stepper: Stepper,
) -> Result<Vec<Vec<f64>>, IntegrationError> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(IntegrationError::BadGrid);
    }
    assert_eq!(y0.len(), sys.dim(), "initial state has the wrong dimension");
    let mut ws = Workspace::new(y0.len());
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(y.clone());

    let mut h = 0.0;
    let mut steps_left = match stepper {
        Stepper::Adaptive { max_steps, .. } => max_steps,
        Stepper::Fixed { .. } => usize::MAX,
    };

    for w in t_grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
        cuts.sort_by(f64::total_cmp);
        let mut lo = a;
        for hi in cuts.into_iter().chain(std::iter::once(b)) {
            match stepper {
                Stepper::Adaptive {
                    rtol,
                    atol,
                    max_steps,
                    max_step,
                } => dopri_interval(
                    sys,
                    lo,
                    hi,
                    &mut y,
                    &mut h,
                    rtol,
                    atol,
                    &mut steps_left,
                    max_steps,
                    max_step,
                    &mut ws,
                )?,
                Stepper::Fixed { steps_per_interval } => {
                    rk4_interval(sys, lo, hi, &mut y, steps_per_interval.max(1), &mut ws)?
                }
            }
            lo = hi;
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oscillator(f64);

    impl OdeSystem for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], d: &mut [f64]) {
            d[0] = self.0 * y[1];
            d[1] = -self.0 * y[0];
        }
    }

    struct Step;

    impl OdeSystem for Step {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, t: f64, _y: &[f64], d: &mut [f64]) {
            d[0] = if t < 0.3 { 1.0 } else { 0.0 };
        }
    }

    #[test]
    fn adaptive_harmonic_oscillator() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let out = integrate(&Oscillator(2.0), &grid, &[0.0, 1.0], &[], Stepper::default()).unwrap();
        for (t, y) in grid.iter().zip(&out) {
            assert!((y[0] - (2.0 * t).sin()).abs() < 1e-8);
            assert!((y[1] - (2.0 * t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn fixed_step_harmonic_oscillator() {
        let grid = [0.0, 1.0, 2.0];
        let out = integrate(
            &Oscillator(1.0),
            &grid,
            &[0.0, 1.0],
            &[],
            Stepper::Fixed {
                steps_per_interval: 200,
            },
        )
        .unwrap();
        assert!((out[2][0] - 2f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn breakpoints_are_respected() {
        let out = integrate(&Step, &[0.0, 1.0], &[0.0], &[0.3], Stepper::default()).unwrap();
        assert!((out[1][0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn tiny_time_scales() {
        // picosecond dynamics in seconds
        let w = 4e11;
        let grid = [0.0, 5e-12, 1e-11];
        let out = integrate(&Oscillator(w), &grid, &[0.0, 1.0], &[], Stepper::default()).unwrap();
        assert!((out[2][0] - (w * 1e-11).sin()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_grid() {
        let r = integrate(&Oscillator(1.0), &[1.0, 0.0], &[0.0, 1.0], &[], Stepper::default());
        assert_eq!(r.unwrap_err(), IntegrationError::BadGrid);
    }

    #[test]
    fn reports_step_budget() {
        let r = integrate(
            &Oscillator(1e3),
            &[0.0, 100.0],
            &[0.0, 1.0],
            &[],
            Stepper::Adaptive {
                rtol: 1e-9,
                atol: 1e-12,
                max_steps: 10,
                max_step: f64::INFINITY,
            },
        );
        assert!(matches!(r, Err(IntegrationError::MaxStepsExceeded { .. })));
    }

    #[test]
    fn overflow_to_nan_is_reported() {
        // inf·0 in the stages yields NaN rather than inf
        let r = integrate(&Oscillator(1e300), &[0.0, 1.0], &[0.0, 1e300], &[], Stepper::default());
        assert!(matches!(r, Err(IntegrationError::NonFinite { .. })));
    }
}
