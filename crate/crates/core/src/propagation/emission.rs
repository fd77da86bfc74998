//! THz free-induction emission from a side-pumped crystal.
//!
//! The coherence source is uniform along the crystal and the THz Rabi
//! frequency obeys `∂Ω₃/∂z + (n₃/c)∂Ω₃/∂t = iησ_cb − κΩ₃`, with
//! `η = N γ_cb^LT σ_abs,THz^LT`. Behind the exit face (`z = L`)
//!
//! ```text
//! Ω₃(t) = iη ∫_{z₀}^{L} σ_cb(t − (L − z′)n₃/c) e^{−κ(L − z′)} dz′,   z₀ = max(0, L − ct/n₃)
//! ```

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::CWDriveParams;
use crate::error::PropagationError;
use crate::materials::{derived_dipole, CrystalGeometry, MaterialParams};
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// Relative distance from the pole `Γn₃/c = κ` inside which the energy is
/// evaluated in its pole-free form.
const POLE_WINDOW: f64 = 1e-6;

/// Coherence `σ_max·e^{−Γt}` switched on at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialSource {
    pub sigma_max: f64,
    pub decay_rate: f64,
}

impl ExponentialSource {
    pub fn new(sigma_max: f64, decay_rate: f64) -> Result<Self, PropagationError> {
        if !(0.0..=1.0).contains(&sigma_max) {
            return Err(PropagationError::InvalidInput(format!(
                "σ_max must lie in [0, 1], got {sigma_max}"
            )));
        }
        if !(decay_rate > 0.0) || !decay_rate.is_finite() {
            return Err(PropagationError::InvalidInput(format!(
                "coherence decay rate must be positive, got {decay_rate:e}"
            )));
        }
        Ok(ExponentialSource { sigma_max, decay_rate })
    }

    /// Coherence left by a short pump pair, decaying at `γ_cb`.
    pub fn pulsed(sigma_max: f64, mat: &MaterialParams) -> Result<Self, PropagationError> {
        Self::new(sigma_max, mat.gamma_thz)
    }

    /// Quasi-CW coherence `|σ_max|·e^{−Gt}`.
    pub fn cw(params: &CWDriveParams) -> Result<Self, PropagationError> {
        Self::new(params.sigma_max().norm(), params.gain_decay())
    }

    pub fn coherence(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else {
            self.sigma_max * (-self.decay_rate * t).exp()
        }
    }
}

/// `(eˣ − 1)/x`, continuous through `x = 0`.
fn exprel(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

/// `e^{−decay}·len·exprel(x)`, rearranged so that neither factor overflows
/// when `x` is large (`x − decay ≤ 0` on both branches).
fn damped_growth(decay: f64, x: f64, len: f64) -> f64 {
    if x > 1.0 {
        len * ((x - decay).exp() - (-decay).exp()) / x
    } else {
        (-decay).exp() * len * exprel(x)
    }
}

fn check_kappa(mat: &MaterialParams) -> Result<(), PropagationError> {
    if mat.kappa_thz > 0.0 && mat.kappa_thz.is_finite() {
        Ok(())
    } else {
        Err(PropagationError::InvalidInput(format!(
            "THz attenuation must be positive, got {:e}",
            mat.kappa_thz
        )))
    }
}

/// Closed-form `Ω₃(t)` at the exit face for an exponential source.
pub fn exponential_source_field(
    source: &ExponentialSource,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
    t: f64,
) -> Result<Complex64, PropagationError> {
    let eta = derived_dipole(mat)?.coupling;
    if t <= 0.0 || source.sigma_max == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = SPEED_OF_LIGHT / mat.n_thz;
    let a = source.decay_rate / v - mat.kappa_thz;
    let len = (v * t).min(geom.length_thz);
    let shape = damped_growth(source.decay_rate * t, a * len, len);
    Ok(Complex64::new(0.0, eta * source.sigma_max * shape))
}

/// THz Rabi frequency at the exit face for the pulsed source `σ_max·e^{−γ_cb t}`.
pub fn fid_thz_field(
    sigma_max: f64,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
    t: f64,
) -> Result<Complex64, PropagationError> {
    exponential_source_field(&ExponentialSource::pulsed(sigma_max, mat)?, mat, geom, t)
}

/// Radiated energy for an exponential source, `E = (ħω₃A N²γ^LTσ^LT/n₃)·σ_max²·B`.
pub fn exponential_source_energy(
    source: &ExponentialSource,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
) -> Result<f64, PropagationError> {
    let eta = derived_dipole(mat)?.coupling;
    check_kappa(mat)?;
    if source.sigma_max == 0.0 {
        return Ok(0.0);
    }
    // N²γ^LTσ^LT = N·η
    let prefactor = HBAR * mat.omega_thz * geom.area_thz * mat.density * eta / mat.n_thz;

    let decay = source.decay_rate;
    let kappa = mat.kappa_thz;
    let l = geom.length_thz;
    let g = decay * mat.n_thz / SPEED_OF_LIGHT;
    let bracket = if (g - kappa).abs() < POLE_WINDOW * g.max(kappa) {
        let x = (kappa - g) * l;
        (1.0 - (-2.0 * kappa * l).exp() * (1.0 + 2.0 * kappa * l * exprel(x))) / (2.0 * kappa * (kappa + g) * decay)
    } else {
        1.0 / (2.0 * kappa * decay * (kappa + g)) - (-2.0 * kappa * l).exp() / (2.0 * kappa * decay * (g - kappa))
            + (-(kappa + g) * l).exp() / (decay * (g * g - kappa * kappa))
    };
    Ok(prefactor * source.sigma_max * source.sigma_max * bracket)
}

/// THz pulse energy radiated by the coherence left behind a short pump pair.
pub fn thz_energy_fid(sigma_max: f64, mat: &MaterialParams, geom: &CrystalGeometry) -> Result<f64, PropagationError> {
    exponential_source_energy(&ExponentialSource::pulsed(sigma_max, mat)?, mat, geom)
}

/// THz pulse energy under quasi-CW pumping: the coherence `|σ_max|`
/// decays at the gain-decay rate `G`.
pub fn thz_energy_cw(
    params: &CWDriveParams,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
) -> Result<f64, PropagationError> {
    let sigma = params.sigma_max().norm();
    if sigma == 0.0 {
        derived_dipole(mat)?;
        return Ok(0.0);
    }
    exponential_source_energy(&ExponentialSource::cw(params)?, mat, geom)
}

/// Peak field (V/m) of `energy` focused onto a square spot of side `spot`
/// and spread evenly over `duration`.
pub fn focused_field(energy: f64, duration: f64, spot: f64) -> Result<f64, PropagationError> {
    if !(energy >= 0.0) || !(duration > 0.0) || !(spot > 0.0) {
        return Err(PropagationError::InvalidInput(format!(
            "focused field needs energy ≥ 0, duration > 0 and spot > 0, got {energy:e} J, {duration:e} s, {spot:e} m"
        )));
    }
    let intensity = energy / (duration * spot * spot);
    Ok((2.0 * intensity / (EPSILON_0 * SPEED_OF_LIGHT)).sqrt())
}

/// Sampled THz Rabi-frequency envelope at the exit face.
#[derive(Debug, Clone, PartialEq)]
pub struct THzWaveform {
    t_samples: Vec<f64>,
    rabi_samples: Vec<Complex64>,
    material: MaterialParams,
    area: f64,
}

impl THzWaveform {
    pub fn new(
        t_samples: Vec<f64>,
        rabi_samples: Vec<Complex64>,
        material: MaterialParams,
        area: f64,
    ) -> Result<Self, PropagationError> {
        if t_samples.len() != rabi_samples.len() || t_samples.len() < 2 {
            return Err(PropagationError::InvalidInput(format!(
                "waveform needs at least two samples and matching lengths, got {} times and {} values",
                t_samples.len(),
                rabi_samples.len()
            )));
        }
        if t_samples.windows(2).any(|w| !(w[1] > w[0])) || t_samples.iter().any(|t| !t.is_finite()) {
            return Err(PropagationError::InvalidInput(
                "waveform times must be finite and strictly increasing".into(),
            ));
        }
        if rabi_samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PropagationError::InvalidInput(
                "waveform contains non-finite samples".into(),
            ));
        }
        if !(area > 0.0) {
            return Err(PropagationError::InvalidInput(format!(
                "emitting area must be positive, got {area:e}"
            )));
        }
        material.lt_references()?;
        Ok(THzWaveform {
            t_samples,
            rabi_samples,
            material,
            area,
        })
    }

    pub fn t_samples(&self) -> &[f64] {
        &self.t_samples
    }

    pub fn rabi_samples(&self) -> &[Complex64] {
        &self.rabi_samples
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn peak_rabi(&self) -> f64 {
        self.rabi_samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(ħω₃A/(γ^LT n₃ σ^LT))·∫|Ω₃|² dt`, trapezoidal in time.
    pub fn energy(&self) -> f64 {
        let (gamma_lt, sigma_lt) = self.material.lt_references().expect("checked on construction");
        let prefactor = HBAR * self.material.omega_thz * self.area / (gamma_lt * self.material.n_thz * sigma_lt);
        let integral: f64 = self
            .t_samples
            .windows(2)
            .zip(self.rabi_samples.windows(2))
            .map(|(t, w)| 0.5 * (t[1] - t[0]) * (w[0].norm_sqr() + w[1].norm_sqr()))
            .sum();
        prefactor * integral
    }

    /// Field amplitude per unit Rabi frequency, `ħ/μ_cb` (V·s/m).
    pub fn field_per_rabi(&self) -> f64 {
        let cal = derived_dipole(&self.material).expect("checked on construction");
        HBAR / cal.dipole_sq.sqrt()
    }

    /// Field amplitude `ħ|Ω₃|/μ_cb` (V/m) at every sample.
    pub fn field_samples(&self) -> Vec<f64> {
        let k = self.field_per_rabi();
        self.rabi_samples.iter().map(|z| k * z.norm()).collect()
    }

    /// Comma-separated export: `#` comment lines with the material and any
    /// `extra` parameters, then `time_s,re_rabi,im_rabi,field_V_per_m`.
    pub fn write_csv<W: Write>(&self, mut out: W, extra: &[(&str, String)]) -> io::Result<()> {
        writeln!(out, "# material: {}", self.material.name)?;
        writeln!(out, "# n_thz: {}", self.material.n_thz)?;
        writeln!(out, "# omega_thz_rad_per_s: {:e}", self.material.omega_thz)?;
        writeln!(out, "# area_m2: {:e}", self.area)?;
        writeln!(out, "# energy_J: {:e}", self.energy())?;
        for (key, value) in extra {
            writeln!(out, "# {key}: {value}")?;
        }
        writeln!(out, "time_s,re_rabi,im_rabi,field_V_per_m")?;
        for ((t, z), e) in self.t_samples.iter().zip(&self.rabi_samples).zip(self.field_samples()) {
            writeln!(out, "{t:e},{:e},{:e},{e:e}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Time grid for an exponential source: dense samples over the build-up
/// `[0, min(T, 40/Γ)]`, the transit `[0, T]` and the tail `[T, T + 40/Γ]`,
/// where `T = Ln₃/c` is the transit time.
pub fn emission_time_grid(
    decay_rate: f64,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
    per_segment: usize,
) -> Vec<f64> {
    let n = per_segment.max(2);
    let transit = geom.length_thz * mat.n_thz / SPEED_OF_LIGHT;
    let tail = 40.0 / decay_rate;
    let uniform = |lo: f64, hi: f64| (0..=n).map(move |k| lo + (hi - lo) * k as f64 / n as f64);
    let mut grid: Vec<f64> = uniform(0.0, transit.min(tail))
        .chain(uniform(0.0, transit))
        .chain(uniform(transit, transit + tail))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE));
    grid
}

/// Closed-form waveform sampled on [`emission_time_grid`].
pub fn exponential_source_waveform(
    source: &ExponentialSource,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
    per_segment: usize,
) -> Result<THzWaveform, PropagationError> {
    let grid = emission_time_grid(source.decay_rate, mat, geom, per_segment);
    let rabi = grid
        .iter()
        .map(|&t| exponential_source_field(source, mat, geom, t))
        .collect::<Result<Vec<_>, _>>()?;
    THzWaveform::new(grid, rabi, mat.clone(), geom.area_thz)
}

/// Spatial resolution of [`propagate_thz_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationGrid {
    /// Shortest time over which the source changes appreciably.
    pub source_time_scale: f64,
    /// Steps per `source_time_scale·c/n₃` of crystal length; at least 4.
    pub steps_per_scale: f64,
    /// Floor on the number of steps along each characteristic.
    pub min_steps: usize,
}

impl PropagationGrid {
    const MAX_STEPS: usize = 50_000_000;

    /// Resolves the coherence lifetime `1/γ_cb` with 32 steps.
    pub fn for_material(mat: &MaterialParams) -> Self {
        PropagationGrid {
            source_time_scale: 1.0 / mat.gamma_thz,
            steps_per_scale: 32.0,
            min_steps: 8,
        }
    }

    pub fn with_time_scale(self, source_time_scale: f64) -> Self {
        PropagationGrid {
            source_time_scale,
            ..self
        }
    }
}

/// `g_j(x) = ∫₀¹ e^{−x(1−θ)} θ^j dθ` for `j = 0, 1, 2`.
fn etd_moments(x: f64) -> [f64; 3] {
    if x < 1.0 {
        // Σ_m (−x)^m j!/(m+j+1)!
        let mut g = [0.0; 3];
        for (j, gj) in g.iter_mut().enumerate() {
            let jf = [1.0, 1.0, 2.0][j];
            let mut fact = (1..=j + 1).map(|k| k as f64).product::<f64>();
            let mut pow = 1.0;
            for m in 0..30 {
                *gj += pow * jf / fact;
                pow *= -x;
                fact *= (m + j + 2) as f64;
            }
        }
        g
    } else {
        let e = (-x).exp();
        [
            (1.0 - e) / x,
            (x - 1.0 + e) / (x * x),
            (x * x - 2.0 * x + 2.0 - 2.0 * e) / (x * x * x),
        ]
    }
}

/// Integrates the THz transport equation along the characteristic that
/// reaches the exit face at each time of `t_grid`.
///
/// `sigma_cb(z, t)` must vanish for `t < 0`. Each step uses exponential time
/// differencing for the attenuation and a quadratic interpolant of the
/// source.
pub fn propagate_thz_numeric<F>(
    sigma_cb: F,
    mat: &MaterialParams,
    geom: &CrystalGeometry,
    t_grid: &[f64],
    grid: &PropagationGrid,
) -> Result<THzWaveform, PropagationError>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let eta = derived_dipole(mat)?.coupling;
    if !(mat.kappa_thz >= 0.0) {
        return Err(PropagationError::InvalidInput(format!(
            "THz attenuation must be ≥ 0, got {:e}",
            mat.kappa_thz
        )));
    }
    let v = SPEED_OF_LIGHT / mat.n_thz;
    let scale = v * grid.source_time_scale;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(PropagationError::InvalidInput(format!(
            "source time scale must be positive, got {:e}",
            grid.source_time_scale
        )));
    }
    if !(grid.steps_per_scale >= 4.0) {
        return Err(PropagationError::Undersampled {
            step: scale / grid.steps_per_scale,
            scale,
        });
    }
    let l = geom.length_thz;
    let i_eta = Complex64::new(0.0, eta);

    let along = |t: f64| -> Result<Complex64, PropagationError> {
        if t <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let z0 = (l - v * t).max(0.0);
        let span = l - z0;
        let steps = ((span / scale * grid.steps_per_scale).ceil() as usize).max(grid.min_steps.max(1));
        if steps > PropagationGrid::MAX_STEPS {
            return Err(PropagationError::InvalidInput(format!(
                "crystal spans {:e} source scales; {steps} steps exceed the limit",
                span / scale
            )));
        }
        let h = span / steps as f64;
        // retarded time at z0 is exactly 0 when the characteristic starts inside the crystal
        let t_start = if z0 > 0.0 { 0.0 } else { t - l / v };
        let at = |k: f64| sigma_cb(z0 + k * h, t_start + k * h / v);
        let decay = (-mat.kappa_thz * h).exp();
        let g = etd_moments(mat.kappa_thz * h);
        let w = [
            g[0] - 3.0 * g[1] + 2.0 * g[2],
            4.0 * g[1] - 4.0 * g[2],
            -g[1] + 2.0 * g[2],
        ];
        let mut omega = Complex64::new(0.0, 0.0);
        let mut left = at(0.0);
        for k in 0..steps {
            let kf = k as f64;
            let mid = at(kf + 0.5);
            let right = at(kf + 1.0);
            omega = omega * decay + i_eta * h * (left * w[0] + mid * w[1] + right * w[2]);
            left = right;
        }
        Ok(omega)
    };

    let rabi = t_grid.par_iter().map(|&t| along(t)).collect::<Result<Vec<_>, _>>()?;
    THzWaveform::new(t_grid.to_vec(), rabi, mat.clone(), geom.area_thz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rt() -> (MaterialParams, CrystalGeometry) {
        (
            MaterialParams::preset("ruby-rt").unwrap(),
            CrystalGeometry::ruby_room_temperature(),
        )
    }

    fn lt() -> (MaterialParams, CrystalGeometry) {
        (
            MaterialParams::preset("ruby-lt").unwrap(),
            CrystalGeometry::ruby_low_temperature(),
        )
    }

    fn transit(mat: &MaterialParams, geom: &CrystalGeometry) -> f64 {
        geom.length_thz * mat.n_thz / SPEED_OF_LIGHT
    }

    #[test]
    fn field_trivial_cases() {
        let (m, g) = rt();
        assert_eq!(fid_thz_field(0.0, &m, &g, 1e-11).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(fid_thz_field(0.2, &m, &g, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        let a = fid_thz_field(0.1, &m, &g, 3e-11).unwrap();
        let b = fid_thz_field(0.3, &m, &g, 3e-11).unwrap();
        assert_relative_eq!(b.im, 3.0 * a.im, max_relative = 1e-14);
        assert_eq!(a.re, 0.0);
        assert!(fid_thz_field(1.5, &m, &g, 1.0).is_err());
        assert!(fid_thz_field(0.2, &m, &g, 1e-6).unwrap().norm() < 1e-300);
    }

    #[test]
    fn branches_join_at_transit_time() {
        for (m, g) in [rt(), lt()] {
            let t = transit(&m, &g);
            let eta = derived_dipole(&m).unwrap().coupling;
            let v = SPEED_OF_LIGHT / m.n_thz;
            let a = m.gamma_thz / v - m.kappa_thz;
            // branch 1 as written, evaluated exactly at the seam
            let inner = 0.21 * eta * (-m.gamma_thz * t).exp() / a * ((a * v * t).exp() - 1.0);
            let outer = fid_thz_field(0.21, &m, &g, t * (1.0 + 1e-15)).unwrap().im;
            assert_relative_eq!(inner, outer, max_relative = 1e-9);
            let before = fid_thz_field(0.21, &m, &g, t * (1.0 - 1e-12)).unwrap().im;
            assert_relative_eq!(before, outer, max_relative = 1e-9);
        }
    }

    #[test]
    fn room_temperature_energy() {
        let (m, g) = rt();
        let e = thz_energy_fid(0.21, &m, &g).unwrap();
        assert!((e - 630e-12).abs() < 0.15 * 630e-12, "{e}");
        assert_eq!(thz_energy_fid(0.0, &m, &g).unwrap(), 0.0);
    }

    #[test]
    fn low_temperature_energy() {
        let (m, g) = lt();
        let e = thz_energy_fid(0.5, &m, &g).unwrap();
        assert!((6.0e-6..=9.7e-6).contains(&e), "{e}");
    }

    #[test]
    fn energy_matches_waveform_integral() {
        for (m, g) in [rt(), lt()] {
            let src = ExponentialSource::pulsed(0.3, &m).unwrap();
            let w = exponential_source_waveform(&src, &m, &g, 4000).unwrap();
            let closed = exponential_source_energy(&src, &m, &g).unwrap();
            assert_relative_eq!(w.energy(), closed, max_relative = 1e-3);
        }
    }

    #[test]
    fn pole_is_removable() {
        let (mut m, g) = rt();
        let pole = m.gamma_thz * m.n_thz / SPEED_OF_LIGHT;
        let eval = |m: &MaterialParams| {
            (
                thz_energy_fid(0.2, m, &g).unwrap(),
                fid_thz_field(0.2, m, &g, 5e-11).unwrap().im,
            )
        };
        m.kappa_thz = pole;
        let (e_at, f_at) = eval(&m);
        assert!(e_at.is_finite() && e_at > 0.0 && f_at.is_finite() && f_at > 0.0);
        // symmetric neighbours straddle the pole; their mean is second-order close
        let eps = 1e-4;
        m.kappa_thz = pole * (1.0 + eps);
        let (e_hi, f_hi) = eval(&m);
        m.kappa_thz = pole * (1.0 - eps);
        let (e_lo, f_lo) = eval(&m);
        assert_relative_eq!(0.5 * (e_hi + e_lo), e_at, max_relative = 1e-5);
        assert_relative_eq!(0.5 * (f_hi + f_lo), f_at, max_relative = 1e-5);
        // either side of the switch-over window
        for eps in [2e-7, -2e-7, 2e-6, -2e-6] {
            m.kappa_thz = pole * (1.0 + eps);
            let (e, _) = eval(&m);
            assert!(((e - e_at) / e_at).abs() < 1e-4);
        }
    }

    #[test]
    fn cw_energy() {
        let (m, g) = rt();
        let off = CWDriveParams::new(0.0.into(), 1e11.into(), m.gamma_opt, m.gamma_thz).unwrap();
        assert_eq!(thz_energy_cw(&off, &m, &g).unwrap(), 0.0);
        let p = CWDriveParams::symmetric(1e11, m.gamma_opt, m.gamma_thz).unwrap();
        let e = thz_energy_cw(&p, &m, &g).unwrap();
        let src = ExponentialSource::new(p.sigma_max().norm(), p.gain_decay()).unwrap();
        assert_eq!(e, exponential_source_energy(&src, &m, &g).unwrap());
    }

    #[test]
    fn numeric_matches_closed_form() {
        for (m, g) in [rt(), lt()] {
            let src = ExponentialSource::pulsed(0.21, &m).unwrap();
            let t = transit(&m, &g);
            let times: Vec<f64> = (1..=40).map(|k| k as f64 * 1.5 * t / 40.0).collect();
            let w = propagate_thz_numeric(
                |_, t| Complex64::new(src.coherence(t), 0.0),
                &m,
                &g,
                &times,
                &PropagationGrid::for_material(&m),
            )
            .unwrap();
            let peak = w.peak_rabi();
            for (&t, z) in times.iter().zip(w.rabi_samples()) {
                let exact = fid_thz_field(0.21, &m, &g, t).unwrap();
                assert!(
                    (z - exact).norm() <= 1e-4 * exact.norm().max(1e-6 * peak),
                    "t={t:e} {z} {exact}"
                );
            }
        }
    }

    #[test]
    fn numeric_zero_source_and_opaque_crystal() {
        let (mut m, g) = rt();
        let times = [1e-12, 5e-11, 2e-10];
        let grid = PropagationGrid::for_material(&m);
        let w = propagate_thz_numeric(|_, _| Complex64::new(0.0, 0.0), &m, &g, &times, &grid).unwrap();
        assert!(w.rabi_samples().iter().all(|z| z.norm() == 0.0));
        let src = ExponentialSource::pulsed(0.21, &m).unwrap();
        let clear = propagate_thz_numeric(|_, t| src.coherence(t).into(), &m, &g, &times, &grid)
            .unwrap()
            .peak_rabi();
        m.kappa_thz = 1e9;
        let opaque = propagate_thz_numeric(|_, t| src.coherence(t).into(), &m, &g, &times, &grid)
            .unwrap()
            .peak_rabi();
        assert!(opaque < 1e-5 * clear);
    }

    #[test]
    fn coarse_grid_rejected() {
        let (m, g) = rt();
        let grid = PropagationGrid {
            steps_per_scale: 2.0,
            ..PropagationGrid::for_material(&m)
        };
        assert!(matches!(
            propagate_thz_numeric(|_, _| Complex64::new(0.0, 0.0), &m, &g, &[1e-12], &grid),
            Err(PropagationError::Undersampled { .. })
        ));
    }

    #[test]
    fn etd_moments_agree_across_switch() {
        let lo = etd_moments(1.0 - 1e-12);
        let hi = etd_moments(1.0);
        for j in 0..3 {
            assert_relative_eq!(lo[j], hi[j], max_relative = 1e-10);
        }
        assert_eq!(etd_moments(0.0), [1.0, 0.5, 1.0 / 3.0]);
    }

    #[test]
    fn focusing() {
        let e = focused_field(630e-12, 1e-12, 300e-6).unwrap();
        assert!((e - 23e5).abs() < 0.25 * 23e5, "{e}");
        assert_eq!(focused_field(0.0, 1e-12, 300e-6).unwrap(), 0.0);
        assert!(focused_field(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn waveform_validation_and_export() {
        let (m, g) = rt();
        assert!(THzWaveform::new(vec![0.0, 0.0], vec![0.0.into(); 2], m.clone(), 1.0).is_err());
        assert!(THzWaveform::new(vec![0.0], vec![0.0.into()], m.clone(), 1.0).is_err());
        let alex = MaterialParams::preset("alexandrite-rt").unwrap();
        assert!(THzWaveform::new(vec![0.0, 1.0], vec![0.0.into(); 2], alex, 1.0).is_err());

        let src = ExponentialSource::pulsed(0.21, &m).unwrap();
        let w = exponential_source_waveform(&src, &m, &g, 50).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf, &[("sigma_max", "0.21".into())]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# material: ruby-rt"));
        assert!(text.contains("# sigma_max: 0.21"));
        assert!(text.contains("\ntime_s,re_rabi,im_rabi,field_V_per_m\n"));
        let rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows, w.t_samples().len() + 1);
    }
}
