use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use super::config::{CoherenceMethod, DriveMode, DriveStrength, Quantity, ReferenceCell, ScenarioConfig, Tolerance};
use crate::dynamics::{
    analytic_coherence, asymptotic_coherence, cw_coherence, evolve_full, pulse_area, pulse_grid, CWDriveParams,
    PulseShape, PulseSpec, RelaxationSpec, VSystemState,
};
use crate::error::ScenarioError;
use crate::integrate::Stepper;
use crate::materials::{
    absorbed_fraction, damage_check, optical_pulse_energy, peak_intensity, rabi_from_energy, rabi_from_intensity,
    CrystalGeometry, DamageAssessment, DamageVerdict, MaterialParams,
};
use crate::propagation::{exponential_source_energy, exponential_source_waveform, focused_field, ExponentialSource};

/// Frequency ratio of the THz and optical transitions, the ceiling on the
/// conversion efficiency (29 cm⁻¹ / 14420 cm⁻¹).
pub const ULTIMATE_EFFICIENCY: f64 = 29.0 / 14420.0;

const TRAJECTORY_SAMPLES: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Pass,
    Fail,
    /// Outside tolerance but marked as a known discrepancy.
    Flagged,
}

impl CellStatus {
    pub fn label(self) -> &'static str {
        match self {
            CellStatus::Pass => "ok",
            CellStatus::Fail => "FAIL",
            CellStatus::Flagged => "flagged",
        }
    }
}

/// Computed value next to a quoted reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub quantity: Quantity,
    pub computed: f64,
    pub quoted: f64,
    /// `(computed − quoted)/quoted`.
    pub relative: f64,
    pub tolerance: Tolerance,
    pub status: CellStatus,
    pub note: Option<String>,
}

/// End-to-end result of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub material: String,
    pub mode: DriveMode,
    pub coherence_method: CoherenceMethod,
    pub peak_rabi: f64,
    pub pulse_area: f64,
    pub peak_intensity: f64,
    /// Energy of one pump pulse (J).
    pub pulse_energy: f64,
    pub pulses: u32,
    /// Incident energy of all pump pulses, corrected for partial absorption (J).
    pub total_energy: f64,
    pub absorbed_fraction: f64,
    pub sigma_max: f64,
    /// Decay rate of the radiating coherence (s⁻¹).
    pub coherence_decay: f64,
    pub thz_energy: f64,
    /// Field of the THz pulse focused to the configured spot (V/m).
    pub peak_field: f64,
    /// THz energy over the total incident pump energy.
    pub efficiency: f64,
    /// THz energy over the pump energy absorbed in the crystal.
    pub efficiency_absorbed: f64,
    pub damage: DamageAssessment,
    pub warnings: Vec<String>,
    pub deviations: Vec<Deviation>,
}

impl ReportRow {
    pub fn value(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Sigma => self.sigma_max,
            Quantity::ThzEnergy => self.thz_energy,
            Quantity::PeakField => self.peak_field,
            Quantity::PeakRabi => self.peak_rabi,
            Quantity::PeakIntensity => self.peak_intensity,
            Quantity::PulseEnergy => self.pulse_energy,
            Quantity::TotalEnergy => self.total_energy,
            Quantity::AbsorbedFraction => self.absorbed_fraction,
            Quantity::Efficiency => self.efficiency,
            Quantity::EfficiencyAbsorbed => self.efficiency_absorbed,
        }
    }

    /// Deviations outside tolerance that are not known discrepancies.
    pub fn failures(&self) -> usize {
        self.deviations.iter().filter(|d| d.status == CellStatus::Fail).count()
    }
}

/// `∫(Ω/Ω₀)dt` for the configured envelope.
fn unit_integral(shape: PulseShape, width: f64) -> f64 {
    match shape {
        PulseShape::Gaussian => (2.0 * PI).sqrt() * width,
        PulseShape::FlatTop => 2.0 * width,
    }
}

/// Energy of one pump pulse; the Gaussian case is the closed-form pulse energy.
fn pump_energy(shape: PulseShape, omega_0: f64, width: f64, geom: &CrystalGeometry, mat: &MaterialParams) -> f64 {
    match shape {
        PulseShape::Gaussian => optical_pulse_energy(omega_0, width, geom, mat),
        PulseShape::FlatTop => peak_intensity(omega_0, mat) * 2.0 * width * geom.area_opt,
    }
}

fn derive_peak_rabi(cfg: &ScenarioConfig) -> f64 {
    let d = &cfg.drive;
    match d.strength {
        DriveStrength::PeakRabi(v) => v,
        DriveStrength::PeakIntensity(i) => rabi_from_intensity(i, &cfg.material),
        DriveStrength::PulseEnergy(e) => match d.shape {
            PulseShape::Gaussian => rabi_from_energy(e, d.width, &cfg.geometry, &cfg.material),
            PulseShape::FlatTop => rabi_from_intensity(e / (2.0 * d.width * cfg.geometry.area_opt), &cfg.material),
        },
        DriveStrength::PulseArea(s) => s / (2.0 * SQRT_2 * unit_integral(d.shape, d.width)),
    }
}

struct Coherence {
    sigma_max: f64,
    decay: f64,
    trajectory: Vec<TrajectoryPoint>,
}

struct TrajectoryPoint {
    t: f64,
    populations: Option<[f64; 3]>,
    sigma_cb: Complex64,
}

impl From<(f64, &VSystemState)> for TrajectoryPoint {
    fn from((t, s): (f64, &VSystemState)) -> Self {
        TrajectoryPoint {
            t,
            populations: Some([s.rho_a(), s.rho_b(), s.rho_c()]),
            sigma_cb: s.sigma_cb(),
        }
    }
}

fn numeric_coherence(
    pulse: &PulseSpec,
    relax: RelaxationSpec,
    grid: &[f64],
) -> Result<(f64, Vec<TrajectoryPoint>), ScenarioError> {
    let traj = evolve_full(pulse, pulse, &relax, &VSystemState::ground(), grid, Stepper::default())?;
    let points: Vec<TrajectoryPoint> = traj.iter().map(|s| (s.t, &s.state).into()).collect();
    let sigma = points.iter().map(|p| p.sigma_cb.norm()).fold(0.0, f64::max);
    Ok((sigma, points))
}

fn coherence(cfg: &ScenarioConfig, omega_0: f64) -> Result<Coherence, ScenarioError> {
    let d = &cfg.drive;
    let mat = &cfg.material;
    let pulse = PulseSpec::new(d.shape, omega_0, d.width, 0.0)?;
    let grid = pulse_grid(&pulse, TRAJECTORY_SAMPLES);
    let relaxed = RelaxationSpec::coherence_only(mat.gamma_opt, mat.gamma_thz);
    match (d.mode, d.coherence) {
        (DriveMode::Pulsed, CoherenceMethod::Analytic) => {
            let trajectory = grid
                .iter()
                .map(|&t| {
                    let (_, beta) = analytic_coherence(&pulse, t);
                    // symmetric pure state: ρ_b = ρ_c = σ_cb = β
                    TrajectoryPoint {
                        t,
                        populations: Some([1.0 - 2.0 * beta, beta, beta]),
                        sigma_cb: beta.into(),
                    }
                })
                .collect();
            Ok(Coherence {
                sigma_max: asymptotic_coherence(&pulse),
                decay: mat.gamma_thz,
                trajectory,
            })
        }
        (DriveMode::Pulsed, method) => {
            let relax = if method == CoherenceMethod::Numeric {
                RelaxationSpec::none()
            } else {
                relaxed
            };
            let (sigma_max, trajectory) = numeric_coherence(&pulse, relax, &grid)?;
            let sigma_max = if method == CoherenceMethod::Numeric {
                trajectory.last().map_or(0.0, |p| p.sigma_cb.norm())
            } else {
                sigma_max
            };
            Ok(Coherence {
                sigma_max,
                decay: mat.gamma_thz,
                trajectory,
            })
        }
        (DriveMode::Cw, method) => {
            let params = CWDriveParams::symmetric(omega_0, mat.gamma_opt, mat.gamma_thz)?;
            let decay = params.gain_decay();
            if method == CoherenceMethod::Analytic {
                let span = if decay > 0.0 { 5.0 / decay } else { 20.0 * d.width };
                let trajectory = (0..TRAJECTORY_SAMPLES)
                    .map(|k| {
                        let t = span * k as f64 / (TRAJECTORY_SAMPLES - 1) as f64;
                        cw_coherence(&params, t).map(|s| TrajectoryPoint {
                            t,
                            populations: None,
                            sigma_cb: s,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Coherence {
                    sigma_max: params.sigma_max().norm(),
                    decay,
                    trajectory,
                })
            } else {
                // a quasi-CW drive always sees the relaxation
                let (sigma_max, trajectory) = numeric_coherence(&pulse, relaxed, &grid)?;
                Ok(Coherence {
                    sigma_max,
                    decay,
                    trajectory,
                })
            }
        }
    }
}

fn deviation(cell: &ReferenceCell, computed: f64) -> Deviation {
    let status = if cell.tolerance.accepts(computed, cell.quoted) {
        CellStatus::Pass
    } else if cell.known_discrepancy {
        CellStatus::Flagged
    } else {
        CellStatus::Fail
    };
    Deviation {
        quantity: cell.quantity,
        computed,
        quoted: cell.quoted,
        relative: if cell.quoted != 0.0 {
            (computed - cell.quoted) / cell.quoted
        } else {
            f64::NAN
        },
        tolerance: cell.tolerance,
        status,
        note: cell.note.clone(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, ScenarioError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn write_trajectory(path: &Path, label: &str, points: &[TrajectoryPoint]) -> Result<(), ScenarioError> {
    let io = |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = create(path)?;
    writeln!(out, "# scenario: {label}").map_err(io)?;
    writeln!(out, "time_s,rho_a,rho_b,rho_c,re_sigma_cb,im_sigma_cb").map_err(io)?;
    for p in points {
        let pops = match p.populations {
            Some([a, b, c]) => format!("{a:e},{b:e},{c:e}"),
            None => ",,".to_string(),
        };
        writeln!(out, "{:e},{pops},{:e},{:e}", p.t, p.sigma_cb.re, p.sigma_cb.im).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Runs the full pipeline for one configuration and writes any requested
/// trajectory and waveform files.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ReportRow, ScenarioError> {
    run_inner(cfg, true)
}

/// Same as [`run_scenario`] without touching the filesystem.
pub(crate) fn run_inner(cfg: &ScenarioConfig, write_files: bool) -> Result<ReportRow, ScenarioError> {
    cfg.drive.validate().map_err(|message| ScenarioError::Config {
        origin: cfg.label.clone(),
        message,
    })?;
    let mat = &cfg.material;
    let geom = &cfg.geometry;
    let d = &cfg.drive;
    let mut warnings = Vec::new();

    let omega_0 = derive_peak_rabi(cfg);
    let intensity = peak_intensity(omega_0, mat);
    let pulse_energy = pump_energy(d.shape, omega_0, d.width, geom, mat);
    let area = pulse_area(&PulseSpec::new(d.shape, omega_0, d.width, 0.0)?);
    if !(intensity.is_finite() && pulse_energy.is_finite()) {
        return Err(ScenarioError::Config {
            origin: cfg.label.clone(),
            message: format!("drive strength gives a non-finite pump (Omega_0 = {omega_0:e} s^-1)"),
        });
    }

    let damage = if mat.damage_threshold.is_empty() {
        warnings.push(format!("no damage thresholds for `{}`", mat.name));
        DamageAssessment {
            verdict: DamageVerdict::Unknown,
            margin: f64::NAN,
        }
    } else {
        damage_check(intensity, d.width, mat)?
    };
    match damage.verdict {
        DamageVerdict::Pass => {}
        DamageVerdict::Marginal => warnings.push(format!(
            "peak intensity {intensity:.3e} W/m^2 is within the damage threshold range"
        )),
        DamageVerdict::Exceeded => warnings.push(format!(
            "peak intensity {intensity:.3e} W/m^2 exceeds the damage threshold"
        )),
        DamageVerdict::Unknown if !mat.damage_threshold.is_empty() => {
            warnings.push(format!("no damage threshold listed for {:.3e} s pulses", d.width))
        }
        DamageVerdict::Unknown => {}
    }

    let computed = coherence(cfg, omega_0)?;
    let sigma_max = d.sigma_max.unwrap_or(computed.sigma_max).min(1.0);
    let decay = computed.decay;
    let (thz_energy, peak_field) = if sigma_max > 0.0 && decay > 0.0 {
        let source = ExponentialSource::new(sigma_max, decay)?;
        let energy = exponential_source_energy(&source, mat, geom)?;
        if write_files {
            if let Some(path) = &cfg.output.waveform {
                let w = exponential_source_waveform(&source, mat, geom, cfg.output.waveform_samples)?;
                let io = |source| ScenarioError::Io {
                    path: path.clone(),
                    source,
                };
                let mut out = create(path)?;
                w.write_csv(
                    &mut out,
                    &[
                        ("scenario", cfg.label.clone()),
                        ("sigma_max", format!("{sigma_max:e}")),
                        ("decay_rate_per_s", format!("{decay:e}")),
                        ("length_m", format!("{:e}", geom.length_thz)),
                    ],
                )
                .map_err(io)?;
                out.flush().map_err(io)?;
            }
        }
        (energy, focused_field(energy, 1.0 / decay, cfg.output.focus_spot)?)
    } else {
        if write_files && cfg.output.waveform.is_some() {
            warnings.push("no coherence, waveform not written".into());
        }
        (0.0, 0.0)
    };
    if write_files {
        if let Some(path) = &cfg.output.trajectory {
            write_trajectory(path, &cfg.label, &computed.trajectory)?;
        }
    }

    let absorbed = absorbed_fraction(mat, geom);
    let pumped = f64::from(d.pulses) * pulse_energy;
    let total_energy = pumped / absorbed;
    let ratio = |e: f64| if thz_energy == 0.0 { 0.0 } else { thz_energy / e };
    let efficiency = ratio(total_energy);
    let efficiency_absorbed = ratio(pumped);
    if efficiency_absorbed > ULTIMATE_EFFICIENCY {
        warnings.push(format!(
            "efficiency {efficiency_absorbed:.3e} exceeds the frequency-ratio limit"
        ));
    }

    let mut row = ReportRow {
        label: cfg.label.clone(),
        material: mat.name.clone(),
        mode: d.mode,
        coherence_method: d.coherence,
        peak_rabi: omega_0,
        pulse_area: area,
        peak_intensity: intensity,
        pulse_energy,
        pulses: d.pulses,
        total_energy,
        absorbed_fraction: absorbed,
        sigma_max,
        coherence_decay: decay,
        thz_energy,
        peak_field,
        efficiency,
        efficiency_absorbed,
        damage,
        warnings,
        deviations: Vec::new(),
    };
    row.deviations = cfg
        .reference
        .iter()
        .map(|cell| deviation(cell, row.value(cell.quantity)))
        .collect();
    Ok(row)
}
