//! Scenario configuration files.
//!
//! ```toml
//! label = "ruby RT, 1 ps"
//! material = "ruby-rt"              # preset name or path to a material file
//!
//! [drive]
//! mode = "pulsed"                   # pulsed | cw
//! shape = "gaussian"                # gaussian | flat_top
//! width = "1 ps"
//! peak_rabi = "2e11 s^-1"           # exactly one of peak_rabi, peak_intensity,
//!                                   # pulse_energy, pulse_area
//! pulses = 2
//! coherence = "analytic"            # analytic | numeric | numeric-relaxed
//!
//! [geometry]
//! preset = "room-temperature"       # and/or any of length_thz, area_thz,
//!                                   # area_opt, length_opt, aperture
//!
//! [output]
//! focus_spot = "300 um"
//! waveform = "waveform.csv"
//!
//! [reference.thz_energy]
//! quoted = "630 pJ"
//! tolerance = { relative = 0.15 }
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::dynamics::PulseShape;
use crate::error::{MaterialError, ScenarioError};
use crate::materials::{CrystalGeometry, MaterialParams};
use crate::units::{parse_quantity, Dimension};

const DEFAULT_FOCUS_SPOT: f64 = 300e-6;
const DEFAULT_WAVEFORM_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveMode {
    /// Short pump pair; the coherence left behind decays at `γ_cb`.
    Pulsed,
    /// Quasi-CW pumping; coherence and decay from the steady-state solution.
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceMethod {
    Analytic,
    /// Full density matrix without relaxation.
    Numeric,
    /// Full density matrix with the material's relaxation rates.
    NumericRelaxed,
}

impl fmt::Display for DriveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DriveMode::Pulsed => "pulsed",
            DriveMode::Cw => "cw",
        })
    }
}

impl fmt::Display for CoherenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoherenceMethod::Analytic => "analytic",
            CoherenceMethod::Numeric => "numeric",
            CoherenceMethod::NumericRelaxed => "numeric-relaxed",
        })
    }
}

/// How the drive strength is specified; the other measures are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveStrength {
    PeakRabi(f64),
    PeakIntensity(f64),
    /// Energy of one pump pulse.
    PulseEnergy(f64),
    /// `S = 2√2∫Ω dt`; pulsed mode only.
    PulseArea(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub mode: DriveMode,
    pub shape: PulseShape,
    pub width: f64,
    pub strength: DriveStrength,
    pub pulses: u32,
    pub coherence: CoherenceMethod,
    /// Replaces the computed coherence when set.
    pub sigma_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub focus_spot: f64,
    pub trajectory: Option<PathBuf>,
    pub waveform: Option<PathBuf>,
    pub waveform_samples: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            focus_spot: DEFAULT_FOCUS_SPOT,
            trajectory: None,
            waveform: None,
            waveform_samples: DEFAULT_WAVEFORM_SAMPLES,
        }
    }
}

/// Report quantities that can carry a reference value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    Sigma,
    ThzEnergy,
    PeakField,
    PeakRabi,
    PeakIntensity,
    PulseEnergy,
    TotalEnergy,
    AbsorbedFraction,
    Efficiency,
    EfficiencyAbsorbed,
}

impl Quantity {
    pub const ALL: [Quantity; 10] = [
        Quantity::Sigma,
        Quantity::ThzEnergy,
        Quantity::PeakField,
        Quantity::PeakRabi,
        Quantity::PeakIntensity,
        Quantity::PulseEnergy,
        Quantity::TotalEnergy,
        Quantity::AbsorbedFraction,
        Quantity::Efficiency,
        Quantity::EfficiencyAbsorbed,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Quantity::Sigma => "sigma",
            Quantity::ThzEnergy => "thz_energy",
            Quantity::PeakField => "peak_field",
            Quantity::PeakRabi => "peak_rabi",
            Quantity::PeakIntensity => "peak_intensity",
            Quantity::PulseEnergy => "pulse_energy",
            Quantity::TotalEnergy => "total_energy",
            Quantity::AbsorbedFraction => "absorbed_fraction",
            Quantity::Efficiency => "efficiency",
            Quantity::EfficiencyAbsorbed => "efficiency_absorbed",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Quantity::Sigma | Quantity::AbsorbedFraction | Quantity::Efficiency | Quantity::EfficiencyAbsorbed => {
                Dimension::Dimensionless
            }
            Quantity::ThzEnergy | Quantity::PulseEnergy | Quantity::TotalEnergy => Dimension::Energy,
            Quantity::PeakField => Dimension::Field,
            Quantity::PeakRabi => Dimension::Rate,
            Quantity::PeakIntensity => Dimension::Intensity,
        }
    }

    /// SI unit label used in reports.
    pub fn unit(self) -> &'static str {
        match self.dimension() {
            Dimension::Energy => "J",
            Dimension::Field => "V/m",
            Dimension::Rate => "s^-1",
            Dimension::Intensity => "W/m^2",
            _ => "",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL.into_iter().find(|q| q.key() == s).ok_or_else(|| {
            let keys: Vec<_> = Quantity::ALL.iter().map(|q| q.key()).collect();
            format!("unknown reference quantity `{s}` (expected one of {})", keys.join(", "))
        })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Acceptance band around a quoted value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// `|computed − quoted| ≤ r·|quoted|`
    Relative(f64),
    /// `|computed − quoted| ≤ a`
    Absolute(f64),
    /// `quoted/f ≤ computed ≤ quoted·f`
    Factor(f64),
    /// `lo ≤ computed ≤ hi`
    Range(f64, f64),
}

impl Tolerance {
    pub fn accepts(&self, computed: f64, quoted: f64) -> bool {
        if !computed.is_finite() {
            return false;
        }
        match *self {
            Tolerance::Relative(r) => (computed - quoted).abs() <= r * quoted.abs(),
            Tolerance::Absolute(a) => (computed - quoted).abs() <= a,
            Tolerance::Factor(f) => {
                computed.signum() == quoted.signum()
                    && computed.abs() >= quoted.abs() / f
                    && computed.abs() <= quoted.abs() * f
            }
            Tolerance::Range(lo, hi) => (lo..=hi).contains(&computed),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Tolerance::Relative(r) if r >= 1e-3 => write!(f, "±{}%", (r * 1e5).round() / 1e3),
            Tolerance::Relative(r) => write!(f, "±{r:.1e} rel"),
            Tolerance::Absolute(a) => write!(f, "±{a:.3e}"),
            Tolerance::Factor(x) => write!(f, "×/÷{x}"),
            Tolerance::Range(lo, hi) => write!(f, "[{lo:.3e}, {hi:.3e}]"),
        }
    }
}

/// A quoted value with its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub quantity: Quantity,
    pub quoted: f64,
    pub tolerance: Tolerance,
    /// Explanation shown next to the cell; marks a known discrepancy when
    /// `known_discrepancy` is set.
    pub note: Option<String>,
    /// A deviation beyond tolerance is reported but not counted as failure.
    pub known_discrepancy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub label: String,
    pub material: MaterialParams,
    pub drive: DriveSpec,
    pub geometry: CrystalGeometry,
    pub output: OutputSpec,
    pub reference: Vec<ReferenceCell>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Number(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    label: Option<String>,
    material: String,
    drive: RawDrive,
    #[serde(default)]
    geometry: RawGeometry,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    reference: BTreeMap<String, RawReference>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    mode: Option<String>,
    shape: Option<String>,
    width: String,
    peak_rabi: Option<String>,
    peak_intensity: Option<String>,
    pulse_energy: Option<String>,
    pulse_area: Option<f64>,
    pulses: Option<u32>,
    coherence: Option<String>,
    sigma_max: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    preset: Option<String>,
    length_thz: Option<String>,
    area_thz: Option<String>,
    area_opt: Option<String>,
    length_opt: Option<String>,
    aperture: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    focus_spot: Option<String>,
    trajectory: Option<PathBuf>,
    waveform: Option<PathBuf>,
    waveform_samples: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReference {
    quoted: RawNumber,
    tolerance: RawTolerance,
    note: Option<String>,
    #[serde(default)]
    known_discrepancy: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerance {
    relative: Option<f64>,
    absolute: Option<RawNumber>,
    factor: Option<f64>,
    range: Option<[RawNumber; 2]>,
}

struct Ctx<'a> {
    origin: &'a str,
}

impl Ctx<'_> {
    fn err(&self, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Config {
            origin: self.origin.to_string(),
            message: message.into(),
        }
    }

    fn quantity(&self, field: &str, text: &str, dim: Dimension) -> Result<f64, ScenarioError> {
        parse_quantity(text, dim).map_err(|e| self.err(format!("`{field}`: {e}")))
    }

    fn number(&self, field: &str, raw: &RawNumber, dim: Dimension) -> Result<f64, ScenarioError> {
        match raw {
            RawNumber::Number(v) if dim == Dimension::Dimensionless => Ok(*v),
            RawNumber::Number(v) => Err(self.err(format!("`{field}` = {v} needs a {dim} unit, e.g. \"{v} <unit>\""))),
            RawNumber::Text(t) => self.quantity(field, t, dim),
        }
    }

    fn positive(&self, field: &str, text: &str, dim: Dimension) -> Result<f64, ScenarioError> {
        let v = self.quantity(field, text, dim)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.err(format!("`{field}` must be positive, got {v:e}")))
        }
    }
}

impl ScenarioConfig {
    /// Parses a configuration; relative material paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, origin: &str, base_dir: Option<&Path>) -> Result<Self, ScenarioError> {
        let ctx = Ctx { origin };
        let raw: RawConfig = toml::from_str(text).map_err(|e| ctx.err(e.to_string()))?;
        let material = resolve_material(&raw.material, base_dir)?;
        let drive = parse_drive(&ctx, &raw.drive)?;
        let geometry = parse_geometry(&ctx, &raw.geometry)?;
        let output = OutputSpec {
            focus_spot: match &raw.output.focus_spot {
                Some(t) => ctx.positive("output.focus_spot", t, Dimension::Length)?,
                None => DEFAULT_FOCUS_SPOT,
            },
            trajectory: raw.output.trajectory,
            waveform: raw.output.waveform,
            waveform_samples: match raw.output.waveform_samples {
                Some(n) if n < 2 => return Err(ctx.err("`output.waveform_samples` must be at least 2")),
                Some(n) => n,
                None => DEFAULT_WAVEFORM_SAMPLES,
            },
        };
        let reference = raw
            .reference
            .iter()
            .map(|(key, r)| parse_reference(&ctx, key, r))
            .collect::<Result<Vec<_>, _>>()?;
        let label = raw.label.unwrap_or_else(|| format!("{} {}", material.name, drive.mode));
        Ok(ScenarioConfig {
            label,
            material,
            drive,
            geometry,
            output,
            reference,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, &path.display().to_string(), path.parent())
    }
}

fn resolve_material(name: &str, base_dir: Option<&Path>) -> Result<MaterialParams, ScenarioError> {
    match MaterialParams::preset(name) {
        Ok(m) => Ok(m),
        Err(MaterialError::UnknownPreset(_)) => {
            let path = Path::new(name);
            let path = match base_dir {
                Some(dir) if path.is_relative() && !path.exists() => dir.join(path),
                _ => path.to_path_buf(),
            };
            if path.exists() {
                Ok(MaterialParams::from_file(&path)?)
            } else {
                Err(MaterialError::UnknownPreset(name.to_string()).into())
            }
        }
        Err(e) => Err(e.into()),
    }
}

fn parse_drive(ctx: &Ctx, raw: &RawDrive) -> Result<DriveSpec, ScenarioError> {
    let mode = match raw.mode.as_deref().unwrap_or("pulsed") {
        "pulsed" => DriveMode::Pulsed,
        "cw" => DriveMode::Cw,
        other => return Err(ctx.err(format!("`drive.mode` must be `pulsed` or `cw`, got `{other}`"))),
    };
    let shape = raw
        .shape
        .as_deref()
        .unwrap_or("gaussian")
        .parse::<PulseShape>()
        .map_err(|e| ctx.err(format!("`drive.shape`: {e}")))?;
    let coherence = match raw.coherence.as_deref().unwrap_or("analytic") {
        "analytic" => CoherenceMethod::Analytic,
        "numeric" => CoherenceMethod::Numeric,
        "numeric-relaxed" => CoherenceMethod::NumericRelaxed,
        other => {
            return Err(ctx.err(format!(
                "`drive.coherence` must be `analytic`, `numeric` or `numeric-relaxed`, got `{other}`"
            )))
        }
    };
    let width = ctx.positive("drive.width", &raw.width, Dimension::Time)?;

    let mut given = Vec::new();
    if let Some(t) = &raw.peak_rabi {
        given.push(DriveStrength::PeakRabi(ctx.quantity(
            "drive.peak_rabi",
            t,
            Dimension::Rate,
        )?));
    }
    if let Some(t) = &raw.peak_intensity {
        given.push(DriveStrength::PeakIntensity(ctx.quantity(
            "drive.peak_intensity",
            t,
            Dimension::Intensity,
        )?));
    }
    if let Some(t) = &raw.pulse_energy {
        given.push(DriveStrength::PulseEnergy(ctx.quantity(
            "drive.pulse_energy",
            t,
            Dimension::Energy,
        )?));
    }
    if let Some(s) = raw.pulse_area {
        given.push(DriveStrength::PulseArea(s));
    }
    let strength = match given.as_slice() {
        [one] => *one,
        _ => {
            return Err(ctx.err(format!(
                "exactly one of `drive.peak_rabi`, `drive.peak_intensity`, `drive.pulse_energy`, `drive.pulse_area` \
                 must be given, found {}",
                given.len()
            )))
        }
    };
    let drive = DriveSpec {
        mode,
        shape,
        width,
        strength,
        pulses: raw.pulses.unwrap_or(2),
        coherence,
        sigma_max: raw.sigma_max,
    };
    drive.validate().map_err(|m| ctx.err(m))?;
    Ok(drive)
}

impl DriveSpec {
    /// Checks the combination of fields; returns a field-level message.
    pub fn validate(&self) -> Result<(), String> {
        let value = match self.strength {
            DriveStrength::PeakRabi(v)
            | DriveStrength::PeakIntensity(v)
            | DriveStrength::PulseEnergy(v)
            | DriveStrength::PulseArea(v) => v,
        };
        if !(value >= 0.0) || !value.is_finite() {
            return Err(format!("drive strength must be finite and ≥ 0, got {value:e}"));
        }
        if matches!(self.strength, DriveStrength::PulseArea(_)) && self.mode == DriveMode::Cw {
            return Err("`drive.pulse_area` applies to pulsed mode only".into());
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(format!("`drive.width` must be positive, got {:e}", self.width));
        }
        if !(1..=2).contains(&self.pulses) {
            return Err(format!("`drive.pulses` must be 1 or 2, got {}", self.pulses));
        }
        if let Some(s) = self.sigma_max {
            if !(0.0..=1.0).contains(&s) {
                return Err(format!("`drive.sigma_max` must lie in [0, 1], got {s}"));
            }
        }
        Ok(())
    }
}

fn parse_geometry(ctx: &Ctx, raw: &RawGeometry) -> Result<CrystalGeometry, ScenarioError> {
    let base = match raw.preset.as_deref() {
        Some("room-temperature") => Some(CrystalGeometry::ruby_room_temperature()),
        Some("low-temperature") => Some(CrystalGeometry::ruby_low_temperature()),
        Some(other) => {
            return Err(ctx.err(format!(
                "`geometry.preset` must be `room-temperature` or `low-temperature`, got `{other}`"
            )))
        }
        None => None,
    };
    let field = |name: &str, text: &Option<String>, dim, fallback: Option<f64>| -> Result<f64, ScenarioError> {
        match (text, fallback) {
            (Some(t), _) => ctx.positive(&format!("geometry.{name}"), t, dim),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(ctx.err(format!(
                "`geometry.{name}` is required when no geometry preset is given"
            ))),
        }
    };
    let g = CrystalGeometry::new(
        field(
            "length_thz",
            &raw.length_thz,
            Dimension::Length,
            base.map(|b| b.length_thz),
        )?,
        field("area_thz", &raw.area_thz, Dimension::Area, base.map(|b| b.area_thz))?,
        field("area_opt", &raw.area_opt, Dimension::Area, base.map(|b| b.area_opt))?,
        field(
            "length_opt",
            &raw.length_opt,
            Dimension::Length,
            base.map(|b| b.length_opt),
        )?,
        field("aperture", &raw.aperture, Dimension::Length, base.map(|b| b.aperture))?,
    )?;
    Ok(g)
}

fn parse_reference(ctx: &Ctx, key: &str, raw: &RawReference) -> Result<ReferenceCell, ScenarioError> {
    let quantity: Quantity = key.parse().map_err(|m: String| ctx.err(m))?;
    let dim = quantity.dimension();
    let field = format!("reference.{key}");
    let quoted = ctx.number(&format!("{field}.quoted"), &raw.quoted, dim)?;
    let t = &raw.tolerance;
    let mut options = Vec::new();
    if let Some(r) = t.relative {
        options.push(Tolerance::Relative(r));
    }
    if let Some(a) = &t.absolute {
        options.push(Tolerance::Absolute(ctx.number(
            &format!("{field}.tolerance.absolute"),
            a,
            dim,
        )?));
    }
    if let Some(f) = t.factor {
        if !(f >= 1.0) {
            return Err(ctx.err(format!("`{field}.tolerance.factor` must be ≥ 1, got {f}")));
        }
        options.push(Tolerance::Factor(f));
    }
    if let Some([lo, hi]) = &t.range {
        let lo = ctx.number(&format!("{field}.tolerance.range"), lo, dim)?;
        let hi = ctx.number(&format!("{field}.tolerance.range"), hi, dim)?;
        if lo > hi {
            return Err(ctx.err(format!("`{field}.tolerance.range` is reversed")));
        }
        options.push(Tolerance::Range(lo, hi));
    }
    let tolerance = match options.as_slice() {
        [one] => *one,
        _ => {
            return Err(ctx.err(format!(
                "`{field}.tolerance` needs exactly one of relative, absolute, factor, range"
            )))
        }
    };
    Ok(ReferenceCell {
        quantity,
        quoted,
        tolerance,
        note: raw.note.clone(),
        known_discrepancy: raw.known_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
material = "ruby-rt"
[drive]
width = "1 ps"
peak_rabi = "2e11 s^-1"
[geometry]
preset = "room-temperature"
"#;

    fn parse(text: &str) -> Result<ScenarioConfig, ScenarioError> {
        ScenarioConfig::from_toml_str(text, "test", None)
    }

    #[test]
    fn minimal_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.label, "ruby-rt pulsed");
        assert_eq!(c.drive.mode, DriveMode::Pulsed);
        assert_eq!(c.drive.shape, PulseShape::Gaussian);
        assert_eq!(c.drive.pulses, 2);
        assert_eq!(c.drive.strength, DriveStrength::PeakRabi(2e11));
        assert_eq!(c.geometry, CrystalGeometry::ruby_room_temperature());
        assert_eq!(c.output, OutputSpec::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = MINIMAL.replace("[geometry]", "colour = \"red\"\n[geometry]");
        assert!(matches!(parse(&text), Err(ScenarioError::Config { .. })));
    }

    #[test]
    fn strength_must_be_unique() {
        let two = MINIMAL.replace("peak_rabi", "peak_intensity = \"100 GW/cm^2\"\npeak_rabi");
        let err = parse(&two).unwrap_err().to_string();
        assert!(err.contains("exactly one"), "{err}");
        let none = MINIMAL.replace("peak_rabi = \"2e11 s^-1\"", "");
        assert!(parse(&none).is_err());
    }

    #[test]
    fn field_level_messages() {
        let bad = MINIMAL.replace("\"1 ps\"", "\"1 parsec\"");
        let err = parse(&bad).unwrap_err().to_string();
        assert!(err.contains("drive.width"), "{err}");
        let cw_area = MINIMAL.replace("peak_rabi = \"2e11 s^-1\"", "pulse_area = 1.0\nmode = \"cw\"");
        assert!(parse(&cw_area).unwrap_err().to_string().contains("pulse_area"));
        let missing = MINIMAL.replace("preset = \"room-temperature\"", "length_thz = \"1 cm\"");
        assert!(parse(&missing).unwrap_err().to_string().contains("geometry.area_thz"));
    }

    #[test]
    fn geometry_overrides_preset() {
        let text = MINIMAL.replace(
            "preset = \"room-temperature\"",
            "preset = \"room-temperature\"\nlength_thz = \"2 cm\"",
        );
        let c = parse(&text).unwrap();
        assert_eq!(c.geometry.length_thz, 2e-2);
        assert_eq!(c.geometry.area_thz, 1e-5);
    }

    #[test]
    fn unknown_material() {
        let text = MINIMAL.replace("ruby-rt", "unobtainium");
        assert!(matches!(
            parse(&text),
            Err(ScenarioError::Material(MaterialError::UnknownPreset(_)))
        ));
    }

    #[test]
    fn reference_cells() {
        let text = format!(
            "{MINIMAL}\n[reference.thz_energy]\nquoted = \"630 pJ\"\ntolerance = {{ relative = 0.15 }}\n\
             [reference.sigma]\nquoted = 0.21\ntolerance = {{ absolute = 0.005 }}\nknown_discrepancy = true\n"
        );
        let c = parse(&text).unwrap();
        assert_eq!(c.reference.len(), 2);
        let e = c.reference.iter().find(|r| r.quantity == Quantity::ThzEnergy).unwrap();
        assert!((e.quoted - 630e-12).abs() < 1e-24);
        assert!(e.tolerance.accepts(600e-12, e.quoted));
        assert!(!e.tolerance.accepts(800e-12, e.quoted));

        let both = text.replace("{ relative = 0.15 }", "{ relative = 0.15, factor = 2.0 }");
        assert!(parse(&both).is_err());
        let bad_key = text.replace("reference.sigma", "reference.colour");
        assert!(parse(&bad_key).unwrap_err().to_string().contains("colour"));
        let unitless = text.replace("\"630 pJ\"", "630");
        assert!(parse(&unitless).unwrap_err().to_string().contains("unit"));
    }

    #[test]
    fn tolerance_kinds() {
        assert!(Tolerance::Factor(2.0).accepts(1.9, 1.0));
        assert!(Tolerance::Factor(2.0).accepts(0.6, 1.0));
        assert!(!Tolerance::Factor(2.0).accepts(0.4, 1.0));
        assert!(Tolerance::Range(6.0, 9.7).accepts(7.25, 7.5));
        assert!(!Tolerance::Absolute(0.1).accepts(f64::NAN, 0.0));
    }
}
