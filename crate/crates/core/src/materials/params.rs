use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::MaterialError;
use crate::units::{parse_quantity, Dimension};

const PRESET_FILES: [(&str, &str); 3] = [
    ("ruby-rt", include_str!("../../materials/ruby-rt.toml")),
    ("ruby-lt", include_str!("../../materials/ruby-lt.toml")),
    ("alexandrite-rt", include_str!("../../materials/alexandrite-rt.toml")),
];

/// One duration bucket of the optical damage threshold.
///
/// Intensities below `intensity_low` are safe, between `intensity_low` and
/// `intensity_high` marginal, above `intensity_high` damaging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamageBucket {
    pub min_duration: f64,
    pub max_duration: f64,
    pub intensity_low: f64,
    pub intensity_high: f64,
}

/// Spectroscopic and material constants, all SI.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    pub name: String,
    pub description: String,
    /// Optical (pump) wavelength λ (m).
    pub lambda_opt: f64,
    pub n_opt: f64,
    pub n_thz: f64,
    /// Optical coherence decay γ (s⁻¹).
    pub gamma_opt: f64,
    /// THz coherence decay γ_cb (s⁻¹).
    pub gamma_thz: f64,
    pub sigma_abs_opt: f64,
    /// Number density of active ions (m⁻³).
    pub density: f64,
    /// Non-resonant THz attenuation κ (m⁻¹).
    pub kappa_thz: f64,
    /// THz transition angular frequency ω₃ (s⁻¹).
    pub omega_thz: f64,
    /// Low-temperature THz linewidth used to calibrate the THz dipole.
    pub gamma_thz_lt_ref: Option<f64>,
    /// Low-temperature THz absorption cross-section (m²).
    pub sigma_abs_thz_lt_ref: Option<f64>,
    pub damage_threshold: Vec<DamageBucket>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Number(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBucket {
    min_duration: String,
    max_duration: String,
    intensity_low: String,
    intensity_high: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: String,
    #[serde(default)]
    description: String,
    lambda_opt: String,
    n_opt: RawNumber,
    n_thz: RawNumber,
    gamma_opt: String,
    gamma_thz: String,
    sigma_abs_opt: String,
    density: String,
    kappa_thz: String,
    omega_thz: String,
    gamma_thz_lt_ref: Option<String>,
    sigma_abs_thz_lt_ref: Option<String>,
    #[serde(default)]
    damage_threshold: Vec<RawBucket>,
}

fn quantity(field: &'static str, text: &str, dim: Dimension) -> Result<f64, MaterialError> {
    parse_quantity(text, dim).map_err(|source| MaterialError::Field { field, source })
}

fn positive(field: &'static str, text: &str, dim: Dimension) -> Result<f64, MaterialError> {
    let v = quantity(field, text, dim)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(MaterialError::NonPositive { field, value: v })
    }
}

fn index(field: &'static str, raw: &RawNumber) -> Result<f64, MaterialError> {
    let v = match raw {
        RawNumber::Number(v) => *v,
        RawNumber::Text(t) => quantity(field, t, Dimension::Dimensionless)?,
    };
    if v >= 1.0 {
        Ok(v)
    } else {
        Err(MaterialError::RefractiveIndex { field, value: v })
    }
}

impl MaterialParams {
    /// Parses a material file; `origin` names the source in error messages.
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, MaterialError> {
        let raw: RawMaterial = toml::from_str(text).map_err(|e| MaterialError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        let damage_threshold = raw
            .damage_threshold
            .iter()
            .map(|b| {
                let bucket = DamageBucket {
                    min_duration: positive("damage_threshold.min_duration", &b.min_duration, Dimension::Time)?,
                    max_duration: positive("damage_threshold.max_duration", &b.max_duration, Dimension::Time)?,
                    intensity_low: positive("damage_threshold.intensity_low", &b.intensity_low, Dimension::Intensity)?,
                    intensity_high: positive(
                        "damage_threshold.intensity_high",
                        &b.intensity_high,
                        Dimension::Intensity,
                    )?,
                };
                if bucket.max_duration < bucket.min_duration || bucket.intensity_high < bucket.intensity_low {
                    return Err(MaterialError::ThresholdTable(format!(
                        "bucket {:e}–{:e} s has reversed bounds",
                        bucket.min_duration, bucket.max_duration
                    )));
                }
                Ok(bucket)
            })
            .collect::<Result<Vec<_>, _>>()?;

        Ok(MaterialParams {
            name: raw.name,
            description: raw.description,
            lambda_opt: positive("lambda_opt", &raw.lambda_opt, Dimension::Length)?,
            n_opt: index("n_opt", &raw.n_opt)?,
            n_thz: index("n_thz", &raw.n_thz)?,
            gamma_opt: positive("gamma_opt", &raw.gamma_opt, Dimension::Rate)?,
            gamma_thz: positive("gamma_thz", &raw.gamma_thz, Dimension::Rate)?,
            sigma_abs_opt: positive("sigma_abs_opt", &raw.sigma_abs_opt, Dimension::Area)?,
            density: positive("density", &raw.density, Dimension::NumberDensity)?,
            kappa_thz: positive("kappa_thz", &raw.kappa_thz, Dimension::Attenuation)?,
            omega_thz: positive("omega_thz", &raw.omega_thz, Dimension::Rate)?,
            gamma_thz_lt_ref: raw
                .gamma_thz_lt_ref
                .as_deref()
                .map(|t| positive("gamma_thz_lt_ref", t, Dimension::Rate))
                .transpose()?,
            sigma_abs_thz_lt_ref: raw
                .sigma_abs_thz_lt_ref
                .as_deref()
                .map(|t| positive("sigma_abs_thz_lt_ref", t, Dimension::Area))
                .transpose()?,
            damage_threshold,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, MaterialError> {
        let text = fs::read_to_string(path).map_err(|source| MaterialError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    /// Built-in preset by name (`ruby-rt`, `ruby-lt`, `alexandrite-rt`).
    pub fn preset(name: &str) -> Result<Self, MaterialError> {
        let (_, text) = PRESET_FILES
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| MaterialError::UnknownPreset(name.to_string()))?;
        Self::from_toml_str(text, name)
    }

    pub fn preset_names() -> impl Iterator<Item = &'static str> {
        PRESET_FILES.iter().map(|(n, _)| *n)
    }

    pub fn presets() -> Result<Vec<Self>, MaterialError> {
        Self::preset_names().map(Self::preset).collect()
    }

    /// Preset name, or else a path to a material file.
    pub fn resolve(name_or_path: &str) -> Result<Self, MaterialError> {
        match Self::preset(name_or_path) {
            Ok(m) => Ok(m),
            Err(MaterialError::UnknownPreset(_)) if Path::new(name_or_path).exists() => {
                Self::from_file(Path::new(name_or_path))
            }
            Err(e) => Err(e),
        }
    }

    /// THz vacuum wavelength λ₃ = 2πc/ω₃.
    pub fn lambda_thz(&self) -> f64 {
        crate::units::angular_rate_to_wavelength(self.omega_thz)
    }

    /// Both low-temperature THz references, or an error naming the material.
    pub fn lt_references(&self) -> Result<(f64, f64), MaterialError> {
        match (self.gamma_thz_lt_ref, self.sigma_abs_thz_lt_ref) {
            (Some(g), Some(s)) => Ok((g, s)),
            _ => Err(MaterialError::MissingLtReference(self.name.clone())),
        }
    }
}

/// Crystal dimensions and beam cross-sections (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalGeometry {
    /// THz propagation length L.
    pub length_thz: f64,
    /// THz emitting cross-section A.
    pub area_thz: f64,
    /// Optical beam cross-section A_opt.
    pub area_opt: f64,
    /// Optical path length through the crystal L_opt.
    pub length_opt: f64,
    /// Transverse aperture D seen by the THz beam.
    pub aperture: f64,
}

impl CrystalGeometry {
    pub fn new(
        length_thz: f64,
        area_thz: f64,
        area_opt: f64,
        length_opt: f64,
        aperture: f64,
    ) -> Result<Self, MaterialError> {
        for (field, value) in [
            ("length_thz", length_thz),
            ("area_thz", area_thz),
            ("area_opt", area_opt),
            ("length_opt", length_opt),
            ("aperture", aperture),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(MaterialError::Geometry { field, value });
            }
        }
        Ok(CrystalGeometry {
            length_thz,
            area_thz,
            area_opt,
            length_opt,
            aperture,
        })
    }

    /// 1 cm × 1 cm × 0.1 cm side-pumped crystal, THz face 1 cm × 0.1 cm.
    pub fn ruby_room_temperature() -> Self {
        CrystalGeometry {
            length_thz: 1e-2,
            area_thz: 1e-5,
            area_opt: 1e-5,
            length_opt: 1e-2,
            aperture: 1e-3,
        }
    }

    /// 1 cm × 0.1 cm × 0.05 cm crystal, THz face 0.1 cm × 0.05 cm.
    pub fn ruby_low_temperature() -> Self {
        CrystalGeometry {
            length_thz: 1e-2,
            area_thz: 5e-7,
            area_opt: 1e-5,
            length_opt: 5e-4,
            aperture: 5e-4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::wavenumber_to_angular_rate;

    #[test]
    fn presets_load() {
        let all = MaterialParams::presets().unwrap();
        assert_eq!(all.len(), 3);
        let rt = MaterialParams::preset("ruby-rt").unwrap();
        assert!((rt.gamma_opt - wavenumber_to_angular_rate(5.5).unwrap()).abs() < 1.0);
        assert!((rt.kappa_thz - 45.0).abs() < 1e-12);
        assert!((rt.density - 1.6e25).abs() < 1e10);
        assert_eq!(rt.damage_threshold.len(), 2);
        let alex = MaterialParams::preset("alexandrite-rt").unwrap();
        assert!(alex.lt_references().is_err());
    }

    #[test]
    fn thz_wavelength_of_ruby() {
        let rt = MaterialParams::preset("ruby-rt").unwrap();
        assert!((rt.lambda_thz() - 344.8e-6).abs() < 0.1e-6);
    }

    #[test]
    fn unknown_keys_and_units_rejected() {
        let base = include_str!("../../materials/ruby-rt.toml");
        let extra = format!("{base}\nbogus = 1\n");
        assert!(matches!(
            MaterialParams::from_toml_str(&extra, "t"),
            Err(MaterialError::Parse { .. })
        ));
        let bad_unit = base.replace("\"5.5 cm^-1\"", "\"5.5 parsec\"");
        assert!(matches!(
            MaterialParams::from_toml_str(&bad_unit, "t"),
            Err(MaterialError::Field { field: "gamma_opt", .. })
        ));
        let unitless = base.replace("\"0.45 cm^-1\"", "\"0.45\"");
        assert!(matches!(
            MaterialParams::from_toml_str(&unitless, "t"),
            Err(MaterialError::Field { field: "kappa_thz", .. })
        ));
        let negative = base.replace("\"1.6e19 cm^-3\"", "\"-1.6e19 cm^-3\"");
        assert!(matches!(
            MaterialParams::from_toml_str(&negative, "t"),
            Err(MaterialError::NonPositive { field: "density", .. })
        ));
        let low_index = base.replace("n_thz = 3.5", "n_thz = 0.5");
        assert!(matches!(
            MaterialParams::from_toml_str(&low_index, "t"),
            Err(MaterialError::RefractiveIndex { .. })
        ));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(
            MaterialParams::resolve("no-such-material"),
            Err(MaterialError::UnknownPreset(_))
        ));
    }

    #[test]
    fn geometry_validation() {
        assert!(CrystalGeometry::new(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(CrystalGeometry::new(1.0, 1.0, 1.0, 1.0, 1.0).is_ok());
    }
}
