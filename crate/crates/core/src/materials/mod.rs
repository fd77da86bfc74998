//! Material parameter registry and the pump-side bookkeeping formulas.

mod optics;
mod params;

pub use optics::{
    absorbed_fraction, damage_check, derived_dipole, optical_pulse_energy, peak_intensity, rabi_from_energy,
    rabi_from_intensity, DamageAssessment, DamageVerdict, DipoleCalibration,
};
pub use params::{CrystalGeometry, DamageBucket, MaterialParams};
