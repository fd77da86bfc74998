//! Phase matching, THz emission from the prepared coherence and the
//! resulting pulse energies and fields.

mod emission;
mod grating;
mod phase;

pub use emission::{
    emission_time_grid, exponential_source_energy, exponential_source_field, exponential_source_waveform,
    fid_thz_field, focused_field, propagate_thz_numeric, thz_energy_cw, thz_energy_fid, ExponentialSource,
    PropagationGrid, THzWaveform,
};
pub use grating::{grating_coherence, GratingCoherence, PERTURBATIVE_AREA_LIMIT};
pub use phase::{cw_phase_match, diffraction_loss, phase_mismatch_factor, pulsed_tilt_angle, PhaseMatchGeometry};
