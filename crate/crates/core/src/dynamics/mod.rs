//! Density-matrix dynamics of the optically driven V system.

mod cw;
mod full;
mod pulse;
mod reduced;
mod selection;
pub mod state;

pub use cw::{cw_coherence, CWDriveParams};
pub use full::{evolve_full, FullSample, RelaxationSpec};
pub use pulse::{pulse_area, PulseShape, PulseSpec, TRUNCATION};
pub use reduced::{analytic_coherence, asymptotic_coherence, evolve_reduced, pulse_grid, ReducedSample};
pub use selection::{v_scheme_coupling, Polarization, PolarizationScheme, VScheme};
pub use state::VSystemState;
