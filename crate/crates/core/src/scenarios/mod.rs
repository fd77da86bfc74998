//! End-to-end scenarios: configuration, the estimation pipeline, table
//! reproduction, parameter sweeps and report formatting.

mod config;
mod report;
mod run;
mod sweep;
mod table;

pub use config::{
    CoherenceMethod, DriveMode, DriveSpec, DriveStrength, OutputSpec, Quantity, ReferenceCell, ScenarioConfig,
    Tolerance,
};
pub use report::{format_materials, format_row, format_rows_csv, format_sweep, format_table, OutputFormat};
pub use run::{run_scenario, CellStatus, Deviation, ReportRow, ULTIMATE_EFFICIENCY};
pub use sweep::{sweep, sweep_values, SweepParam, SweepPoint, SweepScale};
pub use table::{reproduce_table, TableId, TableReport};
