use std::f64::consts::PI;

use coherent_thz::dynamics::{evolve_full, CWDriveParams, PulseSpec, RelaxationSpec, VSystemState};
use coherent_thz::integrate::Stepper;
use coherent_thz::scenarios::{
    format_sweep, format_table, reproduce_table, run_scenario, sweep, sweep_values, CellStatus, OutputFormat, Quantity,
    ScenarioConfig, SweepParam, SweepScale, TableId,
};

fn config(text: &str) -> ScenarioConfig {
    ScenarioConfig::from_toml_str(text, "test", None).unwrap()
}

const RT_1PS: &str = r#"
material = "ruby-rt"
[geometry]
preset = "room-temperature"
[drive]
mode = "pulsed"
shape = "gaussian"
width = "1 ps"
peak_rabi = "2e11 s^-1"
"#;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn room_temperature_picosecond_row() {
    let row = run_scenario(&config(RT_1PS)).unwrap();
    assert!((row.sigma_max - 0.212).abs() < 5e-3);
    assert!(rel(row.thz_energy, 630e-12) < 0.15);
    assert!(rel(row.peak_field, 23e5) < 0.25);
    assert!(rel(row.pulse_energy, 27e-3) < 0.15);
    assert_eq!(row.pulses, 2);
    assert!((row.total_energy - 2.0 * row.pulse_energy / row.absorbed_fraction).abs() <= 1e-15 * row.total_energy);
    assert_eq!(row.efficiency, row.thz_energy / row.total_energy);
    assert!(row.damage.passed());
}

#[test]
fn zero_drive_gives_zero_outputs() {
    let row = run_scenario(&config(&RT_1PS.replace("2e11 s^-1", "0 s^-1"))).unwrap();
    for q in [
        Quantity::Sigma,
        Quantity::ThzEnergy,
        Quantity::PeakField,
        Quantity::PulseEnergy,
        Quantity::Efficiency,
    ] {
        assert_eq!(row.value(q), 0.0, "{q}");
    }
}

#[test]
fn low_temperature_short_pulses() {
    let report = reproduce_table(TableId::II).unwrap();
    let row = &report.rows[0];
    assert!((row.sigma_max - 0.5).abs() < 1e-12);
    assert!((6.0e-6..=9.7e-6).contains(&row.thz_energy));
    assert!(row.efficiency > 0.5e-4 && row.efficiency < 2e-4);
    let long = &report.rows[1];
    assert!(long.efficiency > 1.5e-5 && long.efficiency < 6e-5);
    assert_eq!(report.failures(), 0);
}

#[test]
fn table_one_columns() {
    let report = reproduce_table(TableId::I).unwrap();
    assert_eq!(report.failures(), 0);
    let fs = &report.rows[0];
    assert!(fs.thz_energy > 50e-15 && fs.thz_energy < 200e-15);
    let ps = &report.rows[1];
    let eff = ps
        .deviations
        .iter()
        .find(|d| d.quantity == Quantity::Efficiency)
        .unwrap();
    assert_eq!(eff.status, CellStatus::Flagged);
    assert!(eff.note.as_deref().unwrap().contains("transposition"));
    assert!(eff.computed > 1e-9 && eff.computed < 1e-8);
    // the 10 ps column is pumped above the picosecond damage bucket
    assert!(report.rows[2].warnings.iter().any(|w| w.contains("damage")));
}

#[test]
fn tables_are_deterministic() {
    for t in [TableId::I, TableId::II] {
        for f in [OutputFormat::Text, OutputFormat::Csv] {
            let a = format_table(&reproduce_table(t).unwrap(), f);
            let b = format_table(&reproduce_table(t).unwrap(), f);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn area_sweep_peaks_at_pi() {
    let base = config(
        r#"
material = "ruby-lt"
[drive]
mode = "pulsed"
shape = "gaussian"
width = "44.31 ps"
pulse_area = 1.0
[geometry]
preset = "low-temperature"
"#,
    );
    let values = sweep_values(0.0, 2.0 * PI, 65, SweepScale::Linear).unwrap();
    let points = sweep(&base, SweepParam::PulseArea, &values, true);
    assert_eq!(points.len(), 65);
    let (best, sigma) = points
        .iter()
        .map(|p| (p.value, p.result.as_ref().unwrap().sigma_max))
        .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    assert!((best - PI).abs() < 1e-12);
    assert!((sigma - 0.5).abs() < 1e-12);
}

#[test]
fn sigma_sweep_scales_quadratically() {
    let points = sweep(&config(RT_1PS), SweepParam::SigmaMax, &[0.1, 0.2, 0.4], false);
    let e: Vec<f64> = points.iter().map(|p| p.result.as_ref().unwrap().thz_energy).collect();
    assert!((e[1] / e[0] - 4.0).abs() < 1e-12);
    assert!((e[2] / e[0] - 16.0).abs() < 1e-12);
}

#[test]
fn single_step_sweep_is_a_run() {
    let base = config(RT_1PS);
    let points = sweep(
        &base,
        SweepParam::PeakRabi,
        &sweep_values(2e11, 3e11, 1, SweepScale::Linear).unwrap(),
        true,
    );
    assert_eq!(points.len(), 1);
    assert_eq!(points[0].result.as_ref().unwrap(), &run_scenario(&base).unwrap());
}

#[test]
fn parallel_sweep_matches_serial() {
    let base = config(RT_1PS);
    let values = sweep_values(1e10, 1e12, 24, SweepScale::Log).unwrap();
    let par = sweep(&base, SweepParam::PeakRabi, &values, true);
    let ser = sweep(&base, SweepParam::PeakRabi, &values, false);
    assert_eq!(par, ser);
    assert_eq!(
        format_sweep(&par, SweepParam::PeakRabi, OutputFormat::Csv),
        format_sweep(&ser, SweepParam::PeakRabi, OutputFormat::Csv)
    );
    assert_eq!(
        format_sweep(&par, SweepParam::PeakRabi, OutputFormat::Csv)
            .lines()
            .count(),
        25
    );
}

#[test]
fn failed_points_do_not_stop_a_sweep() {
    let base = config(RT_1PS);
    let points = sweep(&base, SweepParam::Width, &[1e-12, -1e-12, 2e-12], true);
    assert!(points[0].result.is_ok() && points[2].result.is_ok());
    assert!(points[1].result.as_ref().unwrap_err().contains("width"));
}

#[test]
fn numeric_coherence_agrees_with_analytic() {
    let analytic = run_scenario(&config(RT_1PS)).unwrap();
    let numeric = run_scenario(&config(&format!("{RT_1PS}coherence = \"numeric\"\n"))).unwrap();
    assert!((numeric.sigma_max - analytic.sigma_max).abs() < 1e-6);
}

#[test]
fn weak_cw_drive_matches_steady_state() {
    // below the EIT threshold the relaxed density matrix follows the steady-state expression
    let (g_opt, g_thz) = (1e12, 1e11);
    let rabi = 1e9;
    let p = PulseSpec::flat_top(rabi, 100e-12).unwrap();
    let relax = RelaxationSpec::coherence_only(g_opt, g_thz);
    let traj = evolve_full(
        &p,
        &p,
        &relax,
        &VSystemState::ground(),
        &[-100e-12, 90e-12],
        Stepper::default(),
    )
    .unwrap();
    let numeric = traj[1].state.sigma_cb().norm();
    let steady = CWDriveParams::symmetric(rabi, g_opt, g_thz).unwrap().sigma_max().norm();
    assert!(rel(numeric, steady) < 1e-2, "{numeric:e} vs {steady:e}");
}

#[test]
fn strong_cw_drive_respects_positivity() {
    let p = PulseSpec::flat_top(5e12, 20e-12).unwrap();
    let relax = RelaxationSpec::coherence_only(1e12, 1e11);
    let grid: Vec<f64> = (0..=40).map(|k| -20e-12 + k as f64 * 1e-12).collect();
    for s in evolve_full(&p, &p, &relax, &VSystemState::ground(), &grid, Stepper::default()).unwrap() {
        assert!(s.state.sigma_cb().norm() <= 0.5 + 1e-9);
        assert!(s.state.min_eigenvalue() > -1e-9);
    }
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            ScenarioConfig::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 7);
}
