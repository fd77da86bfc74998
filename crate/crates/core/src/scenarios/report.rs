//! Text and CSV rendering of reports. Numbers are printed in a fixed
//! scientific format so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use super::run::{Deviation, ReportRow};
use super::sweep::{SweepParam, SweepPoint};
use super::table::TableReport;
use crate::materials::{DamageVerdict, MaterialParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected text or csv)")),
        }
    }
}

fn sci(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_finite() {
        format!("{v:.4e}")
    } else {
        format!("{v}")
    }
}

fn verdict(v: DamageVerdict) -> &'static str {
    match v {
        DamageVerdict::Pass => "pass",
        DamageVerdict::Marginal => "marginal",
        DamageVerdict::Exceeded => "exceeded",
        DamageVerdict::Unknown => "unknown",
    }
}

const ROW_COLUMNS: [&str; 20] = [
    "label",
    "material",
    "mode",
    "coherence",
    "peak_rabi_per_s",
    "pulse_area",
    "peak_intensity_W_per_m2",
    "pulse_energy_J",
    "pulses",
    "total_energy_J",
    "absorbed_fraction",
    "sigma_max",
    "coherence_decay_per_s",
    "thz_energy_J",
    "peak_field_V_per_m",
    "efficiency",
    "efficiency_absorbed",
    "damage",
    "damage_margin",
    "warnings",
];

fn row_values(r: &ReportRow) -> [String; 20] {
    [
        r.label.clone(),
        r.material.clone(),
        r.mode.to_string(),
        r.coherence_method.to_string(),
        sci(r.peak_rabi),
        sci(r.pulse_area),
        sci(r.peak_intensity),
        sci(r.pulse_energy),
        r.pulses.to_string(),
        sci(r.total_energy),
        sci(r.absorbed_fraction),
        sci(r.sigma_max),
        sci(r.coherence_decay),
        sci(r.thz_energy),
        sci(r.peak_field),
        sci(r.efficiency),
        sci(r.efficiency_absorbed),
        verdict(r.damage.verdict).into(),
        sci(r.damage.margin),
        r.warnings.join("; "),
    ]
}

fn csv_string(records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for rec in records {
        w.write_record(&rec).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 fields")
}

fn deviation_cells(d: &Deviation) -> [String; 7] {
    [
        d.quantity.key().to_string(),
        sci(d.computed),
        sci(d.quoted),
        if d.relative.is_finite() {
            format!("{:+.1}%", 100.0 * d.relative)
        } else {
            "-".into()
        },
        d.tolerance.to_string(),
        d.status.label().to_string(),
        d.note.clone().unwrap_or_default(),
    ]
}

/// Left-aligned columns separated by two spaces.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// One scenario result.
pub fn format_row(row: &ReportRow, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = format_rows_csv(std::slice::from_ref(row));
            if !row.deviations.is_empty() {
                out.push('\n');
                out.push_str(&deviations_csv(std::iter::once(row), None));
            }
            out
        }
        OutputFormat::Text => {
            let lines: Vec<Vec<String>> = ROW_COLUMNS
                .iter()
                .zip(row_values(row))
                .filter(|(k, _)| **k != "warnings")
                .map(|(k, v)| vec![k.to_string(), v])
                .collect();
            let mut out = align(&lines);
            for w in &row.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            if !row.deviations.is_empty() {
                out.push('\n');
                out.push_str(&deviation_text(&row.deviations));
            }
            out
        }
    }
}

/// Several rows as one CSV table.
pub fn format_rows_csv(rows: &[ReportRow]) -> String {
    let header = ROW_COLUMNS.iter().map(|s| s.to_string()).collect();
    csv_string(std::iter::once(header).chain(rows.iter().map(|r| row_values(r).to_vec())))
}

fn deviation_text(devs: &[Deviation]) -> String {
    let header = [
        "quantity",
        "computed",
        "quoted",
        "deviation",
        "tolerance",
        "status",
        "note",
    ];
    let mut rows = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    rows.extend(devs.iter().map(|d| deviation_cells(d).to_vec()));
    align(&rows)
}

fn deviations_csv<'a>(rows: impl Iterator<Item = &'a ReportRow>, table: Option<&str>) -> String {
    let mut header = vec![
        "label",
        "quantity",
        "unit",
        "computed",
        "quoted",
        "deviation",
        "tolerance",
        "status",
        "note",
    ];
    if table.is_some() {
        header.insert(0, "table");
    }
    let mut records = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for r in rows {
        for d in &r.deviations {
            let [q, c, qu, dev, tol, st, note] = deviation_cells(d);
            let mut rec = vec![
                r.label.clone(),
                q,
                d.quantity.unit().to_string(),
                c,
                qu,
                dev,
                tol,
                st,
                note,
            ];
            if let Some(t) = table {
                rec.insert(0, t.to_string());
            }
            records.push(rec);
        }
    }
    csv_string(records)
}

/// Computed table with the quoted values, deviations and a summary line.
pub fn format_table(report: &TableReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => deviations_csv(report.rows.iter(), Some(&report.table.to_string())),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{}", report.table.title());
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "\n== {} ({}, {}, {})",
                    r.label, r.material, r.mode, r.coherence_method
                );
                out.push_str(&deviation_text(&r.deviations));
                for w in &r.warnings {
                    let _ = writeln!(out, "warning: {w}");
                }
            }
            let _ = writeln!(
                out,
                "\n{} cells: {} ok, {} flagged, {} failed",
                report.passed() + report.flagged() + report.failures(),
                report.passed(),
                report.flagged(),
                report.failures()
            );
            out
        }
    }
}

/// Sweep results, one row per point; failed points carry the error text.
pub fn format_sweep(points: &[SweepPoint], param: SweepParam, format: OutputFormat) -> String {
    let mut header = vec![param.key().to_string()];
    header.extend(ROW_COLUMNS.iter().map(|s| s.to_string()));
    header.push("error".into());
    let mut records = vec![header];
    for p in points {
        let mut rec = vec![sci(p.value)];
        match &p.result {
            Ok(row) => {
                rec.extend(row_values(row));
                rec.push(String::new());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), ROW_COLUMNS.len()));
                rec.push(e.clone());
            }
        }
        records.push(rec);
    }
    match format {
        OutputFormat::Csv => csv_string(records),
        OutputFormat::Text => {
            // the compact view keeps the varied parameter and the physics outputs
            let keep = [0, 1, 5, 7, 8, 12, 14, 15, 16, 18, 21];
            let slim: Vec<Vec<String>> = records
                .iter()
                .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
                .collect();
            align(&slim)
        }
    }
}

/// Summary of the material presets.
pub fn format_materials(materials: &[MaterialParams], format: OutputFormat) -> String {
    let header = [
        "name",
        "lambda_opt_m",
        "n_opt",
        "n_thz",
        "omega_thz_per_s",
        "density_per_m3",
        "damage_buckets",
        "description",
    ];
    let mut records = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for m in materials {
        records.push(vec![
            m.name.clone(),
            sci(m.lambda_opt),
            format!("{}", m.n_opt),
            format!("{}", m.n_thz),
            sci(m.omega_thz),
            sci(m.density),
            m.damage_threshold.len().to_string(),
            m.description.clone(),
        ]);
    }
    match format {
        OutputFormat::Csv => csv_string(records),
        OutputFormat::Text => align(&records),
    }
}
