use std::fmt;
use std::str::FromStr;

use super::config::ScenarioConfig;
use super::run::{run_inner, CellStatus, ReportRow};
use crate::error::ScenarioError;

const TABLE_I: [(&str, &str); 3] = [
    ("table-i-100fs.toml", include_str!("../../configs/table-i-100fs.toml")),
    ("table-i-1ps.toml", include_str!("../../configs/table-i-1ps.toml")),
    ("table-i-10ps.toml", include_str!("../../configs/table-i-10ps.toml")),
];

const TABLE_II: [(&str, &str); 2] = [
    ("table-ii-short.toml", include_str!("../../configs/table-ii-short.toml")),
    ("table-ii-long.toml", include_str!("../../configs/table-ii-long.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// Room-temperature ruby.
    I,
    /// Low-temperature ruby.
    II,
}

impl TableId {
    pub fn title(self) -> &'static str {
        match self {
            TableId::I => "Table I: ruby at room temperature",
            TableId::II => "Table II: ruby at 1.8-4.2 K",
        }
    }

    /// Scenario configurations of every column, in column order.
    pub fn configs(self) -> Result<Vec<ScenarioConfig>, ScenarioError> {
        let files: &[(&str, &str)] = match self {
            TableId::I => &TABLE_I,
            TableId::II => &TABLE_II,
        };
        files
            .iter()
            .map(|(name, text)| ScenarioConfig::from_toml_str(text, name, None))
            .collect()
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(TableId::I),
            "II" | "ii" | "2" => Ok(TableId::II),
            other => Err(format!("unknown table `{other}` (expected I or II)")),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::I => "I",
            TableId::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table: TableId,
    pub rows: Vec<ReportRow>,
}

impl TableReport {
    fn count(&self, status: CellStatus) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.deviations)
            .filter(|d| d.status == status)
            .count()
    }

    pub fn failures(&self) -> usize {
        self.count(CellStatus::Fail)
    }

    pub fn flagged(&self) -> usize {
        self.count(CellStatus::Flagged)
    }

    pub fn passed(&self) -> usize {
        self.count(CellStatus::Pass)
    }
}

/// Recomputes every column of a table and compares it with the quoted values.
pub fn reproduce_table(which: TableId) -> Result<TableReport, ScenarioError> {
    let rows = which
        .configs()?
        .iter()
        .map(|c| run_inner(c, false))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TableReport { table: which, rows })
}
