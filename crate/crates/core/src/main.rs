use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coherent_thz::error::ScenarioError;
use coherent_thz::materials::MaterialParams;
use coherent_thz::scenarios::{
    format_materials, format_row, format_sweep, format_table, reproduce_table, run_scenario, sweep, sweep_values,
    OutputFormat, ScenarioConfig, SweepParam, SweepScale, TableId,
};

#[derive(Parser)]
#[command(
    name = "coherent-thz",
    version,
    about = "THz emission from optically prepared V-scheme coherence"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario configuration.
    Simulate { config: PathBuf },
    /// Reproduce a table of estimates with deviations from the quoted values.
    Table {
        #[arg(value_parser = parse_table)]
        which: TableId,
    },
    /// Run a scenario over a range of one drive parameter.
    Sweep {
        config: PathBuf,
        /// peak_rabi, peak_intensity, pulse_energy, pulse_area, width or sigma_max.
        #[arg(long, value_parser = parse_param)]
        param: SweepParam,
        /// Lower bound; a bare number is SI, otherwise give a unit (e.g. "1 ps").
        #[arg(long, allow_hyphen_values = true)]
        min: String,
        #[arg(long, allow_hyphen_values = true)]
        max: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Linear)]
        scale: Scale,
    },
    /// Material presets.
    Materials {
        #[command(subcommand)]
        action: MaterialsAction,
    },
}

#[derive(Subcommand)]
enum MaterialsAction {
    /// List the built-in presets.
    List,
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse()
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    s.parse()
}

fn run(cli: &Cli) -> Result<(String, Result<(), ScenarioError>), ScenarioError> {
    let format = OutputFormat::from(cli.format);
    match &cli.command {
        Command::Simulate { config } => {
            let cfg = ScenarioConfig::from_file(config)?;
            let row = run_scenario(&cfg)?;
            let failures = row.failures();
            let status = if failures > 0 {
                Err(ScenarioError::Tolerance(failures))
            } else {
                Ok(())
            };
            Ok((format_row(&row, format), status))
        }
        Command::Table { which } => {
            let report = reproduce_table(*which)?;
            let failures = report.failures();
            let status = if failures > 0 {
                Err(ScenarioError::Tolerance(failures))
            } else {
                Ok(())
            };
            Ok((format_table(&report, format), status))
        }
        Command::Sweep {
            config,
            param,
            min,
            max,
            steps,
            scale,
        } => {
            let cfg = ScenarioConfig::from_file(config)?;
            let scale = match scale {
                Scale::Linear => SweepScale::Linear,
                Scale::Log => SweepScale::Log,
            };
            let values = sweep_values(param.parse_value(min)?, param.parse_value(max)?, *steps, scale)?;
            let points = sweep(&cfg, *param, &values, true);
            Ok((format_sweep(&points, *param, format), Ok(())))
        }
        Command::Materials {
            action: MaterialsAction::List,
        } => {
            let presets = MaterialParams::presets()?;
            Ok((format_materials(&presets, format), Ok(())))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (text, status) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = emit(&text, cli.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
