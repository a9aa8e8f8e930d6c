mod config;
mod error;
mod run;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::FormatConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "qtherm",
    version,
    about = "Finite-temperature spectra, level shifts, and state evolution from a JSON run configuration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory the tables are written into.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Output format; defaults to the config's output.format, then csv.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Zero-temperature eigenvalues and degeneracies.
    Spectrum,
    /// Temperature-shifted energies, occupations, and the partition sum.
    Thermal,
    /// Transition-frequency shifts between configured temperatures.
    Shift,
    /// Phase evolution of a configured superposition.
    Evolve,
    /// Closed-form harmonic-oscillator tables.
    Oscillator,
    /// Canonical-ensemble aggregates and the F = U - TS closure.
    Ensemble,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Thermal => "thermal",
            Command::Shift => "shift",
            Command::Evolve => "evolve",
            Command::Oscillator => "oscillator",
            Command::Ensemble => "ensemble",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Csv,
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run_cli(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .ok_or_else(|| CliError::Config("--config <PATH> is required".into()))?;
    let text =
        fs::read_to_string(&config_path).map_err(|e| CliError::io(&config_path, e))?;
    let cfg = config::parse_config(&text)?;

    let format = cli
        .format
        .map(|f| match f {
            FormatArg::Csv => FormatConfig::Csv,
            FormatArg::Report => FormatConfig::Report,
        })
        .or_else(|| cfg.output.as_ref().and_then(|o| o.format))
        .unwrap_or(FormatConfig::Csv);
    let format_name = match format {
        FormatConfig::Csv => "csv",
        FormatConfig::Report => "report",
    };

    let out_dir = cli
        .out
        .or_else(|| {
            cfg.output
                .as_ref()
                .and_then(|o| o.dir.as_ref())
                .map(PathBuf::from)
        })
        .ok_or_else(|| {
            CliError::Config("an output directory is required (--out or output.dir)".into())
        })?;

    let tables = match cli.command {
        Command::Spectrum => run::spectrum(&cfg)?,
        Command::Thermal => run::thermal(&cfg)?,
        Command::Shift => run::shift(&cfg)?,
        Command::Evolve => run::evolve(&cfg)?,
        Command::Oscillator => run::oscillator(&cfg)?,
        Command::Ensemble => run::ensemble(&cfg)?,
    };

    fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let mut files = Vec::new();
    for table in &tables {
        let (filename, content) = match format {
            FormatConfig::Csv => (format!("{}.csv", table.name()), table.to_csv()),
            FormatConfig::Report => (format!("{}.report.txt", table.name()), table.to_report()),
        };
        let path = out_dir.join(&filename);
        fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
        files.push(filename);
    }

    let meta = run::meta_text(cli.command.name(), format_name, &text, &files);
    let meta_path = out_dir.join("run_meta.txt");
    fs::write(&meta_path, meta).map_err(|e| CliError::io(&meta_path, e))?;
    println!("wrote {}", meta_path.display());
    Ok(())
}
