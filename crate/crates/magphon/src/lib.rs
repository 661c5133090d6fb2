//! Configuration, presets, sweep orchestration and file output for the
//! `magphon` command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::RunConfig;
pub use error::CliError;
pub use run::{run, RunSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    SelfEnergy,
    Coupling,
    Spectrum,
    Surface,
    FindEp,
    Encircle,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::SelfEnergy,
        Command::Coupling,
        Command::Spectrum,
        Command::Surface,
        Command::FindEp,
        Command::Encircle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SelfEnergy => "self-energy",
            Command::Coupling => "coupling",
            Command::Spectrum => "spectrum",
            Command::Surface => "surface",
            Command::FindEp => "find-ep",
            Command::Encircle => "encircle",
        }
    }
}

/// Which file families to write. Structured reports (EP lists, chirality)
/// are JSON and always written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { csv: true, json: true }
    }
}

impl Formats {
    /// Parses a comma-separated subset of `csv,json`.
    pub fn parse(list: &str) -> Result<Self, CliError> {
        let mut f = Formats {
            csv: false,
            json: false,
        };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => f.csv = true,
                "json" => f.json = true,
                other => return Err(CliError::Invalid(format!("format: unknown format `{other}`"))),
            }
        }
        if !f.csv && !f.json {
            return Err(CliError::Invalid("format: empty format list".into()));
        }
        Ok(f)
    }
}

/// Builds a [`RunSpec`] from command-line style inputs: preset (or the
/// default configuration), optional config file, then `--set` overrides.
pub fn load(
    command: Command,
    preset: Option<&str>,
    config_file: Option<&Path>,
    overrides: &[String],
    out: PathBuf,
    jobs: usize,
    formats: Formats,
) -> Result<RunSpec, CliError> {
    let base = match preset {
        Some(name) => presets::find(name)
            .ok_or_else(|| CliError::UnknownPreset(name.into()))?
            .config(),
        None => presets::default_config(),
    };
    let config = config::resolve(&base, config_file, overrides)?;
    Ok(RunSpec {
        command,
        preset: preset.map(str::to_string),
        config,
        out,
        jobs,
        formats,
    })
}
