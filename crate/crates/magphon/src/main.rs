use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magphon::{load, presets, run, CliError, Command, Formats};

/// Magnon-phonon-photon hybrid simulator: self-energies, noise spectra,
/// exceptional points and dynamical encircling.
#[derive(Parser)]
#[command(name = "magphon", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Self-energy sweeps over pump detunings.
    SelfEnergy(RunArgs),
    /// Pump-enhanced couplings G_a and G_b.
    Coupling(RunArgs),
    /// Heterodyne noise spectrum over measurement frequency and detuning.
    Spectrum(RunArgs),
    /// Branch-tracked eigenvalue surfaces and the EP list.
    Surface(RunArgs),
    /// Exceptional points inside the plane window.
    FindEp(RunArgs),
    /// Time evolution around a loop in both directions.
    Encircle(RunArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in parameter set (see `magphon presets`).
    #[arg(long)]
    preset: Option<String>,
    /// TOML file merged over the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted override, e.g. `--set modes.magnon.gamma=3e7`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Comma-separated subset of csv,json.
    #[arg(long, default_value = "csv,json")]
    format: String,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    dry_run: bool,
}

fn execute(command: Command, args: RunArgs) -> Result<(), CliError> {
    let formats = Formats::parse(&args.format)?;
    let spec = load(
        command,
        args.preset.as_deref(),
        args.config.as_deref(),
        &args.set,
        args.out,
        args.jobs,
        formats,
    )?;
    if args.dry_run {
        print!("{}", spec.config.to_toml());
        return Ok(());
    }
    for path in run(&spec)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::SelfEnergy(a) => (Command::SelfEnergy, a),
        Cmd::Coupling(a) => (Command::Coupling, a),
        Cmd::Spectrum(a) => (Command::Spectrum, a),
        Cmd::Surface(a) => (Command::Surface, a),
        Cmd::FindEp(a) => (Command::FindEp, a),
        Cmd::Encircle(a) => (Command::Encircle, a),
        Cmd::Presets => {
            for p in presets::REGISTRY {
                println!("{:<6} {:<12} {}", p.name, p.command.name(), p.summary);
            }
            return ExitCode::SUCCESS;
        }
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
