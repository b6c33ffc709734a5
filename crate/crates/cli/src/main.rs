mod commands;
mod config;
mod report;

use clap::{Args, Parser, Subcommand};
use commands::{CliError, CliResult};
use config::ExperimentConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hbie", version, about = "Helmholtz boundary-integral experiments (CSV output)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite and report pass/fail per check
    Verify,
    /// Nystrom density error against a 4x reference over (k, ppw)
    NystromConvergence(Common),
    /// Galerkin quasi-optimality constants over (k, ppw)
    GalerkinPollution(Common),
    /// Disk multipliers lambda_m, mu_m for m = 0..M
    DiskSpectrum(Common),
    /// Field error for an interior point source
    PointSource(Common),
    /// Total field on a rectangular grid
    FieldGrid(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// circle[:r=R], star, cavity, diamonds[:sigma=S] or fourier:<path>
    #[arg(long)]
    geometry: Option<String>,
    /// dirichlet-A, dirichlet-Aprime, neumann-Breg or neumann-Bprimereg
    #[arg(long)]
    formulation: Option<String>,
    /// comma-separated wavenumbers; "10*sqrt2" is accepted
    #[arg(long)]
    k: Option<String>,
    /// comma-separated points per wavelength
    #[arg(long)]
    ppw: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// any config key, e.g. --set p=1 --set modes=40
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn effective_config(c: &Common) -> CliResult<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            ExperimentConfig::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    let flags = [
        ("geometry", &c.geometry),
        ("formulation", &c.formulation),
        ("k", &c.k),
        ("ppw", &c.ppw),
        ("eta", &c.eta),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v, 0, 1).map_err(|e| CliError::Usage(format!("--{key}: {}", e.message)))?;
        }
    }
    for s in &c.set {
        let (key, value) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{s}'")))?;
        cfg.set(key.trim(), value.trim(), 0, 1).map_err(|e| CliError::Usage(format!("--set {key}: {}", e.message)))?;
    }
    if let Some(out) = &c.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> CliResult<()> {
    let (name, common, build): (&str, Common, fn(&ExperimentConfig) -> CliResult<report::Table>) = match cli.command {
        Command::Verify => {
            let checks = commands::verify()?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                return Err(CliError::Numerical(hbie::error::HbieError::Domain(format!("{failed} invariant check(s) failed"))));
            }
            return Ok(());
        }
        Command::NystromConvergence(c) => ("nystrom-convergence", c, commands::nystrom_convergence),
        Command::GalerkinPollution(c) => ("galerkin-pollution", c, commands::galerkin_pollution),
        Command::DiskSpectrum(c) => ("disk-spectrum", c, commands::disk_spectrum),
        Command::PointSource(c) => ("point-source", c, commands::point_source),
        Command::FieldGrid(c) => ("field-grid", c, commands::field_grid),
    };
    let cfg = effective_config(&common)?;
    let table = build(&cfg)?;
    // the output path is not part of the experiment identity
    let canonical = ExperimentConfig { out: None, ..cfg.clone() }.canonical();
    table.write(name, &canonical, cfg.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hbie: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
