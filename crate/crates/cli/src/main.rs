//! `qrf` — quantum rolling friction from the command line.
//!
//! Subcommands: `sweep` (velocity/distance sweeps to CSV), `verify` (the
//! acceptance suite), `oracle` (low-velocity coefficient cross-check) and
//! `dump-spectrum` (tabulate the dipole power spectrum).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use qrf_cli::config::{build, key_reference, RawConfig};
use qrf_cli::run::{
    closure_warnings, oracle_report, run_dump_spectrum, run_sweep, run_verify, DumpOptions,
};

#[derive(Parser)]
#[command(
    name = "qrf",
    version,
    about = "Quantum rolling friction: drag, spin recoil, angular momentum and rotation \
             frequency for an atom moving above a dissipative surface",
    after_long_help = concat!(
        "Configuration is a flat key = value stack: preset, then config file, then \
         per-key flags, then --set overrides (last wins)."
    )
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a velocity or distance sweep and emit the CSV table
    Sweep(ScenarioArgs),
    /// Run the verification suite (anchors and property checks); with
    /// --mode lte or --backaction off, demonstrate that closure instead
    Verify {
        /// Force the spectral closure for a demonstration run: ness | lte
        #[arg(long)]
        mode: Option<String>,
        /// Force the back-action switch for a demonstration run: on | off
        #[arg(long)]
        backaction: Option<String>,
    },
    /// Print the low-velocity force coefficients and their quadrature oracle
    Oracle,
    /// Tabulate the steady-state dipole spectrum S(omega) for one scenario
    DumpSpectrum {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Lower edge of the frequency window (eV; default -0.1 x transition)
        #[arg(long)]
        omega_min_ev: Option<f64>,
        /// Upper edge of the frequency window (eV; default 2 x transition)
        #[arg(long)]
        omega_max_ev: Option<f64>,
        /// Coarse grid size; dense windows are added at the dressed lines
        #[arg(long, default_value_t = 601)]
        omega_points: usize,
    },
}

/// Scenario configuration: preset/file/per-key flags/--set, merged in that
/// order.  Every long flag mirrors the config key of the same name.
#[derive(Args)]
#[command(after_help = format!("Config keys (flags mirror these names):\n{}", key_reference()))]
struct ScenarioArgs {
    /// Start from a named preset: rb-au-fig2 | li-na
    #[arg(long)]
    preset: Option<String>,
    /// Flat key = value config file ('#' comments)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key (repeatable), e.g. --set v_km_s=10
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[arg(long, hide_short_help = true)]
    atom_volume_a3: Option<String>,
    #[arg(long, hide_short_help = true)]
    atom_transition_ev: Option<String>,
    #[arg(long, hide_short_help = true)]
    atom_mass_u: Option<String>,
    #[arg(long, hide_short_help = true)]
    material: Option<String>,
    #[arg(long, hide_short_help = true)]
    omega_p_ev: Option<String>,
    #[arg(long, hide_short_help = true)]
    gamma_mev: Option<String>,
    #[arg(long, hide_short_help = true)]
    rho_ohm_m: Option<String>,
    #[arg(long, hide_short_help = true)]
    r_re: Option<String>,
    #[arg(long, hide_short_help = true)]
    za_nm: Option<String>,
    #[arg(long, hide_short_help = true)]
    v_km_s: Option<String>,
    #[arg(long, hide_short_help = true)]
    mode: Option<String>,
    #[arg(long, hide_short_help = true)]
    backaction: Option<String>,
    #[arg(long, hide_short_help = true)]
    evaluation: Option<String>,
    #[arg(long, hide_short_help = true)]
    sweep_axis: Option<String>,
    #[arg(long, hide_short_help = true)]
    sweep_values: Option<String>,
    #[arg(long, hide_short_help = true)]
    sweep_log_min: Option<String>,
    #[arg(long, hide_short_help = true)]
    sweep_log_max: Option<String>,
    #[arg(long, hide_short_help = true)]
    sweep_log_count: Option<String>,
    #[arg(long, hide_short_help = true)]
    output: Option<String>,
}

impl ScenarioArgs {
    fn raw(&self) -> Result<RawConfig> {
        let mut cfg = match &self.preset {
            Some(name) => RawConfig::preset(name)?,
            None => RawConfig::default(),
        };
        if let Some(path) = &self.config {
            let layer = RawConfig::from_file(path)?;
            cfg.overlay(&layer);
        }
        for (key, value) in [
            ("atom_volume_a3", &self.atom_volume_a3),
            ("atom_transition_ev", &self.atom_transition_ev),
            ("atom_mass_u", &self.atom_mass_u),
            ("material", &self.material),
            ("omega_p_ev", &self.omega_p_ev),
            ("gamma_mev", &self.gamma_mev),
            ("rho_ohm_m", &self.rho_ohm_m),
            ("r_re", &self.r_re),
            ("za_nm", &self.za_nm),
            ("v_km_s", &self.v_km_s),
            ("mode", &self.mode),
            ("backaction", &self.backaction),
            ("evaluation", &self.evaluation),
            ("sweep_axis", &self.sweep_axis),
            ("sweep_values", &self.sweep_values),
            ("sweep_log_min", &self.sweep_log_min),
            ("sweep_log_max", &self.sweep_log_max),
            ("sweep_log_count", &self.sweep_log_count),
            ("output", &self.output),
        ] {
            if let Some(value) = value {
                cfg.set(key, value)?;
            }
        }
        for pair in &self.set {
            cfg.set_pair(pair)?;
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Sweep(args) => {
            let spec = build(&args.raw()?)?;
            for warning in closure_warnings(&spec) {
                eprintln!("{warning}");
            }
            let report = run_sweep(&spec)?;
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            let summary = format!(
                "{} points ({} unconverged, {} failed), worst relative quadrature error {:.1e}",
                report.rows.len(),
                report.unconverged,
                report.failed,
                report.worst_quad_err
            );
            match &spec.output {
                Some(path) => {
                    println!("{summary}");
                    println!("wrote {}", path.display());
                }
                None => {
                    // CSV owns stdout; the summary moves aside
                    print!("{}", report.csv);
                    eprintln!("{summary}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { mode, backaction } => {
            let code = run_verify(mode.as_deref(), backaction.as_deref())?;
            Ok(ExitCode::from(code as u8))
        }
        Cmd::Oracle => {
            print!("{}", oracle_report());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::DumpSpectrum {
            scenario,
            omega_min_ev,
            omega_max_ev,
            omega_points,
        } => {
            let spec = build(&scenario.raw()?)?;
            for warning in closure_warnings(&spec) {
                eprintln!("{warning}");
            }
            let table = run_dump_spectrum(
                &spec,
                &DumpOptions {
                    omega_min_ev,
                    omega_max_ev,
                    points: omega_points,
                },
            )?;
            match &spec.output {
                Some(path) => {
                    std::fs::write(path, &table)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{table}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
