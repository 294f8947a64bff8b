//! Command-line surface and subcommand orchestration.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eitsim_core::{
    dispersion_slope, find_extrema, integrate, phase_features, sweep, timedomain,
    FrequencyGrid64, IntegrationConfig, Observable, OscState, Params64,
};

use crate::config::{parse_config, parse_grid, ConfigError, Preset};
use crate::csv::{
    read_spectrum_csv, write_spectrum_csv_file, write_trajectory_csv_file, CsvError,
};
use crate::plot;
use crate::presets;
use crate::report::RunReport;

/// Relative-error gate of the `verify` subcommand.
pub const VERIFY_TOL: f64 = 1e-3;

/// Upper bound on stored trajectory length before decimation kicks in.
const MAX_STORED_STEPS: usize = 4_000_000;

/// Upper bound on trajectory CSV rows; longer runs are written strided.
const MAX_CSV_ROWS: usize = 200_000;

#[derive(Debug, Parser)]
#[command(
    name = "eitsim",
    version,
    about = "Transparency analog in coupled oscillators and RLC meshes: spectra, features, and a time-domain oracle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep an observable over the frequency grid and write CSV
    Spectrum(SweepArgs),
    /// Sweep, extract dip/splitting/dispersion/phase features, and report
    Features(SweepArgs),
    /// Integrate the equations of motion, demodulate, and write the trajectory
    Timedomain(TimedomainArgs),
    /// Compare the closed-form response against the RK4 oracle on a coarse grid
    Verify(VerifyArgs),
    /// Echo the role-based translation into the other picture
    Translate(SourceArgs),
    /// List the built-in presets
    Presets,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in preset name (see `eitsim presets`)
    #[arg(long)]
    pub preset: Option<String>,
    /// Path to a `key = value` config document
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid override, `start:stop:points` (angular frequency)
    #[arg(long)]
    pub grid: Option<String>,
    /// Switch override (electrical picture only)
    #[arg(long, value_enum)]
    pub switch: Option<SwitchArg>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Observable; defaults to absorption (mechanical) or the switch-matching
    /// power (electrical)
    #[arg(long, value_enum)]
    pub observable: Option<ObservableArg>,
    /// CSV output path; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write a gnuplot script referencing the CSV
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TimedomainArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Drive angular frequency; defaults to the grid center
    #[arg(long)]
    pub drive: Option<f64>,
    /// Time step override
    #[arg(long)]
    pub dt: Option<f64>,
    /// Integration span override
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Trajectory CSV output path
    #[arg(long)]
    pub output: PathBuf,
    /// Write a gnuplot script referencing the CSV
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of comparison frequencies spanning the preset grid
    #[arg(long, default_value_t = 21)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SwitchArg {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableArg {
    Absorption,
    Dispersion,
    Phase,
    PowerOpen,
    PowerClosed,
}

impl From<ObservableArg> for Observable {
    fn from(o: ObservableArg) -> Self {
        match o {
            ObservableArg::Absorption => Observable::Absorption,
            ObservableArg::Dispersion => Observable::Dispersion,
            ObservableArg::Phase => Observable::Phase,
            ObservableArg::PowerOpen => Observable::CircuitPowerOpen,
            ObservableArg::PowerClosed => Observable::CircuitPowerClosed,
        }
    }
}

/// Process failure with its exit code: 1 for configuration problems, 2 for
/// numerical ones.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<eitsim_core::Error> for CliError {
    fn from(e: eitsim_core::Error) -> Self {
        use eitsim_core::Error as E;
        match e {
            E::Domain { .. }
            | E::Mapping(_)
            | E::IncompatibleObservable { .. }
            | E::ResolutionGuard { .. }
            | E::TooFewPoints { .. }
            | E::NonDegenerate { .. }
            | E::OverdampedMode { .. } => CliError::Config(e.to_string()),
            E::Singularity { .. }
            | E::Divergence { .. }
            | E::WindowTooShort { .. }
            | E::NotSteady { .. }
            | E::Holes { .. }
            | E::WrappedPhase { .. }
            | E::NoConvergence(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io: {e}"))
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn resolve(source: &SourceArgs) -> Result<Preset, CliError> {
    let mut preset = match (&source.preset, &source.config) {
        (Some(name), None) => presets::find(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset: {name}; run `eitsim presets` for the catalog"
            ))
        })?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut p = parse_config(&text)?;
            p.name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "config".into());
            p
        }
        (None, None) => {
            return Err(CliError::Config(
                "one of --preset or --config is required".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "--preset and --config are mutually exclusive".into(),
            ))
        }
    };
    if let Some(g) = &source.grid {
        let grid = parse_grid(g).map_err(CliError::Config)?;
        grid.validate().map_err(CliError::from)?;
        preset.grid = grid;
    }
    if let Some(sw) = source.switch {
        match &mut preset.params {
            Params64::Electrical(c) => c.switch_closed = sw == SwitchArg::Closed,
            Params64::Mechanical(_) => {
                return Err(CliError::Config(
                    "--switch applies to the electrical picture".into(),
                ))
            }
        }
    }
    Ok(preset)
}

fn default_observable(params: &Params64) -> Observable {
    match params {
        Params64::Mechanical(_) => Observable::Absorption,
        Params64::Electrical(c) => {
            if c.switch_closed {
                Observable::CircuitPowerClosed
            } else {
                Observable::CircuitPowerOpen
            }
        }
    }
}

fn base_report(preset: &Preset) -> RunReport {
    RunReport {
        preset_name: preset.name.clone(),
        picture: Some(preset.picture()),
        config_echo: preset.to_config(),
        ..RunReport::default()
    }
}

/// Executes one parsed command line.
pub fn run(cli: Cli) -> Result<RunReport, CliError> {
    match cli.command {
        Command::Spectrum(args) => run_spectrum(args),
        Command::Features(args) => run_features(args),
        Command::Timedomain(args) => run_timedomain(args),
        Command::Verify(args) => run_verify(args),
        Command::Translate(args) => run_translate(args),
        Command::Presets => run_presets(),
    }
}

fn run_spectrum(args: SweepArgs) -> Result<RunReport, CliError> {
    let preset = resolve(&args.source)?;
    let observable = args
        .observable
        .map(Observable::from)
        .unwrap_or_else(|| default_observable(&preset.params));
    let spectrum = sweep(&preset.params, &preset.grid, observable)?;

    let mut report = base_report(&preset);
    report.observable = Some(observable);
    for adv in &spectrum.advisories {
        report.advisories.push(format!(
            "grid point {} (omega_s = {}): {}",
            adv.index, adv.omega_s, adv.message
        ));
    }
    if !spectrum.holes.is_empty() {
        report
            .advisories
            .push(format!("{} singular hole row(s) written empty", spectrum.holes.len()));
    }

    match &args.output {
        Some(path) => {
            write_spectrum_csv_file(&spectrum, preset.picture(), path)?;
            // the written file must re-read cleanly
            let text = fs::read_to_string(path)?;
            let back = read_spectrum_csv(&text)?;
            debug_assert_eq!(back.omegas.len(), spectrum.values.len());
            report.outputs.push(("spectrum".into(), path.clone()));
            if let Some(plot_path) = &args.emit_plot {
                let script =
                    plot::spectrum_script(path, preset.picture(), observable, &preset.name);
                fs::write(plot_path, script)?;
                report.outputs.push(("plot script".into(), plot_path.clone()));
            }
        }
        None => {
            if args.emit_plot.is_some() {
                return Err(CliError::Config(
                    "--emit-plot needs --output (the script references the CSV file)".into(),
                ));
            }
            let text = crate::csv::spectrum_csv_string(&spectrum, preset.picture());
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(report)
}

fn run_features(args: SweepArgs) -> Result<RunReport, CliError> {
    let preset = resolve(&args.source)?;
    let observable = args
        .observable
        .map(Observable::from)
        .unwrap_or_else(|| default_observable(&preset.params));
    let spectrum = sweep(&preset.params, &preset.grid, observable)?;
    let mut features = find_extrema(&spectrum)?;

    let mut report = base_report(&preset);
    report.observable = Some(observable);

    if let Params64::Mechanical(m) = &preset.params {
        // slope at the dip center (or at the tallest maximum, or mid-grid)
        let center = features
            .dip
            .as_ref()
            .map(|d| d.omega)
            .or_else(|| {
                features
                    .maxima
                    .iter()
                    .max_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
                    .map(|m| m.omega)
            })
            .unwrap_or((preset.grid.start + preset.grid.stop) / 2.0);
        let h = features
            .dip
            .as_ref()
            .map(|d| d.fwhm / 10.0)
            .unwrap_or_else(|| preset.grid.step());
        features.dispersion_slope_center = Some(dispersion_slope(m, center, h)?);

        let phase_spectrum = sweep(&preset.params, &preset.grid, Observable::Phase)?;
        let jumps = phase_features(&phase_spectrum)?;
        features.phase_jump_count = Some(jumps.jumps.len());
        report.phase_jumps = Some(jumps);
    }

    report.features = Some(features);
    for adv in &spectrum.advisories {
        report.advisories.push(format!(
            "grid point {} (omega_s = {}): {}",
            adv.index, adv.omega_s, adv.message
        ));
    }
    Ok(report)
}

fn run_timedomain(args: TimedomainArgs) -> Result<RunReport, CliError> {
    let preset = resolve(&args.source)?;
    let drive = args
        .drive
        .unwrap_or((preset.grid.start + preset.grid.stop) / 2.0);
    if !(drive.is_finite() && drive > 0.0) {
        return Err(CliError::Config("--drive must be finite and > 0".into()));
    }
    let pair = preset.params.driven_pair()?;
    let period = 2.0 * std::f64::consts::PI / drive;

    let mut advisories = Vec::new();
    let mut cfg = match IntegrationConfig::settled(&pair, drive, 1e-4) {
        Ok(c) => c,
        Err(_) => IntegrationConfig::heuristic(&pair, drive)?,
    };
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(t_end) = args.t_end {
        cfg.t_end = t_end;
        cfg.transient_periods =
            (t_end / period - f64::from(cfg.demod_periods)).max(0.0);
    }
    // keep stored trajectories within memory reach
    let steps = (cfg.t_end / cfg.dt).ceil() as usize;
    if steps > MAX_STORED_STEPS {
        cfg.t_end = cfg.dt * MAX_STORED_STEPS as f64;
        cfg.transient_periods =
            (cfg.t_end / period - f64::from(cfg.demod_periods)).max(0.0);
        advisories.push(format!(
            "integration span capped at {} steps; the demodulation residual reports \
             any unsettled transient",
            MAX_STORED_STEPS
        ));
    }

    let trajectory = integrate(&preset.params, drive, &cfg, OscState::zero())?;
    let demod = timedomain::steady_state_amplitude_with_threshold(
        &trajectory,
        drive,
        &cfg,
        f64::INFINITY,
    )?;
    if demod.residual > timedomain::DEFAULT_RESIDUAL_THRESHOLD {
        advisories.push(format!(
            "demodulation residual {:.3e} above {:.0e}: not settled; raise --t-end",
            demod.residual,
            timedomain::DEFAULT_RESIDUAL_THRESHOLD
        ));
    }

    let stride = trajectory.states.len().div_ceil(MAX_CSV_ROWS).max(1);
    write_trajectory_csv_file(&trajectory, stride, &args.output)?;

    let mut report = base_report(&preset);
    report.demod = Some((
        demod.response.value.re,
        demod.response.value.im,
        demod.residual,
    ));
    report.body.push(format!(
        "drive: omega_s = {drive}, dt = {}, t_end = {}, stride = {stride}",
        cfg.dt, cfg.t_end
    ));
    report.outputs.push(("trajectory".into(), args.output.clone()));
    if let Some(plot_path) = &args.emit_plot {
        fs::write(plot_path, plot::trajectory_script(&args.output, &preset.name))?;
        report.outputs.push(("plot script".into(), plot_path.clone()));
    }
    report.advisories = advisories;
    Ok(report)
}

fn run_verify(args: VerifyArgs) -> Result<RunReport, CliError> {
    let preset = resolve(&args.source)?;
    if args.points < 2 {
        return Err(CliError::Config("--points must be >= 2".into()));
    }
    let grid = FrequencyGrid64 {
        start: preset.grid.start,
        stop: preset.grid.stop,
        points: args.points,
    };
    let omegas = grid.values();
    let points = timedomain::compare_with_analytic(&preset.params, &omegas, VERIFY_TOL)?;

    let mut report = base_report(&preset);
    report.body.push(format!(
        "{:>14} {:>14} {:>14} {:>12} {:>10}",
        "omega_s", "|N| analytic", "|N| oracle", "rel err", "residual"
    ));
    let mut max_err = 0.0f64;
    for p in &points {
        max_err = max_err.max(p.rel_err);
        report.body.push(format!(
            "{:>14.6e} {:>14.6e} {:>14.6e} {:>12.3e} {:>10.2e}",
            p.omega_s,
            p.analytic.norm(),
            p.demodulated.norm(),
            p.rel_err,
            p.residual
        ));
    }
    report.oracle_max_rel_err = Some(max_err);
    if max_err > VERIFY_TOL {
        return Err(CliError::Numerical(format!(
            "verify: max relative error {max_err:.3e} exceeds {VERIFY_TOL:.0e}"
        )));
    }
    Ok(report)
}

fn run_translate(args: SourceArgs) -> Result<RunReport, CliError> {
    let preset = resolve(&args)?;
    let (translated, scale) = match &preset.params {
        Params64::Mechanical(m) => {
            let t = eitsim_core::mech_to_circuit(m)?;
            (Params64::Electrical(t.params), t.scale)
        }
        Params64::Electrical(c) => {
            let t = eitsim_core::circuit_to_mech(c)?;
            (Params64::Mechanical(t.params), t.scale)
        }
    };
    let out = Preset {
        name: format!("{}-translated", preset.name),
        params: translated,
        grid: preset.grid,
        notes: String::new(),
    };
    let mut report = base_report(&preset);
    report.body.push(format!(
        "# role-based translation, scale = {scale} (henry per unit mass)"
    ));
    for line in out.to_config().lines() {
        report.body.push(line.to_string());
    }
    Ok(report)
}

fn run_presets() -> Result<RunReport, CliError> {
    let mut report = RunReport::default();
    for p in presets::builtin() {
        report.body.push(format!(
            "{:<13} {:<11} grid {}:{}:{}",
            p.name,
            p.picture().name(),
            p.grid.start,
            p.grid.stop,
            p.grid.points
        ));
        if !p.notes.is_empty() {
            report.body.push(format!("              {}", p.notes));
        }
    }
    Ok(report)
}
