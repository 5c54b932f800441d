//! Command-line front end: loads a built-in or file scenario, runs a sweep
//! and writes CSV.
//!
//! Column schemas:
//!
//! | subcommand     | columns |
//! |----------------|---------|
//! | `trace`        | `path_id,order,length_m,delay_ns,dep_az_deg,arr_az_deg,gain_db,phase_deg,interactions` |
//! | `coverage`     | `label,x_m,y_m,pl_db` |
//! | `aoa`          | `rotation_deg,azimuth_deg,power_dbm` |
//! | `pdp`          | `delay_ns,power_db` |
//! | `design-panel` | `index,pitch_mm,width_mm,depth_mm,phase_deg` or, with `--pattern`, `angle_deg,amplitude_db` |
//!
//! Exit codes: 0 success, 2 usage or unknown scenario, 3 parse or validation
//! failure, 4 internal error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmwsim::reflectarray::{scatter_pattern, ElementFactor, PATTERN_STEP_DEG};
use mmwsim::scenarios::{self, file, MeetingCase, BUILTIN_NAMES};
use mmwsim::{
    aoa_sweep, cell_phase, channel_response, coverage_sweep, design_panel, find_paths,
    normalize_relative, path_amplitude, path_gain, pdp_padded, Endpoint, GainView, Normalization,
    PanelMode, Pdp, Point2, Scenario, Terminal, Window,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] mmwsim::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use mmwsim::Error as E;
        match self {
            Self::Usage(_) | Self::Core(E::Unknown { .. }) => 2,
            Self::Core(E::Parse { .. } | E::Invalid(_)) => 3,
            Self::Core(E::Domain(_) | E::Io(_)) | Self::Io(_) => 4,
        }
    }

    /// Multi-line diagnostic; validation failures list every violation.
    pub fn report(&self) -> String {
        match self {
            Self::Core(mmwsim::Error::Invalid(v)) => {
                let mut s = format!("error: scenario is invalid ({} violation(s))", v.len());
                for x in v {
                    let _ = write!(s, "\n  - {x}");
                }
                s
            }
            e => format!("error: {e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "mmwsim",
    version,
    about = "Deterministic 60 GHz indoor link simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump every propagation path between one Tx and one Rx.
    Trace(LinkArgs),
    /// Averaged path loss per Tx position (or per Rx if there is one Tx).
    Coverage(SweepArgs),
    /// Rotate the receiver through 360 degrees and record received power.
    Aoa {
        #[command(flatten)]
        link: LinkArgs,
        /// Rotation step; defaults to the receiver's own step or 6 degrees.
        #[arg(long)]
        step_deg: Option<f64>,
    },
    /// Power delay profile of one link.
    Pdp {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, value_enum, default_value_t = WindowArg::Rectangular)]
        window: WindowArg,
        #[arg(long, value_enum, default_value_t = NormArg::Relative)]
        normalization: NormArg,
        /// Zero-padding factor of the inverse transform.
        #[arg(long, default_value_t = mmwsim::channel::DEFAULT_PAD)]
        pad: usize,
    },
    /// Groove reflectarray cell table or scattering pattern.
    DesignPanel {
        #[arg(long, default_value_t = 60.0)]
        frequency_ghz: f64,
        #[arg(long, default_value_t = 80)]
        n_cells: usize,
        #[arg(long, value_enum, default_value_t = PanelModeArg::Table2)]
        panel_mode: PanelModeArg,
        /// Emit the scattered pattern instead of the cell table.
        #[arg(long)]
        pattern: bool,
        /// Incidence angle from the panel normal for `--pattern`.
        #[arg(long, default_value_t = 0.0)]
        incidence_deg: f64,
        #[arg(long, default_value_t = PATTERN_STEP_DEG)]
        step_deg: f64,
        #[arg(long, value_enum, default_value_t = OnOff::On)]
        element_factor: OnOff,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load and validate a scenario, listing every violation.
    Validate(Source),
    /// Write a scenario as TOML.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Built-in name (l_corridor, t_corridor, meeting_room) or a TOML file.
    #[arg(long)]
    pub scenario: String,
    /// Built-in panel variant: none | horizontal | vertical, or panel | no_panel.
    #[arg(long)]
    pub variant: Option<String>,
    /// Built-in meeting-room case: los | blocked | blocked_tx_depointed | blocked_both_depointed.
    #[arg(long = "case")]
    pub case: Option<String>,
    /// Groove panel design for the built-in T-corridor.
    #[arg(long, value_enum)]
    pub panel_mode: Option<PanelModeArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = mmwsim::raytrace::DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    #[arg(long, value_enum, default_value_t = GainsArg::Removed)]
    pub gains: GainsArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LinkArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Terminal label; a Tx label pairs with the first Rx and vice versa.
    #[arg(long)]
    pub position: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PanelModeArg {
    IdealTem,
    Table2,
}

impl From<PanelModeArg> for PanelMode {
    fn from(m: PanelModeArg) -> Self {
        match m {
            PanelModeArg::IdealTem => PanelMode::IdealTem,
            PanelModeArg::Table2 => PanelMode::Table2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GainsArg {
    Absolute,
    Removed,
    Isotropic,
}

impl From<GainsArg> for GainView {
    fn from(g: GainsArg) -> Self {
        match g {
            GainsArg::Absolute => GainView::Absolute,
            GainsArg::Removed => GainView::BoresightRemoved,
            GainsArg::Isotropic => GainView::Isotropic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

/// Resolve a scenario source: built-in name first, then file path.
pub fn load_scenario(src: &Source) -> CliResult<Scenario> {
    let variant = match (&src.variant, &src.case) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--variant and --case are mutually exclusive".into(),
            ))
        }
        (v, c) => v.as_deref().or(c.as_deref()),
    };
    if BUILTIN_NAMES.contains(&src.scenario.as_str()) {
        return Ok(scenarios::builtin(
            &src.scenario,
            variant,
            src.panel_mode.map(Into::into),
        )?);
    }
    let path = Path::new(&src.scenario);
    if !path.is_file() {
        return Err(mmwsim::Error::Unknown {
            what: "scenario",
            name: src.scenario.clone(),
        }
        .into());
    }
    if variant.is_some() || src.panel_mode.is_some() {
        return Err(CliError::Usage(
            "--variant, --case and --panel-mode apply to built-in scenarios only".into(),
        ));
    }
    Ok(file::load(path)?)
}

fn find<'a>(list: &'a [Terminal], label: &str) -> Option<&'a Terminal> {
    list.iter().find(|t| t.label == label)
}

/// Pick the (tx, rx) pair named by `--position`.
pub fn select_link<'a>(
    s: &'a Scenario,
    position: Option<&str>,
) -> CliResult<(&'a Terminal, &'a Terminal)> {
    match position {
        None => Ok((&s.tx[0], &s.rx[0])),
        Some(p) => {
            if let Some(t) = find(&s.tx, p) {
                Ok((t, &s.rx[0]))
            } else if let Some(r) = find(&s.rx, p) {
                Ok((&s.tx[0], r))
            } else {
                let known: Vec<String> = s.labels().into_keys().collect();
                Err(CliError::Usage(format!(
                    "unknown position {p:?}; known: {}",
                    known.join(", ")
                )))
            }
        }
    }
}

fn check_order(max_order: usize) -> CliResult<()> {
    if max_order > mmwsim::raytrace::MAX_ORDER_LIMIT {
        return Err(CliError::Usage(format!(
            "--max-order must be at most {}, got {max_order}",
            mmwsim::raytrace::MAX_ORDER_LIMIT
        )));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, csv: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, csv)?,
        None => stdout.write_all(csv.as_bytes())?,
    }
    Ok(())
}

pub fn trace_csv(
    s: &Scenario,
    tx: &Endpoint,
    rx: &Endpoint,
    max_order: usize,
    view: GainView,
) -> CliResult<String> {
    let paths = find_paths(&s.scene, tx.position, rx.position, max_order)?;
    let fc = s.scene.frequency_plan.fc_ghz;
    let mut csv = String::from(
        "path_id,order,length_m,delay_ns,dep_az_deg,arr_az_deg,gain_db,phase_deg,interactions\n",
    );
    for (i, p) in paths.iter().enumerate() {
        let a = path_amplitude(p, &s.scene, tx, rx, fc, view);
        let g = path_gain(p, &s.scene, tx, rx, fc, view);
        let kinds: Vec<&str> = p.interactions.iter().map(|x| x.kind().as_str()).collect();
        let _ = writeln!(
            csv,
            "{i},{},{:.6},{:.6},{:.4},{:.4},{:.4},{:.4},{}",
            p.order(),
            p.length_m,
            p.delay_ns(),
            p.departure_az_deg,
            p.arrival_az_deg,
            20.0 * a.norm().log10(),
            g.arg().to_degrees(),
            if kinds.is_empty() {
                "los".to_string()
            } else {
                kinds.join("+")
            },
        );
    }
    Ok(csv)
}

pub fn coverage_csv(s: &Scenario, max_order: usize, view: GainView) -> CliResult<String> {
    let mut csv = String::from("label,x_m,y_m,pl_db\n");
    let rows: Vec<(&Terminal, f64)> = if s.tx.len() > 1 {
        let txs: Vec<Endpoint> = s.tx.iter().map(Terminal::endpoint).collect();
        let pl = coverage_sweep(&s.scene, &txs, &s.rx[0].endpoint(), max_order, view)?;
        s.tx.iter().zip(pl).collect()
    } else {
        // Reciprocity lets the single transmitter act as the fixed end.
        let rxs: Vec<Endpoint> = s.rx.iter().map(Terminal::endpoint).collect();
        let pl = coverage_sweep(&s.scene, &rxs, &s.tx[0].endpoint(), max_order, view)?;
        s.rx.iter().zip(pl).collect()
    };
    for (t, pl) in rows {
        let _ = writeln!(
            csv,
            "{},{:.4},{:.4},{:.4}",
            t.label, t.position.x, t.position.y, pl
        );
    }
    Ok(csv)
}

pub fn aoa_csv(
    s: &Scenario,
    tx: &Terminal,
    rx: &Terminal,
    step_deg: Option<f64>,
    max_order: usize,
    view: GainView,
) -> CliResult<String> {
    let step = step_deg.or(rx.sweep_step_deg).unwrap_or(6.0);
    let n = 360.0 / step;
    if !(step > 0.0) || (n - n.round()).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "--step-deg must divide 360, got {step}"
        )));
    }
    let sweep = aoa_sweep(
        &s.scene,
        &tx.endpoint(),
        &rx.endpoint(),
        step,
        max_order,
        view,
    )?;
    let mut csv = String::from("rotation_deg,azimuth_deg,power_dbm\n");
    for x in &sweep.samples {
        let _ = writeln!(
            csv,
            "{:.2},{:.2},{:.4}",
            x.rotation_deg, x.azimuth_deg, x.power_dbm
        );
    }
    Ok(csv)
}

fn absolute_pdp(
    s: &Scenario,
    tx: &Endpoint,
    rx: &Endpoint,
    max_order: usize,
    view: GainView,
    window: Window,
    pad: usize,
) -> CliResult<Pdp> {
    let resp = channel_response(&s.scene, tx, rx, max_order, view)?;
    Ok(pdp_padded(&resp, window, Normalization::Absolute, pad))
}

/// PDP of the selected link. For the built-in meeting room, relative
/// normalization is taken over all four cases so levels compare across them.
#[allow(clippy::too_many_arguments)]
pub fn pdp_profile(
    s: &Scenario,
    src: Option<&Source>,
    position: Option<&str>,
    max_order: usize,
    view: GainView,
    window: Window,
    norm: Normalization,
    pad: usize,
) -> CliResult<Pdp> {
    if pad == 0 {
        return Err(CliError::Usage("--pad must be at least 1".into()));
    }
    let (tx, rx) = select_link(s, position)?;
    let mut own = absolute_pdp(
        s,
        &tx.endpoint(),
        &rx.endpoint(),
        max_order,
        view,
        window,
        pad,
    )?;
    if norm == Normalization::Absolute {
        return Ok(own);
    }
    let mut set = Vec::new();
    if let Some(src) = src.filter(|x| x.scenario == "meeting_room") {
        for case in MeetingCase::ALL {
            let other = scenarios::builtin(
                "meeting_room",
                Some(case.as_str()),
                src.panel_mode.map(Into::into),
            )?;
            if other.name == s.name {
                continue;
            }
            let (t, r) = select_link(&other, position)?;
            set.push(absolute_pdp(
                &other,
                &t.endpoint(),
                &r.endpoint(),
                max_order,
                view,
                window,
                pad,
            )?);
        }
    }
    set.push(own);
    normalize_relative(&mut set);
    own = set.pop().expect("set holds the selected profile");
    Ok(own)
}

pub fn pdp_csv(p: &Pdp) -> String {
    let mut csv = String::from("delay_ns,power_db\n");
    for (d, db) in p.delays_ns.iter().zip(&p.power_db) {
        let _ = writeln!(csv, "{d:.4},{db:.4}");
    }
    csv
}

pub fn design_csv(f_ghz: f64, n_cells: usize, mode: PanelMode) -> CliResult<String> {
    let panel = design_panel(f_ghz, n_cells, mode)?;
    let mut csv = String::from("index,pitch_mm,width_mm,depth_mm,phase_deg\n");
    for (i, c) in panel.cells.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{i},{:.4},{:.4},{:.4},{:.3}",
            c.pitch_mm,
            c.width_mm,
            c.depth_mm,
            cell_phase(c, f_ghz)
        );
    }
    Ok(csv)
}

pub fn pattern_csv(
    f_ghz: f64,
    n_cells: usize,
    mode: PanelMode,
    incidence_deg: f64,
    step_deg: f64,
    ef: ElementFactor,
) -> CliResult<String> {
    if !(-90.0 < incidence_deg && incidence_deg < 90.0) {
        return Err(CliError::Usage(format!(
            "--incidence-deg must lie in (-90, 90), got {incidence_deg}"
        )));
    }
    if !(step_deg > 0.0 && step_deg <= 10.0) {
        return Err(CliError::Usage(format!(
            "--step-deg must lie in (0, 10], got {step_deg}"
        )));
    }
    let panel = design_panel(f_ghz, n_cells, mode)?;
    // Incoming direction in the panel frame: toward the surface (y < 0).
    let th = incidence_deg.to_radians();
    let inc = Point2::new(th.sin(), -th.cos());
    let pat = scatter_pattern(&panel, inc, f_ghz, step_deg, ef);
    let mut csv = String::from("angle_deg,amplitude_db\n");
    for (a, db) in pat.angles_deg.iter().zip(pat.magnitude_db()) {
        let _ = writeln!(csv, "{a:.2},{:.4}", db.max(-300.0));
    }
    Ok(csv)
}

/// Execute one parsed command, writing CSV to `--out` or `stdout` and a short
/// summary to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Trace(l) => {
            check_order(l.sweep.max_order)?;
            let s = load_scenario(&l.sweep.source)?;
            let (tx, rx) = select_link(&s, l.position.as_deref())?;
            let csv = trace_csv(
                &s,
                &tx.endpoint(),
                &rx.endpoint(),
                l.sweep.max_order,
                l.sweep.gains.into(),
            )?;
            writeln!(
                stderr,
                "{}: {} -> {}: {} path(s)",
                s.name,
                tx.label,
                rx.label,
                csv.lines().count() - 1
            )?;
            emit(&l.sweep.out, &csv, stdout)
        }
        Command::Coverage(a) => {
            check_order(a.max_order)?;
            let s = load_scenario(&a.source)?;
            let csv = coverage_csv(&s, a.max_order, a.gains.into())?;
            emit(&a.out, &csv, stdout)
        }
        Command::Aoa { link: l, step_deg } => {
            check_order(l.sweep.max_order)?;
            let s = load_scenario(&l.sweep.source)?;
            let (tx, rx) = select_link(&s, l.position.as_deref())?;
            let csv = aoa_csv(
                &s,
                tx,
                rx,
                step_deg,
                l.sweep.max_order,
                l.sweep.gains.into(),
            )?;
            emit(&l.sweep.out, &csv, stdout)
        }
        Command::Pdp {
            link: l,
            window,
            normalization,
            pad,
        } => {
            check_order(l.sweep.max_order)?;
            let s = load_scenario(&l.sweep.source)?;
            let window = match window {
                WindowArg::Rectangular => Window::Rectangular,
                WindowArg::Hann => Window::Hann,
            };
            let norm = match normalization {
                NormArg::Absolute => Normalization::Absolute,
                NormArg::Relative => Normalization::RelativeToGlobalMax,
            };
            let p = pdp_profile(
                &s,
                Some(&l.sweep.source),
                l.position.as_deref(),
                l.sweep.max_order,
                l.sweep.gains.into(),
                window,
                norm,
                pad,
            )?;
            let (d, db) = p.peak();
            writeln!(stderr, "{}: peak {db:.2} dB at {d:.3} ns", s.name)?;
            emit(&l.sweep.out, &pdp_csv(&p), stdout)
        }
        Command::DesignPanel {
            frequency_ghz,
            n_cells,
            panel_mode,
            pattern,
            incidence_deg,
            step_deg,
            element_factor,
            out,
        } => {
            let ef = match element_factor {
                OnOff::On => ElementFactor::On,
                OnOff::Off => ElementFactor::Off,
            };
            let csv = if pattern {
                pattern_csv(
                    frequency_ghz,
                    n_cells,
                    panel_mode.into(),
                    incidence_deg,
                    step_deg,
                    ef,
                )?
            } else {
                design_csv(frequency_ghz, n_cells, panel_mode.into())?
            };
            emit(&out, &csv, stdout)
        }
        Command::Validate(src) => {
            let s = load_scenario(&src)?;
            writeln!(
                stdout,
                "ok: {} ({} segments, {} blockers, {} tx, {} rx)",
                s.name,
                s.scene.segments.len(),
                s.scene.blockers.len(),
                s.tx.len(),
                s.rx.len()
            )?;
            Ok(())
        }
        Command::Export { source, out } => {
            let s = load_scenario(&source)?;
            emit(&out, &file::to_toml_string(&s)?, stdout)
        }
    }
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.report());
            e.exit_code()
        }
    }
}
