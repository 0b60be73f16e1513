//! Command line front end: one JSON config in, deterministic CSV/JSON/SVG
//! files out.
//!
//! ```text
//! pt-ssh-lab <spectrum|phase-diagram|recovery|profile|fit-decay> --config <path> [--out <dir>] [--svg] [--threads K]
//! ```
//!
//! Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 I/O error.

pub mod config;
pub mod output;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    classify_modes_with, decay_fit, full_spectrum, phase_diagram, recovery_map, spectrum_values, AnalysisError, ModeClass, ModeRecord,
    PhaseLabel, Tolerances,
};
use crate::lattice::ModelParams;

pub use config::RunConfig;
use output::{Cell, OutputDir, Table};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            // parameters produced by a sweep can be invalid even if the base model is not
            AnalysisError::Lattice(_) => CliError::Config(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pt-ssh-lab",
    version,
    about = "Spectra, phase diagrams and edge-mode scans of PT-symmetric SSH chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: `out_dir` from the config, else `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write SVG figures.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalues and mode metrics, optionally over a one-parameter sweep.
    Spectrum,
    /// PT phase labels over a (θ, γ) grid.
    PhaseDiagram,
    /// Edge-pair splittings over an (N, γ) grid.
    Recovery,
    /// Density profiles of selected modes.
    Profile,
    /// Exponential fit of the edge-pair splitting versus defect position.
    FitDecay,
}

/// Runs a parsed command line and returns the
/// list of files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("missing required option `--config <path>`".into()))?;
    let cfg = RunConfig::load(path)?;
    let out_root = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start thread pool: {e}")))?;
    pool.install(|| {
        let mut out = OutputDir::create(&out_root)?;
        execute(cli.command, &cfg, cli.svg, &mut out)?;
        Ok(out.written().to_vec())
    })
}

/// Runs one command against a parsed config.
pub fn execute(command: Command, cfg: &RunConfig, svg: bool, out: &mut OutputDir) -> Result<(), CliError> {
    match command {
        Command::Spectrum => cmd_spectrum(cfg, svg, out),
        Command::PhaseDiagram => cmd_phase_diagram(cfg, svg, out),
        Command::Recovery => cmd_recovery(cfg, svg, out),
        Command::Profile => cmd_profile(cfg, svg, out),
        Command::FitDecay => cmd_fit_decay(cfg, svg, out),
    }
}

const SPECTRUM_HEADER: [&str; 7] = ["index", "re_e", "im_e", "ipr", "peak_site", "boundary_weight", "class"];

/// Classified modes, or unclassified metrics tagged `gapless` when the
/// reference gap closes.
fn spectrum_rows(params: &ModelParams, tol: &Tolerances) -> Result<Vec<(ModeRecord, &'static str)>, CliError> {
    let spec = full_spectrum(params)?;
    match classify_modes_with(&spec, params, tol) {
        Ok(modes) => Ok(modes.into_iter().map(|m| (m.clone(), m.class.as_str())).collect()),
        Err(AnalysisError::Gapless { .. }) => Ok((0..spec.len())
            .map(|i| {
                (
                    crate::analysis::mode_metrics(i, spec.eigenvalues[i], &spec.vector(i), params),
                    "gapless",
                )
            })
            .collect()),
        Err(e) => Err(e.into()),
    }
}

fn mode_cells(m: &ModeRecord, class: &str) -> Vec<Cell> {
    vec![
        m.index.into(),
        m.energy.re.into(),
        m.energy.im.into(),
        m.ipr.into(),
        m.peak_site.into(),
        m.boundary_weight.into(),
        class.into(),
    ]
}

fn class_color(class: &str) -> &'static str {
    match class {
        "edge" => "#d62728",
        "bound" => "#ff7f0e",
        "unclassified" => "#9467bd",
        "gapless" => svg::MISSING_COLOR,
        _ => "#1f77b4",
    }
}

const CLASS_ORDER: [&str; 5] = ["bulk", "edge", "bound", "unclassified", "gapless"];

/// `spectrum.csv`; with a sweep the sweep value is prepended as a column
/// named after the swept parameter and the blocks are stacked in sweep order.
fn cmd_spectrum(cfg: &RunConfig, svg_out: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let tol = cfg.tolerances;
    match &cfg.sweep {
        None => {
            let rows = spectrum_rows(&cfg.model, &tol)?;
            let mut table = Table::new(&SPECTRUM_HEADER);
            for (m, class) in &rows {
                table.push(mode_cells(m, class));
            }
            out.write("spectrum.csv", table.as_str())?;
            if svg_out {
                let series = CLASS_ORDER
                    .iter()
                    .map(|c| {
                        let pts = rows
                            .iter()
                            .filter(|(_, k)| k == c)
                            .map(|(m, _)| (m.energy.re, m.energy.im))
                            .collect();
                        (c.to_string(), class_color(c).to_string(), pts)
                    })
                    .collect::<Vec<_>>();
                out.write("spectrum.svg", &svg::scatter("Spectrum", "Re E", "Im E", &series))?;
            }
        }
        Some(sweep) => {
            let values = sweep.values()?;
            let blocks: Vec<Result<Vec<(ModeRecord, &'static str)>, CliError>> = values
                .par_iter()
                .map(|&v| {
                    let p = sweep.param.apply(&cfg.model, v);
                    p.validate()
                        .map_err(|e| CliError::Config(format!("{} = {v}: {e}", sweep.param.name())))?;
                    spectrum_rows(&p, &tol)
                })
                .collect();
            let mut header = vec![sweep.param.name()];
            header.extend(SPECTRUM_HEADER);
            let mut table = Table::new(&header);
            let mut series: Vec<svg::Series> = CLASS_ORDER
                .iter()
                .map(|c| (c.to_string(), class_color(c).to_string(), Vec::new()))
                .collect();
            for (v, block) in values.iter().zip(blocks) {
                for (m, class) in block? {
                    let mut row = vec![Cell::Float(*v)];
                    row.extend(mode_cells(&m, class));
                    table.push(row);
                    if let Some(s) = series.iter_mut().find(|s| s.0 == class) {
                        s.2.push((*v, m.energy.re));
                    }
                }
            }
            out.write("spectrum.csv", table.as_str())?;
            if svg_out {
                out.write("spectrum.svg", &svg::scatter("Spectrum", sweep.param.name(), "Re E", &series))?;
            }
        }
    }
    Ok(())
}

fn count_complex(params: &ModelParams) -> Result<usize, CliError> {
    let tol = Tolerances::default();
    Ok(spectrum_values(params)?.iter().filter(|e| e.im.abs() > tol.imag).count())
}

/// `phase_diagram.csv` over the θ × γ grid, θ outer; cells where the
/// reference gap closes are labelled `gapless`.
fn cmd_phase_diagram(cfg: &RunConfig, svg_out: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let thetas = cfg.require_range("theta")?.values();
    let gammas = cfg.require_range("gamma")?.values();
    let results = phase_diagram(&cfg.model, &thetas, &gammas);
    let mut table = Table::new(&["theta", "gamma", "label", "n_complex"]);
    let mut labels: Vec<Option<PhaseLabel>> = Vec::with_capacity(results.len());
    for (k, r) in results.into_iter().enumerate() {
        let (theta, gamma) = (thetas[k / gammas.len()], gammas[k % gammas.len()]);
        let (label, n_complex) = match r {
            Ok(p) => (Some(p.label), p.n_complex),
            Err(AnalysisError::Gapless { .. }) => (None, count_complex(&cfg.model.with_theta(theta).with_gamma(gamma))?),
            Err(e) => return Err(e.into()),
        };
        table.push(vec![
            theta.into(),
            gamma.into(),
            label.map_or("gapless", PhaseLabel::as_str).into(),
            n_complex.into(),
        ]);
        labels.push(label);
    }
    out.write("phase_diagram.csv", table.as_str())?;
    if svg_out {
        let mut legend: Vec<(String, String)> = PhaseLabel::ALL
            .iter()
            .zip(svg::PHASE_COLORS)
            .map(|(l, c)| (l.as_str().to_string(), c.to_string()))
            .collect();
        legend.push(("gapless".into(), svg::MISSING_COLOR.into()));
        let fig = svg::heat_map(
            "PT phase diagram",
            "theta",
            "gamma",
            &thetas,
            &gammas,
            |ix, iy| match labels[ix * gammas.len() + iy] {
                Some(l) => svg::PHASE_COLORS[PhaseLabel::ALL.iter().position(|x| *x == l).unwrap_or(0)].to_string(),
                None => svg::MISSING_COLOR.to_string(),
            },
            &legend,
        );
        out.write("phase_diagram.svg", &fig)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct RecoverySummary {
    cells: usize,
    warnings: usize,
    invalid_cells: Vec<(usize, f64)>,
}

/// `recovery.csv` over the N × γ grid (N outer) plus `recovery_summary.json`
/// counting cells whose edge pair could not be identified.
fn cmd_recovery(cfg: &RunConfig, svg_out: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let ns = cfg.require_range("n_cells")?.integer_values("n_cells")?;
    let gammas = cfg.require_range("gamma")?.values();
    for &n in &ns {
        ModelParams { n_cells: n, ..cfg.model }
            .validate()
            .map_err(|e| CliError::Config(format!("n_cells = {n}: {e}")))?;
    }
    let cells = recovery_map(&cfg.model, &ns, &gammas);
    let mut table = Table::new(&["n_cells", "gamma", "re_split", "im_split"]);
    for c in &cells {
        table.push(vec![c.n_cells.into(), c.gamma.into(), c.re_split.into(), c.im_split.into()]);
    }
    let invalid: Vec<(usize, f64)> = cells.iter().filter(|c| !c.valid).map(|c| (c.n_cells, c.gamma)).collect();
    let summary = RecoverySummary {
        cells: cells.len(),
        warnings: invalid.len(),
        invalid_cells: invalid,
    };
    out.write("recovery.csv", table.as_str())?;
    out.write("recovery_summary.json", &to_json(&summary)?)?;
    if svg_out {
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        for (name, pick) in [("re", 0usize), ("im", 1usize)] {
            let logs: Vec<f64> = cells
                .iter()
                .map(|c| if pick == 0 { c.re_split } else { c.im_split })
                .map(|v| if v > 0.0 { v.log10() } else { f64::NAN })
                .collect();
            let finite = logs.iter().copied().filter(|v| v.is_finite());
            let lo = finite.clone().fold(f64::INFINITY, f64::min);
            let hi = finite.fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            let legend = vec![
                (format!("log10 = {}", fmt_svg(lo)), svg::ramp(0.0)),
                (format!("log10 = {}", fmt_svg(hi)), svg::ramp(1.0)),
                ("zero / invalid".to_string(), svg::MISSING_COLOR.to_string()),
            ];
            let fig = svg::heat_map(
                &format!("|{}(E_A - E_B)|", if pick == 0 { "Re" } else { "Im" }),
                "N",
                "gamma",
                &xs,
                &gammas,
                |ix, iy| svg::ramp((logs[ix * gammas.len() + iy] - lo) / span),
                &legend,
            );
            out.write(&format!("recovery_{name}.svg"), &fig)?;
        }
    }
    Ok(())
}

fn fmt_svg(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.2}")
    } else {
        "n/a".into()
    }
}

/// `profile_mode<i>.csv` for the selected mode index or every mode of the
/// selected class.
fn cmd_profile(cfg: &RunConfig, svg_out: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let selector = cfg.mode.ok_or_else(|| CliError::Config("missing field `mode`".into()))?;
    let params = &cfg.model;
    let spec = full_spectrum(params)?;
    let modes: Vec<ModeRecord> = match selector.class {
        Some(_) => classify_modes_with(&spec, params, &cfg.tolerances)?,
        None => (0..spec.len())
            .map(|i| crate::analysis::mode_metrics(i, spec.eigenvalues[i], &spec.vector(i), params))
            .collect(),
    };
    let selected: Vec<&ModeRecord> = match (selector.index, selector.class) {
        (Some(i), _) if i >= modes.len() => {
            return Err(CliError::Config(format!(
                "mode index {i} out of range (spectrum has {} modes)",
                modes.len()
            )));
        }
        (Some(i), Some(c)) if modes[i].class != c => {
            return Err(CliError::Config(format!(
                "mode {i} is {}, not {}",
                modes[i].class.as_str(),
                c.as_str()
            )));
        }
        (Some(i), _) => vec![&modes[i]],
        (None, Some(c)) => modes.iter().filter(|m| m.class == c).collect(),
        (None, None) => return Err(CliError::Config("`mode` needs `index` or `class`".into())),
    };
    if selected.is_empty() {
        let class = selector.class.map_or("", ModeClass::as_str);
        return Err(CliError::Solver(format!("no {class} modes found")));
    }
    for m in selected {
        let mut table = Table::new(&["site", "n_density"]);
        for (s, d) in m.profile.iter().enumerate() {
            table.push(vec![(s + 1).into(), (*d).into()]);
        }
        out.write(&format!("profile_mode{}.csv", m.index), table.as_str())?;
        if svg_out {
            let pts: Vec<(f64, f64)> = m.profile.iter().enumerate().map(|(s, d)| ((s + 1) as f64, *d)).collect();
            let title = format!("Mode {}: E = {} {:+}i", m.index, fmt_svg(m.energy.re), fmt_svg(m.energy.im));
            let fig = svg::line_plot(&title, "site", "density", &[(m.class.as_str().to_string(), "#1f77b4".into(), pts)]);
            out.write(&format!("profile_mode{}.svg", m.index), &fig)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct DecayReport {
    amplitude: f64,
    decay_length: f64,
    r_squared: f64,
    points: Vec<(f64, f64)>,
}

/// `decay_fit.json` with the exponential fit of the edge-pair imaginary
/// splitting versus defect cell.
fn cmd_fit_decay(cfg: &RunConfig, svg_out: bool, out: &mut OutputDir) -> Result<(), CliError> {
    let ns = cfg
        .n_values
        .clone()
        .ok_or_else(|| CliError::Config("missing field `n_values`".into()))?;
    for &n in &ns {
        ModelParams { n, ..cfg.model }
            .validate()
            .map_err(|e| CliError::Config(format!("n = {n}: {e}")))?;
    }
    let fit = decay_fit(&cfg.model, &ns)?;
    let report = DecayReport {
        amplitude: fit.amplitude,
        decay_length: fit.decay_length,
        r_squared: fit.r_squared,
        points: fit.points.clone(),
    };
    out.write("decay_fit.json", &to_json(&report)?)?;
    if svg_out {
        let data: Vec<(f64, f64)> = fit.points.iter().map(|(x, y)| (*x, y.log10())).collect();
        let model: Vec<(f64, f64)> = fit
            .points
            .iter()
            .map(|(x, _)| (*x, (fit.amplitude * (-x / fit.decay_length).exp()).log10()))
            .collect();
        let fig = svg::line_plot(
            "Edge-pair splitting versus defect cell",
            "n",
            "log10 |Im(E_A - E_B)|",
            &[("data".into(), "#1f77b4".into(), data), ("fit".into(), "#d62728".into(), model)],
        );
        out.write("decay_fit.svg", &fig)?;
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
        assert_eq!(CliError::Solver(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
    }

    #[test]
    fn parses_command_line() {
        let cli = Cli::try_parse_from(["pt-ssh-lab", "phase-diagram", "--config", "c.json", "--svg", "--threads", "2"]).unwrap();
        assert_eq!(cli.command, Command::PhaseDiagram);
        assert!(cli.svg);
        assert_eq!(cli.threads, Some(2));
        assert!(Cli::try_parse_from(["pt-ssh-lab", "nonsense"]).is_err());
    }

    #[test]
    fn one_by_one_phase_grid() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::parse(
            r#"{"model":{"variant":"ssh_c","n_cells":20,"delta":0.5,"theta":0.3,"gamma":0.2},
                "theta":{"from":0.3,"to":0.3,"steps":1},"gamma":{"from":0.2,"to":0.2,"steps":1}}"#,
        )
        .unwrap();
        let mut out = OutputDir::create(dir.path()).unwrap();
        execute(Command::PhaseDiagram, &cfg, true, &mut out).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("phase_diagram.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "theta,gamma,label,n_complex");
        assert_eq!(lines.len(), 2);
        let svg = std::fs::read_to_string(dir.path().join("phase_diagram.svg")).unwrap();
        assert!(svg.contains("<rect"));
    }
}
