//! `cho` command-line front end: one JSON scenario per invocation, CSV
//! artifacts plus a `manifest.json` in the output directory.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bohmian::{
    bohmian_energies, evolve_ensemble, integrate_with_model, marginal_distances, EnsembleSpec, GuidanceModel,
    MarginalReferences, TrajectorySample,
};
use crate::classical::{classical_energies, classical_velocities, envelope_peaks, integrate_hamilton, ClassicalScenario};
use crate::classical::classical_positions;
use crate::error::{Error, Result};
use crate::model::{DerivedFrequencies, OscillatorParams};
use crate::observables::{
    energy_expectations_closed_form, energy_expectations_quadrature, marginal, MarginalIntegrator, MarginalMethod,
    NormalModeQuadrature, Particle,
};
use crate::ode::SolverStats;
use crate::spectral::{project_initial_state, SpectralState, Wavefunction};
use crate::validation::{run_all, ValidationOptions};

use config::{
    reference_scenarios, ClassicalSettings, EnergySettings, EnsembleSettings, GuidanceSetting, MarginalSettings,
    MarginalSourceSetting, RunSettings, Scenario, TrajectorySettings, ValidateSettings,
};
use output::{
    error_kind, exit_code, write_artifact, Artifact, Cell, CsvTable, ErrorReport, Grid2, NormDiagnostics, RunManifest,
    EXIT_CONFIG, EXIT_OK,
};

/// Overrides the default output root `./output`.
pub const OUTPUT_ROOT_ENV: &str = "CHO_OUTPUT_ROOT";

#[derive(Debug, Parser)]
#[command(name = "cho", version, about = "Coupled quantum oscillators: classical, spectral and Bohmian runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form classical motion and energy exchange.
    Classical(RunArgs),
    /// Position marginals P(x1, t) and P(x2, t).
    Marginals(RunArgs),
    /// Energy expectation values over time.
    Energies(RunArgs),
    /// One Bohmian trajectory.
    Trajectory(RunArgs),
    /// Equilibrium ensemble of Bohmian trajectories.
    Ensemble(RunArgs),
    /// The oracle suite.
    Validate(RunArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Classical(a) => ("classical", a),
            Command::Marginals(a) => ("marginals", a),
            Command::Energies(a) => ("energies", a),
            Command::Trajectory(a) => ("trajectory", a),
            Command::Ensemble(a) => ("ensemble", a),
            Command::Validate(a) => ("validate", a),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario JSON file.
    #[arg(long, required_unless_present = "paper_figures")]
    pub config: Option<PathBuf>,
    /// Output directory (parent directory with --paper-figures).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel work.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Run the built-in reference scenarios for this mode.
    #[arg(long, conflicts_with = "config")]
    pub paper_figures: bool,
}

/// Result of one scenario run.
#[derive(Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub error: Option<Error>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(EXIT_OK, exit_code)
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let report = ErrorReport {
                kind: "usage",
                message: e.to_string().trim().to_string(),
                exit_code: EXIT_CONFIG,
            };
            eprintln!("{}", report.to_json());
            return EXIT_CONFIG;
        }
    };
    let (mode, args) = cli.command.parts();
    match execute(mode, args) {
        Ok(outcomes) => outcomes.iter().map(RunOutcome::exit_code).max().unwrap_or(EXIT_OK),
        Err(e) => {
            eprintln!("{}", ErrorReport::from_error(&e).to_json());
            exit_code(&e)
        }
    }
}

fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV).map_or_else(|| PathBuf::from("output"), PathBuf::from)
}

fn execute(mode: &str, args: &RunArgs) -> Result<Vec<RunOutcome>> {
    let workers = match args.workers {
        Some(0) => return Err(Error::Config("--workers must be at least 1".into())),
        Some(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("worker pool already configured: {e}");
            }
            n
        }
        None => rayon::current_num_threads(),
    };
    let scenarios = if args.paper_figures {
        reference_scenarios(mode)
    } else {
        let path = args.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
        let s = Scenario::load(path)?;
        if s.run.mode_name() != mode {
            return Err(Error::Config(format!(
                "scenario mode '{}' does not match subcommand '{mode}'",
                s.run.mode_name()
            )));
        }
        vec![s]
    };
    let mut outcomes = Vec::new();
    for s in scenarios {
        let dir = match (&args.out, args.paper_figures) {
            (Some(o), false) => o.clone(),
            (Some(o), true) => o.join(&s.name),
            (None, _) => output_root().join(&s.name),
        };
        let outcome = run_scenario(&s, &dir, workers)?;
        match &outcome.error {
            None => println!("{}: {}", s.name, dir.join("manifest.json").display()),
            Some(e) => eprintln!("{}", ErrorReport::from_error(e).to_json()),
        }
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

/// Collects artifacts and summary values while a mode runs.
struct RunContext {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
    integrator: Option<SolverStats>,
    norm: Option<NormDiagnostics>,
    seed: Option<u64>,
    summary: Map<String, Value>,
}

impl RunContext {
    fn emit(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        self.emit_bytes(name, &table.to_bytes()?)
    }

    fn emit_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        self.artifacts.push(write_artifact(&self.dir.join(name), bytes)?);
        Ok(())
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

/// Runs one validated scenario into `dir`.
///
/// Errors before any artifact exists (bad parameters, unwritable directory)
/// are returned directly; failures during the computation are reported in
/// the outcome, with the manifest flagging partial artifacts.
pub fn run_scenario(scenario: &Scenario, dir: &Path, workers: usize) -> Result<RunOutcome> {
    scenario.validate()?;
    let params = scenario.params.resolve()?;
    let freqs = params.frequencies();
    std::fs::create_dir_all(dir)?;
    let start = Instant::now();
    let mut ctx = RunContext {
        dir: dir.to_path_buf(),
        artifacts: Vec::new(),
        integrator: None,
        norm: None,
        seed: None,
        summary: Map::new(),
    };
    ctx.emit_bytes("scenario.json", scenario.to_json().as_bytes())?;
    params.warn_if_not_perturbative(scenario.run.mode_name());

    let spectral = project_initial_state(&params, scenario.truncation);
    let tail_bound = spectral.as_ref().ok().map(|s| s.tail_bound);
    if let Ok(s) = &spectral {
        ctx.norm = Some(NormDiagnostics {
            coefficient_norm_sq: s.norm_sq(),
            source_norm: s.source_norm,
            sampled_min: None,
            sampled_max: None,
        });
    }
    let result = match &scenario.run {
        RunSettings::Classical(s) => run_classical(&mut ctx, &params, &freqs, s),
        RunSettings::Marginals(s) => run_marginals(&mut ctx, &params, &freqs, s, spectral),
        RunSettings::Energies(s) => run_energies(&mut ctx, &params, &freqs, s, spectral),
        RunSettings::Trajectory(s) => run_trajectory(&mut ctx, &params, &freqs, s, spectral),
        RunSettings::Ensemble(s) => run_ensemble(&mut ctx, &params, &freqs, s, spectral),
        RunSettings::Validate(s) => run_validate(&mut ctx, s),
    };
    let error = result.err();
    if let Some(e) = &error {
        log::error!("{} failed ({}): {e}", scenario.name, error_kind(e));
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        scenario: scenario.clone(),
        frequencies: freqs,
        truncation: scenario.truncation,
        tail_bound,
        norm: ctx.norm,
        integrator: ctx.integrator,
        seed: ctx.seed,
        workers,
        partial: error.is_some(),
        error: error.as_ref().map(ErrorReport::from_error),
        artifacts: ctx.artifacts,
        wall_clock_s: start.elapsed().as_secs_f64(),
        summary: ctx.summary,
    };
    manifest.write(dir)?;
    Ok(RunOutcome {
        dir: dir.to_path_buf(),
        manifest,
        error,
    })
}

/// `n` evenly spaced points on `[a, b]`; just `a` when `n == 1`.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

fn beat_multiple(explicit: Option<f64>, factor: f64, freqs: &DerivedFrequencies) -> f64 {
    explicit.unwrap_or(factor * PI / freqs.delta_omega)
}

fn run_classical(ctx: &mut RunContext, params: &OscillatorParams, freqs: &DerivedFrequencies, s: &ClassicalSettings) -> Result<()> {
    let init = s
        .initial
        .unwrap_or_else(|| ClassicalScenario::canonical(if params.d != 0.0 { params.d } else { 1.0 }));
    let t_end = beat_multiple(s.t_end, 2.0, freqs);
    let ts = linspace(0.0, t_end, s.samples);
    let numeric = if s.verify {
        let sol = integrate_hamilton(&init, params, (0.0, t_end), &s.tolerances.solver_options())?;
        ctx.integrator = Some(sol.stats);
        Some(sol)
    } else {
        None
    };
    let mut header = vec!["t", "x1", "x2", "v1", "v2", "e1", "e2", "e_interaction"];
    if numeric.is_some() {
        header.extend(["x1_numeric", "x2_numeric"]);
    }
    let mut table = CsvTable::new(header);
    let mut deviation = 0.0f64;
    let mut e2s = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (x1, x2) = classical_positions(t, &init, params);
        let (v1, v2) = classical_velocities(t, &init, params);
        let e = classical_energies(t, &init, params);
        e2s.push(e.exact.1);
        let mut row = vec![t, x1, x2, v1, v2, e.exact.0, e.exact.1, e.interaction];
        if let Some(sol) = &numeric {
            let y = sol.eval(t).ok_or_else(|| Error::Config(format!("no dense output at t = {t}")))?;
            deviation = deviation.max((y[0] - x1).abs()).max((y[1] - x2).abs());
            row.extend([y[0], y[1]]);
        }
        table.push_nums(&row);
    }
    ctx.emit("classical.csv", &table)?;
    if numeric.is_some() {
        ctx.note("max_deviation_numeric", deviation);
    }
    if freqs.delta_omega > 0.0 {
        let peaks = envelope_peaks(&ts, &e2s, PI / freqs.omega_bar, 0.25 * PI / freqs.delta_omega);
        ctx.note("e2_envelope_peaks", peaks.clone());
        if peaks.len() >= 2 {
            ctx.note("e2_envelope_period", (peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64);
        }
    }
    Ok(())
}

fn sampled_norms(ctx: &mut RunContext, state: &SpectralState, params: &OscillatorParams, ts: &[f64]) -> Result<()> {
    let quad = NormalModeQuadrature::with_default_order(params)?;
    let norms: Vec<f64> = ts.iter().map(|&t| quad.norm(state, t)).collect();
    if let Some(n) = ctx.norm.as_mut() {
        n.sampled_min = norms.iter().copied().reduce(f64::min);
        n.sampled_max = norms.iter().copied().reduce(f64::max);
    }
    Ok(())
}

fn run_marginals(
    ctx: &mut RunContext,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    s: &MarginalSettings,
    spectral: Result<SpectralState>,
) -> Result<()> {
    let t_end = beat_multiple(s.t_end, 1.0, freqs);
    let ts = linspace(0.0, t_end, s.t_samples);
    let half = s.x_half_width.unwrap_or(5.0 * params.length_scale_sq().sqrt());
    let xs = linspace(-half, half, s.x_samples);
    let want_closed = s.source != MarginalSourceSetting::Quadrature;
    let want_quad = s.source != MarginalSourceSetting::ClosedForm;
    let (state, integrator) = if want_quad {
        let state = spectral?;
        sampled_norms(ctx, &state, params, &ts)?;
        (Some(state), Some(MarginalIntegrator::new(params, s.quadrature_order, true)?))
    } else {
        (None, None)
    };
    let mut methods: Vec<(&str, MarginalMethod<'_>)> = Vec::new();
    if want_closed {
        methods.push(("closed_form", MarginalMethod::ClosedForm(s.form)));
    }
    if let (Some(st), Some(integ)) = (&state, &integrator) {
        methods.push(("quadrature", MarginalMethod::Quadrature(integ, st as &dyn Wavefunction)));
    }

    let mut failure = None;
    let mut surfaces = Vec::new();
    for (which, file) in [(Particle::One, "marginal_x1.csv"), (Particle::Two, "marginal_x2.csv")] {
        let mut values = vec![Vec::with_capacity(ts.len() * xs.len()); methods.len()];
        let mut done = 0;
        'times: for &t in &ts {
            if failure.is_some() {
                break;
            }
            let mut rows = vec![Vec::with_capacity(xs.len()); methods.len()];
            for (k, (_, m)) in methods.iter().enumerate() {
                for &x in &xs {
                    match marginal(which, x, t, params, *m) {
                        Ok(v) => rows[k].push(v),
                        Err(e) => {
                            failure = Some(e);
                            break 'times;
                        }
                    }
                }
            }
            for (v, r) in values.iter_mut().zip(rows) {
                v.extend(r);
            }
            done += 1;
        }
        let grid = Grid2 {
            axis_names: ["t".into(), "x".into()],
            axes: [ts[..done].to_vec(), xs.clone()],
            value_names: methods.iter().map(|(n, _)| n.to_string()).collect(),
            values,
        };
        ctx.emit(file, &output::grid_table(&grid)?)?;
        surfaces.push(grid);
    }
    if let Some(e) = failure {
        return Err(e);
    }
    // role swap: P(x1, t_end) against P(x2, 0)
    let nx = xs.len();
    let last = (ts.len() - 1) * nx;
    let p1_end = &surfaces[0].values[0][last..last + nx];
    let p2_start = &surfaces[1].values[0][..nx];
    let peak = p2_start.iter().copied().fold(0.0, f64::max);
    let sup = p1_end.iter().zip(p2_start).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ctx.note("swap_residual_over_peak", if peak > 0.0 { sup / peak } else { f64::NAN });
    let dx = if nx > 1 { xs[1] - xs[0] } else { 0.0 };
    let integral = |v: &[f64]| v.windows(2).map(|w| 0.5 * dx * (w[0] + w[1])).sum::<f64>();
    let norms: Vec<f64> = surfaces
        .iter()
        .flat_map(|g| g.values[0].chunks(nx).map(integral).collect::<Vec<_>>())
        .collect();
    ctx.note("marginal_integral_min", norms.iter().copied().fold(f64::INFINITY, f64::min));
    ctx.note("marginal_integral_max", norms.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(())
}

fn run_energies(
    ctx: &mut RunContext,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    s: &EnergySettings,
    spectral: Result<SpectralState>,
) -> Result<()> {
    let state = spectral?;
    let t_end = beat_multiple(s.t_end, 2.0, freqs);
    let ts = linspace(0.0, t_end, s.samples);
    let quad = NormalModeQuadrature::new(params, s.quadrature_order)?;
    let mut table = CsvTable::new([
        "t",
        "e1_closed_form",
        "e2_closed_form",
        "e_interaction_closed_form",
        "e1",
        "e2",
        "e_interaction",
        "e_total",
        "norm",
    ]);
    let mut norms = Vec::with_capacity(ts.len());
    let mut totals = Vec::with_capacity(ts.len());
    for &t in &ts {
        let c = energy_expectations_closed_form(t, params, freqs);
        let q = energy_expectations_quadrature(&state, t, &quad);
        let norm = quad.norm(&state, t);
        norms.push(norm);
        totals.push(q.e_total);
        table.push_nums(&[t, c.e1, c.e2, c.e_interaction, q.e1, q.e2, q.e_interaction, q.e_total, norm]);
    }
    ctx.emit("energies.csv", &table)?;
    if let Some(n) = ctx.norm.as_mut() {
        n.sampled_min = norms.iter().copied().reduce(f64::min);
        n.sampled_max = norms.iter().copied().reduce(f64::max);
    }
    let e0 = totals[0];
    let drift = totals.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs();
    ctx.note("e_total_relative_drift", drift);
    ctx.note("series_energy", state.energy());
    Ok(())
}

fn guidance<'a>(setting: GuidanceSetting, state: Option<&'a SpectralState>) -> GuidanceModel<'a> {
    match (setting, state) {
        (GuidanceSetting::ExactSeries, Some(s)) => GuidanceModel::Wavefunction(s),
        _ => GuidanceModel::Reduced,
    }
}

fn trajectory_table(sample: &TrajectorySample, n: usize, reduced: bool, params: &OscillatorParams) -> Result<CsvTable> {
    let freqs = params.frequencies();
    let header: &[&str] = if reduced {
        &["t", "x1", "x2", "e1", "e2", "q"]
    } else {
        &["t", "x1", "x2"]
    };
    let mut table = CsvTable::new(header.iter().copied());
    for st in sample.resample(n) {
        if reduced {
            let e = bohmian_energies(st, params, &freqs)?;
            table.push_nums(&[st.t, st.x1, st.x2, e.e1, e.e2, e.q1 + e.q2]);
        } else {
            table.push_nums(&[st.t, st.x1, st.x2]);
        }
    }
    Ok(table)
}

fn run_trajectory(
    ctx: &mut RunContext,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    s: &TrajectorySettings,
    spectral: Result<SpectralState>,
) -> Result<()> {
    let t_end = beat_multiple(s.t_end, 1.0, freqs);
    let state = match s.guidance {
        GuidanceSetting::ExactSeries => Some(spectral?),
        GuidanceSetting::Reduced => None,
    };
    let model = guidance(s.guidance, state.as_ref());
    let reduced = s.guidance == GuidanceSetting::Reduced;
    let opts = s.tolerances.solver_options();
    let x0 = (s.x0[0], s.x0[1]);
    match integrate_with_model(x0, (0.0, t_end), &opts, params, model) {
        Ok(sample) => {
            ctx.integrator = Some(sample.stats);
            ctx.emit("trajectory.csv", &trajectory_table(&sample, s.samples, reduced, params)?)?;
            let last = sample.last();
            ctx.note("final_state", json!([last.t, last.x1, last.x2]));
            let r0 = x0.0.hypot(x0.1);
            ctx.note("radius_drift", (last.x1.hypot(last.x2) - r0).abs());
            Ok(())
        }
        Err(e @ Error::Singularity { last_good_t, .. }) => {
            // keep the part of the path that is well defined
            if last_good_t > 0.0 {
                match integrate_with_model(x0, (0.0, last_good_t), &opts, params, model) {
                    Ok(sample) => {
                        ctx.integrator = Some(sample.stats);
                        ctx.emit("trajectory.csv", &trajectory_table(&sample, s.samples, reduced, params)?)?;
                    }
                    Err(inner) => log::warn!("could not recover partial trajectory: {inner}"),
                }
            }
            ctx.note("last_good_t", last_good_t);
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn run_ensemble(
    ctx: &mut RunContext,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    s: &EnsembleSettings,
    spectral: Result<SpectralState>,
) -> Result<()> {
    let times = s.times.clone().unwrap_or_else(|| vec![0.0, 0.5 * PI / freqs.delta_omega]);
    let spec = EnsembleSpec {
        count: s.count,
        seed: s.seed,
        times,
    };
    ctx.seed = Some(s.seed);
    let needs_series = s.exact_reference || s.guidance == GuidanceSetting::ExactSeries;
    let state = if needs_series { Some(spectral?) } else { None };
    let model = guidance(s.guidance, state.as_ref());
    let (paths, stats) = evolve_ensemble(&spec, &s.tolerances.solver_options(), params, model)?;
    ctx.integrator = Some(stats);

    let mut table = CsvTable::new(["trajectory", "t", "x1", "x2"]);
    let mut lost = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        match p {
            Some(states) => {
                for st in states {
                    table.push(vec![Cell::Int(i as u64), st.t.into(), st.x1.into(), st.x2.into()]);
                }
            }
            None => lost.push(i),
        }
    }
    ctx.emit("ensemble.csv", &table)?;

    let refs = MarginalReferences {
        exact: if s.exact_reference { state.as_ref().map(|st| st as &dyn Wavefunction) } else { None },
        cells: 4000,
    };
    let mut header = vec!["t", "particle", "ks_closed_form", "ks_flipped"];
    if refs.exact.is_some() {
        header.push("ks_exact");
    }
    let mut ks = CsvTable::new(header);
    let kept: Vec<&Vec<_>> = paths.iter().flatten().collect();
    for (k, &t) in spec.times.iter().enumerate() {
        let positions: Vec<(f64, f64)> = kept.iter().map(|p| (p[k].x1, p[k].x2)).collect();
        let d = marginal_distances(&positions, t, params, &refs)?;
        for (particle, dist) in [(1u64, d[0]), (2, d[1])] {
            let mut row = vec![Cell::Num(t), Cell::Int(particle), dist.closed_form.into(), dist.flipped.into()];
            if let Some(e) = dist.exact {
                row.push(e.into());
            }
            ks.push(row);
        }
    }
    ctx.emit("ks.csv", &ks)?;
    ctx.note("lost", lost.len());
    ctx.note("lost_fraction", lost.len() as f64 / s.count as f64);
    ctx.note("lost_indices", lost);
    Ok(())
}

fn run_validate(ctx: &mut RunContext, s: &ValidateSettings) -> Result<()> {
    let opts = ValidationOptions {
        ensemble_count: s.ensemble_count,
        seed: s.seed,
        exact_field_companion: s.exact_field_companion,
    };
    ctx.seed = Some(s.seed);
    let ids = s.criteria.clone().unwrap_or_else(crate::validation::all_ids);
    let report = run_all(&ids, &opts);
    for o in &report.outcomes {
        println!("{}", o.summary_line());
    }
    for (id, e) in &report.errors {
        println!("[FAIL] {id:>2} error: {e}");
    }
    ctx.emit_bytes("report.json", serde_json::to_string_pretty(&report)?.as_bytes())?;
    ctx.note("passed", report.passed);
    ctx.note("failed", report.failed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 1), [0.0]);
        let v = linspace(-2.0, 3.0, 11);
        assert_eq!((v[0], v[10]), (-2.0, 3.0));
        assert!((v[5] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::InvalidParams("x".into())), 2);
        let sing = Error::Singularity {
            t: 1.0,
            x1: 0.0,
            x2: 0.0,
            last_good_t: 0.5,
        };
        assert_eq!(exit_code(&sing), 3);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 4);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["cho", "trajectory"]), 2);
        assert_eq!(run(["cho", "bogus"]), 2);
        assert_eq!(run(["cho", "--help"]), 0);
    }
}
