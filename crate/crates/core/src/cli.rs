//! Command-line front end. Every command prints a JSON summary on stdout and,
//! given `--out DIR`, writes its CSV/JSON artifacts into that directory.
//!
//! Exit status: 0 on success, 1 on I/O failure or failed `verify` checks,
//! 2 on invalid input, 3 when no solution was found.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::delta_defect::{self, DeltaSolution};
use crate::model::{critical_points, quasi_energy, Parity, Potential, PotentialProfile, QuasiParams, StateVector};
use crate::oracle::{self, ShootingOptions};
use crate::propagator::{self, Seed, SpectralKind, SpectralRequest, Splitting};
use crate::roots;
use crate::square_well::{self, WellConfig};

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "GPBOUND_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    NoSolution(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::VerifyFailed { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::NoSolution(_) => 3,
        }
    }
}

/// `Module::Variant: message`, with missing-state variants mapped to exit 3.
fn domain<E: std::fmt::Debug + std::fmt::Display>(module: &str, err: E) -> CliError {
    let debug = format!("{err:?}");
    let variant: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
    let text = format!("{module}::{variant}: {err}");
    if variant == "NoBoundState" {
        CliError::NoSolution(text)
    } else {
        CliError::Validation(text)
    }
}

#[derive(Debug, Parser)]
#[command(name = "gpbound", version, about = "Bound states of the 1D stationary Gross-Pitaevskii equation")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form soliton pinned at a single delta defect.
    #[command(after_help = "wave.csv columns: tau,psi,dpsi (dpsi is the right limit at the defect)\nproblem.json: potential, energy and coupling for `verify --wave`")]
    Delta(DeltaArgs),
    /// Quantized levels of the finite square well with a fixed wall amplitude.
    #[command(after_help = "levels.json: one record per level (energy, n, parity, config)\nwave_<i>.csv columns: tau,psi,dpsi for level i\nproblem_<i>.json: input for `verify --wave`")]
    Well(WellArgs),
    /// Spectral function F(E) of a potential file, or the well phase Q(E).
    #[command(after_help = "spectrum.csv columns: E,F (F >= 0)\nroots.json: {\"roots\":[{\"E\",\"bracket\",\"iterations\"}]}\nwith --v0: phase.csv columns: E,Q and levels.json")]
    Scan(ScanArgs),
    /// Trotter propagation of the launch tail through a potential.
    #[command(after_help = "wave.csv columns: tau,psi,dpsi")]
    Wave(WaveArgs),
    /// Phase-space trajectory (X, P) = (psi, psi') at constant V with its critical points.
    #[command(after_help = "phase.csv columns: tau,X,P,U (U is the quasi-energy)\ncritical.json: critical points with kind and stability")]
    Phase(PhaseArgs),
    /// Oracle residual and eigenvalue checks, on a built-in suite or on emitted files.
    #[command(after_help = "verify.json: one record per check (name, value, tol, pass)")]
    Verify(VerifyArgs),
    /// Well level energy as a function of the coupling, with one-sided slopes at g = 0.
    #[command(after_help = "curve.csv columns: g,E (E empty where the level does not exist)\nkink.json: slopes on both sides of g = 0 and their noise floor")]
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Symmetric,
    Antisymmetric,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Symmetric => Parity::Symmetric,
            ParityArg::Antisymmetric => Parity::Antisymmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedAt {
    /// `psi_seed (kappa, 1)` at `-tau_max`
    Cutoff,
    /// exact tail state of amplitude `psi_seed` at the support edge
    SupportEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Lie,
    Strang,
}

impl From<SchemeArg> for Splitting {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Lie => Splitting::Lie,
            SchemeArg::Strang => Splitting::Strang,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DeltaArgs {
    /// defect strength ᾱ (negative is attractive)
    #[arg(long)]
    pub alpha: f64,
    /// nonlinear coupling γ
    #[arg(long)]
    pub gamma: f64,
    /// energy E < 0
    #[arg(long, required_unless_present = "psi0")]
    pub energy: Option<f64>,
    /// amplitude at the defect instead of the energy (γ > 0 only)
    #[arg(long, conflicts_with = "energy")]
    pub psi0: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct WellArgs {
    #[arg(long)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    #[arg(long)]
    pub g: f64,
    /// wave amplitude at the walls
    #[arg(long)]
    pub phi_b: f64,
    #[arg(long, value_enum, default_value_t = ParityArg::Symmetric)]
    pub parity: ParityArg,
    /// energy samples of the quantization phase
    #[arg(long, default_value_t = 2000)]
    pub n_grid: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub root_tol: f64,
    #[arg(long, default_value_t = 5.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    /// potential JSON document
    #[arg(long, required_unless_present = "v0", conflicts_with = "v0")]
    pub potential: Option<PathBuf>,
    /// scan the well quantization phase Q(E) instead of F(E)
    #[arg(long, requires = "phi_b")]
    pub v0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    #[arg(long)]
    pub phi_b: Option<f64>,
    #[arg(long, value_enum, default_value_t = ParityArg::Symmetric)]
    pub parity: ParityArg,
    #[arg(long, default_value_t = 0.0)]
    pub g: f64,
    #[arg(long)]
    pub e_min: f64,
    #[arg(long)]
    pub e_max: f64,
    /// energy samples
    #[arg(long, default_value_t = 600)]
    pub steps: usize,
    /// propagation slices per evaluation
    #[arg(long, default_value_t = 100_000)]
    pub slices: usize,
    #[arg(long, default_value_t = 1.0)]
    pub seed: f64,
    #[arg(long, value_enum, default_value_t = SeedAt::Cutoff)]
    pub seed_at: SeedAt,
    #[arg(long, value_enum, default_value_t = SchemeArg::Lie)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 20.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub root_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct WaveArgs {
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, default_value_t = 0.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub seed: f64,
    #[arg(long, value_enum, default_value_t = SeedAt::Cutoff)]
    pub seed_at: SeedAt,
    #[arg(long, value_enum, default_value_t = SchemeArg::Lie)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 20.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 100_000)]
    pub slices: usize,
    /// keep every n-th slice in the output
    #[arg(long, default_value_t = 100)]
    pub every: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PhaseArgs {
    #[arg(long)]
    pub energy: f64,
    #[arg(long)]
    pub g: f64,
    /// constant potential level
    #[arg(long, default_value_t = 0.0)]
    pub v: f64,
    #[arg(long)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tau_span: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dtau: f64,
    #[arg(long, default_value_t = 10)]
    pub every: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// wave CSV (tau,psi,...) to check against its problem file
    #[arg(long, requires = "problem")]
    pub wave: Option<PathBuf>,
    /// problem JSON written next to the wave
    #[arg(long)]
    pub problem: Option<PathBuf>,
    /// levels.json from `well`, cross-checked by shooting
    #[arg(long)]
    pub levels: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-7)]
    pub residual_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub energy_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 6.0)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub phi_b: f64,
    #[arg(long, value_enum, default_value_t = ParityArg::Symmetric)]
    pub parity: ParityArg,
    /// level index
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = -1.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// coupling offset of the one-sided slopes
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value_t = 2000)]
    pub n_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output of a command: the stdout summary plus named artifacts.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: Value,
    pub files: Vec<(String, String)>,
    /// human-readable table for stderr
    pub table: Option<String>,
    /// a failed `verify` or an empty result, reported after writing
    pub failure: Option<CliError>,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<(), CliError> {
    if v >= min {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must be at least {min}, got {v}")))
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

fn wave_csv(samples: impl Iterator<Item = (f64, f64, f64)>) -> String {
    let mut out = String::from("tau,psi,dpsi\n");
    for (t, p, d) in samples {
        let _ = writeln!(out, "{},{},{}", num(t), num(p), num(d));
    }
    out
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_potential(path: &Path) -> Result<Potential, CliError> {
    Potential::from_json(&read(path)?).map_err(|e| domain("ModelError", e))
}

fn problem_json(pot: &Potential, energy: f64, g: f64) -> String {
    let pot: Value = serde_json::from_str(&pot.to_json()).expect("potential JSON is valid");
    pretty(&json!({ "potential": pot, "energy": energy, "g": g }))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("summary serializes");
    s.push('\n');
    s
}

pub fn run_delta(a: &DeltaArgs) -> Result<Report, CliError> {
    positive("tau-max", a.tau_max)?;
    at_least("points", a.points, 2)?;
    let sol: DeltaSolution = match (a.gamma, a.energy, a.psi0) {
        (g, Some(e), _) if g < 0.0 => delta_defect::solve_bright(a.alpha, g, e),
        (g, Some(e), _) if g > 0.0 => delta_defect::solve_log_quadrature(a.alpha, g, e),
        (g, None, Some(p)) => delta_defect::solve_log_quadrature_at_amplitude(a.alpha, g, p),
        _ => return Err(CliError::Validation("--gamma must be nonzero; use `scan` for the linear defect".into())),
    }
    .map_err(|e| domain("DeltaError", e))?;
    let pot = sol.potential();
    let grid = roots::linspace(-a.tau_max, a.tau_max, a.points);
    let span = if sol.kappa() > 0.0 { a.tau_max.max(40.0 / sol.kappa()) } else { a.tau_max };
    let n = oracle::particle_number(|t| sol.psi(t), (-span, span), 1e-3);
    let h = oracle::RESIDUAL_STEP;
    let interior: Vec<f64> = grid.iter().copied().filter(|t| t.abs() > 2.0 * h).collect();
    let residual = oracle::gp_residual(|t| sol.psi(t), &pot, sol.energy, sol.gamma, &interior, h);
    let (left, right) = sol.states_at_defect();
    let jump = crate::model::delta_jump_residual(left, right, sol.alpha_bar);
    let summary = json!({
        "solution": sol,
        "kappa": sol.kappa(),
        "particle_number": n,
        "gp_residual": residual,
        "jump_residual": jump.0.abs().max(jump.1.abs()),
    });
    Ok(Report {
        summary,
        files: vec![
            ("wave.csv".into(), wave_csv(grid.iter().map(|&t| (t, sol.psi(t), sol.dpsi(t))))),
            ("problem.json".into(), problem_json(&pot, sol.energy, sol.gamma)),
        ],
        table: None,
        failure: None,
    })
}

#[derive(Serialize)]
struct LevelRecord {
    energy: f64,
    n: u32,
    parity: Parity,
    config: WellConfig,
    wall_mismatch: f64,
    particle_number: f64,
}

pub fn run_well(a: &WellArgs) -> Result<Report, CliError> {
    positive("root-tol", a.root_tol)?;
    positive("tau-max", a.tau_max)?;
    at_least("n-grid", a.n_grid, 2)?;
    at_least("points", a.points, 2)?;
    let cfg = WellConfig::new(a.v0, a.tau0, a.g, a.phi_b).map_err(|e| domain("SquareWellError", e))?;
    let parity = a.parity.into();
    let states = square_well::quantization_scan(&cfg, parity, cfg.energy_window(), a.n_grid, a.root_tol)
        .map_err(|e| domain("SquareWellError", e))?;
    let grid = roots::linspace(-a.tau_max, a.tau_max, a.points);
    let pot = cfg.potential();
    let mut files = Vec::new();
    let mut records = Vec::new();
    for (i, s) in states.iter().enumerate() {
        files.push((format!("wave_{i}.csv"), wave_csv(grid.iter().map(|&t| {
            let (p, d) = s.state(t);
            (t, p, d)
        }))));
        files.push((format!("problem_{i}.json"), problem_json(&pot, s.energy, cfg.g)));
        let span = a.tau_max.max(cfg.tau0 + 40.0 / (-s.energy).sqrt());
        records.push(LevelRecord {
            energy: s.energy,
            n: s.n,
            parity: s.parity,
            config: cfg,
            wall_mismatch: s.wall_mismatch(),
            particle_number: oracle::particle_number(|t| s.psi(t), (-span, span), 1e-3).n,
        });
    }
    files.insert(0, ("levels.json".into(), pretty(&records)));
    let failure = records
        .is_empty()
        .then(|| CliError::NoSolution(format!("no {parity:?} level of the well in the scanned window")));
    Ok(Report {
        summary: json!({ "config": cfg, "parity": parity, "levels": records }),
        files,
        table: None,
        failure,
    })
}

pub fn run_scan(a: &ScanArgs) -> Result<Report, CliError> {
    at_least("steps", a.steps, 2)?;
    positive("root-tol", a.root_tol)?;
    if !(a.e_min < a.e_max) {
        return Err(CliError::Validation(format!("--e-min {} must be below --e-max {}", a.e_min, a.e_max)));
    }
    let energies = roots::linspace(a.e_min, a.e_max, a.steps);
    if let Some(v0) = a.v0 {
        let cfg = WellConfig::new(v0, a.tau0, a.g, a.phi_b.unwrap_or(f64::NAN)).map_err(|e| domain("SquareWellError", e))?;
        let q: Vec<f64> = energies
            .iter()
            .map(|&e| square_well::quantization_phase(&cfg, e).unwrap_or(f64::NAN))
            .collect();
        let mut csv = String::from("E,Q\n");
        for (e, q) in energies.iter().zip(&q) {
            let _ = writeln!(csv, "{},{}", num(*e), num(*q));
        }
        let levels: Vec<f64> = square_well::quantization_scan(&cfg, a.parity.into(), (a.e_min, a.e_max), a.steps, a.root_tol)
            .map_err(|e| domain("SquareWellError", e))?
            .iter()
            .map(|s| s.energy)
            .collect();
        let failure = levels.is_empty().then(|| CliError::NoSolution("no quantized level in the scanned window".into()));
        let summary = json!({ "kind": "quantization-phase", "config": cfg, "levels": levels });
        return Ok(Report {
            files: vec![("phase.csv".into(), csv), ("levels.json".into(), pretty(&json!({ "levels": levels })))],
            summary,
            table: None,
            failure,
        });
    }
    let path = a.potential.as_deref().expect("clap requires --potential without --v0");
    positive("tau-max", a.tau_max)?;
    positive("seed", a.seed)?;
    at_least("slices", a.slices, 1)?;
    let pot = load_potential(path)?;
    let kind = if a.g == 0.0 {
        SpectralKind::Linear
    } else {
        SpectralKind::Nonlinear {
            g: a.g,
            scheme: a.scheme.into(),
        }
    };
    let req = SpectralRequest {
        potential: &pot,
        kind,
        seed: seed(a.seed_at, a.seed),
        energies,
        tau_max: a.tau_max,
        n_steps: a.slices,
        root_tol: a.root_tol,
    };
    let scan = propagator::find_spectrum(&req).map_err(|e| domain("PropagatorError", e))?;
    let failure = scan.roots.is_empty().then(|| CliError::NoSolution("F(E) has no zero in the scanned window".into()));
    Ok(Report {
        summary: json!({ "kind": scan.kind, "seed": req.seed, "roots": scan.roots }),
        files: vec![("spectrum.csv".into(), scan.to_csv()), ("roots.json".into(), scan.manifest_json() + "\n")],
        table: None,
        failure,
    })
}

fn seed(at: SeedAt, amplitude: f64) -> Seed {
    match at {
        SeedAt::Cutoff => Seed::Cutoff(amplitude),
        SeedAt::SupportEdge => Seed::SupportEdge(amplitude),
    }
}

pub fn run_wave(a: &WaveArgs) -> Result<Report, CliError> {
    positive("tau-max", a.tau_max)?;
    positive("seed", a.seed)?;
    at_least("slices", a.slices, 1)?;
    at_least("every", a.every, 1)?;
    let pot = load_potential(&a.potential)?;
    let (start, s0) = propagator::launch_state(&pot, a.energy, a.g, seed(a.seed_at, a.seed), a.tau_max)
        .map_err(|e| domain("PropagatorError", e))?;
    let end = a.tau_max.max(start);
    let traj = propagator::trotter_propagate(s0, &pot, a.energy, a.g, start, end, a.slices, a.scheme.into())
        .map_err(|e| domain("PropagatorError", e))?;
    let last = traj.states.len() - 1;
    let csv = wave_csv(
        traj.grid
            .iter()
            .zip(&traj.states)
            .enumerate()
            .filter(|(i, _)| i % a.every == 0 || *i == last)
            .map(|(_, (&t, s))| (t, s.psi, s.dpsi)),
    );
    Ok(Report {
        summary: json!({ "start": start, "end": traj.grid[last], "final": traj.last(), "divergent": traj.divergent }),
        files: vec![("wave.csv".into(), csv), ("problem.json".into(), problem_json(&pot, a.energy, a.g))],
        table: None,
        failure: None,
    })
}

pub fn run_phase(a: &PhaseArgs) -> Result<Report, CliError> {
    positive("tau-span", a.tau_span)?;
    positive("dtau", a.dtau)?;
    at_least("every", a.every, 1)?;
    // only V − E enters the flow
    let shifted = a.energy - a.v;
    let free = Potential::default();
    let traj = oracle::integrate(&free, shifted, a.g, StateVector::new(a.x0, a.p0), 0.0, a.tau_span, a.dtau);
    let params = QuasiParams::new(a.energy, a.g);
    let mut csv = String::from("tau,X,P,U\n");
    for (i, (&t, s)) in traj.grid.iter().zip(&traj.states).enumerate() {
        if i % a.every == 0 || i + 1 == traj.grid.len() {
            let u = quasi_energy(*s, a.v, &params);
            let _ = writeln!(csv, "{},{},{},{}", num(t), num(s.psi), num(s.dpsi), num(u));
        }
    }
    let critical = critical_points(&params, a.v);
    Ok(Report {
        summary: json!({ "critical_points": critical, "divergent": traj.divergent, "final": traj.last() }),
        files: vec![("phase.csv".into(), csv), ("critical.json".into(), pretty(&critical))],
        table: None,
        failure: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            pass: value <= tol,
        }
    }
}

/// Residual of sampled `(tau, psi)` rows with the five-point stencil on the
/// sample spacing, away from defects and jumps of `V`.
fn sampled_residual(rows: &[(f64, f64)], pot: &Potential, energy: f64, g: f64) -> Result<f64, CliError> {
    if rows.len() < 5 {
        return Err(CliError::Validation("wave file needs at least five rows".into()));
    }
    let h = rows[1].0 - rows[0].0;
    if !(h > 0.0) || rows.windows(2).any(|w| ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(CliError::Validation("wave file must be sampled on a uniform increasing grid".into()));
    }
    let events: Vec<f64> = pot.breakpoints().iter().copied().chain(pot.deltas().iter().map(|d| d.at)).collect();
    let mut worst: f64 = 0.0;
    for i in 2..rows.len() - 2 {
        let (t, psi) = rows[i];
        if events.iter().any(|&e| (e - t).abs() <= 2.0 * h + 1e-12) {
            continue;
        }
        let d2 = (-rows[i + 2].1 + 16.0 * rows[i + 1].1 - 30.0 * psi + 16.0 * rows[i - 1].1 - rows[i - 2].1) / (12.0 * h * h);
        worst = worst.max((-d2 + (pot.value(t) + g * psi * psi - energy) * psi).abs());
    }
    Ok(worst)
}

fn parse_wave(text: &str, path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = |line: usize| CliError::Validation(format!("{}: malformed row at line {line}", path.display()));
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let mut cols = line.split(',');
            let t = cols.next().and_then(|c| c.trim().parse().ok()).ok_or_else(|| bad(i + 1))?;
            let p = cols.next().and_then(|c| c.trim().parse().ok()).ok_or_else(|| bad(i + 1))?;
            Ok((t, p))
        })
        .collect()
}

fn wave_check(wave: &Path, problem: &Path, tol: f64) -> Result<Check, CliError> {
    let doc: Value = serde_json::from_str(&read(problem)?)
        .map_err(|e| CliError::Validation(format!("{}: line {}, column {}: {e}", problem.display(), e.line(), e.column())))?;
    let field = |k: &str| {
        doc.get(k)
            .and_then(Value::as_f64)
            .ok_or_else(|| CliError::Validation(format!("{}: missing numeric field `{k}`", problem.display())))
    };
    let (energy, g) = (field("energy")?, field("g")?);
    let pot_doc = doc
        .get("potential")
        .ok_or_else(|| CliError::Validation(format!("{}: missing field `potential`", problem.display())))?;
    let pot = Potential::from_json(&pot_doc.to_string()).map_err(|e| domain("ModelError", e))?;
    let rows = parse_wave(&read(wave)?, wave)?;
    let residual = sampled_residual(&rows, &pot, energy, g)?;
    Ok(Check::new(format!("residual of {}", wave.display()), residual, tol))
}

#[derive(serde::Deserialize)]
struct LevelInput {
    energy: f64,
    parity: Parity,
    config: WellConfig,
}

fn level_checks(path: &Path, tol: f64) -> Result<Vec<Check>, CliError> {
    let levels: Vec<LevelInput> = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Validation(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    Ok(levels
        .iter()
        .map(|l| {
            let found = shooting_near(&l.config, l.parity, l.energy);
            Check::new(format!("level {:.9} vs shooting", l.energy), found.map_or(f64::INFINITY, |e| (e - l.energy).abs()), tol)
        })
        .collect())
}

fn shooting_near(cfg: &WellConfig, parity: Parity, energy: f64) -> Option<f64> {
    let opts = ShootingOptions::default();
    let window = 1e-3 * energy.abs().max(1.0);
    oracle::shooting_eigenvalues(&cfg.potential(), cfg.g, cfg.phi_b, Some(parity), (energy - window, energy + window), 5, &opts)
        .into_iter()
        .min_by(|a, b| (a - energy).abs().total_cmp(&(b - energy).abs()))
}

/// The built-in suite: closed forms against the oracle residual, and the
/// transfer-matrix and elliptic eigenvalues against shooting.
pub fn builtin_checks(residual_tol: f64, energy_tol: f64) -> Vec<Check> {
    let mut checks = Vec::new();
    let h = oracle::RESIDUAL_STEP;
    let grid: Vec<f64> = roots::linspace(-8.0, 8.0, 801).into_iter().filter(|t| t.abs() > 2.0 * h).collect();
    for (label, sol) in [
        ("free soliton", delta_defect::solve_bright(0.0, -2.0, -1.0)),
        ("attractive bright", delta_defect::solve_bright(-1.0, -1.0, -1.0)),
        ("repulsive bright", delta_defect::solve_bright(0.8, -1.5, -0.5)),
        ("log quadrature", delta_defect::solve_log_quadrature(-2.0, 1.0, -0.5)),
    ] {
        let sol = sol.expect("built-in delta parameters are valid");
        let residual = oracle::gp_residual(|t| sol.psi(t), &sol.potential(), sol.energy, sol.gamma, &grid, h);
        checks.push(Check::new(format!("{label}: GP residual"), residual, residual_tol));
        let (l, r) = sol.states_at_defect();
        let jump = crate::model::delta_jump_residual(l, r, sol.alpha_bar);
        checks.push(Check::new(format!("{label}: jump residual"), jump.0.abs().max(jump.1.abs()), 1e-10));
    }
    let soliton = delta_defect::solve_bright(0.0, -1.0, -1.0).expect("valid");
    let n = oracle::particle_number(|t| soliton.psi(t), (-40.0, 40.0), 1e-3).n;
    checks.push(Check::new("particle number of sqrt(2) sech", (n - 4.0).abs(), 1e-8));

    let well = Potential::square_well(6.0, 1.0).expect("valid well");
    let req = SpectralRequest {
        potential: &well,
        kind: SpectralKind::Linear,
        seed: Seed::Cutoff(1.0),
        energies: roots::linspace(-5.99, -0.01, 600),
        tau_max: 20.0,
        n_steps: 1000,
        root_tol: 0.0,
    };
    let spectral = propagator::find_spectrum(&req).map(|s| s.root_energies()).unwrap_or_default();
    let opts = ShootingOptions {
        root_tol: 0.0,
        ..ShootingOptions::default()
    };
    let shot = oracle::shooting_eigenvalues(&well, 0.0, 1.0, None, (-5.99, -0.01), 600, &opts);
    let gap = if spectral.len() == shot.len() && !spectral.is_empty() {
        spectral.iter().zip(&shot).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    checks.push(Check::new("linear well: transfer matrix vs shooting", gap, 1e-8));

    let cfg = WellConfig::new(6.0, 1.0, 4.0, 0.5).expect("valid");
    let ground = square_well::level_energy(&cfg, Parity::Symmetric, 0, 2000).ok().flatten();
    let gap = ground
        .and_then(|e| shooting_near(&cfg, Parity::Symmetric, e).map(|s| (s - e).abs()))
        .unwrap_or(f64::INFINITY);
    checks.push(Check::new("well g=4 ground state: elliptic vs shooting", gap, energy_tol));
    checks
}

pub fn run_verify(a: &VerifyArgs) -> Result<Report, CliError> {
    positive("residual-tol", a.residual_tol)?;
    positive("energy-tol", a.energy_tol)?;
    let mut checks = Vec::new();
    if let (Some(wave), Some(problem)) = (&a.wave, &a.problem) {
        checks.push(wave_check(wave, problem, a.residual_tol)?);
    }
    if let Some(levels) = &a.levels {
        checks.extend(level_checks(levels, a.energy_tol)?);
    }
    if a.wave.is_none() && a.levels.is_none() {
        checks = builtin_checks(a.residual_tol, a.energy_tol);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let failure = (failed > 0).then_some(CliError::VerifyFailed {
        failed,
        total: checks.len(),
    });
    Ok(Report {
        summary: json!({ "checks": checks, "failed": failed }),
        files: vec![("verify.json".into(), pretty(&checks))],
        table: Some(verify_table(&checks)),
        failure,
    })
}

pub fn verify_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{:<width$}  {:>12.3e}  <= {:<8.1e}  {}",
            c.name,
            c.value,
            c.tol,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}

pub fn run_curve(a: &CurveArgs) -> Result<Report, CliError> {
    positive("delta", a.delta)?;
    at_least("points", a.points, 2)?;
    at_least("n-grid", a.n_grid, 2)?;
    if !(a.g_min < a.g_max) {
        return Err(CliError::Validation(format!("--g-min {} must be below --g-max {}", a.g_min, a.g_max)));
    }
    let couplings = roots::linspace(a.g_min, a.g_max, a.points);
    let parity = a.parity.into();
    let curve = square_well::energy_vs_g_curve(a.v0, a.tau0, a.phi_b, parity, a.n, &couplings, a.n_grid)
        .map_err(|e| domain("SquareWellError", e))?;
    let kink = square_well::kink_analysis(a.v0, a.tau0, a.phi_b, parity, a.n, a.delta, a.n_grid)
        .map_err(|e| domain("SquareWellError", e))?;
    let mut csv = String::from("g,E\n");
    for p in &curve.points {
        let _ = writeln!(csv, "{},{}", num(p.g), p.energy.map(num).unwrap_or_default());
    }
    let kink_json = json!({
        "report": kink,
        "continuity_gap": kink.map(|k| k.continuity_gap()),
        "significance": kink.map(|k| k.significance()),
    });
    let failure = curve
        .points
        .iter()
        .all(|p| p.energy.is_none())
        .then(|| CliError::NoSolution(format!("level {} does not exist on the coupling range", a.n)));
    Ok(Report {
        summary: json!({ "truncated": curve.truncated, "kink": kink_json }),
        files: vec![("curve.csv".into(), csv), ("kink.json".into(), pretty(&kink_json))],
        table: None,
        failure,
    })
}

pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    match &config.command {
        Command::Delta(a) => run_delta(a),
        Command::Well(a) => run_well(a),
        Command::Scan(a) => run_scan(a),
        Command::Wave(a) => run_wave(a),
        Command::Phase(a) => run_phase(a),
        Command::Verify(a) => run_verify(a),
        Command::Curve(a) => run_curve(a),
    }
}

fn out_dir(config: &RunConfig) -> Option<&Path> {
    match &config.command {
        Command::Delta(a) => a.out.as_deref(),
        Command::Well(a) => a.out.as_deref(),
        Command::Scan(a) => a.out.as_deref(),
        Command::Wave(a) => a.out.as_deref(),
        Command::Phase(a) => a.out.as_deref(),
        Command::Verify(a) => a.out.as_deref(),
        Command::Curve(a) => a.out.as_deref(),
    }
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(io(&path))?;
    }
    Ok(())
}

/// Runs a parsed configuration: prints the summary, writes the artifacts and
/// returns the error that decides the exit status.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let report = execute(config)?;
    if let Some(table) = &report.table {
        eprint!("{table}");
    }
    println!("{}", serde_json::to_string_pretty(&report.summary).expect("summary serializes"));
    if let Some(dir) = out_dir(config) {
        write_files(dir, &report.files)?;
    }
    report.failure.map_or(Ok(()), Err)
}

/// Sizes the global pool from `GPBOUND_THREADS` when it holds a positive
/// integer.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn main() -> ExitCode {
    let config = RunConfig::parse();
    match configure_threads().and_then(|()| run(&config)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("gpbound").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn command_definition_is_consistent() {
        RunConfig::command().debug_assert();
    }

    #[test]
    fn negative_values_parse() {
        let cfg = parse(&["delta", "--alpha", "0", "--gamma", "-2", "--energy", "-1"]);
        let Command::Delta(a) = cfg.command else { panic!("wrong command") };
        assert_eq!((a.gamma, a.energy), (-2.0, Some(-1.0)));
    }

    #[test]
    fn free_soliton_summary() {
        let cfg = parse(&["delta", "--alpha", "0", "--gamma", "-2", "--energy", "-1"]);
        let report = execute(&cfg).unwrap();
        let n = report.summary["particle_number"]["n"].as_f64().unwrap();
        assert!((n - 2.0).abs() < 1e-8, "{n}");
        assert!(report.summary["gp_residual"].as_f64().unwrap() < 1e-7);
        assert!(report.files[0].1.starts_with("tau,psi,dpsi\n"));
    }

    #[test]
    fn exit_codes() {
        let err = execute(&parse(&["delta", "--alpha", "3", "--gamma", "-1", "--energy", "-1"])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().starts_with("DeltaError::NoBoundState"), "{err}");
        let err = execute(&parse(&["delta", "--alpha", "0", "--gamma", "-1", "--energy", "1"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = execute(&parse(&["well", "--v0", "-1", "--g", "1", "--phi-b", "0.5"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn sampled_residual_accepts_exact_waves_and_rejects_bad_grids() {
        let sol = delta_defect::solve_bright(-1.0, -1.0, -1.0).unwrap();
        let rows: Vec<(f64, f64)> = roots::linspace(-8.0, 8.0, 1601).into_iter().map(|t| (t, sol.psi(t))).collect();
        let r = sampled_residual(&rows, &sol.potential(), -1.0, -1.0).unwrap();
        assert!(r < 1e-7, "{r}");
        let bumped: Vec<(f64, f64)> = rows.iter().map(|&(t, p)| (t, p + 1e-3 * t * t)).collect();
        assert!(sampled_residual(&bumped, &sol.potential(), -1.0, -1.0).unwrap() > 1e-4);
        let uneven = vec![(0.0, 1.0), (0.1, 1.0), (0.3, 1.0), (0.4, 1.0), (0.5, 1.0)];
        assert!(sampled_residual(&uneven, &Potential::default(), -1.0, 0.0).is_err());
    }

    #[test]
    fn verify_table_marks_failures() {
        let table = verify_table(&[Check::new("a", 1e-9, 1e-8), Check::new("bb", 1.0, 1e-8)]);
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[0].ends_with("PASS") && lines[1].ends_with("FAIL"));
    }
}
