//! Subcommands of the `klocal` binary. Each command reads and writes plain
//! JSON/CSV files and maps failures onto stable exit codes.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{jw_map, locality_histogram, SecondQuantizedProblem};
use crate::gadget::{
    log_grid, lro_init, lro_problem, phg_sweep, write_sweep_csv, GadgetSpec, SweepRow,
};
use crate::lro::{
    greedy_extend, optimize, reduce_ladder, stability_sweep, two_local_pool, BasisTerm, CostModel, GapMode,
    GreedyConfig, InitStrategy, LadderConfig, OptimizeConfig, Provenance, ReductionProblem, ReductionReport,
    StabilityConfig, Weights,
};
use crate::pauli::{PauliHamiltonian, PauliString};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCONVERGED: i32 = 3;
pub const EXIT_REFUSED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "klocal", version, about = "Locality reduction of qubit Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a second-quantized problem to a qubit Hamiltonian.
    Jw(JwArgs),
    /// Perturbative gadget error and spread over a gap grid.
    PhgSweep(PhgArgs),
    /// Optimize 2-local coefficients for a k-local target.
    Lro(LroArgs),
    /// Coefficient-perturbation sweep of a converged report.
    Stability(StabilityArgs),
    /// Gadget sweep against the 9- and 10-term optimized reductions.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct JwArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct PhgArgs {
    /// Gadget spec or single-term Hamiltonian JSON; `XZX` when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    /// `v1,v2,...` or `lo:hi:count` (log-spaced).
    #[arg(long, default_value = "1e2:1e8:7")]
    pub delta_grid: String,
    #[arg(long)]
    pub im: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct SolveArgs {
    #[arg(long, default_value = "1,1,1")]
    pub weights: String,
    #[arg(long)]
    pub im: Option<usize>,
    #[arg(long, value_parser = ["literal", "hinge"], default_value = "hinge")]
    pub gap_mode: String,
    #[arg(long)]
    pub gap_target: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub budget: usize,
    /// Seeded random starts in addition to the uniform levels.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LroArgs {
    /// Reduction problem, or a Hamiltonian whose basis is derived; `XZX` when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    /// Greedily add this many 2-local terms before the final fit.
    #[arg(long, default_value_t = 0)]
    pub extend: usize,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Converged reduction report.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Relative perturbation magnitudes in percent.
    #[arg(long, default_value = "0,1e-6,1e-4,1e-2,1,10")]
    pub delta_grid: String,
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "1e2:1e8:7")]
    pub delta_grid: String,
    #[command(flatten)]
    pub solve: SolveArgs,
}

/// Maps an error onto the exit-code contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotConverged { .. } => EXIT_REFUSED,
        Error::Unconverged { .. } => EXIT_UNCONVERGED,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Jw(a) => cmd_jw(a),
        Command::PhgSweep(a) => cmd_phg_sweep(a),
        Command::Lro(a) => cmd_lro(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    Ok(fs::write(path, body)?)
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Json(j) => Error::InvalidInput(format!("{}: {j}", path.display())),
        other => other,
    })
}

/// `v1,v2,...` or `lo:hi:count`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |e: &dyn std::fmt::Display| Error::InvalidInput(format!("bad grid {s:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, n] => {
            let lo: f64 = lo.trim().parse().map_err(|e| bad(&e))?;
            let hi: f64 = hi.trim().parse().map_err(|e| bad(&e))?;
            let n: usize = n.trim().parse().map_err(|e| bad(&e))?;
            if !(lo > 0.0 && hi >= lo) {
                return Err(bad(&"need 0 < lo <= hi"));
            }
            log_grid(lo, hi, n)
        }
        [list] => list.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| bad(&e))).collect::<Result<_>>()?,
        _ => return Err(bad(&"expected a list or lo:hi:count")),
    };
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(bad(&"empty or non-finite"));
    }
    Ok(grid)
}

/// Gadget spec JSON, or a Hamiltonian with one 3-local term.
fn load_spec(input: Option<&Path>) -> Result<GadgetSpec> {
    let Some(path) = input else {
        return GadgetSpec::for_string(1.0, "XZX", 1.0);
    };
    let text = read(path)?;
    if let Ok(spec) = serde_json::from_str::<GadgetSpec>(&text) {
        spec.validate()?;
        return Ok(spec);
    }
    let h = with_path(path, PauliHamiltonian::from_json(&text))?;
    match h.terms() {
        [(s, a)] if s.locality() == 3 => {
            let compact: String = s.support().iter().map(|&q| s.get(q).as_char()).collect();
            let mut spec = GadgetSpec::for_string(*a, &compact, 1.0)?;
            let sup = s.support();
            spec.p1.qubit = sup[0];
            spec.p2.qubit = sup[1];
            spec.p3.qubit = sup[2];
            spec.ancilla_index = s.len() + 1;
            spec.validate()?;
            Ok(spec)
        }
        _ => Err(Error::InvalidInput(format!("{}: expected a single 3-local term", path.display()))),
    }
}

pub fn cmd_jw(a: &JwArgs) -> Result<i32> {
    let text = read(&a.input)?;
    let problem = with_path(&a.input, SecondQuantizedProblem::from_json(&text))?;
    let h = jw_map(&problem)?;
    write(&a.output, &h.to_json()?)?;
    println!("locality histogram: {:?}", locality_histogram(&h));
    Ok(EXIT_OK)
}

pub fn cmd_phg_sweep(a: &PhgArgs) -> Result<i32> {
    let spec = load_spec(a.input.as_deref())?;
    let grid = parse_grid(&a.delta_grid)?;
    let rows = phg_sweep(&spec, &grid, a.im);
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    fs::write(&a.output, buf)?;
    for r in &rows {
        match (&r.error, &r.note) {
            (Some(e), _) => println!("delta {:e}: error {:.3e} spread {:.3e}", r.delta, e.spectral_error, e.spread),
            (None, note) => println!("delta {:e}: collapsed ({})", r.delta, note.as_deref().unwrap_or("")),
        }
    }
    Ok(EXIT_OK)
}

impl SolveArgs {
    fn apply(&self, p: &mut ReductionProblem) -> Result<()> {
        p.weights = self.weights.parse::<Weights>()?;
        p.gap_mode = self.gap_mode.parse::<GapMode>()?;
        if let Some(t) = self.gap_target {
            p.gap_target = t;
        }
        if let Some(i) = self.im {
            p.i_m = i;
        }
        p.validate()
    }

    fn config(&self, init: InitStrategy) -> Result<OptimizeConfig> {
        if self.budget == 0 {
            return Err(Error::InvalidInput("budget must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        Ok(OptimizeConfig { init, budget: self.budget, tol: self.tol, ..Default::default() })
    }
}

/// How `cmd_lro` interprets its input.
enum LroInput {
    Problem(ReductionProblem),
    Gadget(GadgetSpec),
    Ladder(PauliHamiltonian),
    TwoLocal(PauliHamiltonian),
}

fn load_lro_input(input: Option<&Path>) -> Result<LroInput> {
    let Some(path) = input else {
        return Ok(LroInput::Gadget(GadgetSpec::for_string(1.0, "XZX", 1.0)?));
    };
    let text = read(path)?;
    let value: serde_json::Value = with_path(path, serde_json::from_str(&text).map_err(Error::from))?;
    if value.get("basis").is_some() {
        return Ok(LroInput::Problem(with_path(path, ReductionProblem::from_json(&text))?));
    }
    if value.get("p1").is_some() {
        return Ok(LroInput::Gadget(load_spec(Some(path))?));
    }
    let h = with_path(path, PauliHamiltonian::from_json(&text))?;
    Ok(match h.max_locality() {
        0..=2 => LroInput::TwoLocal(h),
        3 if h.len() == 1 => LroInput::Gadget(load_spec(Some(path))?),
        _ => LroInput::Ladder(h),
    })
}

/// Report with no ancillas that keeps every string of an already 2-local
/// Hamiltonian at its own coefficient.
fn identity_report(h: &PauliHamiltonian, tol: f64) -> Result<ReductionReport> {
    let n = h.n_qubits();
    let (basis, d): (Vec<BasisTerm>, Vec<f64>) = if h.is_empty() {
        (vec![BasisTerm::pauli(PauliString::identity(n))], vec![0.0])
    } else {
        h.terms().iter().map(|(s, c)| (BasisTerm::pauli(s.clone()), *c)).unzip()
    };
    let problem = ReductionProblem::new(h.clone(), 0, basis)?;
    let model = CostModel::new(&problem)?;
    let prov = Provenance { start: "identity".into(), evaluations: 1, restarts: 0, seed: 0, starts: Vec::new() };
    Ok(ReductionReport::at(&model, d, tol, prov))
}

fn solve_lro(input: LroInput, extend: usize, s: &SolveArgs) -> Result<ReductionReport> {
    let (problem, init) = match input {
        LroInput::TwoLocal(h) => return identity_report(&h, s.tol),
        LroInput::Ladder(h) => {
            let mut cfg = LadderConfig::default();
            cfg.optimize.tol = s.tol;
            cfg.optimize.budget = s.budget;
            cfg.weights = s.weights.parse()?;
            cfg.gap_mode = s.gap_mode.parse()?;
            let out = reduce_ladder(&h, &cfg)?;
            let last = out.steps.into_iter().last().expect("k > 2 gives at least one step");
            return Ok(last.report);
        }
        LroInput::Gadget(spec) => (lro_problem(&spec)?, lro_init(&spec, s.starts, s.seed)?),
        LroInput::Problem(p) => (p, InitStrategy::default().with_jitter(s.starts, s.seed).with_screen(200 * s.starts)),
    };
    let mut problem = problem;
    s.apply(&mut problem)?;
    let report = optimize(&problem, &s.config(init)?)?;
    if extend == 0 {
        return Ok(report);
    }
    extend_report(&problem, &report, extend, s)
}

/// Greedy extension over all 1- and 2-local strings, then a full-budget fit
/// warm-started at the greedy optimum.
fn extend_report(problem: &ReductionProblem, report: &ReductionReport, count: usize, s: &SolveArgs) -> Result<ReductionReport> {
    let pool = two_local_pool(problem.n_total(), &problem.basis);
    let mut gcfg = GreedyConfig::default();
    gcfg.scoring.tol = s.tol;
    gcfg.tie_tol = s.tol;
    let out = greedy_extend(problem, report, &pool, count, &gcfg)?;
    let init = InitStrategy { levels: Vec::new(), ..Default::default() }.with_warm(out.report.d.clone());
    let mut fin = optimize(&out.problem, &s.config(init)?)?;
    if fin.cost.total > out.report.cost.total {
        fin = out.report.clone();
    }
    fin.selected_terms = out.report.selected_terms.clone();
    Ok(fin)
}

fn print_report(r: &ReductionReport) {
    println!("start        {}", r.provenance.start);
    println!("cost         {:.3e} (c1 {:.3e}, c2 {:.3e}, c3 {:.3e})", r.cost.total, r.cost.c1, r.cost.c2, r.cost.c3);
    println!("spectral err {:.3e}", r.spectral_abs_error);
    println!("d_m          {:.3}", r.dm_spread);
    println!("converged    {}", r.converged);
    if !r.selected_terms.is_empty() {
        println!("added        {}", r.selected_terms.join(", "));
    }
}

pub fn cmd_lro(a: &LroArgs) -> Result<i32> {
    let input = load_lro_input(a.input.as_deref())?;
    let report = solve_lro(input, a.extend, &a.solve)?;
    write(&a.output, &report.to_json()?)?;
    print_report(&report);
    Ok(if report.converged { EXIT_OK } else { EXIT_UNCONVERGED })
}

pub fn cmd_stability(a: &StabilityArgs) -> Result<i32> {
    let text = read(&a.input)?;
    let report = with_path(&a.input, ReductionReport::from_json(&text))?;
    let problem = report.reduction_problem()?;
    let cfg = StabilityConfig { magnitudes_percent: parse_grid(&a.delta_grid)?, samples: a.samples, seed: a.seed };
    let out = stability_sweep(&report, &problem, &cfg)?;
    let mut buf = Vec::new();
    out.write_csv(&mut buf)?;
    fs::write(&a.output, buf)?;
    for r in &out.rows {
        println!("delta {:e}%: mean density err {:.3e}", r.delta_percent, r.mean_density_err);
    }
    Ok(EXIT_OK)
}

/// One (error, spread) point of a method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub spectral_error: Option<f64>,
    pub spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: String,
    pub points: Vec<ComparePoint>,
    /// Optimized coefficients with their basis labels (empty for the gadget).
    pub basis: Vec<String>,
    pub d: Vec<f64>,
    pub converged: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub target: String,
    pub methods: Vec<MethodResult>,
}

fn lro_method(name: &str, r: &ReductionReport) -> MethodResult {
    MethodResult {
        method: name.into(),
        points: vec![ComparePoint { delta: None, spectral_error: Some(r.spectral_abs_error), spread: Some(r.dm_spread) }],
        basis: r.basis.clone(),
        d: r.d.clone(),
        converged: Some(r.converged),
    }
}

/// Runs the gadget sweep and the 9- and 10-term reductions on one target.
pub fn compare(spec: &GadgetSpec, grid: &[f64], s: &SolveArgs) -> Result<Comparison> {
    let rows: Vec<SweepRow> = phg_sweep(spec, grid, s.im);
    let phg = MethodResult {
        method: "phg".into(),
        points: rows
            .iter()
            .map(|r| ComparePoint {
                delta: Some(r.delta),
                spectral_error: r.error.map(|e| e.spectral_error),
                spread: r.error.map(|e| e.spread),
            })
            .collect(),
        basis: Vec::new(),
        d: Vec::new(),
        converged: None,
    };
    let mut problem = lro_problem(spec)?;
    s.apply(&mut problem)?;
    let lro9 = optimize(&problem, &s.config(lro_init(spec, s.starts, s.seed)?)?)?;
    let lro10 = extend_report(&problem, &lro9, 1, s)?;
    Ok(Comparison {
        target: label_of(spec),
        methods: vec![phg, lro_method("lro9", &lro9), lro_method("lro10", &lro10)],
    })
}

fn label_of(spec: &GadgetSpec) -> String {
    let h = spec.target();
    let (s, a) = &h.terms()[0];
    format!("{a} {}", s.sparse_label())
}

pub fn cmd_compare(a: &CompareArgs) -> Result<i32> {
    let spec = load_spec(a.input.as_deref())?;
    let grid = parse_grid(&a.delta_grid)?;
    let c = compare(&spec, &grid, &a.solve)?;
    write(&a.output, &serde_json::to_string_pretty(&c)?)?;
    for m in &c.methods {
        for p in &m.points {
            println!(
                "{:<6} delta {:>8} error {:>10} spread {:>10}",
                m.method,
                p.delta.map(|d| format!("{d:.0e}")).unwrap_or_else(|| "-".into()),
                p.spectral_error.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "nan".into()),
                p.spread.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "nan".into()),
            );
        }
    }
    let unconverged = c.methods.iter().any(|m| m.converged == Some(false));
    Ok(if unconverged { EXIT_UNCONVERGED } else { EXIT_OK })
}
