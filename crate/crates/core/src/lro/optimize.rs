use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cost::{CostBreakdown, CostModel, GroupError};
use super::nelder_mead::{minimize, NelderMeadConfig};
use super::problem::{ProblemFile, ReductionProblem};
use super::spread;

/// Where the multi-start search begins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitStrategy {
    /// Uniform starts `d_i = level` for every level.
    pub levels: Vec<f64>,
    /// Number of seeded random starts `d_i ~ scale * U(-1, 1)`.
    pub jitter: usize,
    /// When nonzero, this many random points are drawn and only the `jitter`
    /// with the lowest cost are kept as starts.
    pub screen: usize,
    pub jitter_scale: f64,
    pub seed: u64,
    /// Explicit starting vectors, tried first.
    pub warm: Vec<Vec<f64>>,
}

impl Default for InitStrategy {
    fn default() -> Self {
        Self { levels: vec![1.0, 1e1, 1e2, 1e3, 1e4], jitter: 0, screen: 0, jitter_scale: 10.0, seed: 0, warm: Vec::new() }
    }
}

impl InitStrategy {
    pub fn with_jitter(mut self, count: usize, seed: u64) -> Self {
        self.jitter = count;
        self.seed = seed;
        self
    }

    pub fn with_screen(mut self, screen: usize) -> Self {
        self.screen = screen;
        self
    }

    pub fn with_warm(mut self, d: Vec<f64>) -> Self {
        self.warm.push(d);
        self
    }

    fn starts(&self, model: &CostModel) -> Result<Vec<(String, Vec<f64>)>> {
        let dim = model.dim();
        let mut out = Vec::new();
        for (i, w) in self.warm.iter().enumerate() {
            if w.len() != dim {
                return Err(Error::LengthMismatch { expected: dim, got: w.len() });
            }
            out.push((format!("warm {i}"), w.clone()));
        }
        for &l in &self.levels {
            out.push((format!("uniform {l:e}"), vec![l; dim]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let draws = self.jitter.max(self.screen);
        let points: Vec<Vec<f64>> = (0..draws)
            .map(|_| (0..dim).map(|_| self.jitter_scale * rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut keep: Vec<usize> = (0..draws).collect();
        if self.screen > self.jitter {
            // rank by the density term first: it is piecewise constant and
            // fixes the basin, which local search cannot change
            let costs: Vec<(f64, f64)> = points
                .par_iter()
                .map(|d| {
                    let c = model.evaluate(d).cost;
                    ((c.c2 * 1e6).round() / 1e6, c.total)
                })
                .collect();
            keep.sort_by(|&a, &b| {
                costs[a].0.total_cmp(&costs[b].0).then(costs[a].1.total_cmp(&costs[b].1)).then(a.cmp(&b))
            });
            keep.truncate(self.jitter);
        }
        for j in keep {
            out.push((format!("jitter {j}"), points[j].clone()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub init: InitStrategy,
    /// Cost evaluations per start.
    pub budget: usize,
    /// Convergence threshold on `D`.
    pub tol: f64,
    /// A start stops early once `D` reaches this; otherwise it runs until
    /// its simplex collapses or its budget is spent.
    pub polish_target: f64,
    /// Starts are run in fixed-size batches; the search stops after the first
    /// batch that yields a converged result. Among converged starts the one
    /// with the smallest coefficient spread is reported.
    pub batch: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self { init: InitStrategy::default(), budget: 200_000, tol: 1e-8, polish_target: 1e-20, batch: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub label: String,
    #[serde(with = "super::extended_f64")]
    pub cost: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Label of the start that produced the reported optimum.
    pub start: String,
    pub evaluations: usize,
    pub restarts: usize,
    pub seed: u64,
    pub starts: Vec<StartSummary>,
}

/// Result of an LRO run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionReport {
    pub problem: ProblemFile,
    pub basis: Vec<String>,
    pub d: Vec<f64>,
    pub cost: CostBreakdown,
    #[serde(with = "super::extended_f64")]
    pub spectral_abs_error: f64,
    pub dm_spread: f64,
    pub density_errors: Vec<GroupError>,
    #[serde(with = "super::extended_f64")]
    pub branch_gap: f64,
    pub converged: bool,
    pub tol: f64,
    pub provenance: Provenance,
    /// Terms added by greedy extension, in order.
    #[serde(default)]
    pub selected_terms: Vec<String>,
}

impl ReductionReport {
    /// Builds a report for a given coefficient vector.
    pub fn at(model: &CostModel, d: Vec<f64>, tol: f64, provenance: Provenance) -> Self {
        let e = model.evaluate(&d);
        let p = model.problem();
        Self {
            problem: ProblemFile::from(p),
            basis: p.basis.iter().map(|b| b.label().to_string()).collect(),
            dm_spread: spread(&d),
            d,
            cost: e.cost,
            spectral_abs_error: e.spectral_abs_error,
            density_errors: e.group_errors,
            branch_gap: e.branch_gap,
            converged: e.cost.total <= tol,
            tol,
            provenance,
            selected_terms: Vec::new(),
        }
    }

    pub fn reduction_problem(&self) -> Result<ReductionProblem> {
        ReductionProblem::try_from(self.problem.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

struct StartResult {
    d: Vec<f64>,
    f: f64,
    evals: usize,
    restarts: usize,
}

fn run_start(model: &CostModel, x0: &[f64], cfg: &OptimizeConfig) -> StartResult {
    let mut x0 = x0.to_vec();
    let mut used = 0;
    if !model.cost(&x0).is_finite() {
        // move off the collapsed start before minimizing the cost itself
        let phase = NelderMeadConfig { max_evals: (cfg.budget / 10).max(1), ..Default::default() };
        let r = minimize(
            |d| if model.cost(d).is_finite() { 0.0 } else { 1.0 + model.relaxed(d).total },
            &x0,
            &phase,
        );
        x0 = r.x;
        used = r.evals;
    }
    let nm = NelderMeadConfig {
        max_evals: cfg.budget.saturating_sub(used).max(1),
        f_target: cfg.polish_target,
        ..Default::default()
    };
    let r = minimize(|d| model.cost(d), &x0, &nm);
    StartResult { d: r.x, f: r.f, evals: r.evals + used, restarts: r.restarts }
}

/// Lower cost wins; among converged results the smaller spread wins.
fn better(a: &StartResult, b: &StartResult, tol: f64) -> bool {
    match (a.f <= tol, b.f <= tol) {
        (true, true) => spread(&a.d) < spread(&b.d),
        _ => a.f < b.f,
    }
}

/// Multi-start Nelder-Mead minimization of the reduction cost.
///
/// Deterministic for a fixed `(problem, cfg)`: starts are generated from the
/// seed and results are merged by start index.
pub fn optimize(problem: &ReductionProblem, cfg: &OptimizeConfig) -> Result<ReductionReport> {
    if cfg.budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    let model = CostModel::new(problem)?;
    let starts = cfg.init.starts(&model)?;
    if starts.is_empty() {
        return Err(Error::InvalidInput("no starting points".into()));
    }
    let mut summaries = Vec::with_capacity(starts.len());
    let mut best: Option<(usize, StartResult)> = None;
    let mut total = 0;
    for (b, chunk) in starts.chunks(cfg.batch.max(1)).enumerate() {
        let results: Vec<StartResult> = chunk.par_iter().map(|(_, x0)| run_start(&model, x0, cfg)).collect();
        for (k, r) in results.into_iter().enumerate() {
            let idx = b * cfg.batch.max(1) + k;
            total += r.evals;
            summaries.push(StartSummary { label: starts[idx].0.clone(), cost: r.f, evaluations: r.evals });
            if best.as_ref().map_or(true, |(_, cur)| better(&r, cur, cfg.tol)) {
                best = Some((idx, r));
            }
        }
        if best.as_ref().is_some_and(|(_, r)| r.f <= cfg.tol) {
            break;
        }
    }
    let (idx, r) = best.expect("at least one start");
    let provenance = Provenance {
        start: starts[idx].0.clone(),
        evaluations: total,
        restarts: r.restarts,
        seed: cfg.init.seed,
        starts: summaries,
    };
    Ok(ReductionReport::at(&model, r.d, cfg.tol, provenance))
}
