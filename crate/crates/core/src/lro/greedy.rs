use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

use super::basis::BasisTerm;
use super::optimize::{optimize, InitStrategy, OptimizeConfig, ReductionReport};
use super::problem::ReductionProblem;

/// Every Pauli string of locality 1 or 2 on `n` qubits whose operator is not
/// already one of `exclude`, in lexicographic order.
pub fn two_local_pool(n: usize, exclude: &[BasisTerm]) -> Vec<BasisTerm> {
    let labels = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut strings = Vec::new();
    for q in 1..=n {
        for &a in &labels {
            strings.push(PauliString::from_sparse(n, &[(q, a)]).expect("in range"));
            for r in q + 1..=n {
                for &b in &labels {
                    strings.push(PauliString::from_sparse(n, &[(q, a), (r, b)]).expect("in range"));
                }
            }
        }
    }
    strings.sort();
    strings
        .into_iter()
        .map(BasisTerm::pauli)
        .filter(|t| exclude.iter().all(|e| e.op() != t.op()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    /// Optimizer settings used to score each candidate.
    pub scoring: OptimizeConfig,
    /// Candidates whose score is within this of the best one tie.
    pub tie_tol: f64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        let scoring = OptimizeConfig {
            budget: 5_000,
            init: InitStrategy { levels: Vec::new(), ..Default::default() },
            ..Default::default()
        };
        Self { tie_tol: scoring.tol, scoring }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub label: String,
    #[serde(with = "super::extended_f64")]
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub scores: Vec<CandidateScore>,
    pub selected: String,
    /// Every candidate tied with the best score, in tie-break order.
    pub ties: Vec<String>,
    #[serde(with = "super::extended_f64")]
    pub cost_before: f64,
    #[serde(with = "super::extended_f64")]
    pub cost_after: f64,
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub problem: ReductionProblem,
    pub steps: Vec<GreedyStep>,
    /// Optimum on the extended basis (`start` when `count = 0`).
    pub report: ReductionReport,
}

fn tie_order(a: &BasisTerm, b: &BasisTerm) -> Ordering {
    match (a.as_string(), b.as_string()) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => a.label().cmp(b.label()),
    }
}

/// Appends `count` terms from `pool`, each time choosing the candidate whose
/// addition yields the lowest optimized cost. Every candidate is warm-started
/// from the current optimum with a zero coefficient on the new term, so the
/// cost never increases.
pub fn greedy_extend(
    problem: &ReductionProblem,
    start: &ReductionReport,
    pool: &[BasisTerm],
    count: usize,
    cfg: &GreedyConfig,
) -> Result<GreedyOutcome> {
    let mut problem = problem.clone();
    let mut report = start.clone();
    if start.d.len() != problem.basis.len() {
        return Err(Error::LengthMismatch { expected: problem.basis.len(), got: start.d.len() });
    }
    if count == 0 {
        return Ok(GreedyOutcome { problem, steps: Vec::new(), report });
    }
    if pool.is_empty() {
        return Err(Error::InvalidInput("candidate pool is empty".into()));
    }
    if let Some(t) = pool.iter().find(|t| problem.basis.iter().any(|b| b.op() == t.op())) {
        return Err(Error::InvalidInput(format!("candidate {t} is already in the basis")));
    }
    let mut remaining: Vec<BasisTerm> = pool.to_vec();
    let mut steps = Vec::new();
    for _ in 0..count {
        if remaining.is_empty() {
            break;
        }
        let mut scored = Vec::with_capacity(remaining.len());
        for cand in &remaining {
            let mut basis = problem.basis.clone();
            basis.push(cand.clone());
            let trial = problem.with_basis(basis)?;
            let mut warm = report.d.clone();
            warm.push(0.0);
            let mut cfg_c = cfg.scoring.clone();
            cfg_c.init = cfg_c.init.with_warm(warm);
            scored.push(optimize(&trial, &cfg_c)?);
        }
        let labels: Vec<String> = remaining.iter().map(|t| t.label().to_string()).collect();
        let best = scored.iter().map(|r| r.cost.total).fold(f64::INFINITY, f64::min);
        let mut ties: Vec<usize> =
            (0..remaining.len()).filter(|&i| scored[i].cost.total <= best + cfg.tie_tol).collect();
        ties.sort_by(|&a, &b| tie_order(&remaining[a], &remaining[b]));
        let tie_labels: Vec<String> = ties.iter().map(|&i| labels[i].clone()).collect();
        let scores: Vec<CandidateScore> = labels
            .into_iter()
            .zip(&scored)
            .map(|(label, r)| CandidateScore { label, cost: r.cost.total })
            .collect();
        let pick = ties[0];
        let chosen = remaining.remove(pick);
        let mut next = scored.swap_remove(pick);
        let cost_before = report.cost.total;
        let mut basis = problem.basis.clone();
        basis.push(chosen.clone());
        problem = problem.with_basis(basis)?;
        next.selected_terms = report.selected_terms.clone();
        next.selected_terms.push(chosen.label().to_string());
        steps.push(GreedyStep {
            scores,
            selected: chosen.label().to_string(),
            ties: tie_labels,
            cost_before,
            cost_after: next.cost.total,
        });
        report = next;
    }
    Ok(GreedyOutcome { problem, steps, report })
}
