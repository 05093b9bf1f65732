//! Numerical locality reduction: fit the coefficients of a 2-local term basis
//! in an ancilla-enlarged space so that its low-lying physical branch
//! reproduces a k-local target's spectrum and reduced density matrices.

mod basis;
mod branches;
mod cost;
mod extended_f64;
mod greedy;
mod ladder;
pub mod nelder_mead;
mod optimize;
mod problem;
mod stability;
mod validation;

pub use basis::{BasisTerm, BasisTermJson};
pub use branches::{classify_branches, BranchSplit};
pub use cost::{CostBreakdown, CostModel, Evaluation, GroupError};
pub use greedy::{greedy_extend, two_local_pool, CandidateScore, GreedyConfig, GreedyOutcome, GreedyStep};
pub use ladder::{reduce_ladder, LadderConfig, LadderOutcome, LadderStep};
pub use optimize::{optimize, InitStrategy, OptimizeConfig, Provenance, ReductionReport, StartSummary};
pub use problem::{GapMode, ProblemFile, ReductionProblem, Weights};
pub use stability::{stability_sweep, StabilityConfig, StabilityReport, StabilityRow};
pub use validation::{density_validation, DensityValidation, GroupValidation};

/// `max_ij |d_i - d_j|`.
pub fn spread(d: &[f64]) -> f64 {
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    if d.is_empty() {
        0.0
    } else {
        max - min
    }
}
