use serde::{Deserialize, Serialize};

use crate::dense::{frobenius_distance, max_entry_distance, CMatrix};
use crate::error::{Error, Result};

use super::branches::{classify_branches, reduced_projector};
use super::cost::CostModel;
use super::optimize::ReductionReport;
use super::problem::ReductionProblem;

/// Comparison of one target degeneracy group with its reduced counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupValidation {
    pub start: usize,
    pub size: usize,
    pub eigenvalue: f64,
    /// Eigenvalues of the matched enlarged-space states.
    pub matched_eigenvalues: Vec<f64>,
    pub frobenius: f64,
    pub max_entry: f64,
    #[serde(skip)]
    pub target: CMatrix,
    #[serde(skip)]
    pub reduced: CMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityValidation {
    pub groups: Vec<GroupValidation>,
    pub ground_overlap: f64,
}

impl DensityValidation {
    pub fn max_entry_error(&self) -> f64 {
        self.groups.iter().map(|g| g.max_entry).fold(0.0, f64::max)
    }
}

/// Compares target group projectors `n_g^p` with `Tr_a` of the projector
/// onto the matching physical-branch states of the reduced Hamiltonian.
pub fn density_validation(report: &ReductionReport, problem: &ReductionProblem) -> Result<DensityValidation> {
    let model = CostModel::new(problem)?;
    if report.d.len() != model.dim() {
        return Err(Error::LengthMismatch { expected: model.dim(), got: report.d.len() });
    }
    let spec = model.spectrum(&report.d);
    let (n_p, n_a) = (problem.n_physical(), problem.n_ancilla);
    let split = classify_branches(&spec, n_p, n_a)?;
    let mut groups = Vec::new();
    for (g, range) in model.tracked_groups().iter().enumerate() {
        // the matched states must not share a degeneracy group with states
        // outside the target group
        let straddles = |i: usize| i > 0 && i < spec.dim() && spec.group_of(i - 1) == spec.group_of(i);
        let full_end = model.target_spectrum().groups.iter().any(|t| t.end == range.end);
        if straddles(range.start) || (full_end && straddles(range.end)) {
            return Err(Error::GroupMismatch(format!(
                "reduced degeneracy groups do not align with target group {}..{}",
                range.start, range.end
            )));
        }
        let target = model.target_projector(g).clone();
        let reduced = reduced_projector(&spec.eigenvectors, range.clone(), n_p, n_a);
        groups.push(GroupValidation {
            start: range.start,
            size: range.len(),
            eigenvalue: model.target_spectrum().eigenvalues[range.start],
            matched_eigenvalues: spec.eigenvalues[range.clone()].to_vec(),
            frobenius: frobenius_distance(&target, &reduced),
            max_entry: max_entry_distance(&target, &reduced),
            target,
            reduced,
        });
    }
    Ok(DensityValidation { groups, ground_overlap: split.ground_overlap })
}
