//! The reduction cost `D = a1*C1 + a2*C2 + a3*C3`.
//!
//! * `C1` sums squared deviations of the lowest `i_m` eigenvalues.
//! * `C2` sums, over degeneracy groups of the target within `i_m`, the
//!   Frobenius distance between the target group projector and the ancilla
//!   partial trace of the matching enlarged-space projector.
//! * `C3` scores the gap between the ancilla branch and the tracked physical
//!   levels (see [`GapMode`]).

use std::ops::Range;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dense::{
    eig, eig_real, frobenius_distance, max_entry_distance, projector_over, to_dense, CMatrix,
    HermitianOperator, Spectrum, DEFAULT_QUBIT_CAP,
};
use crate::error::Result;
use crate::pauli::{Pauli, PauliHamiltonian};

use super::branches::{classify_branches, reduced_projector, BranchSplit};
use super::problem::{GapMode, ReductionProblem};

/// Components of the cost at one coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    #[serde(with = "super::extended_f64")]
    pub total: f64,
    #[serde(with = "super::extended_f64")]
    pub c1: f64,
    #[serde(with = "super::extended_f64")]
    pub c2: f64,
    #[serde(with = "super::extended_f64")]
    pub c3: f64,
}

impl CostBreakdown {
    /// Sentinel for trial points where the branch structure collapsed.
    pub fn infeasible() -> Self {
        Self { total: f64::INFINITY, c1: f64::INFINITY, c2: f64::INFINITY, c3: f64::INFINITY }
    }

    pub fn is_feasible(&self) -> bool {
        self.total.is_finite()
    }
}

/// Error of one tracked target degeneracy group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupError {
    pub start: usize,
    pub size: usize,
    #[serde(with = "super::extended_f64")]
    pub eigenvalue: f64,
    #[serde(with = "super::extended_f64")]
    pub frobenius: f64,
    #[serde(with = "super::extended_f64")]
    pub max_entry: f64,
    /// `frobenius / ||n_target||_F`.
    #[serde(with = "super::extended_f64")]
    pub relative: f64,
}

/// Everything derived from one trial Hamiltonian.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub cost: CostBreakdown,
    pub spectrum: Spectrum,
    pub split: Option<BranchSplit>,
    pub spectral_abs_error: f64,
    pub group_errors: Vec<GroupError>,
    /// `min(ancilla) - max(tracked physical)`; NaN when infeasible.
    pub branch_gap: f64,
}

enum Basis {
    Real(Vec<DMatrix<f64>>, DMatrix<f64>),
    Complex(Vec<CMatrix>, CMatrix),
}

impl Basis {
    fn len(&self) -> usize {
        match self {
            Basis::Real(m, _) => m.len(),
            Basis::Complex(m, _) => m.len(),
        }
    }
}

/// Precomputed state for repeated cost evaluations of one problem.
pub struct CostModel {
    problem: ReductionProblem,
    target: Spectrum,
    groups: Vec<Range<usize>>,
    target_projectors: Vec<CMatrix>,
    basis: Basis,
}

fn is_real(h: &PauliHamiltonian) -> bool {
    h.terms()
        .iter()
        .all(|(s, _)| s.ops().iter().filter(|&&p| p == Pauli::Y).count() % 2 == 0)
}

impl CostModel {
    pub fn new(problem: &ReductionProblem) -> Result<Self> {
        problem.validate()?;
        let target = eig(&to_dense(&problem.target, DEFAULT_QUBIT_CAP)?, problem.grouping_tol);
        let groups: Vec<Range<usize>> = target
            .groups
            .iter()
            .filter(|g| g.start < problem.i_m)
            .map(|g| g.start..g.end.min(problem.i_m))
            .collect();
        let target_projectors = groups.iter().map(|g| projector_over(&target, g.clone())).collect();

        let n = problem.n_total();
        let dim = 1usize << n;
        let fixed = problem.fixed.clone().unwrap_or_else(|| PauliHamiltonian::empty(n));
        let all_real = is_real(&fixed) && problem.basis.iter().all(|b| is_real(b.op()));
        let basis = if all_real {
            let mat = |h: &PauliHamiltonian| {
                let mut m = DMatrix::<f64>::zeros(dim, dim);
                for (s, c) in h.terms() {
                    crate::dense::accumulate_string_real(&mut m, s, *c);
                }
                m
            };
            Basis::Real(problem.basis.iter().map(|b| mat(b.op())).collect(), mat(&fixed))
        } else {
            let mat = |h: &PauliHamiltonian| to_dense(h, DEFAULT_QUBIT_CAP).map(HermitianOperator::into_entries);
            Basis::Complex(
                problem.basis.iter().map(|b| mat(b.op())).collect::<Result<Vec<_>>>()?,
                mat(&fixed)?,
            )
        };
        Ok(Self { problem: problem.clone(), target, groups, target_projectors, basis })
    }

    pub fn problem(&self) -> &ReductionProblem {
        &self.problem
    }

    pub fn target_spectrum(&self) -> &Spectrum {
        &self.target
    }

    /// Tracked target degeneracy groups (truncated at `i_m`).
    pub fn tracked_groups(&self) -> &[Range<usize>] {
        &self.groups
    }

    pub fn target_projector(&self, group: usize) -> &CMatrix {
        &self.target_projectors[group]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `H_2L = fixed + sum_i d_i B_i` as a Pauli Hamiltonian.
    pub fn hamiltonian(&self, d: &[f64]) -> Result<PauliHamiltonian> {
        let n = self.problem.n_total();
        let mut h = self.problem.fixed.clone().unwrap_or_else(|| PauliHamiltonian::empty(n));
        for (di, b) in d.iter().zip(&self.problem.basis) {
            h = h.plus(&b.op().scaled(*di))?;
        }
        Ok(h)
    }

    pub fn spectrum(&self, d: &[f64]) -> Spectrum {
        assert_eq!(d.len(), self.dim(), "coefficient vector length must match the basis");
        let tol = self.problem.grouping_tol;
        match &self.basis {
            Basis::Real(mats, fixed) => {
                let mut h = fixed.clone();
                for (di, m) in d.iter().zip(mats) {
                    h.zip_apply(m, |a, b| *a += di * b);
                }
                eig_real(h, tol)
            }
            Basis::Complex(mats, fixed) => {
                let mut h = fixed.clone();
                for (di, m) in d.iter().zip(mats) {
                    h.zip_apply(m, |a, b| *a += b * *di);
                }
                eig(&HermitianOperator::new(h).expect("real combination of Hermitian terms"), tol)
            }
        }
    }

    /// Scalar cost, `+inf` when the branch structure collapses.
    pub fn cost(&self, d: &[f64]) -> f64 {
        self.evaluate(d).cost.total
    }

    /// Cost components computed with the physical branch forced to the
    /// lowest `2^n_p` levels, skipping the collapse check. Finite everywhere;
    /// used to move collapsed starting points into the feasible region.
    pub fn relaxed(&self, d: &[f64]) -> CostBreakdown {
        let spectrum = self.spectrum(d);
        let p = &self.problem;
        let cut = 1usize << p.n_physical();
        let dim = spectrum.dim();
        let split = BranchSplit {
            physical: 0..cut.min(dim),
            ancilla: cut.min(dim)..dim,
            ground_overlap: f64::NAN,
            completeness_defect: f64::NAN,
        };
        self.components(spectrum, split).cost
    }

    pub fn evaluate(&self, d: &[f64]) -> Evaluation {
        let spectrum = self.spectrum(d);
        self.evaluate_spectrum(spectrum)
    }

    pub fn evaluate_spectrum(&self, spectrum: Spectrum) -> Evaluation {
        let p = &self.problem;
        let (n_p, n_a) = (p.n_physical(), p.n_ancilla);
        let split = match classify_branches(&spectrum, n_p, n_a) {
            Ok(s) => s,
            Err(_) => {
                return Evaluation {
                    cost: CostBreakdown::infeasible(),
                    spectrum,
                    split: None,
                    spectral_abs_error: f64::INFINITY,
                    group_errors: Vec::new(),
                    branch_gap: f64::NAN,
                }
            }
        };
        self.components(spectrum, split)
    }

    fn components(&self, spectrum: Spectrum, split: BranchSplit) -> Evaluation {
        let p = &self.problem;
        let (n_p, n_a, i_m) = (p.n_physical(), p.n_ancilla, p.i_m);
        let target = &self.target.eigenvalues;
        let got = &spectrum.eigenvalues;
        let c1: f64 = (0..i_m).map(|i| (target[i] - got[i]).powi(2)).sum();
        let spectral_abs_error: f64 = (0..i_m).map(|i| (target[i] - got[i]).abs()).sum();

        let mut c2 = 0.0;
        let mut group_errors = Vec::with_capacity(self.groups.len());
        for (g, range) in self.groups.iter().enumerate() {
            let reduced = reduced_projector(&spectrum.eigenvectors, range.clone(), n_p, n_a);
            let reference = &self.target_projectors[g];
            let frobenius = frobenius_distance(reference, &reduced);
            c2 += frobenius;
            group_errors.push(GroupError {
                start: range.start,
                size: range.len(),
                eigenvalue: target[range.start],
                frobenius,
                max_entry: max_entry_distance(reference, &reduced),
                relative: frobenius / (range.len() as f64).sqrt(),
            });
        }

        let (c3, branch_gap) = if split.ancilla.is_empty() {
            (0.0, f64::INFINITY)
        } else {
            let gap = got[split.ancilla.start] - got[i_m - 1];
            let c3 = match p.gap_mode {
                GapMode::Literal => gap.abs(),
                GapMode::Hinge => (p.gap_target - gap).max(0.0).powi(2),
            };
            (c3, gap)
        };
        let w = p.weights;
        let total = w.spectrum * c1 + w.density * c2 + w.gap * c3;
        Evaluation {
            cost: CostBreakdown { total, c1, c2, c3 },
            spectrum,
            split: Some(split),
            spectral_abs_error,
            group_errors,
            branch_gap,
        }
    }
}
