use serde::{Deserialize, Serialize};

use crate::dense::{eig, to_dense, DEFAULT_GROUPING_TOL, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::gadget::{cao_coefficients, SEED_DELTAS};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString, PauliTerm};

use super::basis::BasisTerm;
use super::optimize::{optimize, InitStrategy, OptimizeConfig, ReductionReport};
use super::problem::{GapMode, ReductionProblem, Weights};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Settings for every step. Gadget seeds are added to `optimize.init`.
    pub optimize: OptimizeConfig,
    /// Largest input locality accepted.
    pub locality_cap: usize,
    /// Gaps at which each step is seeded with the perturbative gadget.
    pub seed_deltas: Vec<f64>,
    pub weights: Weights,
    pub gap_mode: GapMode,
}

impl Default for LadderConfig {
    fn default() -> Self {
        let optimize = OptimizeConfig {
            init: InitStrategy { levels: Vec::new(), ..Default::default() },
            budget: 50_000,
            batch: 1,
            ..Default::default()
        };
        Self {
            optimize,
            locality_cap: 5,
            seed_deltas: SEED_DELTAS.to_vec(),
            weights: Weights::default(),
            gap_mode: GapMode::Hinge,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderStep {
    pub locality_before: usize,
    pub locality_after: usize,
    /// Strings replaced in this step, each with its own new ancilla.
    pub reduced: Vec<String>,
    /// 1-based indices of the ancillas added.
    pub ancillas: Vec<usize>,
    pub report: ReductionReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderOutcome {
    /// Reduced Hamiltonian on the physical qubits followed by the ancillas.
    pub hamiltonian: PauliHamiltonian,
    pub n_physical: usize,
    pub n_ancilla: usize,
    pub steps: Vec<LadderStep>,
    /// `max_i |eps_i - eps_i^exact|` over the physical branch.
    pub max_spectral_deviation: f64,
}

/// Splits a string of locality >= 3 into its first factor, its second
/// factor and the remainder.
fn cao_factors(s: &PauliString, n: usize) -> (PauliString, PauliString, PauliString) {
    let support = s.support();
    let one = |q: usize| PauliString::from_sparse(n, &[(q, s.get(q))]).expect("in range");
    let rest: Vec<(usize, Pauli)> = support[2..].iter().map(|&q| (q, s.get(q))).collect();
    let rest = PauliString::from_sparse(n, &rest).expect("in range");
    (one(support[0]), one(support[1]), rest)
}

fn with_factor(s: &PauliString, q: usize, p: Pauli) -> PauliString {
    let mut ops = s.ops().to_vec();
    ops[q - 1] = p;
    PauliString::new(ops).expect("nonempty")
}

/// `P |1><1|_w = (P - P Z_w) / 2`.
fn projected(p: &PauliString, w: usize, label: String) -> Result<BasisTerm> {
    let n = p.len();
    let h = PauliHamiltonian::assemble(
        [PauliTerm::new(0.5, p.clone()), PauliTerm::new(-0.5, with_factor(p, w, Pauli::Z))],
        n,
    )?;
    BasisTerm::operator(label, h)
}

/// The nine gadget directions for `F1 F2 F3` with ancilla `w`.
fn cao_basis(s: &PauliString, w: usize) -> Result<Vec<BasisTerm>> {
    let n = s.len();
    let (f1, f2, f3) = cao_factors(s, n);
    let ident = PauliString::identity(n);
    let prod = |a: &PauliString, b: &PauliString| {
        let mut ops = a.ops().to_vec();
        for (o, &p) in ops.iter_mut().zip(b.ops()) {
            if p != Pauli::I {
                *o = p;
            }
        }
        PauliString::new(ops).expect("nonempty")
    };
    Ok(vec![
        projected(&ident, w, format!("|1><1|_{w}"))?,
        projected(&f3, w, format!("{} |1><1|_{w}", f3.sparse_label()))?,
        BasisTerm::pauli(with_factor(&f1, w, Pauli::X)),
        BasisTerm::pauli(with_factor(&f2, w, Pauli::X)),
        BasisTerm::pauli(prod(&f1, &f2)),
        BasisTerm::pauli(f3),
        BasisTerm::pauli(ident),
        BasisTerm::pauli(f1),
        BasisTerm::pauli(f2),
    ])
}

fn combine(basis: &[BasisTerm], d: &[f64], n: usize) -> Result<PauliHamiltonian> {
    let mut h = PauliHamiltonian::empty(n);
    for (b, &c) in basis.iter().zip(d) {
        h = h.plus(&b.op().scaled(c))?;
    }
    Ok(h)
}

/// Reduces `h` to a 2-local Hamiltonian by lowering the largest locality by
/// one per step. Each string of maximal locality `k` gets a new ancilla and
/// the gadget directions `|1><1|_w`, `F3 |1><1|_w`, `F1 X_w`, `F2 X_w`,
/// `F1 F2`, `F3`, `I`, `F1`, `F2`, with `F1`, `F2` its first two factors and
/// `F3` the remaining `k - 2`. All other strings stay free. The coefficients
/// are refit against the spectrum and ground projectors of `h` itself.
pub fn reduce_ladder(h: &PauliHamiltonian, cfg: &LadderConfig) -> Result<LadderOutcome> {
    let n_p = h.n_qubits();
    let k0 = h.max_locality();
    if k0 > cfg.locality_cap {
        return Err(Error::InvalidInput(format!("locality {k0} exceeds the cap {}", cfg.locality_cap)));
    }
    let exact = eig(&to_dense(h, DEFAULT_QUBIT_CAP)?, DEFAULT_GROUPING_TOL);
    let mut current = h.clone();
    let mut n_a = 0;
    let mut steps: Vec<LadderStep> = Vec::new();
    while current.max_locality() > 2 {
        let k = current.max_locality();
        let high: Vec<(PauliString, f64)> =
            current.terms().iter().filter(|(s, _)| s.locality() == k).cloned().collect();
        let n_new = n_a + high.len() + n_p;
        if n_new > DEFAULT_QUBIT_CAP {
            return Err(Error::ResourceCap { qubits: n_new, cap: DEFAULT_QUBIT_CAP });
        }
        let extra = high.len();
        let mut basis: Vec<BasisTerm> = Vec::new();
        // gadget seeds per delta, accumulated per basis index
        let mut seeds: Vec<Vec<f64>> = vec![Vec::new(); cfg.seed_deltas.len()];
        let add = |basis: &mut Vec<BasisTerm>, t: BasisTerm, vals: &[f64], seeds: &mut Vec<Vec<f64>>| {
            let idx = match basis.iter().position(|b| b.op() == t.op()) {
                Some(i) => i,
                None => {
                    basis.push(t);
                    for s in seeds.iter_mut() {
                        s.push(0.0);
                    }
                    basis.len() - 1
                }
            };
            for (s, v) in seeds.iter_mut().zip(vals) {
                s[idx] += v;
            }
        };
        let mut ancillas = Vec::new();
        for (j, (s, a)) in high.iter().enumerate() {
            let w = n_p + n_a + j + 1;
            ancillas.push(w);
            let s = s.extended(n_p + n_a + extra - s.len());
            let coeffs: Vec<[f64; 9]> =
                cfg.seed_deltas.iter().map(|&dl| cao_coefficients(*a, dl)).collect::<Result<_>>()?;
            for (i, t) in cao_basis(&s, w)?.into_iter().enumerate() {
                let vals: Vec<f64> = coeffs.iter().map(|c| c[i]).collect();
                add(&mut basis, t, &vals, &mut seeds);
            }
        }
        for (s, c) in current.terms().iter().filter(|(s, _)| s.locality() < k) {
            let t = BasisTerm::pauli(s.extended(extra));
            add(&mut basis, t, &vec![*c; cfg.seed_deltas.len()], &mut seeds);
        }
        n_a += extra;
        let mut problem = ReductionProblem::with_max_locality(h.clone(), n_a, basis, (k - 1).max(2))?;
        problem.weights = cfg.weights;
        problem.gap_mode = cfg.gap_mode;

        let mut opt = cfg.optimize.clone();
        let mut warm = std::mem::take(&mut opt.init.warm);
        warm.splice(0..0, seeds);
        opt.init.warm = warm;
        let report = optimize(&problem, &opt)?;
        let step = steps.len() + 1;
        if !report.converged {
            return Err(Error::Unconverged { step, cost: report.cost.total, partial: steps });
        }
        current = combine(&problem.basis, &report.d, n_p + n_a)?;
        steps.push(LadderStep {
            locality_before: k,
            locality_after: current.max_locality(),
            reduced: high.iter().map(|(s, _)| s.sparse_label()).collect(),
            ancillas,
            report,
        });
    }
    let got = eig(&to_dense(&current, DEFAULT_QUBIT_CAP)?, DEFAULT_GROUPING_TOL);
    let max_spectral_deviation = exact
        .eigenvalues
        .iter()
        .zip(&got.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(LadderOutcome { hamiltonian: current, n_physical: n_p, n_ancilla: n_a, steps, max_spectral_deviation })
}
