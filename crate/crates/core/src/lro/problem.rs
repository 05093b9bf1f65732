use serde::{Deserialize, Serialize};

use crate::dense::{eig, to_dense, DEFAULT_GROUPING_TOL, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::pauli::{HamiltonianJson, PauliHamiltonian};

use super::basis::{BasisTerm, BasisTermJson};

/// How the branch-gap component of the cost is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMode {
    /// `|min(ancilla) - max(tracked physical)|`.
    Literal,
    /// `max(0, gap_target - (min(ancilla) - max(tracked physical)))^2`.
    Hinge,
}

impl std::str::FromStr for GapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(GapMode::Literal),
            "hinge" => Ok(GapMode::Hinge),
            other => Err(Error::InvalidInput(format!("unknown gap mode {other:?}"))),
        }
    }
}

/// Weights `(spectrum, density, gap)` of the three cost components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub spectrum: f64,
    pub density: f64,
    pub gap: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self { spectrum: 1.0, density: 1.0, gap: 1.0 }
    }
}

impl std::str::FromStr for Weights {
    type Err = Error;

    /// Parses `a1,a2,a3`.
    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad weights {s:?}: {e}")))?;
        match v.as_slice() {
            [a, b, c] => Ok(Self { spectrum: *a, density: *b, gap: *c }),
            _ => Err(Error::InvalidInput(format!("expected three weights, got {s:?}"))),
        }
    }
}

/// A k-local target together with the term basis used to rebuild it in an
/// ancilla-enlarged space. Ancilla qubits are appended after the physical ones.
#[derive(Debug, Clone)]
pub struct ReductionProblem {
    pub target: PauliHamiltonian,
    pub n_ancilla: usize,
    pub basis: Vec<BasisTerm>,
    /// Number of tracked low-lying physical eigenvalues.
    pub i_m: usize,
    pub weights: Weights,
    pub gap_mode: GapMode,
    pub gap_target: f64,
    /// Operator on the enlarged space added to every trial Hamiltonian.
    pub fixed: Option<PauliHamiltonian>,
    /// Largest locality allowed in a basis term.
    pub max_basis_locality: usize,
    pub grouping_tol: f64,
}

impl ReductionProblem {
    /// Builds a problem with default settings (`i_m = 2^n_p`, unit weights,
    /// hinge gap mode with target twice the target's spectral width).
    pub fn new(target: PauliHamiltonian, n_ancilla: usize, basis: Vec<BasisTerm>) -> Result<Self> {
        Self::with_max_locality(target, n_ancilla, basis, 2)
    }

    /// As [`ReductionProblem::new`], accepting basis terms up to locality `max`.
    pub fn with_max_locality(
        target: PauliHamiltonian,
        n_ancilla: usize,
        basis: Vec<BasisTerm>,
        max: usize,
    ) -> Result<Self> {
        let n_p = target.n_qubits();
        let width = spectral_width(&target)?;
        let p = Self {
            i_m: 1 << n_p,
            target,
            n_ancilla,
            basis,
            weights: Weights::default(),
            gap_mode: GapMode::Hinge,
            gap_target: 2.0 * width,
            fixed: None,
            max_basis_locality: max,
            grouping_tol: DEFAULT_GROUPING_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn n_physical(&self) -> usize {
        self.target.n_qubits()
    }

    pub fn n_total(&self) -> usize {
        self.n_physical() + self.n_ancilla
    }

    pub fn with_basis(&self, basis: Vec<BasisTerm>) -> Result<Self> {
        let mut p = self.clone();
        p.basis = basis;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_total();
        if self.basis.is_empty() {
            return Err(Error::InvalidInput("basis must be nonempty".into()));
        }
        for (i, b) in self.basis.iter().enumerate() {
            if b.n_qubits() != n {
                return Err(Error::LengthMismatch { expected: n, got: b.n_qubits() });
            }
            if b.locality() > self.max_basis_locality {
                return Err(Error::InvalidInput(format!(
                    "basis term {} has locality {} > {}",
                    b,
                    b.locality(),
                    self.max_basis_locality
                )));
            }
            if self.basis[..i].iter().any(|o| o.op() == b.op()) {
                return Err(Error::InvalidInput(format!("duplicate basis term {b}")));
            }
        }
        if let Some(f) = &self.fixed {
            if f.n_qubits() != n {
                return Err(Error::LengthMismatch { expected: n, got: f.n_qubits() });
            }
        }
        let max_im = 1usize << self.n_physical();
        if self.i_m == 0 || self.i_m > max_im {
            return Err(Error::InvalidInput(format!("i_m = {} outside 1..={max_im}", self.i_m)));
        }
        let w = self.weights;
        if w.spectrum < 0.0 || w.density < 0.0 || w.gap < 0.0 {
            return Err(Error::InvalidInput("weights must be nonnegative".into()));
        }
        if n > DEFAULT_QUBIT_CAP {
            return Err(Error::ResourceCap { qubits: n, cap: DEFAULT_QUBIT_CAP });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProblemFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProblemFile = serde_json::from_str(text)?;
        raw.try_into()
    }
}

fn spectral_width(h: &PauliHamiltonian) -> Result<f64> {
    let spec = eig(&to_dense(h, DEFAULT_QUBIT_CAP)?, DEFAULT_GROUPING_TOL);
    let first = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let last = spec.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(last - first)
}

/// On-disk form of a [`ReductionProblem`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub target: HamiltonianJson,
    pub n_ancilla: usize,
    pub basis: Vec<BasisTermJson>,
    #[serde(default)]
    pub i_m: Option<usize>,
    #[serde(default)]
    pub weights: Option<Weights>,
    #[serde(default)]
    pub gap_mode: Option<GapMode>,
    #[serde(default)]
    pub gap_target: Option<f64>,
    #[serde(default)]
    pub fixed: Option<HamiltonianJson>,
    #[serde(default)]
    pub max_basis_locality: Option<usize>,
}

impl From<&ReductionProblem> for ProblemFile {
    fn from(p: &ReductionProblem) -> Self {
        Self {
            target: HamiltonianJson::from(&p.target),
            n_ancilla: p.n_ancilla,
            basis: p.basis.iter().map(BasisTermJson::from).collect(),
            i_m: Some(p.i_m),
            weights: Some(p.weights),
            gap_mode: Some(p.gap_mode),
            gap_target: Some(p.gap_target),
            fixed: p.fixed.as_ref().map(HamiltonianJson::from),
            max_basis_locality: Some(p.max_basis_locality),
        }
    }
}

impl TryFrom<ProblemFile> for ReductionProblem {
    type Error = Error;

    fn try_from(raw: ProblemFile) -> Result<Self> {
        let target = PauliHamiltonian::try_from(raw.target)?;
        let n = target.n_qubits() + raw.n_ancilla;
        let basis = raw
            .basis
            .into_iter()
            .map(|b| b.into_term(n))
            .collect::<Result<Vec<_>>>()?;
        let mut p = ReductionProblem::new(target, raw.n_ancilla, basis)?;
        if let Some(v) = raw.i_m {
            p.i_m = v;
        }
        if let Some(v) = raw.weights {
            p.weights = v;
        }
        if let Some(v) = raw.gap_mode {
            p.gap_mode = v;
        }
        if let Some(v) = raw.gap_target {
            p.gap_target = v;
        }
        if let Some(v) = raw.max_basis_locality {
            p.max_basis_locality = v;
        }
        p.fixed = raw.fixed.map(PauliHamiltonian::try_from).transpose()?;
        p.validate()?;
        Ok(p)
    }
}
