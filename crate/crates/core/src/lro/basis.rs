use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{HamiltonianJson, PauliHamiltonian, PauliString, PauliTerm, TermJson};

/// One optimizable direction of the reduced Hamiltonian: a fixed Hermitian
/// operator whose overall coefficient `d_i` is free.
///
/// Most terms are a single Pauli string. Projector-type terms such as
/// `P ⊗ |1><1|_u = (P - P Z_u)/2` are kept as one operator so that their
/// Pauli components share a coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTerm {
    label: String,
    operator: PauliHamiltonian,
}

impl BasisTerm {
    pub fn pauli(s: PauliString) -> Self {
        let n = s.len();
        let operator =
            PauliHamiltonian::assemble([PauliTerm::new(1.0, s.clone())], n).expect("unit term is Hermitian");
        Self { label: s.sparse_label(), operator }
    }

    pub fn operator(label: impl Into<String>, operator: PauliHamiltonian) -> Result<Self> {
        if operator.is_empty() {
            return Err(Error::InvalidInput("basis operator must be nonzero".into()));
        }
        Ok(Self { label: label.into(), operator })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn op(&self) -> &PauliHamiltonian {
        &self.operator
    }

    pub fn n_qubits(&self) -> usize {
        self.operator.n_qubits()
    }

    pub fn locality(&self) -> usize {
        self.operator.max_locality()
    }

    /// The Pauli string if this term is a single unit-weight string.
    pub fn as_string(&self) -> Option<&PauliString> {
        match self.operator.terms() {
            [(s, c)] if *c == 1.0 => Some(s),
            _ => None,
        }
    }

    /// Pads the operator with identity qubits on the right.
    pub fn extended(&self, extra: usize) -> Self {
        Self { label: self.label.clone(), operator: self.operator.extended(extra) }
    }
}

impl From<PauliString> for BasisTerm {
    fn from(s: PauliString) -> Self {
        Self::pauli(s)
    }
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// JSON form: a bare Pauli string, or `{ "label": ..., "terms": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisTermJson {
    Pauli(PauliString),
    Operator { label: String, terms: Vec<TermJson> },
}

impl From<&BasisTerm> for BasisTermJson {
    fn from(b: &BasisTerm) -> Self {
        match b.as_string() {
            Some(s) => BasisTermJson::Pauli(s.clone()),
            None => BasisTermJson::Operator {
                label: b.label.clone(),
                terms: HamiltonianJson::from(&b.operator).terms,
            },
        }
    }
}

impl BasisTermJson {
    pub fn into_term(self, n_qubits: usize) -> Result<BasisTerm> {
        match self {
            BasisTermJson::Pauli(s) => {
                if s.len() != n_qubits {
                    return Err(Error::LengthMismatch { expected: n_qubits, got: s.len() });
                }
                Ok(BasisTerm::pauli(s))
            }
            BasisTermJson::Operator { label, terms } => {
                let op = PauliHamiltonian::try_from(HamiltonianJson { n_qubits, terms })?;
                BasisTerm::operator(label, op)
            }
        }
    }
}
