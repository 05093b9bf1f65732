//! Pauli strings, weighted Pauli sums and Hermitian Pauli Hamiltonians.
//!
//! Qubits are numbered from 1 and qubit 1 is the leftmost character of a
//! string, which is also the most significant tensor factor of the dense
//! realization.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped during canonicalization.
pub const ZERO_TOL: f64 = 1e-15;

/// Imaginary parts below this (relative to `max(1, |re|)`) count as real.
pub const REAL_TOL: f64 = 1e-12;

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self * rhs = i^k * p`, returned as `(k, p)`.
    pub fn mul(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    /// Flips the computational basis state (X or Y).
    pub(crate) fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Matrix element `<row| P |row ^ flip>` for a row bit.
    pub(crate) fn element(self, row_bit: bool) -> Complex64 {
        match (self, row_bit) {
            (Pauli::I, _) | (Pauli::X, _) => Complex64::new(1.0, 0.0),
            (Pauli::Y, false) => Complex64::new(0.0, -1.0),
            (Pauli::Y, true) => Complex64::new(0.0, 1.0),
            (Pauli::Z, false) => Complex64::new(1.0, 0.0),
            (Pauli::Z, true) => Complex64::new(-1.0, 0.0),
        }
    }
}

/// `i^k` as a complex number.
pub fn phase(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A tensor product of single-qubit Paulis, one label per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidInput("Pauli string must have length >= 1".into()));
        }
        Ok(Self(ops))
    }

    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n.max(1)])
    }

    /// Builds a string from 1-based `(qubit, label)` pairs; other qubits are I.
    pub fn from_sparse(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = vec![Pauli::I; n];
        for &(q, p) in ops {
            if q == 0 || q > n {
                return Err(Error::IndexOutOfRange { index: q, max: n });
            }
            s[q - 1] = p;
        }
        Self::new(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// Label on 1-based qubit `q`.
    pub fn get(&self, q: usize) -> Pauli {
        self.0[q - 1]
    }

    /// Number of non-identity positions.
    pub fn locality(&self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.locality() == 0
    }

    /// 1-based qubits with a non-identity label.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Appends `extra` identity factors on the right.
    pub fn extended(&self, extra: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat(Pauli::I).take(extra));
        Self(v)
    }

    /// Compact label such as `X1 Z2 X4`; `I` for the identity.
    pub fn sparse_label(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, p)| format!("{}{}", p.as_char(), i + 1))
            .collect();
        if parts.is_empty() {
            "I".into()
        } else {
            parts.join(" ")
        }
    }

    pub(crate) fn flip_mask(&self) -> usize {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0usize, |m, (i, _)| m | (1 << (n - 1 - i)))
    }

    /// Whether `self` and `other` commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::InvalidInput(format!("invalid Pauli label {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiplies two strings: `a * b = phase * product`.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<(Complex64, PauliString)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    let mut k = 0u8;
    let ops = a
        .0
        .iter()
        .zip(&b.0)
        .map(|(&x, &y)| {
            let (e, p) = x.mul(y);
            k = (k + e) % 4;
            p
        })
        .collect();
    Ok((phase(k), PauliString(ops)))
}

/// A complex-weighted Pauli string.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: impl Into<Complex64>, string: PauliString) -> Self {
        Self { coeff: coeff.into(), string }
    }

    pub fn real(coeff: f64, string: &str) -> Result<Self> {
        Ok(Self::new(coeff, string.parse()?))
    }
}

/// A canonical sum of Pauli strings with complex coefficients.
///
/// Used for intermediate operators (e.g. fermionic ladder operators) that
/// need not be Hermitian. Strings are unique and sorted; near-zero terms are
/// dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut out = Self::zero(n_qubits);
        for t in terms {
            out.add_term(t.coeff, t.string)?;
        }
        out.prune();
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    fn add_term(&mut self, c: Complex64, s: PauliString) -> Result<()> {
        if s.len() != self.n_qubits {
            return Err(Error::LengthMismatch { expected: self.n_qubits, got: s.len() });
        }
        *self.terms.entry(s).or_default() += c;
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= ZERO_TOL);
    }

    pub fn scale(&self, f: Complex64) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= f);
        out.prune();
        out
    }

    /// Conjugate transpose (Pauli strings are Hermitian).
    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c = c.conj());
        out
    }

    pub fn try_add(&self, rhs: &PauliSum) -> Result<Self> {
        if rhs.n_qubits != self.n_qubits {
            return Err(Error::LengthMismatch { expected: self.n_qubits, got: rhs.n_qubits });
        }
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            *out.terms.entry(s.clone()).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &PauliSum) -> Result<Self> {
        if rhs.n_qubits != self.n_qubits {
            return Err(Error::LengthMismatch { expected: self.n_qubits, got: rhs.n_qubits });
        }
        let mut out = Self::zero(self.n_qubits);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (ph, p) = multiply(a, b)?;
                *out.terms.entry(p).or_default() += ph * ca * cb;
            }
        }
        out.prune();
        Ok(out)
    }

    /// Integer power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = PauliSum::from_terms(
            self.n_qubits,
            [PauliTerm::new(1.0, PauliString::identity(self.n_qubits))],
        )?;
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    pub fn terms(&self) -> Vec<PauliTerm> {
        self.terms.iter().map(|(s, c)| PauliTerm::new(*c, s.clone())).collect()
    }

    /// Validates real coefficients and converts into a Hamiltonian.
    pub fn into_hermitian(self) -> Result<PauliHamiltonian> {
        PauliHamiltonian::assemble(self.terms(), self.n_qubits)
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;

    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("qubit counts must match")
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;

    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.try_mul(rhs).expect("qubit counts must match")
    }
}

/// A Hermitian sum of Pauli strings with real coefficients, in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "HamiltonianJson", try_from = "HamiltonianJson")]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<(PauliString, f64)>,
}

impl PauliHamiltonian {
    pub fn empty(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    /// Merges duplicate strings, drops zero terms and checks that every merged
    /// coefficient is real.
    pub fn assemble(terms: impl IntoIterator<Item = PauliTerm>, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidInput("n_qubits must be positive".into()));
        }
        let sum = PauliSum::from_terms(n_qubits, terms)?;
        let mut out = Vec::with_capacity(sum.len());
        for (s, c) in sum.terms {
            if c.im.abs() > REAL_TOL * c.re.abs().max(1.0) {
                return Err(Error::NonHermitian(format!("coefficient {c} on {s} is not real")));
            }
            if c.re.abs() >= ZERO_TOL {
                out.push((s, c.re));
            }
        }
        Ok(Self { n_qubits, terms: out })
    }

    /// Convenience constructor from `(coeff, "XZX")` pairs.
    pub fn from_real(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|&(c, s)| PauliTerm::real(c, s))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(terms, n_qubits)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms, sorted by string.
    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn coeff(&self, s: &PauliString) -> f64 {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    pub fn max_locality(&self) -> usize {
        self.terms.iter().map(|(s, _)| s.locality()).max().unwrap_or(0)
    }

    pub fn to_sum(&self) -> PauliSum {
        PauliSum::from_terms(
            self.n_qubits,
            self.terms.iter().map(|(s, c)| PauliTerm::new(*c, s.clone())),
        )
        .expect("canonical terms have matching lengths")
    }

    /// `self + rhs`, re-canonicalized.
    pub fn plus(&self, rhs: &PauliHamiltonian) -> Result<Self> {
        self.to_sum().try_add(&rhs.to_sum())?.into_hermitian()
    }

    pub fn scaled(&self, f: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(s, c)| (s.clone(), c * f))
            .filter(|(_, c)| c.abs() >= ZERO_TOL)
            .collect();
        Self { n_qubits: self.n_qubits, terms }
    }

    /// Pads every string with `extra` identity qubits on the right.
    pub fn extended(&self, extra: usize) -> Self {
        Self {
            n_qubits: self.n_qubits + extra,
            terms: self.terms.iter().map(|(s, c)| (s.extended(extra), *c)).collect(),
        }
    }

    /// Term count by locality.
    pub fn locality_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for (s, _) in &self.terms {
            *h.entry(s.locality()).or_insert(0) += 1;
        }
        h
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&HamiltonianJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: HamiltonianJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

impl fmt::Display for PauliHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{s}")?;
        }
        Ok(())
    }
}

/// On-disk form: `{ "n_qubits": N, "terms": [ { "coeff": c, "pauli": "XZX" } ] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianJson {
    pub n_qubits: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: f64,
    pub pauli: PauliString,
}

impl From<&PauliHamiltonian> for HamiltonianJson {
    fn from(h: &PauliHamiltonian) -> Self {
        Self {
            n_qubits: h.n_qubits,
            terms: h
                .terms
                .iter()
                .map(|(s, c)| TermJson { coeff: *c, pauli: s.clone() })
                .collect(),
        }
    }
}

impl From<PauliHamiltonian> for HamiltonianJson {
    fn from(h: PauliHamiltonian) -> Self {
        HamiltonianJson::from(&h)
    }
}

impl TryFrom<HamiltonianJson> for PauliHamiltonian {
    type Error = Error;

    fn try_from(raw: HamiltonianJson) -> Result<Self> {
        let terms = raw.terms.into_iter().map(|t| PauliTerm::new(t.coeff, t.pauli));
        PauliHamiltonian::assemble(terms, raw.n_qubits)
    }
}
