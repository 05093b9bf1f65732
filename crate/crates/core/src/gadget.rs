//! Perturbative three-body gadget.
//!
//! For a target `a P1 P2 P3` and one ancilla `u`:
//!
//! ```text
//! H0 = Delta |1><1|_u
//! V  = mu P3 |1><1|_u + (kappa P1 + lambda P2) X_u + V1 + V2
//! V1 = (kappa P1 + lambda P2)^2 / Delta - (kappa^2 + lambda^2) mu P3 / Delta^2
//! V2 = -(kappa P1 + lambda P2)^4 / Delta^3
//! ```
//!
//! with `|1><1|_u = (I - Z_u)/2`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{eig, to_dense, DEFAULT_GROUPING_TOL, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::lro::{classify_branches, spread, BasisTerm, InitStrategy, ReductionProblem};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString, PauliSum, PauliTerm};

/// A single-qubit Pauli factor placed on a 1-based qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub pauli: Pauli,
    pub qubit: usize,
}

/// A three-body target `a P1 P2 P3` and its gadget parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetSpec {
    pub target_coeff: f64,
    pub p1: Factor,
    pub p2: Factor,
    pub p3: Factor,
    /// Must be the last qubit; physical qubits are `1..ancilla_index`.
    pub ancilla_index: usize,
    pub delta: f64,
}

impl GadgetSpec {
    /// Gadget for a 3-local string such as `"XZX"`, ancilla appended last.
    pub fn for_string(a: f64, target: &str, delta: f64) -> Result<Self> {
        let s: PauliString = target.parse()?;
        let support = s.support();
        if support.len() != 3 {
            return Err(Error::InvalidInput(format!("{target} is not 3-local")));
        }
        let f = |q: usize| Factor { pauli: s.get(q), qubit: q };
        let spec = Self {
            target_coeff: a,
            p1: f(support[0]),
            p2: f(support[1]),
            p3: f(support[2]),
            ancilla_index: s.len() + 1,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn n_physical(&self) -> usize {
        self.ancilla_index - 1
    }

    pub fn n_qubits(&self) -> usize {
        self.ancilla_index
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidInput(format!("delta must be positive, got {}", self.delta)));
        }
        let qs = [self.p1.qubit, self.p2.qubit, self.p3.qubit];
        for (i, q) in qs.iter().enumerate() {
            if *q == 0 || *q >= self.ancilla_index {
                return Err(Error::OverlappingQubits(format!(
                    "factor on qubit {q} must lie in 1..{}",
                    self.ancilla_index
                )));
            }
            if qs[..i].contains(q) {
                return Err(Error::OverlappingQubits(format!("two factors on qubit {q}")));
            }
        }
        for f in [self.p1, self.p2, self.p3] {
            if f.pauli == Pauli::I {
                return Err(Error::InvalidInput("gadget factors must be non-identity".into()));
            }
        }
        Ok(())
    }

    fn factor(&self, f: Factor) -> PauliString {
        PauliString::from_sparse(self.n_qubits(), &[(f.qubit, f.pauli)]).expect("validated")
    }

    /// `a P1 P2 P3` on the physical qubits.
    pub fn target(&self) -> PauliHamiltonian {
        let s = PauliString::from_sparse(
            self.n_physical(),
            &[(self.p1.qubit, self.p1.pauli), (self.p2.qubit, self.p2.pauli), (self.p3.qubit, self.p3.pauli)],
        )
        .expect("validated");
        PauliHamiltonian::assemble([PauliTerm::new(self.target_coeff, s)], self.n_physical()).expect("real")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadgetCoefficients {
    pub kappa: f64,
    pub lambda: f64,
    pub mu: f64,
}

pub fn gadget_coefficients(a: f64, delta: f64) -> Result<GadgetCoefficients> {
    if a == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    let base = (a.abs() / 2.0).cbrt();
    let lambda = base * delta.powf(0.75);
    Ok(GadgetCoefficients { kappa: a.signum() * lambda, lambda, mu: base * delta.sqrt() })
}

/// Which perturbative corrections enter the gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetOptions {
    pub include_v2: bool,
}

impl Default for GadgetOptions {
    fn default() -> Self {
        Self { include_v2: true }
    }
}

pub fn build_gadget(spec: &GadgetSpec) -> Result<PauliHamiltonian> {
    build_gadget_with(spec, GadgetOptions::default())
}

pub fn build_gadget_with(spec: &GadgetSpec, opts: GadgetOptions) -> Result<PauliHamiltonian> {
    spec.validate()?;
    let n = spec.n_qubits();
    let u = spec.ancilla_index;
    let GadgetCoefficients { kappa, lambda, mu } = gadget_coefficients(spec.target_coeff, spec.delta)?;
    let delta = spec.delta;
    let c = |x: f64| Complex64::new(x, 0.0);
    let single = |s: PauliString, k: f64| PauliSum::from_terms(n, [PauliTerm::new(k, s)]);

    let ident = PauliString::identity(n);
    let z_u = PauliString::from_sparse(n, &[(u, Pauli::Z)])?;
    let x_u = single(PauliString::from_sparse(n, &[(u, Pauli::X)])?, 1.0)?;
    let excited = PauliSum::from_terms(n, [PauliTerm::new(0.5, ident.clone()), PauliTerm::new(-0.5, z_u)])?;
    let p3 = single(spec.factor(spec.p3), 1.0)?;
    let b = PauliSum::from_terms(
        n,
        [PauliTerm::new(kappa, spec.factor(spec.p1)), PauliTerm::new(lambda, spec.factor(spec.p2))],
    )?;
    let b2 = b.pow(2)?;

    let mut h = excited.scale(c(delta));
    h = h.try_add(&p3.try_mul(&excited)?.scale(c(mu)))?;
    h = h.try_add(&b.try_mul(&x_u)?)?;
    h = h.try_add(&b2.scale(c(1.0 / delta)))?;
    h = h.try_add(&p3.scale(c(-(kappa * kappa + lambda * lambda) * mu / (delta * delta))))?;
    if opts.include_v2 {
        h = h.try_add(&b2.pow(2)?.scale(c(-1.0 / delta.powi(3))))?;
    }
    h.into_hermitian()
}

/// Accuracy and implementability of one gadget instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadgetError {
    pub spectral_error: f64,
    pub spread: f64,
    /// `min(ancilla branch) - max(physical branch)`.
    pub min_gap: f64,
}

/// Coefficient spread of a Hamiltonian, identity term excluded.
pub fn coefficient_spread(h: &PauliHamiltonian) -> f64 {
    let d: Vec<f64> = h.terms().iter().filter(|(s, _)| !s.is_identity()).map(|(_, c)| *c).collect();
    if d.is_empty() {
        0.0
    } else {
        spread(&d)
    }
}

/// Spectral error over the lowest `i_m` physical-branch levels (all of them
/// when `None`), and coefficient spread.
pub fn gadget_error(spec: &GadgetSpec, i_m: Option<usize>) -> Result<GadgetError> {
    gadget_error_with(spec, i_m, GadgetOptions::default())
}

pub fn gadget_error_with(spec: &GadgetSpec, i_m: Option<usize>, opts: GadgetOptions) -> Result<GadgetError> {
    let h = build_gadget_with(spec, opts)?;
    let n_p = spec.n_physical();
    let i_m = i_m.unwrap_or(1 << n_p);
    if i_m == 0 || i_m > 1 << n_p {
        return Err(Error::InvalidInput(format!("i_m = {i_m} outside 1..={}", 1 << n_p)));
    }
    let target = eig(&to_dense(&spec.target(), DEFAULT_QUBIT_CAP)?, DEFAULT_GROUPING_TOL);
    let got = eig(&to_dense(&h, DEFAULT_QUBIT_CAP)?, DEFAULT_GROUPING_TOL);
    let split = classify_branches(&got, n_p, 1)?;
    let spectral_error = (0..i_m).map(|i| (got.eigenvalues[i] - target.eigenvalues[i]).abs()).sum();
    let min_gap = got.eigenvalues[split.ancilla.start] - got.eigenvalues[split.physical.end - 1];
    Ok(GadgetError { spectral_error, spread: coefficient_spread(&h), min_gap })
}

/// Distinct non-identity strings of the gadget, together with every 1-local
/// factor of its 2-local strings, in lexicographic order.
pub fn pauli_basis_of_gadget(spec: &GadgetSpec) -> Result<Vec<PauliString>> {
    let h = build_gadget(spec)?;
    let n = spec.n_qubits();
    let mut out = std::collections::BTreeSet::new();
    for (s, _) in h.terms() {
        if s.is_identity() {
            continue;
        }
        if s.locality() == 2 {
            for q in s.support() {
                out.insert(PauliString::from_sparse(n, &[(q, s.get(q))])?);
            }
        }
        out.insert(s.clone());
    }
    Ok(out.into_iter().collect())
}

/// The nine gadget-derived operator directions used by the LRO:
/// `|1><1|_u`, `P3 |1><1|_u`, `P1 X_u`, `P2 X_u`, `P1 P2`, `P3`, `I`, `P1`, `P2`.
///
/// The gadget of any `Delta` is a point in their span.
pub fn gadget_operator_basis(spec: &GadgetSpec) -> Result<Vec<BasisTerm>> {
    spec.validate()?;
    let n = spec.n_qubits();
    let u = spec.ancilla_index;
    let f = |fs: &[Factor]| {
        let ops: Vec<(usize, Pauli)> = fs.iter().map(|f| (f.qubit, f.pauli)).collect();
        PauliString::from_sparse(n, &ops).expect("validated")
    };
    let label = |fs: &[Factor]| f(fs).sparse_label();
    let xu = Factor { pauli: Pauli::X, qubit: u };
    let zu = Factor { pauli: Pauli::Z, qubit: u };
    let projected = |fs: &[Factor], name: String| -> Result<BasisTerm> {
        let mut with_z = fs.to_vec();
        with_z.push(zu);
        let h = PauliHamiltonian::assemble(
            [PauliTerm::new(0.5, f(fs)), PauliTerm::new(-0.5, f(&with_z))],
            n,
        )?;
        BasisTerm::operator(name, h)
    };
    let (p1, p2, p3) = (spec.p1, spec.p2, spec.p3);
    Ok(vec![
        projected(&[], format!("|1><1|_{u}"))?,
        projected(&[p3], format!("{} |1><1|_{u}", label(&[p3])))?,
        BasisTerm::pauli(f(&[p1, xu])),
        BasisTerm::pauli(f(&[p2, xu])),
        BasisTerm::pauli(f(&[p1, p2])),
        BasisTerm::pauli(f(&[p3])),
        BasisTerm::pauli(PauliString::identity(n)),
        BasisTerm::pauli(f(&[p1])),
        BasisTerm::pauli(f(&[p2])),
    ])
}

/// Coefficients of [`gadget_operator_basis`] that reproduce [`build_gadget`].
pub fn gadget_operator_coefficients(spec: &GadgetSpec) -> Result<Vec<f64>> {
    Ok(cao_coefficients(spec.target_coeff, spec.delta)?.to_vec())
}

/// Gadget coefficients for `a P1 P2 P3` at gap `delta`, in the order of
/// [`gadget_operator_basis`].
pub(crate) fn cao_coefficients(a: f64, delta: f64) -> Result<[f64; 9]> {
    let GadgetCoefficients { kappa, lambda, mu } = gadget_coefficients(a, delta)?;
    let d = delta;
    let s = kappa * kappa + lambda * lambda;
    let kl = kappa * lambda;
    // (k P1 + l P2)^2 = s + 2kl P1P2, its square = s^2 + 4k^2l^2 + 4kl s P1P2
    Ok([
        d,
        mu,
        kappa,
        lambda,
        2.0 * kl / d - 4.0 * kl * s / d.powi(3),
        -s * mu / (d * d),
        s / d - (s * s + 4.0 * kl * kl) / d.powi(3),
        0.0,
        0.0,
    ])
}

/// Gap values at which the gadget seeds the LRO search.
pub const SEED_DELTAS: [f64; 5] = [10.0, 30.0, 100.0, 300.0, 1000.0];

/// LRO problem for the gadget's target on the nine gadget directions, one
/// ancilla, default cost settings.
pub fn lro_problem(spec: &GadgetSpec) -> Result<ReductionProblem> {
    ReductionProblem::new(spec.target(), 1, gadget_operator_basis(spec)?)
}

/// Starts for [`lro_problem`]: the gadget itself at each of [`SEED_DELTAS`],
/// the uniform levels, and `starts` seeded random points kept from a screen of
/// `200 * starts` draws.
pub fn lro_init(spec: &GadgetSpec, starts: usize, seed: u64) -> Result<InitStrategy> {
    let mut init = InitStrategy::default().with_jitter(starts, seed).with_screen(200 * starts);
    for delta in SEED_DELTAS {
        init = init.with_warm(gadget_operator_coefficients(&spec.with_delta(delta))?);
    }
    Ok(init)
}

/// One row of a `Delta` sweep; `error` is `None` when the branches collapsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub error: Option<GadgetError>,
    pub note: Option<String>,
}

/// Evaluates [`gadget_error`] at each `Delta`, in input order.
pub fn phg_sweep(spec: &GadgetSpec, deltas: &[f64], i_m: Option<usize>) -> Vec<SweepRow> {
    deltas
        .par_iter()
        .map(|&delta| match gadget_error(&spec.with_delta(delta), i_m) {
            Ok(e) => SweepRow { delta, error: Some(e), note: None },
            Err(e) => SweepRow { delta, error: None, note: Some(e.to_string()) },
        })
        .collect()
}

/// `delta,spectral_error,spread,min_gap`; collapsed rows carry `NaN`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta", "spectral_error", "spread", "min_gap"])?;
    for r in rows {
        let (a, b, c) = match r.error {
            Some(e) => (e.spectral_error, e.spread, e.min_gap),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        w.write_record([r.delta, a, b, c].map(|x| format!("{x:e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..count).map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)).collect()
        }
    }
}
