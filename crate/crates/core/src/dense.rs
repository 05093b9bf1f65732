//! Dense realization of Pauli operators, Hermitian eigendecomposition,
//! density matrices and partial traces.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliHamiltonian, PauliString, PauliSum};

/// Default qubit cap for dense realization.
pub const DEFAULT_QUBIT_CAP: usize = 14;

/// Default relative tolerance for chaining eigenvalues into degeneracy groups.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-8;

/// Hermiticity tolerance, relative to the largest entry magnitude.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

/// Dense matrix of a single Pauli string.
pub fn string_matrix(s: &PauliString) -> CMatrix {
    let mut m = CMatrix::zeros(1 << s.len(), 1 << s.len());
    accumulate_string(&mut m, s, Complex64::new(1.0, 0.0));
    m
}

/// `m += c * P` where `P` is the Pauli string `s`.
///
/// Every Pauli string is a phased permutation, so each row has exactly one
/// nonzero entry at column `row ^ flip_mask`.
pub(crate) fn accumulate_string(m: &mut CMatrix, s: &PauliString, c: Complex64) {
    let n = s.len();
    let flip = s.flip_mask();
    for row in 0..(1usize << n) {
        let mut v = c;
        for (q, p) in s.ops().iter().enumerate() {
            let bit = (row >> (n - 1 - q)) & 1 == 1;
            v *= p.element(bit);
        }
        m[(row, row ^ flip)] += v;
    }
}

/// Real-valued variant of [`accumulate_string`]; `s` must contain an even
/// number of `Y` factors.
pub(crate) fn accumulate_string_real(m: &mut DMatrix<f64>, s: &PauliString, c: f64) {
    let n = s.len();
    let flip = s.flip_mask();
    for row in 0..(1usize << n) {
        let mut v = Complex64::new(c, 0.0);
        for (q, p) in s.ops().iter().enumerate() {
            let bit = (row >> (n - 1 - q)) & 1 == 1;
            v *= p.element(bit);
        }
        m[(row, row ^ flip)] += v.re;
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceCap { qubits: n, cap });
    }
    Ok(())
}

/// Dense matrix of a (possibly non-Hermitian) Pauli sum.
pub fn sum_matrix(sum: &PauliSum, cap: usize) -> Result<CMatrix> {
    check_cap(sum.n_qubits(), cap)?;
    let d = 1usize << sum.n_qubits();
    let mut m = CMatrix::zeros(d, d);
    for (s, c) in sum.iter() {
        accumulate_string(&mut m, s, *c);
    }
    Ok(m)
}

/// A dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension(format!(
                "operator is {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let dev = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NonHermitian(format!("max |A - A^H| = {dev:e}")));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }
}

/// Dense realization `sum_i c_i (P_1^i ⊗ ... ⊗ P_N^i)` with qubit 1 most significant.
pub fn to_dense(h: &PauliHamiltonian, cap: usize) -> Result<HermitianOperator> {
    check_cap(h.n_qubits(), cap)?;
    let d = 1usize << h.n_qubits();
    let mut m = CMatrix::zeros(d, d);
    for (s, c) in h.terms() {
        accumulate_string(&mut m, s, Complex64::new(*c, 0.0));
    }
    Ok(HermitianOperator { entries: m })
}

/// Ascending eigenvalues with orthonormal eigenvectors and degeneracy groups.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
    /// Consecutive index ranges of (near-)equal eigenvalues.
    pub groups: Vec<std::ops::Range<usize>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Index of the group containing eigenvalue `i`.
    pub fn group_of(&self, i: usize) -> usize {
        self.groups.iter().position(|g| g.contains(&i)).expect("groups partition the spectrum")
    }

    /// `sum_i eps_i |xi_i><xi_i|`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)),
        ));
        v * d * v.adjoint()
    }
}

/// Chains ascending eigenvalues into groups wherever adjacent gaps are below
/// `tol * max(1, |eps|)`.
pub fn group_eigenvalues(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let scale = values[i - 1].abs().max(values[i].abs()).max(1.0);
            values[i] - values[i - 1] >= tol * scale
        };
        if split {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}

/// Hermitian eigendecomposition. Real-valued inputs take a real symmetric path.
pub fn eig(op: &HermitianOperator, grouping_tol: f64) -> Spectrum {
    let m = op.entries();
    let is_real = m.iter().all(|z| z.im == 0.0);
    let (values, vectors) = if is_real {
        let re = m.map(|z| z.re);
        let se = SymmetricEigen::new(re);
        (se.eigenvalues.as_slice().to_vec(), se.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let se = SymmetricEigen::new(m.clone());
        (se.eigenvalues.as_slice().to_vec(), se.eigenvectors)
    };
    sorted_spectrum(values, vectors, grouping_tol)
}

/// Real symmetric eigendecomposition used on hot paths.
pub(crate) fn eig_real(m: DMatrix<f64>, grouping_tol: f64) -> Spectrum {
    let se = SymmetricEigen::new(m);
    let vecs = se.eigenvectors.map(|x| Complex64::new(x, 0.0));
    sorted_spectrum(se.eigenvalues.as_slice().to_vec(), vecs, grouping_tol)
}

fn sorted_spectrum(values: Vec<f64>, vectors: CMatrix, tol: f64) -> Spectrum {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| vectors[(r, order[c])]);
    let groups = group_eigenvalues(&eigenvalues, tol);
    Spectrum { eigenvalues, eigenvectors, groups }
}

/// A density matrix (or unnormalized subspace projector).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub entries: CMatrix,
    pub label: String,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, label: impl Into<String>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        Ok(Self { entries, label: label.into() })
    }

    /// Pure state `|psi><psi|`.
    pub fn pure(psi: &nalgebra::DVector<Complex64>, label: impl Into<String>) -> Self {
        Self { entries: psi * psi.adjoint(), label: label.into() }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Smallest eigenvalue (positivity check).
    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone()).eigenvalues.min()
    }

    /// Checks Hermiticity, positivity and `trace == normalization`.
    pub fn validate(&self, normalization: f64) -> Result<()> {
        HermitianOperator::new(self.entries.clone())?;
        let min = self.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::InvalidInput(format!("{}: negative eigenvalue {min:e}", self.label)));
        }
        let tr = self.trace();
        if (tr.re - normalization).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "{}: trace {tr} != {normalization}",
                self.label
            )));
        }
        Ok(())
    }
}

/// Frobenius norm of a difference.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry magnitude of a difference.
pub fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Reduces `rho` onto the subsystems listed in `keep` (0-based, ascending
/// significance order as in `dims`), tracing out the rest.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Dimension(format!(
            "product of dims {total} != matrix dimension {}",
            rho.dim()
        )));
    }
    if keep.is_empty() {
        return Err(Error::Dimension("keep set must be nonempty".into()));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("keep index out of range for {} subsystems", dims.len())));
    }
    let mut keep_mask = vec![false; dims.len()];
    for &k in keep {
        keep_mask[k] = true;
    }
    let kept_dim: usize = dims.iter().zip(&keep_mask).filter(|(_, &k)| k).map(|(d, _)| d).product();

    // Split a flat index into (kept index, traced index) with the same
    // most-significant-first convention.
    let split = |mut idx: usize| -> (usize, usize) {
        let mut digits = vec![0usize; dims.len()];
        for (s, &d) in dims.iter().enumerate().rev() {
            digits[s] = idx % d;
            idx /= d;
        }
        let (mut k, mut t) = (0usize, 0usize);
        for (s, &d) in dims.iter().enumerate() {
            if keep_mask[s] {
                k = k * d + digits[s];
            } else {
                t = t * d + digits[s];
            }
        }
        (k, t)
    };
    let parts: Vec<(usize, usize)> = (0..total).map(split).collect();
    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for (i, &(ki, ti)) in parts.iter().enumerate() {
        for (j, &(kj, tj)) in parts.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += rho.entries[(i, j)];
            }
        }
    }
    Ok(DensityMatrix { entries: out, label: format!("Tr[{}]", rho.label) })
}

/// Traces out the trailing `n_ancilla` qubits of an operator on
/// `n_phys + n_ancilla` qubits.
pub fn trace_out_ancillas(m: &CMatrix, n_phys: usize, n_ancilla: usize) -> CMatrix {
    let dp = 1usize << n_phys;
    let da = 1usize << n_ancilla;
    let mut out = CMatrix::zeros(dp, dp);
    for i in 0..dp {
        for j in 0..dp {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..da {
                acc += m[(i * da + a, j * da + a)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// `sum_{i in range} |xi_i><xi_i|`.
pub fn projector_over(spec: &Spectrum, range: std::ops::Range<usize>) -> CMatrix {
    let cols = spec.eigenvectors.columns(range.start, range.len());
    &cols * cols.adjoint()
}

/// Spectral projector onto degeneracy group `group`.
pub fn subspace_projector(spec: &Spectrum, group: usize) -> Result<DensityMatrix> {
    let range = spec
        .groups
        .get(group)
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("no degeneracy group {group}")))?;
    let label = format!("P[{}..{}]", range.start, range.end);
    Ok(DensityMatrix { entries: projector_over(spec, range), label })
}
