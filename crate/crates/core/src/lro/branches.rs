use std::ops::Range;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::dense::{CMatrix, Spectrum};
use crate::error::{Error, Result};

/// Largest allowed deviation of the branch-completeness eigenvalues from 1.
const COMPLETENESS_TOL: f64 = 0.5;

/// Split of an enlarged-space spectrum into the physical branch (the lowest
/// `2^n_p` states) and the ancilla branch (the rest).
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSplit {
    pub physical: Range<usize>,
    pub ancilla: Range<usize>,
    /// Mean probability of finding the ancillas in `|0...0>` across the
    /// physical branch (diagnostic only).
    pub ground_overlap: f64,
    /// Largest `|lambda - 1|` over eigenvalues of `Tr_a` of the physical-branch
    /// projector. Zero when every physical state is represented exactly once.
    pub completeness_defect: f64,
}

/// Partial trace over the trailing `n_a` ancilla qubits of
/// `sum_{k in cols} |v_k><v_k|`.
pub(crate) fn reduced_projector(vectors: &CMatrix, cols: Range<usize>, n_p: usize, n_a: usize) -> CMatrix {
    let dp = 1usize << n_p;
    let da = 1usize << n_a;
    let mut out = CMatrix::zeros(dp, dp);
    for k in cols {
        let v = vectors.column(k);
        for i in 0..dp {
            for j in i..dp {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..da {
                    acc += v[i * da + a] * v[j * da + a].conj();
                }
                out[(i, j)] += acc;
            }
        }
    }
    for i in 0..dp {
        for j in 0..i {
            out[(i, j)] = out[(j, i)].conj();
        }
    }
    out
}

/// Classifies `spec` (on `n_p + n_a` qubits) into physical and ancilla branches.
///
/// Fails with [`Error::GapCollapse`] when a degeneracy group straddles the cut
/// at `2^n_p`, or when the physical branch does not represent every physical
/// state once (e.g. the ancilla is decoupled and every level is doubled).
pub fn classify_branches(spec: &Spectrum, n_p: usize, n_a: usize) -> Result<BranchSplit> {
    let dim = 1usize << (n_p + n_a);
    if spec.dim() != dim {
        return Err(Error::Dimension(format!("spectrum has {} levels, expected {dim}", spec.dim())));
    }
    let cut = 1usize << n_p;
    if n_a == 0 {
        return Ok(BranchSplit {
            physical: 0..dim,
            ancilla: dim..dim,
            ground_overlap: 1.0,
            completeness_defect: 0.0,
        });
    }
    if spec.group_of(cut - 1) == spec.group_of(cut) {
        return Err(Error::GapCollapse { cut });
    }
    let da = 1usize << n_a;
    let ground_overlap = (0..cut)
        .map(|k| (0..cut).map(|i| spec.eigenvectors[(i * da, k)].norm_sqr()).sum::<f64>())
        .sum::<f64>()
        / cut as f64;
    let reduced = reduced_projector(&spec.eigenvectors, 0..cut, n_p, n_a);
    let completeness_defect = SymmetricEigen::new(reduced)
        .eigenvalues
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max);
    if completeness_defect >= COMPLETENESS_TOL {
        return Err(Error::GapCollapse { cut });
    }
    Ok(BranchSplit { physical: 0..cut, ancilla: cut..dim, ground_overlap, completeness_defect })
}
