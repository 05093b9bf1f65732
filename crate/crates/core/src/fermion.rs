//! Second-quantized fermionic Hamiltonians and the Jordan-Wigner mapping.
//!
//! Conventions:
//!
//! * `|0>` is an empty mode, `|1>` an occupied one, so the annihilator on a
//!   single mode is `|0><1| = (X + iY)/2`.
//! * `a_j = Z_1 ⊗ ... ⊗ Z_{j-1} ⊗ (X + iY)/2 ⊗ I ⊗ ...`.
//! * `H = sum_ij t_ij a†_i a_j + 1/2 sum_ijkl u_ijkl a†_i a†_j a_l a_k`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString, PauliSum, PauliTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Creation,
    Annihilation,
}

/// Fermionic problem over `n_modes` modes with 1-based indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SecondQuantizedProblem {
    pub n_modes: usize,
    pub one_body: BTreeMap<(usize, usize), f64>,
    pub two_body: BTreeMap<(usize, usize, usize, usize), f64>,
}

impl SecondQuantizedProblem {
    pub fn new(n_modes: usize) -> Self {
        Self { n_modes, ..Default::default() }
    }

    /// Adds `t` to the `(i, j)` one-body coefficient.
    pub fn with_one_body(mut self, i: usize, j: usize, t: f64) -> Self {
        *self.one_body.entry((i, j)).or_default() += t;
        self
    }

    pub fn with_two_body(mut self, i: usize, j: usize, k: usize, l: usize, u: f64) -> Self {
        *self.two_body.entry((i, j, k, l)).or_default() += u;
        self
    }

    /// Checks index ranges and `t_ij = t_ji` on stored pairs.
    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidInput("n_modes must be positive".into()));
        }
        let check = |i: usize| {
            if i == 0 || i > self.n_modes {
                Err(Error::IndexOutOfRange { index: i, max: self.n_modes })
            } else {
                Ok(())
            }
        };
        for (&(i, j), &t) in &self.one_body {
            check(i)?;
            check(j)?;
            let mirror = self.one_body.get(&(j, i)).copied().unwrap_or(0.0);
            if (mirror - t).abs() > 1e-12 * t.abs().max(1.0) {
                return Err(Error::NonHermitian(format!("t[{i},{j}] = {t} but t[{j},{i}] = {mirror}")));
            }
        }
        for &(i, j, k, l) in self.two_body.keys() {
            for q in [i, j, k, l] {
                check(q)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProblemJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProblemJson = serde_json::from_str(text)?;
        let mut p = Self::new(raw.n_modes);
        for e in raw.one_body {
            p = p.with_one_body(e.i, e.j, e.t);
        }
        for e in raw.two_body {
            p = p.with_two_body(e.i, e.j, e.k, e.l, e.u);
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub n_modes: usize,
    #[serde(default)]
    pub one_body: Vec<OneBodyJson>,
    #[serde(default)]
    pub two_body: Vec<TwoBodyJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneBodyJson {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoBodyJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub u: f64,
}

impl From<&SecondQuantizedProblem> for ProblemJson {
    fn from(p: &SecondQuantizedProblem) -> Self {
        Self {
            n_modes: p.n_modes,
            one_body: p.one_body.iter().map(|(&(i, j), &t)| OneBodyJson { i, j, t }).collect(),
            two_body: p
                .two_body
                .iter()
                .map(|(&(i, j, k, l), &u)| TwoBodyJson { i, j, k, l, u })
                .collect(),
        }
    }
}

/// Jordan-Wigner image of a single ladder operator.
pub fn jw_map_operator(kind: LadderKind, mode: usize, n_modes: usize) -> Result<PauliSum> {
    if mode == 0 || mode > n_modes {
        return Err(Error::IndexOutOfRange { index: mode, max: n_modes });
    }
    let string = |last: Pauli| {
        let mut ops = vec![Pauli::I; n_modes];
        ops[..mode - 1].iter_mut().for_each(|p| *p = Pauli::Z);
        ops[mode - 1] = last;
        PauliString::new(ops).expect("n_modes >= 1")
    };
    let y_phase = match kind {
        LadderKind::Annihilation => 0.5,
        LadderKind::Creation => -0.5,
    };
    PauliSum::from_terms(
        n_modes,
        [
            PauliTerm::new(0.5, string(Pauli::X)),
            PauliTerm::new(Complex64::new(0.0, y_phase), string(Pauli::Y)),
        ],
    )
}

/// Maps the problem to a qubit Hamiltonian, one qubit per mode.
pub fn jw_map(problem: &SecondQuantizedProblem) -> Result<PauliHamiltonian> {
    problem.validate()?;
    let n = problem.n_modes;
    let create = (1..=n)
        .map(|j| jw_map_operator(LadderKind::Creation, j, n))
        .collect::<Result<Vec<_>>>()?;
    let annihilate = (1..=n)
        .map(|j| jw_map_operator(LadderKind::Annihilation, j, n))
        .collect::<Result<Vec<_>>>()?;

    let mut acc = PauliSum::zero(n);
    for (&(i, j), &t) in &problem.one_body {
        let term = create[i - 1].try_mul(&annihilate[j - 1])?;
        acc = acc.try_add(&term.scale(Complex64::new(t, 0.0)))?;
    }
    for (&(i, j, k, l), &u) in &problem.two_body {
        let term = create[i - 1]
            .try_mul(&create[j - 1])?
            .try_mul(&annihilate[l - 1])?
            .try_mul(&annihilate[k - 1])?;
        acc = acc.try_add(&term.scale(Complex64::new(0.5 * u, 0.0)))?;
    }
    let adj = acc.adjoint();
    let diff = acc.try_add(&adj.scale(Complex64::new(-1.0, 0.0)))?;
    if let Some((s, c)) = diff.iter().find(|(_, c)| c.norm() > 1e-12) {
        return Err(Error::NonHermitian(format!(
            "two-body table is not Hermitian under u_ijkl a†_i a†_j a_l a_k (residual {c} on {s})"
        )));
    }
    acc.into_hermitian()
}

/// Term count by locality.
pub fn locality_histogram(h: &PauliHamiltonian) -> BTreeMap<usize, usize> {
    h.locality_histogram()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_mode_annihilator() {
        let a = jw_map_operator(LadderKind::Annihilation, 1, 1).unwrap();
        assert_eq!(a.coeff(&ps("X")), Complex64::new(0.5, 0.0));
        assert_eq!(a.coeff(&ps("Y")), Complex64::new(0.0, 0.5));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn second_mode_carries_z_string() {
        let a = jw_map_operator(LadderKind::Annihilation, 2, 2).unwrap();
        assert_eq!(a.coeff(&ps("ZX")), Complex64::new(0.5, 0.0));
        assert_eq!(a.coeff(&ps("ZY")), Complex64::new(0.0, 0.5));
    }

    #[test]
    fn number_operator() {
        let c = jw_map_operator(LadderKind::Creation, 1, 1).unwrap();
        let a = jw_map_operator(LadderKind::Annihilation, 1, 1).unwrap();
        let n = (&c * &a).into_hermitian().unwrap();
        assert_eq!(n, PauliHamiltonian::from_real(1, &[(0.5, "I"), (-0.5, "Z")]).unwrap());
    }

    #[test]
    fn mode_out_of_range() {
        assert!(matches!(
            jw_map_operator(LadderKind::Creation, 3, 2),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
        assert!(jw_map_operator(LadderKind::Creation, 0, 2).is_err());
    }

    #[test]
    fn nearest_neighbour_hopping() {
        let t = 0.7;
        let p = SecondQuantizedProblem::new(2).with_one_body(1, 2, t).with_one_body(2, 1, t);
        let h = jw_map(&p).unwrap();
        assert_eq!(h, PauliHamiltonian::from_real(2, &[(t / 2.0, "XX"), (t / 2.0, "YY")]).unwrap());
        assert_eq!(locality_histogram(&h), BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn on_site_energy() {
        let p = SecondQuantizedProblem::new(2).with_one_body(1, 1, -1.3);
        let h = jw_map(&p).unwrap();
        assert_eq!(h, PauliHamiltonian::from_real(2, &[(-0.65, "II"), (0.65, "ZI")]).unwrap());
    }

    #[test]
    fn empty_problem_maps_to_empty() {
        let h = jw_map(&SecondQuantizedProblem::new(3)).unwrap();
        assert!(h.is_empty());
        assert!(locality_histogram(&h).is_empty());
    }

    #[test]
    fn asymmetric_one_body_is_rejected() {
        let p = SecondQuantizedProblem::new(2).with_one_body(1, 2, 1.0);
        assert!(matches!(jw_map(&p), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn non_hermitian_two_body_is_rejected() {
        let p = SecondQuantizedProblem::new(3).with_two_body(1, 2, 3, 2, 1.0);
        assert!(matches!(jw_map(&p), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn json_schema() {
        let text = r#"{"n_modes": 2, "one_body": [{"i":1,"j":2,"t":1.0},{"i":2,"j":1,"t":1.0}], "two_body": []}"#;
        let p = SecondQuantizedProblem::from_json(text).unwrap();
        assert_eq!(p.one_body.len(), 2);
        assert!(SecondQuantizedProblem::from_json(r#"{"n_modes": 2, "one_body": [{"i":3,"j":3,"t":1.0}]}"#).is_err());
    }
}
