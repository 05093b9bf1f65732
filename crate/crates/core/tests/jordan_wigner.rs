//! The qubit images of fermionic operators agree with matrices built directly
//! on the occupation-number basis.

use klocal::dense::{sum_matrix, to_dense, CMatrix, DEFAULT_QUBIT_CAP};
use klocal::fermion::{jw_map, jw_map_operator, LadderKind, SecondQuantizedProblem};
use num_complex::Complex64;

const TOL: f64 = 1e-12;

/// Bit of mode `j` (1-based) in a basis index; mode 1 is the most significant.
fn occupied(idx: usize, j: usize, n: usize) -> bool {
    idx >> (n - j) & 1 == 1
}

/// `a_j` on occupation states: `a_j |..1_j..> = (-1)^{sum_{k<j} n_k} |..0_j..>`.
fn annihilator(j: usize, n: usize) -> CMatrix {
    let dim = 1 << n;
    let mut m = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        if occupied(idx, j, n) {
            let parity = (1..j).filter(|&k| occupied(idx, k, n)).count();
            let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            m[(idx ^ (1 << (n - j)), idx)] = Complex64::new(sign, 0.0);
        }
    }
    m
}

fn creator(j: usize, n: usize) -> CMatrix {
    annihilator(j, n).adjoint()
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn ladder_operators_match_occupation_basis() {
    for n in 1..=4 {
        for j in 1..=n {
            let a = sum_matrix(&jw_map_operator(LadderKind::Annihilation, j, n).unwrap(), 8).unwrap();
            let c = sum_matrix(&jw_map_operator(LadderKind::Creation, j, n).unwrap(), 8).unwrap();
            assert!(max_diff(&a, &annihilator(j, n)) < TOL, "a_{j} on {n} modes");
            assert!(max_diff(&c, &creator(j, n)) < TOL, "a+_{j} on {n} modes");
        }
    }
}

#[test]
fn anticommutators() {
    for n in 1..=4 {
        let dim = 1 << n;
        let a: Vec<CMatrix> = (1..=n)
            .map(|j| sum_matrix(&jw_map_operator(LadderKind::Annihilation, j, n).unwrap(), 8).unwrap())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let ad = a[j].adjoint();
                let anti = &a[i] * &ad + &ad * &a[i];
                let expect = if i == j { CMatrix::identity(dim, dim) } else { CMatrix::zeros(dim, dim) };
                assert!(max_diff(&anti, &expect) < TOL, "{{a_{}, a+_{}}}", i + 1, j + 1);
                let aa = &a[i] * &a[j] + &a[j] * &a[i];
                assert!(max_diff(&aa, &CMatrix::zeros(dim, dim)) < TOL);
            }
        }
    }
}

#[test]
fn every_one_body_term_matches() {
    for n in 1..=4 {
        for i in 1..=n {
            for j in 1..=n {
                let t = 0.7 + 0.1 * (i * n + j) as f64;
                let mut p = SecondQuantizedProblem::new(n).with_one_body(i, j, t);
                if i != j {
                    p = p.with_one_body(j, i, t);
                }
                let got = to_dense(&jw_map(&p).unwrap(), DEFAULT_QUBIT_CAP).unwrap();
                let mut want = creator(i, n) * annihilator(j, n) * Complex64::new(t, 0.0);
                if i != j {
                    want += creator(j, n) * annihilator(i, n) * Complex64::new(t, 0.0);
                }
                assert!(max_diff(got.entries(), &want) < TOL, "t_{i}{j} on {n} modes");
            }
        }
    }
}

fn two_body(i: usize, j: usize, k: usize, l: usize, n: usize) -> CMatrix {
    creator(i, n) * creator(j, n) * annihilator(l, n) * annihilator(k, n) * Complex64::new(0.5, 0.0)
}

#[test]
fn every_two_body_term_matches() {
    for n in 1..=4 {
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let u = 0.3 + 0.01 * (((i * 7 + j) * 5 + k) * 3 + l) as f64;
                        let mut p = SecondQuantizedProblem::new(n).with_two_body(i, j, k, l, u);
                        let mut want = two_body(i, j, k, l, n) * Complex64::new(u, 0.0);
                        if (k, l) != (i, j) {
                            p = p.with_two_body(k, l, i, j, u);
                            want += two_body(k, l, i, j, n) * Complex64::new(u, 0.0);
                        }
                        let got = to_dense(&jw_map(&p).unwrap(), DEFAULT_QUBIT_CAP).unwrap();
                        assert!(max_diff(got.entries(), &want) < TOL, "u_{i}{j}{k}{l} on {n} modes");
                    }
                }
            }
        }
    }
}

#[test]
fn hopping_pair_gives_two_two_local_terms() {
    let p = SecondQuantizedProblem::new(2).with_one_body(1, 2, -1.0).with_one_body(2, 1, -1.0);
    let h = jw_map(&p).unwrap();
    assert_eq!(h.len(), 2);
    assert_eq!(h.locality_histogram().into_iter().collect::<Vec<_>>(), vec![(2, 2)]);
    assert_eq!(h.coeff(&"XX".parse().unwrap()), -0.5);
    assert_eq!(h.coeff(&"YY".parse().unwrap()), -0.5);
}

#[test]
fn non_hermitian_one_body_rejected() {
    let p = SecondQuantizedProblem::new(2).with_one_body(1, 2, 1.0);
    assert!(jw_map(&p).is_err());
}
