use klocal::dense::{string_matrix, sum_matrix, to_dense, CMatrix};
use klocal::pauli::{multiply, Pauli, PauliHamiltonian, PauliString, PauliSum, PauliTerm};
use num_complex::Complex64;
use proptest::prelude::*;

const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn single(p: Pauli) -> CMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    match p {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(1.0, 0.0)]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    }
}

/// Kronecker product with qubit 1 as the leftmost factor.
fn kron_oracle(s: &PauliString) -> CMatrix {
    s.ops().iter().fold(CMatrix::identity(1, 1), |acc, &p| acc.kronecker(&single(p)))
}

fn close(a: &CMatrix, b: &CMatrix) -> bool {
    (a - b).iter().all(|z| z.norm() < 1e-12)
}

fn pauli() -> impl Strategy<Value = Pauli> {
    prop::sample::select(ALL.to_vec())
}

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(pauli(), n).prop_map(|v| PauliString::new(v).unwrap())
}

fn strings(k: usize) -> impl Strategy<Value = Vec<PauliString>> {
    (1usize..=5).prop_flat_map(move |n| prop::collection::vec(string(n), k))
}

#[test]
fn single_qubit_group_table_exhaustive() {
    for a in ALL {
        for b in ALL {
            let x = PauliString::new(vec![a]).unwrap();
            let y = PauliString::new(vec![b]).unwrap();
            let (ph, p) = multiply(&x, &y).unwrap();
            let lhs = single(a) * single(b);
            assert!(close(&lhs, &(string_matrix(&p) * ph)), "{a:?}{b:?}");
            // closure, involution, identity
            assert!(close(&(single(a) * single(a)), &single(Pauli::I)));
            let (_, e) = multiply(&x, &PauliString::identity(1)).unwrap();
            assert_eq!(e, x);
            // commutation flag agrees with matrices
            let comm = &lhs - single(b) * single(a);
            assert_eq!(x.commutes_with(&y), comm.iter().all(|z| z.norm() < 1e-12));
            for c in ALL {
                let z = PauliString::new(vec![c]).unwrap();
                let (p1, ab) = multiply(&x, &y).unwrap();
                let (p2, ab_c) = multiply(&ab, &z).unwrap();
                let (q1, bc) = multiply(&y, &z).unwrap();
                let (q2, a_bc) = multiply(&x, &bc).unwrap();
                assert_eq!(ab_c, a_bc);
                assert!((p1 * p2 - q1 * q2).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn dense_string_matches_kronecker_exhaustive_small() {
    for n in 1..=3 {
        let mut idx = vec![0usize; n];
        loop {
            let s = PauliString::new(idx.iter().map(|&i| ALL[i]).collect()).unwrap();
            assert!(close(&string_matrix(&s), &kron_oracle(&s)), "{s}");
            let mut k = 0;
            while k < n && idx[k] == 3 {
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            idx[k] += 1;
        }
    }
}

#[test]
fn locality_and_labels() {
    let s: PauliString = "XIZY".parse().unwrap();
    assert_eq!(s.locality(), 3);
    assert_eq!(s.support(), vec![1, 3, 4]);
    assert_eq!(s.sparse_label(), "X1 Z3 Y4");
    assert!("XQ".parse::<PauliString>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_matrix_product(v in strings(2)) {
        let (ph, p) = multiply(&v[0], &v[1]).unwrap();
        let lhs = string_matrix(&v[0]) * string_matrix(&v[1]);
        prop_assert!(close(&lhs, &(string_matrix(&p) * ph)));
    }

    #[test]
    fn associativity(v in strings(3)) {
        let (p1, ab) = multiply(&v[0], &v[1]).unwrap();
        let (p2, ab_c) = multiply(&ab, &v[2]).unwrap();
        let (q1, bc) = multiply(&v[1], &v[2]).unwrap();
        let (q2, a_bc) = multiply(&v[0], &bc).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!((p1 * p2 - q1 * q2).norm() < 1e-12);
    }

    #[test]
    fn involution_and_identity(v in strings(1)) {
        let (ph, sq) = multiply(&v[0], &v[0]).unwrap();
        prop_assert!(sq.is_identity());
        prop_assert!((ph - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let (ph, same) = multiply(&v[0], &PauliString::identity(v[0].len())).unwrap();
        prop_assert_eq!(&same, &v[0]);
        prop_assert!((ph - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn commutation_flag(v in strings(2)) {
        let (a, b) = (string_matrix(&v[0]), string_matrix(&v[1]));
        let comm = &a * &b - &b * &a;
        prop_assert_eq!(v[0].commutes_with(&v[1]), comm.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn kronecker_oracle(v in strings(1)) {
        prop_assert!(close(&string_matrix(&v[0]), &kron_oracle(&v[0])));
    }

    #[test]
    fn dense_realization_is_linear(v in strings(3), c in prop::collection::vec(-3.0f64..3.0, 3)) {
        let n = v[0].len();
        let terms: Vec<PauliTerm> = v.iter().zip(&c).map(|(s, &x)| PauliTerm::new(x, s.clone())).collect();
        let sum = PauliSum::from_terms(n, terms).unwrap();
        let mut want = CMatrix::zeros(1 << n, 1 << n);
        for (s, &x) in v.iter().zip(&c) {
            want += kron_oracle(s) * Complex64::new(x, 0.0);
        }
        prop_assert!(close(&sum_matrix(&sum, 8).unwrap(), &want));
    }

    #[test]
    fn hamiltonian_json_round_trip(v in strings(3), c in prop::collection::vec(-3.0f64..3.0, 3)) {
        let n = v[0].len();
        let h = PauliHamiltonian::assemble(v.iter().zip(&c).map(|(s, &x)| PauliTerm::new(x, s.clone())), n).unwrap();
        let text = h.to_json().unwrap();
        let back = PauliHamiltonian::from_json(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.to_json().unwrap(), text);
        let d = to_dense(&h, 8).unwrap();
        prop_assert!(close(d.entries(), &d.entries().adjoint()));
    }
}
