use klocal::dense::{eig, to_dense, DEFAULT_GROUPING_TOL, DEFAULT_QUBIT_CAP};
use klocal::gadget::{
    build_gadget, gadget_coefficients, gadget_error, gadget_error_with, gadget_operator_basis,
    gadget_operator_coefficients, log_grid, phg_sweep, pauli_basis_of_gadget, write_sweep_csv, Factor, GadgetOptions,
    GadgetSpec,
};
use klocal::pauli::Pauli;
use klocal::Error;

fn xzx(a: f64, delta: f64) -> GadgetSpec {
    GadgetSpec::for_string(a, "XZX", delta).unwrap()
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[test]
fn coupling_scaling_exponents() {
    let grid = log_grid(1e2, 1e8, 7);
    let k: Vec<f64> = grid.iter().map(|&d| gadget_coefficients(1.0, d).unwrap().lambda).collect();
    let m: Vec<f64> = grid.iter().map(|&d| gadget_coefficients(1.0, d).unwrap().mu).collect();
    assert!((slope(&grid, &k) - 0.75).abs() < 1e-12);
    assert!((slope(&grid, &m) - 0.5).abs() < 1e-12);
    let neg = gadget_coefficients(-2.0, 10.0).unwrap();
    assert!(neg.kappa < 0.0 && neg.lambda > 0.0);
    assert!((neg.lambda - 10f64.powf(0.75)).abs() < 1e-12);
}

#[test]
fn zero_coefficient_is_degenerate() {
    assert!(matches!(gadget_coefficients(0.0, 10.0), Err(Error::DegenerateTarget)));
}

#[test]
fn overlapping_factors_rejected() {
    let mut s = xzx(1.0, 10.0);
    s.p2 = Factor { pauli: Pauli::Z, qubit: 1 };
    assert!(matches!(s.validate(), Err(Error::OverlappingQubits(_))));
}

#[test]
fn sweep_error_is_monotone_and_spread_tracks_delta() {
    let grid = log_grid(1e2, 1e8, 7);
    let rows = phg_sweep(&xzx(1.0, 1.0), &grid, None);
    let errs: Vec<f64> = rows.iter().map(|r| r.error.unwrap().spectral_error).collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    let spreads: Vec<f64> = rows.iter().map(|r| r.error.unwrap().spread).collect();
    let last = *spreads.last().unwrap();
    assert!(last > 1e7 && last < 1e9);
    let p = slope(&grid, &spreads);
    assert!((0.75..=1.0).contains(&p), "exponent {p}");
}

#[test]
fn physical_branch_approaches_target() {
    let e = gadget_error(&xzx(1.0, 1e8), None).unwrap();
    assert!(e.spectral_error < 0.05);
    assert!(e.min_gap > 0.9e8);
    let neg = gadget_error(&xzx(-1.0, 1e8), None).unwrap();
    assert!(neg.spectral_error < 0.05);
}

#[test]
fn second_order_correction_ablation() {
    // dropping the fourth-order term leaves a residual that does not vanish
    // faster than the full gadget's error
    for delta in [1e4, 1e6] {
        let full = gadget_error(&xzx(1.0, delta), None).unwrap().spectral_error;
        let cut = gadget_error_with(&xzx(1.0, delta), None, GadgetOptions { include_v2: false }).unwrap().spectral_error;
        assert!(full <= cut * (1.0 + 1e-9), "delta {delta}: {full} vs {cut}");
    }
}

#[test]
fn operator_basis_spans_every_gadget() {
    for delta in [10.0, 1e3, 1e5] {
        let spec = xzx(1.3, delta);
        let basis = gadget_operator_basis(&spec).unwrap();
        let d = gadget_operator_coefficients(&spec).unwrap();
        let mut h = klocal::pauli::PauliHamiltonian::empty(4);
        for (b, &x) in basis.iter().zip(&d) {
            h = h.plus(&b.op().scaled(x)).unwrap();
        }
        let g = build_gadget(&spec).unwrap();
        let a = to_dense(&h, DEFAULT_QUBIT_CAP).unwrap();
        let b = to_dense(&g, DEFAULT_QUBIT_CAP).unwrap();
        let scale = delta.max(1.0);
        assert!((a.entries() - b.entries()).iter().all(|z| z.norm() < 1e-9 * scale));
        let ea = eig(&a, DEFAULT_GROUPING_TOL).eigenvalues;
        let eb = eig(&b, DEFAULT_GROUPING_TOL).eigenvalues;
        assert!(ea.iter().zip(&eb).all(|(x, y)| (x - y).abs() < 1e-9 * scale));
    }
    assert_eq!(pauli_basis_of_gadget(&xzx(1.0, 10.0)).unwrap().len(), 9);
}

#[test]
fn sweep_csv_flags_collapsed_rows() {
    let rows = phg_sweep(&xzx(1.0, 1.0), &[1e-3, 1e3], None);
    let mut out = Vec::new();
    write_sweep_csv(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,spectral_error,spread,min_gap");
    assert_eq!(lines.len(), 3);
    if rows[0].error.is_none() {
        assert!(lines[1].contains("NaN"));
        assert!(rows[0].note.is_some());
    }
    assert!(rows[1].error.is_some());
}
