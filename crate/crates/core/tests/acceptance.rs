//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
//! criterion fails that is not listed in `KNOWN_FAILING`.

use std::time::{Duration, Instant};

use klocal::dense::{
    eig, partial_trace, string_matrix, sum_matrix, to_dense, CMatrix, DensityMatrix, DEFAULT_GROUPING_TOL,
    DEFAULT_QUBIT_CAP,
};
use klocal::fermion::{jw_map, jw_map_operator, LadderKind, SecondQuantizedProblem};
use klocal::gadget::{build_gadget, log_grid, lro_init, lro_problem, phg_sweep, GadgetSpec};
use klocal::lro::{
    density_validation, greedy_extend, optimize, reduce_ladder, stability_sweep, two_local_pool, GreedyConfig,
    LadderConfig, OptimizeConfig, ReductionProblem, ReductionReport, StabilityConfig,
};
use klocal::pauli::{multiply, Pauli, PauliHamiltonian, PauliString};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// criterion 1
const C1_COST: f64 = 1e-8;
const C1_SPECTRAL: f64 = 1e-6;
const C1_SPREAD: f64 = 200.0;
const C1_RUNTIME: Duration = Duration::from_secs(300);
const C1_STARTS: usize = 32;
const C1_SEED: u64 = 7;
// criterion 2
const C2_TERM: &str = "X3 Z4";
// criterion 3
const C3_GROUP_SIZE: usize = 4;
const C3_EIGENVALUE: f64 = -1.0;
const C3_EIGENVALUE_TOL: f64 = 1e-12;
const C3_MAX_ENTRY: f64 = 1e-6;
// criterion 4
const C4_SPREAD_AT_TOP: f64 = 1e8;
const C4_SPREAD_FACTOR: f64 = 10.0;
const C4_EXPONENT: (f64, f64) = (0.75, 1.0);
// criterion 5
const C5_MAGNITUDES: [f64; 5] = [1e-6, 1e-4, 1e-2, 1.0, 10.0];
const C5_SAMPLES: usize = 32;
const C5_SEED: u64 = 0;
const C5_AT_ONE_PERCENT: (f64, f64) = (0.01, 1.0);
const C5_AT_1E4_PERCENT: f64 = 1e-5;
// criterion 6
const C6_ORACLE_TOL: f64 = 1e-12;
const C6_RECONSTRUCTION_TOL: f64 = 1e-10;
const C6_RANDOM_CASES: usize = 200;
const C6_SEED: u64 = 2024;
// criteria 5 and 7 share the stability settings

const KNOWN_FAILING: &[u32] = &[5];

struct Outcome {
    id: u32,
    pass: bool,
}

fn report(id: u32, name: &str, pass: bool, detail: String) -> Outcome {
    let tag = match (pass, KNOWN_FAILING.contains(&id)) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known)",
        (false, false) => "FAIL",
    };
    println!("criterion {id} [{name}]: {tag} -- {detail}");
    Outcome { id, pass }
}

fn xzx() -> GadgetSpec {
    GadgetSpec::for_string(1.0, "XZX", 1.0).unwrap()
}

fn lro9() -> (ReductionProblem, ReductionReport, Duration) {
    let spec = xzx();
    let problem = lro_problem(&spec).unwrap();
    let cfg = OptimizeConfig { init: lro_init(&spec, C1_STARTS, C1_SEED).unwrap(), ..Default::default() };
    let t = Instant::now();
    let r = optimize(&problem, &cfg).unwrap();
    (problem, r, t.elapsed())
}

fn criterion1(r: &ReductionReport, elapsed: Duration) -> Outcome {
    let pass = r.cost.total <= C1_COST
        && r.spectral_abs_error <= C1_SPECTRAL
        && r.dm_spread <= C1_SPREAD
        && elapsed <= C1_RUNTIME;
    report(
        1,
        "LRO-9 reproduction",
        pass,
        format!(
            "D = {:.3e} (<= {C1_COST:e}), sum|d eps| = {:.3e} (<= {C1_SPECTRAL:e}), d_m = {:.3} (<= {C1_SPREAD}), {:.1?} (<= {:?}), start {}",
            r.cost.total, r.spectral_abs_error, r.dm_spread, elapsed, C1_RUNTIME, r.provenance.start
        ),
    )
}

fn criterion2(problem: &ReductionProblem, r9: &ReductionReport) -> Outcome {
    let pool = two_local_pool(problem.n_total(), &problem.basis);
    let out = greedy_extend(problem, r9, &pool, 1, &GreedyConfig::default()).unwrap();
    let step = &out.steps[0];
    let in_argmin = step.selected == C2_TERM || step.ties.iter().any(|t| t == C2_TERM);
    let pass = in_argmin && out.report.cost.total <= r9.cost.total;
    report(
        2,
        "LRO-10 greedy extension",
        pass,
        format!(
            "pool {}, selected {}, tie set of {} contains {C2_TERM}: {in_argmin}, cost {:.3e} <= {:.3e}",
            pool.len(),
            step.selected,
            step.ties.len(),
            out.report.cost.total,
            r9.cost.total
        ),
    )
}

fn criterion3(problem: &ReductionProblem, r9: &ReductionReport) -> Outcome {
    match density_validation(r9, problem) {
        Ok(v) => {
            let g = &v.groups[0];
            let pass = g.size == C3_GROUP_SIZE
                && (g.eigenvalue - C3_EIGENVALUE).abs() <= C3_EIGENVALUE_TOL
                && g.max_entry <= C3_MAX_ENTRY;
            report(
                3,
                "density-matrix validation",
                pass,
                format!(
                    "ground group size {} at {:.12}, max-entry error {:.3e} (<= {C3_MAX_ENTRY:e}), Frobenius {:.3e}",
                    g.size, g.eigenvalue, g.max_entry, g.frobenius
                ),
            )
        }
        Err(e) => report(3, "density-matrix validation", false, e.to_string()),
    }
}

fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

fn criterion4() -> Outcome {
    let grid = log_grid(1e2, 1e8, 7);
    let rows = phg_sweep(&xzx(), &grid, None);
    if rows.iter().any(|r| r.error.is_none()) {
        return report(4, "PHG baseline", false, "branch collapse on the grid".into());
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.error.unwrap().spectral_error).collect();
    let spreads: Vec<f64> = rows.iter().map(|r| r.error.unwrap().spread).collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
    let top = *spreads.last().unwrap();
    let within = top >= C4_SPREAD_AT_TOP / C4_SPREAD_FACTOR && top <= C4_SPREAD_AT_TOP * C4_SPREAD_FACTOR;
    let p = log_slope(&grid, &spreads);
    let exp_ok = p >= C4_EXPONENT.0 && p <= C4_EXPONENT.1;
    report(
        4,
        "PHG baseline",
        monotone && within && exp_ok,
        format!(
            "error nonincreasing: {monotone} ({:.3e} -> {:.3e}), spread at 1e8 = {top:.3e} (factor {C4_SPREAD_FACTOR}), exponent {p:.3} in [{}, {}]",
            errs[0],
            errs[errs.len() - 1],
            C4_EXPONENT.0,
            C4_EXPONENT.1
        ),
    )
}

fn criterion5(problem: &ReductionProblem, r9: &ReductionReport) -> Outcome {
    let cfg = StabilityConfig { magnitudes_percent: C5_MAGNITUDES.to_vec(), samples: C5_SAMPLES, seed: C5_SEED };
    let s = match stability_sweep(r9, problem, &cfg) {
        Ok(s) => s,
        Err(e) => return report(5, "stability", false, e.to_string()),
    };
    let mean: Vec<f64> = s.rows.iter().map(|r| r.mean_density_err).collect();
    let at1 = s.row(1.0).unwrap().mean_density_err;
    let at4 = s.row(1e-4).unwrap().mean_density_err;
    let band = at1 >= C5_AT_ONE_PERCENT.0 && at1 <= C5_AT_ONE_PERCENT.1;
    let small = at4 <= C5_AT_1E4_PERCENT;
    let monotone = mean.windows(2).all(|w| w[1] >= w[0]);
    let curve: Vec<String> = mean.iter().map(|m| format!("{m:.2e}")).collect();
    report(
        5,
        "stability",
        band && small && monotone,
        format!(
            "mean error at 1% = {at1:.3e} in [{}, {}]: {band}; at 1e-4% = {at4:.3e} <= {C5_AT_1E4_PERCENT:e}: {small}; nondecreasing: {monotone} [{}]; spectral at 1% = {:.3e}",
            C5_AT_ONE_PERCENT.0,
            C5_AT_ONE_PERCENT.1,
            curve.join(", "),
            s.row(1.0).unwrap().mean_spectral_err
        ),
    )
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn annihilator_oracle(j: usize, n: usize) -> CMatrix {
    let dim = 1 << n;
    let occ = |idx: usize, k: usize| idx >> (n - k) & 1 == 1;
    let mut m = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        if occ(idx, j) {
            let parity = (1..j).filter(|&k| occ(idx, k)).count();
            m[(idx ^ (1 << (n - j)), idx)] = Complex64::new(if parity % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        }
    }
    m
}

fn suite_a() -> (bool, usize) {
    let mut checked = 0;
    for n in 1..=4 {
        let a: Vec<CMatrix> = (1..=n).map(|j| annihilator_oracle(j, n)).collect();
        let c = |i: usize| a[i - 1].adjoint();
        for i in 1..=n {
            for j in 1..=n {
                let mut p = SecondQuantizedProblem::new(n).with_one_body(i, j, 0.75);
                let mut want = c(i) * &a[j - 1] * Complex64::new(0.75, 0.0);
                if i != j {
                    p = p.with_one_body(j, i, 0.75);
                    want += c(j) * &a[i - 1] * Complex64::new(0.75, 0.0);
                }
                let got = to_dense(&jw_map(&p).unwrap(), DEFAULT_QUBIT_CAP).unwrap();
                if max_abs(&(got.entries() - &want)) > C6_ORACLE_TOL {
                    return (false, checked);
                }
                checked += 1;
                for k in 1..=n {
                    for l in 1..=n {
                        let tb = |i: usize, j: usize, k: usize, l: usize| {
                            c(i) * c(j) * &a[l - 1] * &a[k - 1] * Complex64::new(0.5 * 0.4, 0.0)
                        };
                        let mut p = SecondQuantizedProblem::new(n).with_two_body(i, j, k, l, 0.4);
                        let mut want = tb(i, j, k, l);
                        if (k, l) != (i, j) {
                            p = p.with_two_body(k, l, i, j, 0.4);
                            want += tb(k, l, i, j);
                        }
                        let got = to_dense(&jw_map(&p).unwrap(), DEFAULT_QUBIT_CAP).unwrap();
                        if max_abs(&(got.entries() - &want)) > C6_ORACLE_TOL {
                            return (false, checked);
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    (true, checked)
}

fn suite_b() -> bool {
    (1..=4).all(|n| {
        let a: Vec<CMatrix> = (1..=n)
            .map(|j| sum_matrix(&jw_map_operator(LadderKind::Annihilation, j, n).unwrap(), 8).unwrap())
            .collect();
        let dim = 1 << n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ad = a[j].adjoint();
                let anti = &a[i] * &ad + &ad * &a[i];
                let want = if i == j { CMatrix::identity(dim, dim) } else { CMatrix::zeros(dim, dim) };
                max_abs(&(anti - want)) <= C6_ORACLE_TOL
            })
        })
    })
}

fn random_string(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    PauliString::new((0..n).map(|_| all[rng.gen_range(0..4)]).collect()).unwrap()
}

fn group_laws(x: &PauliString, y: &PauliString, z: &PauliString) -> bool {
    let (ph, p) = multiply(x, y).unwrap();
    let product = string_matrix(x) * string_matrix(y);
    let closure = max_abs(&(product - string_matrix(&p) * ph)) <= C6_ORACLE_TOL;
    let (p1, ab) = multiply(x, y).unwrap();
    let (p2, ab_c) = multiply(&ab, z).unwrap();
    let (q1, bc) = multiply(y, z).unwrap();
    let (q2, a_bc) = multiply(x, &bc).unwrap();
    let assoc = ab_c == a_bc && (p1 * p2 - q1 * q2).norm() <= C6_ORACLE_TOL;
    let (pi, sq) = multiply(x, x).unwrap();
    let inv = sq.is_identity() && (pi - Complex64::new(1.0, 0.0)).norm() <= C6_ORACLE_TOL;
    closure && assoc && inv
}

fn suite_c(rng: &mut ChaCha8Rng) -> bool {
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let one = |p: Pauli| PauliString::new(vec![p]).unwrap();
    let exhaustive =
        all.iter().all(|&a| all.iter().all(|&b| all.iter().all(|&c| group_laws(&one(a), &one(b), &one(c)))));
    let randomized = (0..C6_RANDOM_CASES).all(|_| {
        let n = rng.gen_range(1..=5);
        group_laws(&random_string(rng, n), &random_string(rng, n), &random_string(rng, n))
    });
    exhaustive && randomized
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let m = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr, "rho").unwrap()
}

fn suite_d(rng: &mut ChaCha8Rng) -> bool {
    (0..C6_RANDOM_CASES / 4).all(|_| {
        let rho = random_density(rng, 8);
        let r01 = partial_trace(&rho, &[0, 1], &[2, 2, 2]).unwrap();
        let r0 = partial_trace(&rho, &[0], &[2, 2, 2]).unwrap();
        let via = partial_trace(&r01, &[0], &[2, 2]).unwrap();
        (r01.trace().re - 1.0).abs() < 1e-10
            && r01.min_eigenvalue() > -1e-12
            && r0.validate(1.0).is_ok()
            && max_abs(&(via.entries - &r0.entries)) <= C6_ORACLE_TOL
    })
}

fn suite_e(rng: &mut ChaCha8Rng) -> bool {
    let mut ops = vec![
        PauliHamiltonian::from_real(3, &[(1.0, "XZX")]).unwrap(),
        PauliHamiltonian::from_real(4, &[(1.0, "XZXZ")]).unwrap(),
        PauliHamiltonian::from_real(2, &[(-0.5, "XX"), (-0.5, "YY")]).unwrap(),
    ];
    for delta in log_grid(1e2, 1e8, 7) {
        ops.push(build_gadget(&xzx().with_delta(delta)).unwrap());
    }
    for _ in 0..C6_RANDOM_CASES / 4 {
        let n = rng.gen_range(1..=5);
        let terms: Vec<(f64, String)> =
            (0..4).map(|_| (rng.gen_range(-2.0..2.0), random_string(rng, n).to_string())).collect();
        let t: Vec<(f64, &str)> = terms.iter().map(|(c, s)| (*c, s.as_str())).collect();
        ops.push(PauliHamiltonian::from_real(n, &t).unwrap());
    }
    ops.iter().all(|h| {
        let d = to_dense(h, DEFAULT_QUBIT_CAP).unwrap();
        let s = eig(&d, DEFAULT_GROUPING_TOL);
        let scale = max_abs(d.entries()).max(1.0);
        max_abs(&(s.reconstruct() - d.entries())) <= C6_RECONSTRUCTION_TOL * scale
    })
}

fn suite_f() -> (bool, String) {
    let h = PauliHamiltonian::from_real(4, &[(1.0, "XZXZ")]).unwrap();
    let cfg = LadderConfig::default();
    let bound = cfg.optimize.tol * 10.0;
    match reduce_ladder(&h, &cfg) {
        Ok(out) => {
            let pass = out.steps.len() == 2
                && out.n_ancilla == 2
                && out.hamiltonian.max_locality() <= 2
                && out.max_spectral_deviation <= bound;
            (
                pass,
                format!(
                    "{} steps, {} ancillas, final locality {}, deviation {:.3e} <= {bound:e}",
                    out.steps.len(),
                    out.n_ancilla,
                    out.hamiltonian.max_locality(),
                    out.max_spectral_deviation
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(C6_SEED);
    let (a, n_a) = suite_a();
    let b = suite_b();
    let c = suite_c(&mut rng);
    let d = suite_d(&mut rng);
    let e = suite_e(&mut rng);
    let (f, f_detail) = suite_f();
    report(
        6,
        "property suites",
        a && b && c && d && e && f,
        format!("(a) JW oracle {a} over {n_a} terms; (b) anticommutators {b}; (c) group laws {c}; (d) partial trace {d}; (e) reconstruction {e}; (f) ladder {f}: {f_detail}"),
    )
}

fn criterion7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |s: &str| dir.path().join(s).to_str().unwrap().to_string();
    let run = |args: &[String]| klocal::commands::run_from(std::iter::once("klocal".to_string()).chain(args.iter().cloned()));
    let lro = |out: &str| {
        run(&["lro", "--output", out, "--seed", "3", "--starts", "8"].map(String::from))
    };
    let stab = |out: &str| {
        run(&["stability", "--input", &path("a.json"), "--output", out, "--seed", "3"].map(String::from))
    };
    let codes = [lro(&path("a.json")), lro(&path("b.json")), stab(&path("a.csv")), stab(&path("b.csv"))];
    let same_lro = std::fs::read(path("a.json")).ok() == std::fs::read(path("b.json")).ok();
    let same_stab = std::fs::read(path("a.csv")).ok() == std::fs::read(path("b.csv")).ok();
    report(
        7,
        "determinism",
        codes.iter().all(|&c| c == 0) && same_lro && same_stab,
        format!("exit codes {codes:?}, lro payload identical {same_lro}, stability payload identical {same_stab}"),
    )
}

fn main() {
    let (problem, r9, elapsed) = lro9();
    let outcomes = vec![
        criterion1(&r9, elapsed),
        criterion2(&problem, &r9),
        criterion3(&problem, &r9),
        criterion4(),
        criterion5(&problem, &r9),
        criterion6(),
        criterion7(),
    ];
    let unexpected: Vec<u32> =
        outcomes.iter().filter(|o| !o.pass && !KNOWN_FAILING.contains(&o.id)).map(|o| o.id).collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    if !unexpected.is_empty() {
        println!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
}
