//! Reduces a single 4-local string to a 2-local Hamiltonian, one locality
//! level per step. Usage: `ladder [STRING] [COEFF]`, default `XZXZ 1`.

use std::time::Instant;

use klocal::lro::{reduce_ladder, LadderConfig};
use klocal::pauli::PauliHamiltonian;

fn main() -> klocal::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let string = args.first().map(String::as_str).unwrap_or("XZXZ");
    let coeff: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let h = PauliHamiltonian::from_real(string.len(), &[(coeff, string)])?;
    let t = Instant::now();
    let out = reduce_ladder(&h, &LadderConfig::default())?;
    for (i, s) in out.steps.iter().enumerate() {
        println!(
            "step {}: {} -> {}  reduced {:?}  ancillas {:?}  D {:.3e}  d_m {:.3}  start {}",
            i + 1,
            s.locality_before,
            s.locality_after,
            s.reduced,
            s.ancillas,
            s.report.cost.total,
            s.report.dm_spread,
            s.report.provenance.start
        );
    }
    println!("final locality {}  ancillas {}  terms {}", out.hamiltonian.max_locality(), out.n_ancilla, out.hamiltonian.len());
    println!("max physical-branch deviation {:.3e}", out.max_spectral_deviation);
    for (s, c) in out.hamiltonian.terms() {
        println!("  {:>14.6}  {}", c, s.sparse_label());
    }
    println!("elapsed {:.1?}", t.elapsed());
    Ok(())
}
