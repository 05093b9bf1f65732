//! Reduce the 3-local term X1 Z2 X3 to a 2-local Hamiltonian on 3 + 1 qubits
//! with the nine gadget-derived directions.
//!
//! Usage: `cargo run --release --example lro_xzx [starts] [seed]`

use std::time::Instant;

use klocal::gadget::{lro_init, lro_problem, GadgetSpec};
use klocal::lro::{density_validation, optimize, OptimizeConfig};

fn main() -> klocal::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let starts = args.next().unwrap_or(32) as usize;
    let seed = args.next().unwrap_or(7);

    let spec = GadgetSpec::for_string(1.0, "XZX", 1.0)?;
    let problem = lro_problem(&spec)?;
    let cfg = OptimizeConfig { init: lro_init(&spec, starts, seed)?, ..Default::default() };
    let t = Instant::now();
    let report = optimize(&problem, &cfg)?;

    for s in &report.provenance.starts {
        println!("{:>14}  D = {:.3e}", s.label, s.cost);
    }
    println!("best start      {}", report.provenance.start);
    println!("D               {:.3e}", report.cost.total);
    println!("spectral error  {:.3e}", report.spectral_abs_error);
    println!("d_m             {:.3}", report.dm_spread);
    for (label, d) in report.basis.iter().zip(&report.d) {
        println!("  {label:>14}  {d:+.9}");
    }
    let v = density_validation(&report, &problem)?;
    println!("max density err {:.3e}", v.max_entry_error());
    println!("elapsed         {:.1?}", t.elapsed());
    Ok(())
}
