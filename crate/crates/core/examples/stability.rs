//! Perturb the optimized coefficients of the X1 Z2 X3 reduction and report
//! how the ground-state density and the spectrum respond.
//!
//! Usage: `cargo run --release --example stability [samples] [seed]`

use klocal::gadget::{lro_init, lro_problem, GadgetSpec};
use klocal::lro::{optimize, stability_sweep, OptimizeConfig, StabilityConfig};

fn main() -> klocal::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let samples = args.next().unwrap_or(32) as usize;
    let seed = args.next().unwrap_or(0);
    let spec = GadgetSpec::for_string(1.0, "XZX", 1.0)?;
    let problem = lro_problem(&spec)?;
    let report = optimize(&problem, &OptimizeConfig { init: lro_init(&spec, 16, 0)?, ..Default::default() })?;
    let cfg = StabilityConfig { samples, seed, ..Default::default() };
    let s = stability_sweep(&report, &problem, &cfg)?;
    println!("{:>10}  {:>12}  {:>12}  {:>12}", "delta %", "mean dens", "max dens", "mean spec");
    for r in &s.rows {
        println!(
            "{:>10.0e}  {:>12.3e}  {:>12.3e}  {:>12.3e}",
            r.delta_percent, r.mean_density_err, r.max_density_err, r.mean_spectral_err
        );
    }
    Ok(())
}
