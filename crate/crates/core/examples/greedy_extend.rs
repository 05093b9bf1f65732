//! Solve the nine-direction reduction of X1 Z2 X3, then add the best single
//! term from every 1- and 2-local string on the four qubits.
//!
//! Usage: `cargo run --release --example greedy_extend [count]`

use klocal::gadget::{lro_init, lro_problem, GadgetSpec};
use klocal::lro::{greedy_extend, optimize, two_local_pool, GreedyConfig, OptimizeConfig};

fn main() -> klocal::Result<()> {
    let count = std::env::args().nth(1).map_or(1, |a| a.parse().expect("integer argument"));
    let spec = GadgetSpec::for_string(1.0, "XZX", 1.0)?;
    let problem = lro_problem(&spec)?;
    let base = optimize(&problem, &OptimizeConfig { init: lro_init(&spec, 16, 0)?, ..Default::default() })?;
    println!("start cost {:.3e}", base.cost.total);

    let pool = two_local_pool(problem.n_total(), &problem.basis);
    let out = greedy_extend(&problem, &base, &pool, count, &GreedyConfig::default())?;
    for (i, s) in out.steps.iter().enumerate() {
        println!("step {}: {} ({} tied), cost {:.3e} -> {:.3e}", i + 1, s.selected, s.ties.len(), s.cost_before, s.cost_after);
        let mut ranked = s.scores.clone();
        ranked.sort_by(|a, b| a.cost.total_cmp(&b.cost));
        for c in ranked.iter().take(5) {
            println!("    {:>8}  {:.3e}", c.label, c.cost);
        }
    }
    println!("final d_m {:.3}", out.report.dm_spread);
    Ok(())
}
