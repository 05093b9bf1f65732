//! Sweep the perturbative gadget for X1 Z2 X3 over a log grid of gaps and
//! write the CSV to stdout.
//!
//! Usage: `cargo run --release --example phg_sweep [lo] [hi] [count]`

use klocal::gadget::{log_grid, phg_sweep, write_sweep_csv, GadgetSpec};

fn main() -> klocal::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let lo = args.next().unwrap_or(1e2);
    let hi = args.next().unwrap_or(1e8);
    let count = args.next().unwrap_or(13.0) as usize;
    let spec = GadgetSpec::for_string(1.0, "XZX", 1.0)?;
    let rows = phg_sweep(&spec, &log_grid(lo, hi, count), None);
    write_sweep_csv(&rows, std::io::stdout().lock())
}
