//! Map a two-site hopping model with on-site repulsion to qubits and print
//! the Pauli terms and their locality histogram.
//!
//! Usage: `cargo run --example jordan_wigner`

use klocal::fermion::{jw_map, locality_histogram, SecondQuantizedProblem};

fn main() -> klocal::Result<()> {
    // modes 1,2 = site 1 up/down, modes 3,4 = site 2 up/down
    let p = SecondQuantizedProblem::new(4)
        .with_one_body(1, 3, -1.0)
        .with_one_body(3, 1, -1.0)
        .with_one_body(2, 4, -1.0)
        .with_one_body(4, 2, -1.0)
        // U n_up n_down with U = 4, written as the two orderings of the pair
        .with_two_body(1, 2, 1, 2, 4.0)
        .with_two_body(2, 1, 2, 1, 4.0)
        .with_two_body(3, 4, 3, 4, 4.0)
        .with_two_body(4, 3, 4, 3, 4.0);
    let h = jw_map(&p)?;
    for (s, c) in h.terms() {
        println!("{c:+.4}  {s}");
    }
    println!("locality histogram {:?}", locality_histogram(&h));
    Ok(())
}
