//! Entanglement front of the single-qubit scenario: a field site stays pure
//! until the record reaches it. Prints a space-time diagram of site entropies.
//!
//! cargo run --example light_cone

use std::f64::consts::FRAC_1_SQRT_2;

use branching_lattice::{reduced_density_matrix, scenario_single, von_neumann_entropy};
use num_complex::Complex64;

fn main() -> branching_lattice::Result<()> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let run = scenario_single(h, h, 12)?;
    println!("rows: time, columns: sites 0..=12, '#' = entangled, '.' = pure");
    for (t, state) in run.run()?.iter().enumerate() {
        let row: String = state
            .lattice()
            .site_ids()
            .map(|s| {
                let rho = reduced_density_matrix(state, &[s]).expect("site on lattice");
                if von_neumann_entropy(&rho) > 1e-9 { '#' } else { '.' }
            })
            .collect();
        println!("t={t:>2}  {row}");
    }
    Ok(())
}
