//! A qubit in an equal superposition is recorded by a chain of spins. Each
//! step adds one more correlated record while the qubit's reduced state stays
//! an even mixture.
//!
//! cargo run --example single_qubit_branching

use std::f64::consts::FRAC_1_SQRT_2;

use branching_lattice::{branch_decompose, coherence, purity, reduced_density_matrix, scenario_single, SiteId};
use num_complex::Complex64;

fn main() -> branching_lattice::Result<()> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let run = scenario_single(h, h, 4)?;
    for (t, state) in run.run()?.iter().enumerate() {
        let rho = reduced_density_matrix(state, &[SiteId(0)])?;
        let branches = branch_decompose(state, run.tolerance)?;
        println!(
            "t={t}  {}\n      qubit coherence {:.3}  purity {:.3}  branches {}",
            state.pretty(),
            coherence(&rho),
            purity(&rho),
            branches.len()
        );
    }
    Ok(())
}
