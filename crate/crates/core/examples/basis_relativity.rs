//! Decoherence picks out a basis: an unequal superposition leaves the qubit
//! diagonal in the computational basis but not in the Hadamard basis, while
//! an equal superposition looks the same in every basis.
//!
//! cargo run --example basis_relativity

use std::collections::BTreeMap;

use branching_lattice::{change_basis, coherence, reduced_density_matrix, scenario_single, DensityMatrix, Gate1, SiteId};
use num_complex::Complex64;

fn show(label: &str, rho: &DensityMatrix) {
    println!("{label}");
    for row in rho.rows() {
        let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:+.4}{im:+.4}i")).collect();
        println!("    [{}]", cells.join("  "));
    }
    println!("    coherence {:.4}", coherence(rho));
}

fn main() -> branching_lattice::Result<()> {
    for (a, b) in [((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()), (0.5f64.sqrt(), 0.5f64.sqrt())] {
        let states = scenario_single(Complex64::new(a, 0.0), Complex64::new(b, 0.0), 3)?.run()?;
        let rho = reduced_density_matrix(&states[1], &[SiteId(0)])?;
        println!("initial qubit {a:.4}|0⟩ + {b:.4}|1⟩, t=1");
        show("  computational basis", &rho);
        let rotations = BTreeMap::from([(SiteId(0), Gate1::hadamard())]);
        show("  Hadamard basis", &change_basis(&rho, &rotations)?);
    }
    Ok(())
}
