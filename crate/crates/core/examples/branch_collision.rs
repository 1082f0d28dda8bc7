//! Two independent qubits at the ends of a field. Their records travel
//! inwards and meet: four branches of weight 1/4, yet the qubits themselves
//! never share information.
//!
//! cargo run --example branch_collision

use branching_lattice::{branch_decompose, mutual_information, purity, reduced_density_matrix, scenario_collision, SiteId};

fn main() -> branching_lattice::Result<()> {
    let run = scenario_collision()?;
    for (t, state) in run.run()?.iter().enumerate() {
        let d = branch_decompose(state, run.tolerance)?;
        let mi = mutual_information(state, &[SiteId(0)], &[SiteId(5)])?;
        let p1 = purity(&reduced_density_matrix(state, &[SiteId(1)])?);
        let p4 = purity(&reduced_density_matrix(state, &[SiteId(4)])?);
        println!("t={t}  {}", state.pretty());
        println!("      branches {}  weights {:?}", d.len(), d.branches.iter().map(|b| b.weight).collect::<Vec<_>>());
        println!("      purity(1) {p1:.3}  purity(4) {p4:.3}  I(0:5) {mi:.3e}");
    }
    Ok(())
}
