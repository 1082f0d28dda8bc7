//! Subsystem branches versus extended branches: the qubit is recorded on the
//! right, then also on a spin to its left. The records on both sides end up in
//! one extended branch structure.
//!
//! cargo run --example bidirectional

use branching_lattice::{branch_decompose, extended_branch_clusters, scenario_bidirectional};

fn main() -> branching_lattice::Result<()> {
    let run = scenario_bidirectional(4)?;
    for (t, state) in run.run()?.iter().enumerate() {
        let d = branch_decompose(state, run.tolerance)?;
        let clusters = extended_branch_clusters(state, run.tolerance)?;
        let parts: Vec<String> = clusters
            .partition()
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        println!("t={t}  {}", state.pretty());
        println!("      {} branches, clusters {}", d.len(), parts.join(" "));
    }
    Ok(())
}
