//! Seeded projective measurements of a record spin. Outcome frequencies follow
//! the branch weights and every collapse leaves a single branch.
//!
//! cargo run --release --example born_sampling

use branching_lattice::{branch_decompose, outcome_probabilities, sample_measurement, scenario_single, MeasurementSetting};
use num_complex::Complex64;

fn main() -> branching_lattice::Result<()> {
    let alpha = Complex64::new(0.6, 0.0);
    let beta = Complex64::new(0.8, 0.0);
    let run = scenario_single(alpha, beta, 4)?;
    let state = &run.run()?[3];
    let setting = MeasurementSetting::new(1, 0.0);
    let [p_up, p_down] = outcome_probabilities(state, setting)?;
    let samples = 10_000u64;
    let mut downs = 0;
    let mut single_branch = 0;
    for seed in 0..samples {
        let (outcome, post) = sample_measurement(state, setting, seed)?;
        downs += outcome as u64;
        if branch_decompose(&post, run.tolerance)?.len() == 1 {
            single_branch += 1;
        }
    }
    println!("Born probabilities: ↑ {p_up:.4}  ↓ {p_down:.4}");
    println!("sampled ↓ frequency over {samples} shots: {:.4}", downs as f64 / samples as f64);
    println!("post-measurement states with a single branch: {single_branch}/{samples}");
    let (outcome, post) = sample_measurement(state, setting, 1)?;
    println!("seed 1 gives outcome {outcome}: {}", post.pretty());
    Ok(())
}
