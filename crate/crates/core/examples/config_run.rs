//! Loads a TOML config, runs it and writes `report.json`, `timeseries.csv`
//! and `correlations.csv`.
//!
//! cargo run --example config_run -- configs/epr.toml /tmp/epr-report

use std::path::PathBuf;

use branching_lattice::report::RunReport;
use branching_lattice::ConfigFile;

fn main() -> branching_lattice::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("configs/epr.toml"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("branching-report"));
    let file = ConfigFile::load(&config)?;
    let scenario = file.build()?;
    let report = RunReport::generate(&scenario, Some(&file))?;
    report.write(&out)?;
    for step in &report.steps {
        println!("t={}  terms {}  branches {}  clusters {}", step.t, step.state.num_terms(), step.branch_count, step.cluster_count);
    }
    println!("wrote {} in {:?}", out.display(), report.wall_time);
    Ok(())
}
