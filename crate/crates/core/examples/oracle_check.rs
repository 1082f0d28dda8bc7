//! Cross-checks the sparse engine against the dense reference on every
//! built-in scenario and on random gate sequences.
//!
//! cargo run --release --example oracle_check

use branching_lattice::verify::{render_table, verify_run, Check};
use branching_lattice::{catalogue, ConfigFile};

fn main() -> branching_lattice::Result<()> {
    let mut checks: Vec<Check> = Vec::new();
    for (name, _) in catalogue() {
        let scenario = branching_lattice::config::template(name).expect("built-in").build()?;
        let states = scenario.run()?;
        let mut check = verify_run(&scenario, &states, 1e-10);
        check.name = format!("{name}: {}", check.name);
        checks.push(check);
    }
    let custom = ConfigFile::parse(
        r#"
        [[lattice]]
        index = 0
        kind = "system"
        [[lattice]]
        index = 1
        kind = "field"
        [[lattice]]
        index = 2
        kind = "field"
        [init]
        product = [{ site = 0, state = [0.6, [0.0, 0.8]] }, { site = 2, state = [0.7071067811865476, 0.7071067811865476] }]
        [[schedule]]
        time = 0
        pair = [0, 2]
        gate = "U_copy"
        [[schedule]]
        time = 1
        site = 1
        gate = "H"
        [[schedule]]
        time = 2
        pair = [2, 1]
        gate = "U_si"
        "#,
    )?
    .build()?;
    let mut check = verify_run(&custom, &custom.run()?, 1e-10);
    check.name = format!("custom: {}", check.name);
    checks.push(check);
    print!("{}", render_table(&checks));
    Ok(())
}
