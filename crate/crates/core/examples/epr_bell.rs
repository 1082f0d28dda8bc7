//! CHSH values in the entangled-pair scenario. The qubit pair violates the
//! Bell inequality up to 2√2 at the start; the CHSH scan then shows what the
//! field records between them can do at later steps.
//!
//! cargo run --release --example epr_bell

use branching_lattice::{chsh_scan, scenario_collision, scenario_epr, SiteId};

fn main() -> branching_lattice::Result<()> {
    let epr = scenario_epr()?.run()?;
    let collision = scenario_collision()?.run()?;
    let cases = [
        ("entangled pair, qubits 0,5 at t=0", &epr[0], 0, 5),
        ("entangled pair, records 2,3 at t=3", &epr[3], 2, 3),
        ("entangled pair, qubit 0 and record 2 at t=3", &epr[3], 0, 2),
        ("collision, records 2,3 at t=3", &collision[3], 2, 3),
    ];
    for (label, state, a, b) in cases {
        let scan = chsh_scan(state, SiteId(a), SiteId(b), 2.0)?;
        let s = scan.refined_argmax;
        println!(
            "{label:<45} max {:.6}  at a={:.1}° a'={:.1}° b={:.1}° b'={:.1}°",
            scan.refined_max,
            s.a.to_degrees(),
            s.a_prime.to_degrees(),
            s.b.to_degrees(),
            s.b_prime.to_degrees()
        );
    }
    println!("Tsirelson bound 2√2 = {:.6}", 2.0 * std::f64::consts::SQRT_2);
    Ok(())
}
