//! Acceptance suite. Runs every criterion, prints one `PASS`/`FAIL` line for
//! each, and exits with a failure status if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::time::{Duration, Instant};

use branching_lattice::oracle::{dense_apply, dense_apply1, dense_branches, dense_entropy, dense_rdm, densify, sparsify, DenseState};
use branching_lattice::{
    branch_decompose, change_basis, chsh_scan, coherence, entanglement_entropy, extended_branch_clusters, gate_field_copy, gate_field_swap,
    gate_system_field, mutual_information, purity, reduced_density_matrix, sample_measurement, scenario_bidirectional, scenario_collision,
    scenario_epr, scenario_single, Gate1, Gate2, GateApplication, Lattice, MeasurementSetting, PureState, ScenarioConfig, SiteId,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BRANCH_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn site(i: i64) -> SiteId {
    SiteId(i)
}

/// Prints the criterion's verdict line.
fn verdict(id: u32, title: &str, problems: Vec<String>, summary: String) -> bool {
    if problems.is_empty() {
        println!("criterion {id:>2} PASS  {title}: {summary}");
        true
    } else {
        println!("criterion {id:>2} FAIL  {title}: {}", problems.join("; "));
        false
    }
}

fn equal_superposition(lattice: &Lattice, terms: &[&str]) -> PureState {
    let amps: Vec<(&str, Complex64)> = terms.iter().map(|t| (*t, c(1.0))).collect();
    PureState::from_terms(lattice.clone(), &amps).unwrap()
}

fn matrix_dev(rho: &branching_lattice::DensityMatrix, want: [[f64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            worst = worst.max((rho.get(i, j) - c(*w)).norm());
        }
    }
    worst
}

fn criterion_01_single_qubit_record_states() -> bool {
    let h = c(FRAC_1_SQRT_2);
    let start = Instant::now();
    let states = scenario_single(h, h, 4).unwrap().run().unwrap();
    let elapsed = start.elapsed();
    let l = states[0].lattice().clone();
    let printed = [["00000", "10000"], ["01000", "10000"], ["01100", "10000"], ["01110", "10000"]];
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    for (t, terms) in printed.iter().enumerate() {
        let ov = states[t].overlap(&equal_superposition(&l, terms)).unwrap();
        worst = worst.max((ov - 1.0).abs());
        if (ov - 1.0).abs() > 1e-12 {
            problems.push(format!("t={t} overlap {ov}"));
        }
    }
    if elapsed >= Duration::from_millis(10) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    verdict(1, "single-qubit record states", problems, format!("max |overlap − 1| = {worst:.1e}, runtime {elapsed:?}"))
}

fn haar_qubit_unitary<R: Rng>(rng: &mut R) -> Gate1 {
    let (a, b) = (rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() * std::f64::consts::TAU);
    let g: f64 = rng.random::<f64>() * std::f64::consts::PI;
    let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let (s, co) = (g / 2.0).sin_cos();
    Gate1::new("haar", [[e(a + phase) * co, -e(b + phase) * s], [e(phase - b) * s, e(phase - a) * co]]).unwrap()
}

fn criterion_02_maximally_mixed_qubit() -> bool {
    let h = c(FRAC_1_SQRT_2);
    let states = scenario_single(h, h, 4).unwrap().run().unwrap();
    let rho = reduced_density_matrix(&states[1], &[site(0)]).unwrap();
    let mut problems = Vec::new();
    let dev = matrix_dev(&rho, [[0.5, 0.0], [0.0, 0.5]]);
    if dev >= 1e-12 {
        problems.push(format!("RDM deviates by {dev:.3e}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rotated = change_basis(&rho, &BTreeMap::from([(site(0), haar_qubit_unitary(&mut rng))])).unwrap();
        worst = worst.max(coherence(&rotated)).max(matrix_dev(&rotated, [[0.5, 0.0], [0.0, 0.5]]));
    }
    if worst >= 1e-12 {
        problems.push(format!("rotated basis deviation {worst:.3e}"));
    }
    verdict(2, "maximally mixed qubit in every basis", problems, format!("entry deviation {dev:.1e}, worst rotated {worst:.1e}"))
}

fn criterion_03_basis_relativity() -> bool {
    let states = scenario_single(c((2.0f64 / 3.0).sqrt()), c((1.0f64 / 3.0).sqrt()), 4).unwrap().run().unwrap();
    let rho = reduced_density_matrix(&states[1], &[site(0)]).unwrap();
    let d1 = matrix_dev(&rho, [[2.0 / 3.0, 0.0], [0.0, 1.0 / 3.0]]);
    let rotated = change_basis(&rho, &BTreeMap::from([(site(0), Gate1::hadamard())])).unwrap();
    let d2 = matrix_dev(&rotated, [[0.5, 1.0 / 6.0], [1.0 / 6.0, 0.5]]);
    let mut problems = Vec::new();
    if d1 >= 1e-12 {
        problems.push(format!("computational-basis RDM off by {d1:.3e}"));
    }
    if d2 >= 1e-12 {
        problems.push(format!("Hadamard-basis RDM off by {d2:.3e}"));
    }
    verdict(3, "basis relativity of diagonality", problems, format!("deviations {d1:.1e}, {d2:.1e}"))
}

fn criterion_04_bidirectional_record() -> bool {
    let states = scenario_bidirectional(4).unwrap().run().unwrap();
    // sites −1, 0, 1, 2, 3, 4
    let want = equal_superposition(states[0].lattice(), &["101110", "010000"]);
    let ov = states[4].overlap(&want).unwrap();
    let problems = if (ov - 1.0).abs() > 1e-12 { vec![format!("t=4 overlap {ov}")] } else { vec![] };
    verdict(4, "bidirectional record at t=4", problems, format!("|overlap − 1| = {:.1e}", (ov - 1.0).abs()))
}

fn criterion_05_branch_collision() -> bool {
    let states = scenario_collision().unwrap().run().unwrap();
    let mut problems = Vec::new();
    let d = branch_decompose(&states[3], BRANCH_TOL).unwrap();
    if d.len() != 4 {
        problems.push(format!("{} branches at t=3", d.len()));
    }
    for b in &d.branches {
        if (b.weight - 0.25).abs() > 1e-12 {
            problems.push(format!("weight {}", b.weight));
        }
    }
    for s in [1, 4] {
        let p = purity(&reduced_density_matrix(&states[2], &[site(s)]).unwrap());
        if (p - 1.0).abs() > 1e-10 {
            problems.push(format!("site {s} purity {p} at t=2"));
        }
    }
    let mi = mutual_information(&states[3], &[site(0)], &[site(5)]).unwrap();
    if mi.abs() > 1e-10 {
        problems.push(format!("qubit mutual information {mi}"));
    }
    verdict(5, "branch collision", problems, format!("{} branches, qubit MI {mi:.1e}", d.len()))
}

fn criterion_06_entangled_pair_branches() -> bool {
    let states = scenario_epr().unwrap().run().unwrap();
    let mut problems = Vec::new();
    let d = branch_decompose(&states[3], BRANCH_TOL).unwrap();
    if d.len() != 2 {
        problems.push(format!("{} branches at t=3", d.len()));
    }
    for b in &d.branches {
        if (b.weight - 0.5).abs() > 1e-12 {
            problems.push(format!("weight {}", b.weight));
        }
    }
    let clusters = extended_branch_clusters(&states[1], BRANCH_TOL).unwrap();
    let want: std::collections::BTreeSet<SiteId> = [0, 1, 4, 5].into_iter().map(site).collect();
    let ok = clusters.len() == 1 && clusters.clusters[0].sites == want && clusters.clusters[0].branches.len() == 2;
    if !ok {
        problems.push(format!("t=1 clusters {:?}", clusters.partition()));
    }
    verdict(6, "entangled-pair branches and clusters", problems, format!("{} branches at t=3, t=1 partition {:?}", d.len(), clusters.partition()))
}

fn criterion_07_light_cone() -> bool {
    let states = scenario_single(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), 12).unwrap().run().unwrap();
    let mut problems = Vec::new();
    let mut checked = 0;
    for k in 1..=12i64 {
        for (t, state) in states.iter().enumerate().take(k as usize) {
            let p = purity(&reduced_density_matrix(state, &[site(k)]).unwrap());
            checked += 1;
            if (p - 1.0).abs() > 1e-10 {
                problems.push(format!("site {k} purity {p} at t={t}"));
            }
        }
    }
    verdict(7, "light cone", problems, format!("{checked} (site, step) pairs outside the cone are pure"))
}

fn criterion_08_bell_records() -> bool {
    let start = Instant::now();
    let epr = scenario_epr().unwrap().run().unwrap();
    let records = chsh_scan(&epr[3], site(2), site(3), 1.0).unwrap();
    let collision = scenario_collision().unwrap().run().unwrap();
    let classical = chsh_scan(&collision[3], site(2), site(3), 1.0).unwrap();
    let elapsed = start.elapsed();
    let mut problems = Vec::new();
    if records.grid_max < 2.82 {
        problems.push(format!("entangled-pair records grid max {:.12} < 2.82", records.grid_max));
    }
    if (records.refined_max - 2.0 * SQRT_2).abs() > 1e-3 {
        problems.push(format!("refined max {:.12} not within 1e-3 of 2√2", records.refined_max));
    }
    if classical.refined_max > 2.0 + 1e-9 {
        problems.push(format!("collision records {:.12} > 2", classical.refined_max));
    }
    if elapsed >= Duration::from_secs(30) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    verdict(
        8,
        "Bell violation by records",
        problems,
        format!("records {:.6}, collision {:.6}, runtime {elapsed:?}", records.refined_max, classical.refined_max),
    )
}

fn random_app<R: Rng>(rng: &mut R, n: i64) -> GateApplication {
    let a = rng.random_range(0..n);
    let b = (a + rng.random_range(1..n)) % n;
    match rng.random_range(0..5u8) {
        0 => GateApplication::pair(a, b, gate_system_field()),
        1 => GateApplication::pair(a, b, gate_field_copy()),
        2 => GateApplication::pair(a, b, gate_field_swap()),
        3 => GateApplication::pair(a, b, Gate2::random(rng)),
        _ => GateApplication::single(a, Gate1::rotation(rng.random::<f64>() * std::f64::consts::TAU)),
    }
}

fn dense_step(d: &DenseState, app: &GateApplication) -> DenseState {
    match app {
        GateApplication::Pair { sites, gate } => dense_apply(d, gate, *sites).unwrap(),
        GateApplication::Single { site, gate } => dense_apply1(d, gate, *site).unwrap(),
    }
}

/// Differences between the engines on one state; empty when they agree.
fn disagreements(sparse: &PureState, dense: &DenseState) -> Vec<String> {
    const TOL: f64 = 1e-10;
    let mut out = Vec::new();
    let ov = sparse.overlap(&sparsify(dense)).unwrap();
    if (ov - 1.0).abs() > TOL {
        out.push(format!("overlap {ov}"));
    }
    let ids: Vec<SiteId> = sparse.lattice().site_ids().collect();
    let mut regions: Vec<Vec<SiteId>> = ids.iter().map(|s| vec![*s]).collect();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            regions.push(vec![*a, *b]);
        }
    }
    for r in &regions {
        let d = reduced_density_matrix(sparse, r).unwrap().max_abs_diff(&dense_rdm(dense, r).unwrap());
        if d > TOL {
            out.push(format!("RDM {r:?} off by {d:.2e}"));
        }
    }
    let half = &ids[..ids.len() / 2];
    let (s1, s2) = (entanglement_entropy(sparse, half).unwrap(), dense_entropy(dense, half).unwrap());
    if (s1 - s2).abs() > TOL {
        out.push(format!("entropy {s1} vs {s2}"));
    }
    let sb = branch_decompose(sparse, BRANCH_TOL).unwrap();
    let (db, pure) = dense_branches(dense, BRANCH_TOL).unwrap();
    let same = sb.unbranched == pure
        && sb.len() == db.len()
        && sb.branches.iter().zip(&db).all(|(x, (w, a))| x.assignment.iter().map(|(s, v)| (*s, *v)).eq(a.iter().copied()) && (x.weight - w).abs() <= TOL);
    if !same {
        out.push(format!("branch decompositions differ ({} vs {})", sb.len(), db.len()));
    }
    out
}

fn scenario_disagreements(sc: &ScenarioConfig) -> Vec<String> {
    let sparse = sc.run().unwrap();
    let mut dense = densify(&sc.initial).unwrap();
    let mut out = Vec::new();
    for (t, state) in sparse.iter().enumerate() {
        if t > 0 {
            for app in sc.schedule.step(t - 1) {
                dense = dense_step(&dense, app);
            }
        }
        out.extend(disagreements(state, &dense).into_iter().map(|e| format!("{} t={t}: {e}", sc.name)));
    }
    out
}

fn criterion_09_oracle_equivalence() -> bool {
    let start = Instant::now();
    let h = c(FRAC_1_SQRT_2);
    let mut problems = Vec::new();
    for sc in [scenario_single(h, h, 4).unwrap(), scenario_bidirectional(4).unwrap(), scenario_collision().unwrap(), scenario_epr().unwrap()] {
        problems.extend(scenario_disagreements(&sc));
    }
    let lattice = Lattice::with_systems(0, 7, &[0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_97ed);
    let choices = [[c(1.0), c(0.0)], [c(0.0), c(1.0)], [h, h], [h, -h], [h, Complex64::new(0.0, FRAC_1_SQRT_2)]];
    const SEQUENCES: usize = 10_000;
    for i in 0..SEQUENCES {
        let product: BTreeMap<SiteId, [Complex64; 2]> = lattice.site_ids().map(|s| (s, choices[rng.random_range(0..choices.len())])).collect();
        let mut sparse = PureState::product(lattice.clone(), &product).unwrap();
        let mut dense = densify(&sparse).unwrap();
        let depth = rng.random_range(1..=12);
        for _ in 0..depth {
            let app = random_app(&mut rng, 8);
            sparse = app.apply(&sparse).unwrap();
            dense = dense_step(&dense, &app);
        }
        problems.extend(disagreements(&sparse, &dense).into_iter().map(|e| format!("sequence {i}: {e}")));
        if problems.len() > 5 {
            break;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    verdict(9, "sparse and dense engines agree", problems, format!("4 scenarios and {SEQUENCES} random 8-site sequences, runtime {elapsed:?}"))
}

fn criterion_10_born_sampling() -> bool {
    let h = c(FRAC_1_SQRT_2);
    let states = scenario_single(h, h, 4).unwrap().run().unwrap();
    const SAMPLES: usize = 10_000;
    let mut downs = 0usize;
    let mut problems = Vec::new();
    for seed in 0..SAMPLES as u64 {
        let (outcome, post) = sample_measurement(&states[3], MeasurementSetting::new(1, 0.0), seed).unwrap();
        downs += outcome as usize;
        let n = branch_decompose(&post, BRANCH_TOL).unwrap().len();
        if n != 1 && problems.len() < 5 {
            problems.push(format!("seed {seed}: {n} branches after measurement"));
        }
    }
    let freq = downs as f64 / SAMPLES as f64;
    let sigma = (0.25 / SAMPLES as f64).sqrt();
    if (freq - 0.5).abs() > 3.0 * sigma {
        problems.push(format!("↓ frequency {freq} outside 1/2 ± {:.4}", 3.0 * sigma));
    }
    verdict(10, "Born-rule sampling", problems, format!("↓ frequency {freq:.4} (σ = {sigma:.4}), single branch after every collapse"))
}

fn main() {
    let criteria: [(u32, fn() -> bool); 10] = [
        (1, criterion_01_single_qubit_record_states),
        (2, criterion_02_maximally_mixed_qubit),
        (3, criterion_03_basis_relativity),
        (4, criterion_04_bidirectional_record),
        (5, criterion_05_branch_collision),
        (6, criterion_06_entangled_pair_branches),
        (7, criterion_07_light_cone),
        (8, criterion_08_bell_records),
        (9, criterion_09_oracle_equivalence),
        (10, criterion_10_born_sampling),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(true) => {}
            Ok(false) => failed.push(id),
            Err(_) => {
                println!("criterion {id:>2} FAIL  panicked");
                failed.push(id);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
