//! Self-verification: reproduces the model's reference states and checks the
//! sparse engine against the dense oracle.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    branch_decompose, change_basis, chsh_scan, coherence, extended_branch_clusters, mutual_information, purity, reduced_density_matrix,
    region_spectrum, entropy_of_spectrum, sample_measurement, MeasurementSetting,
};
use crate::error::Result;
use crate::gates::{gate_field_copy, gate_field_swap, gate_system_field, Gate1, Gate2, UNITARY_TOLERANCE};
use crate::lattice::{Lattice, SiteId};
use crate::oracle::{dense_apply, dense_apply1, dense_branches, dense_entropy, dense_rdm, densify, sparsify, DenseState, MAX_DENSE_LATTICE};
use crate::scenario::{scenario_bidirectional, scenario_collision, scenario_epr, scenario_single, ScenarioConfig};
use crate::schedule::GateApplication;
use crate::state::PureState;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, outcome: std::result::Result<String, String>) -> Check {
        match outcome {
            Ok(detail) => Check { name: name.to_string(), passed: true, detail },
            Err(detail) => Check { name: name.to_string(), passed: false, detail },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tolerance: f64,
    /// Fault injection: replaces the named library gate with a non-unitary
    /// copy before the unitarity check.
    pub corrupt_gate: Option<String>,
    pub random_sequences: usize,
    pub born_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: 1e-10, corrupt_gate: None, random_sequences: 1000, born_samples: 10_000, seed: 7 }
    }
}

type Outcome = std::result::Result<String, String>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn run_verification(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.tolerance;
    vec![
        Check::new("gate unitarity", check_gates(opts)),
        Check::new("single-qubit record states", check_single_record(tol)),
        Check::new("maximally mixed qubit", check_mixed_qubit(tol, opts.seed)),
        Check::new("basis relativity", check_basis_relativity(tol)),
        Check::new("bidirectional record", check_bidirectional(tol)),
        Check::new("branch collision", check_collision(tol)),
        Check::new("entangled pair branches", check_epr(tol)),
        Check::new("light cone", check_light_cone(tol)),
        Check::new("Bell correlations", check_bell(tol)),
        Check::new("oracle: scenarios", check_oracle_scenarios(tol)),
        Check::new("oracle: random sequences", check_oracle_random(tol, opts.random_sequences, opts.seed)),
        Check::new("Born sampling", check_born(tol, opts.born_samples, opts.seed)),
    ]
}

fn check_gates(opts: &VerifyOptions) -> Outcome {
    let mut gates = vec![gate_system_field(), gate_field_copy(), gate_field_swap()];
    if let Some(name) = &opts.corrupt_gate {
        for g in gates.iter_mut().filter(|g| g.name() == name) {
            let mut m = *g.matrix();
            m[0][0] += c(0.125);
            *g = Gate2::new_unchecked(g.name(), m);
        }
    }
    let mut worst = 0.0f64;
    for g in &gates {
        let dev = g.unitarity_deviation();
        ensure(dev <= UNITARY_TOLERANCE, || format!("{} deviates from unitarity by {dev:.3e}", g.name()))?;
        ensure(g.is_permutation(), || format!("{} is not a basis permutation", g.name()))?;
        worst = worst.max(dev);
    }
    Ok(format!("max ‖U†U − I‖ = {worst:.1e}"))
}

fn expect_overlap(actual: &PureState, expected: &PureState, tol: f64, what: &str) -> std::result::Result<f64, String> {
    let ov = lift(actual.overlap(expected))?;
    ensure((ov - 1.0).abs() <= tol, || format!("{what}: overlap {ov}"))?;
    Ok(ov)
}

fn check_single_record(tol: f64) -> Outcome {
    let h = c(FRAC_1_SQRT_2);
    let states = lift(lift(scenario_single(h, h, 4))?.run())?;
    let lattice = states[0].lattice().clone();
    let expected = [
        ["00000", "10000"],
        ["01000", "10000"],
        ["01100", "10000"],
        ["01110", "10000"],
    ];
    for (t, [a, b]) in expected.iter().enumerate() {
        let want = lift(PureState::from_terms(lattice.clone(), &[(a, c(1.0)), (b, c(1.0))]))?;
        expect_overlap(&states[t], &want, tol, &format!("t={t}"))?;
    }
    Ok("t = 0..3 match".into())
}

fn check_mixed_qubit(tol: f64, seed: u64) -> Outcome {
    let h = c(FRAC_1_SQRT_2);
    let states = lift(lift(scenario_single(h, h, 4))?.run())?;
    let rho = lift(reduced_density_matrix(&states[1], &[SiteId(0)]))?;
    let dev = [(0, 0, 0.5), (0, 1, 0.0), (1, 0, 0.0), (1, 1, 0.5)].iter().map(|&(i, j, v)| (rho.get(i, j) - c(v)).norm()).fold(0.0, f64::max);
    ensure(dev <= tol, || format!("ρ₀ deviates from I/2 by {dev:.3e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let u = random_gate1(&mut rng);
        let rotated = lift(change_basis(&rho, &BTreeMap::from([(SiteId(0), u)])))?;
        worst = worst.max(coherence(&rotated));
    }
    ensure(worst <= tol, || format!("coherence {worst:.3e} in a rotated basis"))?;
    Ok(format!("max rotated coherence {worst:.1e}"))
}

fn random_gate1<R: Rng>(rng: &mut R) -> Gate1 {
    let (a, b, g) = (rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() * std::f64::consts::PI);
    let (s, co) = (g / 2.0).sin_cos();
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    Gate1::new("random", [[e(a) * co, -e(b) * s], [e(-b) * s, e(-a) * co]]).expect("SU(2) element")
}

fn check_basis_relativity(tol: f64) -> Outcome {
    let states = lift(lift(scenario_single(c((2.0f64 / 3.0).sqrt()), c((1.0f64 / 3.0).sqrt()), 4))?.run())?;
    let rho = lift(reduced_density_matrix(&states[1], &[SiteId(0)]))?;
    let close = |m: &crate::analysis::DensityMatrix, want: [[f64; 2]; 2]| {
        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (m.get(i, j) - c(want[i][j])).norm()).fold(0.0, f64::max)
    };
    let d = close(&rho, [[2.0 / 3.0, 0.0], [0.0, 1.0 / 3.0]]);
    ensure(d <= tol, || format!("diagonal RDM off by {d:.3e}"))?;
    let rotated = lift(change_basis(&rho, &BTreeMap::from([(SiteId(0), Gate1::hadamard())])))?;
    let d = close(&rotated, [[0.5, 1.0 / 6.0], [1.0 / 6.0, 0.5]]);
    ensure(d <= tol, || format!("Hadamard-basis RDM off by {d:.3e}"))?;
    Ok("diag(2/3, 1/3) and its Hadamard rotation match".into())
}

fn check_bidirectional(tol: f64) -> Outcome {
    let states = lift(lift(scenario_bidirectional(4))?.run())?;
    // sites −1..=4
    let want = lift(PureState::from_terms(states[0].lattice().clone(), &[("101110", c(1.0)), ("010000", c(1.0))]))?;
    expect_overlap(&states[4], &want, tol, "t=4")?;
    Ok("t=4 matches".into())
}

fn check_collision(tol: f64) -> Outcome {
    let states = lift(lift(scenario_collision())?.run())?;
    let d = lift(branch_decompose(&states[3], crate::scenario::DEFAULT_TOLERANCE))?;
    ensure(d.len() == 4, || format!("{} branches at t=3", d.len()))?;
    for b in &d.branches {
        ensure((b.weight - 0.25).abs() <= tol, || format!("branch weight {}", b.weight))?;
    }
    for s in [1, 4] {
        let p = lift(reduced_density_matrix(&states[2], &[SiteId(s)]).map(|r| purity(&r)))?;
        ensure((p - 1.0).abs() <= tol, || format!("site {s} purity {p} at t=2"))?;
    }
    let mi = lift(mutual_information(&states[3], &[SiteId(0)], &[SiteId(5)]))?;
    ensure(mi.abs() <= tol, || format!("qubit mutual information {mi}"))?;
    Ok("4 branches of weight 1/4, sites 1 and 4 separable at t=2".into())
}

fn check_epr(tol: f64) -> Outcome {
    let states = lift(lift(scenario_epr())?.run())?;
    let d = lift(branch_decompose(&states[3], crate::scenario::DEFAULT_TOLERANCE))?;
    ensure(d.len() == 2, || format!("{} branches at t=3", d.len()))?;
    for b in &d.branches {
        ensure((b.weight - 0.5).abs() <= tol, || format!("branch weight {}", b.weight))?;
    }
    let clusters = lift(extended_branch_clusters(&states[1], crate::scenario::DEFAULT_TOLERANCE))?;
    let want: std::collections::BTreeSet<SiteId> = [0, 1, 4, 5].into_iter().map(SiteId).collect();
    ensure(clusters.len() == 1 && clusters.clusters[0].sites == want && clusters.clusters[0].branches.len() == 2, || {
        format!("t=1 clusters {:?}", clusters.partition())
    })?;
    Ok("2 branches at t=3; one 2-branch cluster {0,1,4,5} at t=1".into())
}

fn check_light_cone(tol: f64) -> Outcome {
    let states = lift(lift(scenario_single(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), 12))?.run())?;
    for k in 1..=12i64 {
        for (t, state) in states.iter().enumerate().take(k as usize) {
            let p = lift(reduced_density_matrix(state, &[SiteId(k)]).map(|r| purity(&r)))?;
            ensure((p - 1.0).abs() <= tol, || format!("site {k} has purity {p} at t={t}"))?;
        }
    }
    Ok("no site is entangled before the front reaches it".into())
}

fn check_bell(tol: f64) -> Outcome {
    let tsirelson = 2.0 * SQRT_2;
    let epr = lift(lift(scenario_epr())?.run())?;
    let pair = lift(chsh_scan(&epr[0], SiteId(0), SiteId(5), 1.0))?;
    ensure((pair.refined_max - tsirelson).abs() <= 1e-3, || format!("qubit pair CHSH {}", pair.refined_max))?;
    let records = lift(chsh_scan(&epr[3], SiteId(2), SiteId(3), 1.0))?;
    ensure(records.refined_max <= tsirelson + tol, || format!("record CHSH {} above Tsirelson", records.refined_max))?;
    let collision = lift(lift(scenario_collision())?.run())?;
    let classical = lift(chsh_scan(&collision[3], SiteId(2), SiteId(3), 1.0))?;
    ensure(classical.refined_max <= 2.0 + tol, || format!("collision CHSH {}", classical.refined_max))?;
    Ok(format!(
        "qubit pair {:.6}, entangled-pair records {:.6}, collision records {:.6}",
        pair.refined_max, records.refined_max, classical.refined_max
    ))
}

/// Replays a scenario's schedule on the dense engine.
pub fn dense_replay(scenario: &ScenarioConfig) -> Result<Vec<DenseState>> {
    let mut current = densify(&scenario.initial)?;
    let mut out = vec![current.clone()];
    for t in 0..scenario.horizon {
        for app in scenario.schedule.step(t) {
            current = match app {
                GateApplication::Pair { sites, gate } => dense_apply(&current, gate, *sites)?,
                GateApplication::Single { site, gate } => dense_apply1(&current, gate, *site)?,
            };
        }
        out.push(current.clone());
    }
    Ok(out)
}

/// Compares one sparse state with its dense counterpart: overlap, every
/// single-site and adjacent-pair RDM, half-chain entropy and branches.
pub fn compare_with_oracle(sparse: &PureState, dense: &DenseState, tol: f64) -> std::result::Result<(), String> {
    let back = sparsify(dense);
    let ov = lift(sparse.overlap(&back))?;
    ensure((ov - 1.0).abs() <= tol, || format!("overlap {ov}"))?;
    let ids: Vec<SiteId> = sparse.lattice().site_ids().collect();
    let mut regions: Vec<Vec<SiteId>> = ids.iter().map(|&s| vec![s]).collect();
    regions.extend(ids.windows(2).map(|w| w.to_vec()));
    for region in &regions {
        let a = lift(reduced_density_matrix(sparse, region))?;
        let b = lift(dense_rdm(dense, region))?;
        let d = a.max_abs_diff(&b);
        ensure(d <= tol, || format!("RDM on {region:?} differs by {d:.3e}"))?;
    }
    let half = &ids[..ids.len() / 2];
    let s_sparse = entropy_of_spectrum(&lift(region_spectrum(sparse, half))?);
    let s_dense = lift(dense_entropy(dense, half))?;
    ensure((s_sparse - s_dense).abs() <= tol, || format!("half-chain entropy {s_sparse} vs {s_dense}"))?;
    let branch_tol = crate::scenario::DEFAULT_TOLERANCE;
    let sparse_b = lift(branch_decompose(sparse, branch_tol))?;
    let (dense_b, dense_pure) = lift(dense_branches(dense, branch_tol))?;
    ensure(sparse_b.unbranched == dense_pure, || format!("unbranched sites {:?} vs {:?}", sparse_b.unbranched, dense_pure))?;
    ensure(sparse_b.len() == dense_b.len(), || format!("{} vs {} branches", sparse_b.len(), dense_b.len()))?;
    for (x, (w, assignment)) in sparse_b.branches.iter().zip(&dense_b) {
        let same = x.assignment.iter().map(|(s, b)| (*s, *b)).eq(assignment.iter().copied());
        ensure(same && (x.weight - w).abs() <= tol, || format!("branch {:?} ({}) vs {:?} ({w})", x.assignment, x.weight, assignment))?;
    }
    Ok(())
}

fn check_oracle_scenarios(tol: f64) -> Outcome {
    let h = c(FRAC_1_SQRT_2);
    let scenarios = [lift(scenario_single(h, h, 4))?, lift(scenario_bidirectional(4))?, lift(scenario_collision())?, lift(scenario_epr())?];
    let mut steps = 0;
    for sc in &scenarios {
        let sparse = lift(sc.run())?;
        let dense = lift(dense_replay(sc))?;
        for (t, (s, d)) in sparse.iter().zip(&dense).enumerate() {
            compare_with_oracle(s, d, tol).map_err(|e| format!("{} t={t}: {e}", sc.name))?;
            steps += 1;
        }
    }
    Ok(format!("{steps} scenario steps agree"))
}

/// A random gate application on an 8-site lattice: a library gate or a
/// random unitary on any ordered pair, or a single-site rotation.
pub fn random_application<R: Rng>(rng: &mut R, n_sites: i64) -> GateApplication {
    let a = rng.random_range(0..n_sites);
    let mut b = rng.random_range(0..n_sites - 1);
    if b >= a {
        b += 1;
    }
    match rng.random_range(0..5) {
        0 => GateApplication::pair(a, b, gate_system_field()),
        1 => GateApplication::pair(a, b, gate_field_copy()),
        2 => GateApplication::pair(a, b, gate_field_swap()),
        3 => GateApplication::pair(a, b, Gate2::random(rng)),
        _ => GateApplication::single(a, Gate1::rotation(rng.random::<f64>() * std::f64::consts::TAU)),
    }
}

/// Random 8-site product state of basis vectors and equal superpositions.
pub fn random_product_state<R: Rng>(rng: &mut R, lattice: &Lattice) -> Result<PureState> {
    let h = c(FRAC_1_SQRT_2);
    let choices = [[c(1.0), c(0.0)], [c(0.0), c(1.0)], [h, h], [h, Complex64::new(0.0, FRAC_1_SQRT_2)]];
    let sites = lattice.site_ids().map(|s| (s, choices[rng.random_range(0..choices.len())])).collect();
    PureState::product(lattice.clone(), &sites)
}

fn check_oracle_random(tol: f64, count: usize, seed: u64) -> Outcome {
    let lattice = lift(Lattice::with_systems(0, 7, &[0]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let mut sparse = lift(random_product_state(&mut rng, &lattice))?;
        let mut dense = lift(densify(&sparse))?;
        for _ in 0..8 {
            let app = random_application(&mut rng, 8);
            sparse = lift(app.apply(&sparse))?;
            dense = match &app {
                GateApplication::Pair { sites, gate } => lift(dense_apply(&dense, gate, *sites))?,
                GateApplication::Single { site, gate } => lift(dense_apply1(&dense, gate, *site))?,
            };
        }
        compare_with_oracle(&sparse, &dense, tol).map_err(|e| format!("sequence {i}: {e}"))?;
    }
    Ok(format!("{count} random 8-site sequences agree"))
}

fn check_born(tol: f64, samples: usize, seed: u64) -> Outcome {
    let h = c(FRAC_1_SQRT_2);
    let states = lift(lift(scenario_single(h, h, 4))?.run())?;
    let setting = MeasurementSetting::new(1, 0.0);
    let mut downs = 0usize;
    for i in 0..samples {
        let (outcome, post) = lift(sample_measurement(&states[3], setting, seed.wrapping_add(i as u64)))?;
        downs += outcome as usize;
        ensure((post.norm() - 1.0).abs() <= tol, || format!("post-measurement norm {}", post.norm()))?;
        let n = lift(branch_decompose(&post, crate::scenario::DEFAULT_TOLERANCE))?.len();
        ensure(n == 1, || format!("{n} branches after measurement {i}"))?;
    }
    let n = samples as f64;
    let freq = downs as f64 / n;
    let sigma = (0.25 / n).sqrt();
    ensure((freq - 0.5).abs() <= 3.0 * sigma, || format!("↓ frequency {freq} outside 1/2 ± 3σ ({sigma:.4})"))?;
    Ok(format!("↓ frequency {freq:.4} over {samples} samples"))
}

/// Checks every step of a configured run against the dense oracle.
pub fn verify_run(scenario: &ScenarioConfig, states: &[PureState], tol: f64) -> Check {
    let outcome = if scenario.lattice().len() > MAX_DENSE_LATTICE {
        Err(format!("lattice has {} sites; the oracle handles at most {MAX_DENSE_LATTICE}", scenario.lattice().len()))
    } else {
        lift(dense_replay(scenario)).and_then(|dense| {
            for (t, (s, d)) in states.iter().zip(&dense).enumerate() {
                compare_with_oracle(s, d, tol).map_err(|e| format!("t={t}: {e}"))?;
            }
            Ok(format!("{} steps agree with the dense engine", states.len()))
        })
    };
    Check::new("oracle: configured run", outcome)
}

/// Plain-text pass/fail table.
pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let pad = width - c.name.chars().count();
        out.push_str(&format!("{}{}  {}  {}\n", c.name, " ".repeat(pad), if c.passed { "PASS" } else { "FAIL" }, c.detail));
    }
    out
}
