//! Hand-entered reference states for the canonical scenarios, compared with
//! the engine step by step.

use std::f64::consts::FRAC_1_SQRT_2;

use branching_lattice::{
    branch_decompose, extended_branch_clusters, purity, reduced_density_matrix, scenario_bidirectional, scenario_collision, scenario_epr,
    scenario_single, Lattice, PureState, SiteId,
};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn equal_superposition(lattice: &Lattice, terms: &[&str]) -> PureState {
    let amps: Vec<(&str, Complex64)> = terms.iter().map(|t| (*t, c(1.0))).collect();
    PureState::from_terms(lattice.clone(), &amps).unwrap()
}

fn assert_same_ray(actual: &PureState, expected: &PureState) {
    let overlap = actual.overlap(expected).unwrap();
    assert!((overlap - 1.0).abs() < 1e-12, "overlap {overlap}\nactual:   {}\nexpected: {}", actual.pretty(), expected.pretty());
}

#[test]
fn single_qubit_record_grows_one_site_per_step() {
    let h = c(FRAC_1_SQRT_2);
    let states = scenario_single(h, h, 4).unwrap().run().unwrap();
    let l = states[0].lattice().clone();
    let expected = [["00000", "10000"], ["01000", "10000"], ["01100", "10000"], ["01110", "10000"], ["01111", "10000"]];
    assert_eq!(states.len(), expected.len());
    for (state, terms) in states.iter().zip(expected) {
        assert_same_ray(state, &equal_superposition(&l, &terms));
    }
}

#[test]
fn qubit_also_recorded_on_the_left() {
    let states = scenario_bidirectional(4).unwrap().run().unwrap();
    let l = states[0].lattice().clone();
    // sites −1..=4
    assert_same_ray(&states[3], &equal_superposition(&l, &["001110", "010000"]));
    assert_same_ray(&states[4], &equal_superposition(&l, &["101110", "010000"]));
    assert_same_ray(&states[5], &equal_superposition(&l, &["101111", "010000"]));
}

#[test]
fn collision_states_step_by_step() {
    let states = scenario_collision().unwrap().run().unwrap();
    let l = states[0].lattice().clone();
    let expected: [&[&str]; 4] = [
        &["000000", "000001", "100000", "100001"],
        &["010010", "010001", "100010", "100001"],
        &["001100", "001001", "100100", "100001"],
        &["001100", "000101", "101000", "100001"],
    ];
    assert_eq!(states.len(), 4);
    for (state, terms) in states.iter().zip(expected) {
        assert_same_ray(state, &equal_superposition(&l, terms));
    }
}

#[test]
fn collision_has_four_quarter_weight_branches_and_separable_inner_sites() {
    let states = scenario_collision().unwrap().run().unwrap();
    let d = branch_decompose(&states[3], 1e-9).unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.branches.iter().all(|b| (b.weight - 0.25).abs() < 1e-12));
    for s in [1, 4] {
        let p = purity(&reduced_density_matrix(&states[2], &[SiteId(s)]).unwrap());
        assert!((p - 1.0).abs() < 1e-10, "site {s}: {p}");
    }
}

#[test]
fn entangled_pair_states_step_by_step() {
    let states = scenario_epr().unwrap().run().unwrap();
    let l = states[0].lattice().clone();
    let expected = [["000001", "100000"], ["010001", "100010"], ["001001", "100100"], ["000101", "101000"]];
    for (state, terms) in states.iter().zip(expected) {
        assert_same_ray(state, &equal_superposition(&l, &terms));
    }
}

#[test]
fn entangled_pair_cluster_after_first_step() {
    let states = scenario_epr().unwrap().run().unwrap();
    let clusters = extended_branch_clusters(&states[1], 1e-9).unwrap();
    assert_eq!(clusters.len(), 1);
    assert_eq!(clusters.clusters[0].sites, [0, 1, 4, 5].into_iter().map(SiteId).collect());
    assert_eq!(clusters.clusters[0].branches.len(), 2);
    let d = branch_decompose(&states[3], 1e-9).unwrap();
    assert_eq!(d.len(), 2);
    assert!(d.branches.iter().all(|b| (b.weight - 0.5).abs() < 1e-12));
}

#[test]
fn collision_clusters_pair_each_qubit_with_one_field_site() {
    let states = scenario_collision().unwrap().run().unwrap();
    let set = |v: [i64; 2]| v.into_iter().map(SiteId).collect::<std::collections::BTreeSet<_>>();
    let at_one = extended_branch_clusters(&states[1], 1e-9).unwrap();
    assert_eq!(at_one.partition(), vec![set([0, 1]), set([4, 5])]);
    let at_three = extended_branch_clusters(&states[3], 1e-9).unwrap();
    assert_eq!(at_three.partition(), vec![set([0, 3]), set([2, 5])]);
    for cl in at_one.clusters.iter().chain(&at_three.clusters) {
        assert_eq!(cl.branches.len(), 2);
        assert!(cl.branches.iter().all(|(w, _)| (w - 0.5).abs() < 1e-12));
    }
    let block = branching_lattice::mutual_information(&states[3], &[SiteId(0), SiteId(3)], &[SiteId(2), SiteId(5)]).unwrap();
    assert!(block.abs() < 1e-12);
}
