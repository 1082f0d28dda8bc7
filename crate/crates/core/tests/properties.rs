use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use branching_lattice::{
    apply_gate2, change_basis, chsh, gate_field_copy, gate_field_swap, gate_system_field, reduced_density_matrix, ChshSettings, Gate1, Gate2,
    GateApplication, Lattice, PureState, SiteId,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: i64 = 6;

fn lattice() -> Lattice {
    Lattice::with_systems(0, N - 1, &[0]).unwrap()
}

/// Random normalized state on up to 23 basis strings.
fn random_state() -> impl Strategy<Value = PureState> {
    prop::collection::btree_map(0u32..(1 << N), (-1.0f64..1.0, -1.0f64..1.0), 1..24)
        .prop_filter("nonzero", |m| m.values().any(|(re, im)| re.abs() + im.abs() > 1e-3))
        .prop_map(|m| {
            let terms: Vec<(String, Complex64)> =
                m.into_iter().map(|(k, (re, im))| (format!("{:0width$b}", k, width = N as usize), Complex64::new(re, im))).collect();
            let refs: Vec<(&str, Complex64)> = terms.iter().map(|(k, a)| (k.as_str(), *a)).collect();
            PureState::from_terms(lattice(), &refs).unwrap()
        })
}

fn site_pair() -> impl Strategy<Value = (i64, i64)> {
    (0..N, 0..N).prop_filter("distinct", |(a, b)| a != b)
}

fn gate_from(choice: u8, seed: u64) -> Gate2 {
    match choice % 4 {
        0 => gate_system_field(),
        1 => gate_field_copy(),
        2 => gate_field_swap(),
        _ => Gate2::random(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
}

fn close(a: &PureState, b: &PureState) -> bool {
    a.inner_product(b).map(|ip| (ip - Complex64::new(1.0, 0.0)).norm() < 1e-10).unwrap_or(false)
}

fn trace_out_last(rho: &branching_lattice::DensityMatrix) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = rho.get(2 * i, 2 * j) + rho.get(2 * i + 1, 2 * j + 1);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gate_sequences_preserve_the_norm(
        psi in random_state(),
        seq in prop::collection::vec((site_pair(), any::<u8>(), any::<u64>()), 1..10),
    ) {
        let mut state = psi;
        for ((a, b), choice, seed) in seq {
            state = GateApplication::pair(a, b, gate_from(choice, seed)).apply(&state).unwrap();
        }
        prop_assert!((state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn library_gates_are_involutions(psi in random_state(), (a, b) in site_pair(), choice in 0u8..3) {
        let g = gate_from(choice, 0);
        let twice = apply_gate2(&apply_gate2(&psi, &g, (SiteId(a), SiteId(b))).unwrap(), &g, (SiteId(a), SiteId(b))).unwrap();
        prop_assert!(close(&twice, &psi));
    }

    #[test]
    fn gates_on_disjoint_pairs_commute(psi in random_state(), c1 in any::<u8>(), c2 in any::<u8>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (g, h) = (gate_from(c1, s1), gate_from(c2, s2));
        let p = (SiteId(0), SiteId(1));
        let q = (SiteId(4), SiteId(2));
        let gh = apply_gate2(&apply_gate2(&psi, &g, p).unwrap(), &h, q).unwrap();
        let hg = apply_gate2(&apply_gate2(&psi, &h, q).unwrap(), &g, p).unwrap();
        prop_assert!(close(&gh, &hg));
    }

    #[test]
    fn partial_traces_are_consistent(psi in random_state(), (a, b) in site_pair()) {
        let pair = reduced_density_matrix(&psi, &[SiteId(a), SiteId(b)]).unwrap();
        let single = reduced_density_matrix(&psi, &[SiteId(a)]).unwrap();
        let traced = trace_out_last(&pair);
        for (i, row) in traced.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                prop_assert!((entry - single.get(i, j)).norm() < 1e-12);
            }
        }
        prop_assert!((pair.trace() - 1.0).abs() < 1e-12);
        prop_assert!(pair.hermiticity_deviation() < 1e-12);
        prop_assert!(pair.eigenvalues().iter().all(|&l| l > -1e-12 && l < 1.0 + 1e-12));
    }

    #[test]
    fn spectrum_is_basis_independent(psi in random_state(), (a, b) in site_pair(), t1 in 0.0..2.0 * PI, t2 in 0.0..2.0 * PI) {
        let rho = reduced_density_matrix(&psi, &[SiteId(a), SiteId(b)]).unwrap();
        let rotations = BTreeMap::from([(SiteId(a), Gate1::rotation(t1)), (SiteId(b), Gate1::rotation(t2))]);
        let rotated = change_basis(&rho, &rotations).unwrap();
        for (x, y) in rho.eigenvalues().iter().zip(rotated.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_never_exceeds_tsirelson(psi in random_state(), (a, b) in site_pair(), angles in prop::array::uniform4(0.0..2.0 * PI)) {
        let value = chsh(&psi, SiteId(a), SiteId(b), ChshSettings::new(angles[0], angles[1], angles[2], angles[3])).unwrap();
        prop_assert!(value <= 2.0 * SQRT_2 + 1e-12);
    }

    #[test]
    fn json_round_trip_is_bit_exact(psi in random_state()) {
        let back = PureState::from_json(&psi.to_json()).unwrap();
        prop_assert_eq!(back.amplitudes().len(), psi.amplitudes().len());
        for ((k1, a1), (k2, a2)) in back.amplitudes().iter().zip(psi.amplitudes()) {
            prop_assert_eq!(k1, k2);
            prop_assert_eq!(a1.re.to_bits(), a2.re.to_bits());
            prop_assert_eq!(a1.im.to_bits(), a2.im.to_bits());
        }
    }
}
